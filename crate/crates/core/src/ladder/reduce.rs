use std::fmt;

use crate::algebra::Scalar;
use crate::morphism::MorphismMatrix;
use crate::persistence::Interval;

use super::{AdmissibleOp, OpKind};

/// At most one nonzero per row and column, and every nonzero equals one.
#[allow(clippy::needless_range_loop)]
pub fn is_matching_form(mm: &MorphismMatrix) -> bool {
    let mut row_used = vec![false; mm.rows()];
    let mut col_used = vec![false; mm.cols()];
    for r in 0..mm.rows() {
        for c in 0..mm.cols() {
            let v = mm.get(r, c);
            if v.is_zero() {
                continue;
            }
            if !v.is_one() || row_used[r] || col_used[c] {
                return false;
            }
            row_used[r] = true;
            col_used[c] = true;
        }
    }
    true
}

/// Which clearing operation to try first for an entry that shares a
/// column with a pivot below and a row with a pivot to the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Preference {
    #[default]
    RowsFirst,
    ColumnsFirst,
}

/// Which free entry of a block becomes the next pivot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotChoice {
    /// Lowest row index, then lowest column index.
    #[default]
    First,
    /// Highest row index, then highest column index.
    Last,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ReductionStrategy {
    pub preference: Preference,
    pub pivot: PivotChoice,
}

/// A nonzero entry that no admissible operation can remove and that
/// cannot become a pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionFailure {
    pub row: usize,
    pub col: usize,
    pub row_bar: Interval,
    pub row_slot: usize,
    pub col_bar: Interval,
    pub col_slot: usize,
    pub value: Scalar,
    pub reason: String,
}

impl fmt::Display for ReductionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "blocking entry {} at row {} (slot {}), column {} (slot {}): {}",
            self.value, self.row_bar, self.row_slot, self.col_bar, self.col_slot, self.reason
        )
    }
}

impl std::error::Error for ReductionFailure {}

fn groups(bars: &[Interval]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=bars.len() {
        if i == bars.len() || bars[i] != bars[start] {
            if start < i {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

struct Reducer<'a> {
    mm: MorphismMatrix,
    ops: Vec<AdmissibleOp>,
    row_pivot: Vec<Option<usize>>,
    col_pivot: Vec<Option<usize>>,
    strategy: &'a ReductionStrategy,
}

impl Reducer<'_> {
    fn apply(&mut self, op: AdmissibleOp) {
        debug_assert!(op.is_legal(&self.mm), "illegal operation {op}");
        op.apply(&mut self.mm);
        self.ops.push(op);
    }

    fn failure(&self, r: usize, c: usize, reason: String) -> ReductionFailure {
        ReductionFailure {
            row: r,
            col: c,
            row_bar: self.mm.row_bar(r),
            row_slot: self.mm.row_gens()[r].slot,
            col_bar: self.mm.col_bar(c),
            col_slot: self.mm.col_gens()[c].slot,
            value: self.mm.get(r, c).clone(),
            reason,
        }
    }

    /// Removes an entry sharing a row or column with an existing pivot.
    fn clear_entry(&mut self, r: usize, c: usize) -> Result<(), ReductionFailure> {
        let v = self.mm.get(r, c).clone();
        let by_row = self.col_pivot[c]
            .map(|r2| AdmissibleOp::add_row(&self.mm, r, r2, -&v))
            .filter(|op| op.is_legal(&self.mm));
        let by_col = self.row_pivot[r]
            .map(|c2| AdmissibleOp::add_column(&self.mm, c, c2, -&v))
            .filter(|op| op.is_legal(&self.mm));
        let chosen = match self.strategy.preference {
            Preference::RowsFirst => by_row.or(by_col),
            Preference::ColumnsFirst => by_col.or(by_row),
        };
        match chosen {
            Some(op) => {
                self.apply(op);
                Ok(())
            }
            None => {
                let mut why = Vec::new();
                if let Some(r2) = self.col_pivot[c] {
                    why.push(format!(
                        "its column has a pivot in row {} but {} is not overlapped by it",
                        self.mm.row_bar(r2),
                        self.mm.row_bar(r)
                    ));
                }
                if let Some(c2) = self.row_pivot[r] {
                    why.push(format!(
                        "its row has a pivot in column {} which does not overlap {}",
                        self.mm.col_bar(c2),
                        self.mm.col_bar(c)
                    ));
                }
                Err(self.failure(r, c, why.join("; ")))
            }
        }
    }

    fn block(
        &mut self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> Result<(), ReductionFailure> {
        for c in cols.clone() {
            for r in rows.clone() {
                if self.mm.get(r, c).is_zero() {
                    continue;
                }
                if self.col_pivot[c].is_some() || self.row_pivot[r].is_some() {
                    self.clear_entry(r, c)?;
                }
            }
        }
        loop {
            let free: Vec<(usize, usize)> = rows
                .clone()
                .filter(|&r| self.row_pivot[r].is_none())
                .flat_map(|r| cols.clone().map(move |c| (r, c)))
                .filter(|&(r, c)| self.col_pivot[c].is_none() && !self.mm.get(r, c).is_zero())
                .collect();
            let pick = match self.strategy.pivot {
                PivotChoice::First => free.first(),
                PivotChoice::Last => free.last(),
            };
            let Some(&(r, c)) = pick else { break };
            let inv = self.mm.get(r, c).inv().expect("nonzero pivot");
            if !inv.is_one() {
                self.apply(AdmissibleOp::scale_column(c, inv));
            }
            for r2 in rows.clone() {
                let v = self.mm.get(r2, c).clone();
                if r2 != r && !v.is_zero() {
                    self.apply(AdmissibleOp::add_row(&self.mm, r2, r, -v));
                }
            }
            for c2 in cols.clone() {
                let v = self.mm.get(r, c2).clone();
                if c2 != c && !v.is_zero() {
                    self.apply(AdmissibleOp::add_column(&self.mm, c2, c, -v));
                }
            }
            self.row_pivot[r] = Some(c);
            self.col_pivot[c] = Some(r);
        }
        Ok(())
    }
}

/// Reduces with the default strategy.
pub fn reduce_to_matching_form(
    mm: &MorphismMatrix,
) -> Result<(MorphismMatrix, Vec<AdmissibleOp>), ReductionFailure> {
    reduce_with(mm, &ReductionStrategy::default())
}

/// Column bars are processed left to right; inside a column bar the
/// row-bar blocks are processed bottom-up. Entries that share a row or a
/// column with an earlier pivot are cleared first, then the remaining free
/// part of the block is eliminated with same-bar operations.
pub fn reduce_with(
    mm: &MorphismMatrix,
    strategy: &ReductionStrategy,
) -> Result<(MorphismMatrix, Vec<AdmissibleOp>), ReductionFailure> {
    let row_bars: Vec<Interval> = (0..mm.rows()).map(|r| mm.row_bar(r)).collect();
    let col_bars: Vec<Interval> = (0..mm.cols()).map(|c| mm.col_bar(c)).collect();
    let row_groups = groups(&row_bars);
    let mut red = Reducer {
        mm: mm.clone(),
        ops: Vec::new(),
        row_pivot: vec![None; mm.rows()],
        col_pivot: vec![None; mm.cols()],
        strategy,
    };
    for cols in groups(&col_bars) {
        for rows in row_groups.iter().rev() {
            red.block(rows.clone(), cols.clone())?;
        }
    }
    debug_assert!(is_matching_form(&red.mm));
    debug_assert!(red.ops.iter().all(|op| op.kind != OpKind::ScaleRow));
    Ok((red.mm, red.ops))
}
