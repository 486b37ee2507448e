use std::fmt;

use crate::algebra::Scalar;
use crate::morphism::MorphismMatrix;

/// Kinds of basis changes that keep both barcode bases valid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    /// Column op between generators of one domain bar.
    ColumnSameBar,
    /// Row op between generators of one codomain bar.
    RowSameBar,
    /// `C_J += a C_K` with `K ⪯ J`.
    ColumnOverlap,
    /// `R_J += a R_K` with `J ⪯ K`.
    RowOverlap,
    ScaleRow,
    ScaleColumn,
}

/// One admissible operation on a coefficient matrix. For additions,
/// `target += coeff * source`; for scalings `target *= coeff`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleOp {
    pub kind: OpKind,
    pub target: usize,
    pub source: usize,
    pub coeff: Scalar,
}

impl AdmissibleOp {
    pub fn add_column(
        mm: &MorphismMatrix,
        target: usize,
        source: usize,
        coeff: Scalar,
    ) -> AdmissibleOp {
        let kind = if mm.col_bar(target) == mm.col_bar(source) {
            OpKind::ColumnSameBar
        } else {
            OpKind::ColumnOverlap
        };
        AdmissibleOp {
            kind,
            target,
            source,
            coeff,
        }
    }

    pub fn add_row(
        mm: &MorphismMatrix,
        target: usize,
        source: usize,
        coeff: Scalar,
    ) -> AdmissibleOp {
        let kind = if mm.row_bar(target) == mm.row_bar(source) {
            OpKind::RowSameBar
        } else {
            OpKind::RowOverlap
        };
        AdmissibleOp {
            kind,
            target,
            source,
            coeff,
        }
    }

    pub fn scale_column(target: usize, coeff: Scalar) -> AdmissibleOp {
        AdmissibleOp {
            kind: OpKind::ScaleColumn,
            target,
            source: target,
            coeff,
        }
    }

    pub fn scale_row(target: usize, coeff: Scalar) -> AdmissibleOp {
        AdmissibleOp {
            kind: OpKind::ScaleRow,
            target,
            source: target,
            coeff,
        }
    }

    pub fn is_column_op(&self) -> bool {
        matches!(
            self.kind,
            OpKind::ColumnSameBar | OpKind::ColumnOverlap | OpKind::ScaleColumn
        )
    }

    /// Side conditions on bars for this operation on `mm`.
    pub fn is_legal(&self, mm: &MorphismMatrix) -> bool {
        let in_cols = self.target < mm.cols() && self.source < mm.cols();
        let in_rows = self.target < mm.rows() && self.source < mm.rows();
        match self.kind {
            OpKind::ScaleColumn => in_cols && !self.coeff.is_zero(),
            OpKind::ScaleRow => in_rows && !self.coeff.is_zero(),
            OpKind::ColumnSameBar => {
                in_cols
                    && self.target != self.source
                    && mm.col_bar(self.target) == mm.col_bar(self.source)
            }
            OpKind::RowSameBar => {
                in_rows
                    && self.target != self.source
                    && mm.row_bar(self.target) == mm.row_bar(self.source)
            }
            OpKind::ColumnOverlap => {
                in_cols
                    && self.target != self.source
                    && mm.col_bar(self.source).overlaps(mm.col_bar(self.target))
            }
            OpKind::RowOverlap => {
                in_rows
                    && self.target != self.source
                    && mm.row_bar(self.target).overlaps(mm.row_bar(self.source))
            }
        }
    }

    /// Applies the operation. Additions only touch entries whose row bar
    /// is ⪯ their column bar, since other coefficients are not defined.
    pub fn apply(&self, mm: &mut MorphismMatrix) {
        let (rows, cols) = (mm.rows(), mm.cols());
        let row_bars: Vec<_> = (0..rows).map(|r| mm.row_bar(r)).collect();
        let col_bars: Vec<_> = (0..cols).map(|c| mm.col_bar(c)).collect();
        let m = mm.entries_mut();
        match self.kind {
            OpKind::ScaleColumn => m.scale_col(self.target, &self.coeff),
            OpKind::ScaleRow => m.scale_row(self.target, &self.coeff),
            OpKind::ColumnSameBar | OpKind::ColumnOverlap => {
                for (r, bar) in row_bars.iter().enumerate() {
                    if bar.overlaps(col_bars[self.target]) {
                        let v = m.get(r, self.target) + &(&self.coeff * m.get(r, self.source));
                        m.set(r, self.target, v);
                    }
                }
            }
            OpKind::RowSameBar | OpKind::RowOverlap => {
                for (c, &bar) in col_bars.iter().enumerate() {
                    if row_bars[self.target].overlaps(bar) {
                        let v = m.get(self.target, c) + &(&self.coeff * m.get(self.source, c));
                        m.set(self.target, c, v);
                    }
                }
            }
        }
    }
}

impl fmt::Display for AdmissibleOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OpKind::ScaleColumn => write!(f, "scale column {} by {}", self.target, self.coeff),
            OpKind::ScaleRow => write!(f, "scale row {} by {}", self.target, self.coeff),
            OpKind::ColumnSameBar | OpKind::ColumnOverlap => {
                write!(
                    f,
                    "column {} += {} * column {}",
                    self.target, self.coeff, self.source
                )
            }
            OpKind::RowSameBar | OpKind::RowOverlap => {
                write!(
                    f,
                    "row {} += {} * row {}",
                    self.target, self.coeff, self.source
                )
            }
        }
    }
}

/// Applies `ops` in order to a copy of `mm`.
pub fn replay(mm: &MorphismMatrix, ops: &[AdmissibleOp]) -> MorphismMatrix {
    let mut out = mm.clone();
    for op in ops {
        op.apply(&mut out);
    }
    out
}
