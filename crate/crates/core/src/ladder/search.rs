use std::collections::{HashSet, VecDeque};

use num_traits::ToPrimitive;

use crate::algebra::{Field, Scalar};
use crate::morphism::MorphismMatrix;
use crate::persistence::Interval;

/// Result of an exhaustive orbit search over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A matching form reachable by admissible operations, as residues.
    Found(Vec<Vec<u64>>),
    /// The whole orbit was visited without finding a matching form.
    Exhausted { states: usize },
    /// The orbit exceeded the state budget.
    Truncated { states: usize },
}

/// Breadth-first search through every matrix reachable from `mm` (reduced
/// mod `p`) by admissible operations. The moves are scalings by a
/// generator of the multiplicative group and masked additions with
/// coefficient one, which together generate every admissible operation.
///
/// A negative answer over `F_p` is evidence, not proof, for the rationals.
pub fn exhaustive_matching_search(
    mm: &MorphismMatrix,
    p: u64,
    max_states: usize,
) -> Result<SearchOutcome, String> {
    let field = Field::prime(p).map_err(|e| e.to_string())?;
    let (rows, cols) = (mm.rows(), mm.cols());
    let mut start = vec![0u64; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            start[r * cols + c] = residue(mm.get(r, c), field)?;
        }
    }
    let row_bars: Vec<Interval> = (0..rows).map(|r| mm.row_bar(r)).collect();
    let col_bars: Vec<Interval> = (0..cols).map(|c| mm.col_bar(c)).collect();
    let g = primitive_root(p);
    let moves = legal_moves(&row_bars, &col_bars);

    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(state) = queue.pop_front() {
        if is_matching(&state, rows, cols) {
            return Ok(SearchOutcome::Found(
                state.chunks(cols.max(1)).map(<[u64]>::to_vec).collect(),
            ));
        }
        for mv in &moves {
            let next = mv.apply(&state, rows, cols, p, g, &row_bars, &col_bars);
            if seen.insert(next.clone()) {
                if seen.len() > max_states {
                    return Ok(SearchOutcome::Truncated { states: seen.len() });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(SearchOutcome::Exhausted { states: seen.len() })
}

fn residue(s: &Scalar, field: Field) -> Result<u64, String> {
    let q = match s {
        Scalar::Rational(q) => q.clone(),
        Scalar::Prime { value, modulus } => {
            return match field {
                Field::Prime(p) if p == *modulus => Ok(*value),
                _ => Err("entries live in a different prime field".into()),
            }
        }
    };
    match field
        .from_fraction(q.numer(), q.denom())
        .map_err(|e| e.to_string())?
    {
        Scalar::Prime { value, .. } => Ok(value),
        Scalar::Rational(_) => unreachable!("prime field yields residues"),
    }
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let n = p - 1;
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, n / f, p) != 1))
        .expect("prime fields have primitive roots")
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc.to_u64().expect("residue fits")
}

enum Move {
    ScaleRow(usize),
    ScaleCol(usize),
    AddRow { target: usize, source: usize },
    AddCol { target: usize, source: usize },
}

fn legal_moves(row_bars: &[Interval], col_bars: &[Interval]) -> Vec<Move> {
    let mut moves = Vec::new();
    moves.extend((0..row_bars.len()).map(Move::ScaleRow));
    moves.extend((0..col_bars.len()).map(Move::ScaleCol));
    for target in 0..row_bars.len() {
        for source in 0..row_bars.len() {
            if target != source && row_bars[target].overlaps(row_bars[source]) {
                moves.push(Move::AddRow { target, source });
            }
        }
    }
    for target in 0..col_bars.len() {
        for source in 0..col_bars.len() {
            if target != source && col_bars[source].overlaps(col_bars[target]) {
                moves.push(Move::AddCol { target, source });
            }
        }
    }
    moves
}

impl Move {
    #[allow(clippy::too_many_arguments)]
    fn apply(
        &self,
        s: &[u64],
        rows: usize,
        cols: usize,
        p: u64,
        g: u64,
        row_bars: &[Interval],
        col_bars: &[Interval],
    ) -> Vec<u64> {
        let mut out = s.to_vec();
        let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
        match *self {
            Move::ScaleRow(r) => {
                (0..cols).for_each(|c| out[r * cols + c] = mul(out[r * cols + c], g))
            }
            Move::ScaleCol(c) => {
                (0..rows).for_each(|r| out[r * cols + c] = mul(out[r * cols + c], g))
            }
            Move::AddRow { target, source } => {
                for c in 0..cols {
                    if row_bars[target].overlaps(col_bars[c]) {
                        out[target * cols + c] =
                            (out[target * cols + c] + s[source * cols + c]) % p;
                    }
                }
            }
            Move::AddCol { target, source } => {
                for r in 0..rows {
                    if row_bars[r].overlaps(col_bars[target]) {
                        out[r * cols + target] =
                            (out[r * cols + target] + s[r * cols + source]) % p;
                    }
                }
            }
        }
        out
    }
}

fn is_matching(s: &[u64], rows: usize, cols: usize) -> bool {
    let mut col_used = vec![false; cols];
    for r in 0..rows {
        let mut row_used = false;
        for c in 0..cols {
            let v = s[r * cols + c];
            if v == 0 {
                continue;
            }
            if v != 1 || row_used || col_used[c] {
                return false;
            }
            row_used = true;
            col_used[c] = true;
        }
    }
    true
}
