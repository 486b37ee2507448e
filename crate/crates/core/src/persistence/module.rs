use std::fmt;

use crate::algebra::{mat_mul, Field, Matrix};

use super::{Interval, PersistenceError};

/// Finite sequence of vector spaces `V_t` and maps `V_t -> V_{t+1}` on the
/// integer grid. Spaces outside `start..start + dims.len()` are zero.
#[derive(Clone, Debug)]
pub struct PersistenceModule {
    field: Field,
    start: i64,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl PersistenceModule {
    /// `maps[k]` is the map from index `start + k` to `start + k + 1`, so
    /// there is one map fewer than there are dimensions.
    pub fn new(
        field: Field,
        start: i64,
        dims: Vec<usize>,
        maps: Vec<Matrix>,
    ) -> Result<PersistenceModule, PersistenceError> {
        if maps.len() + 1 != dims.len().max(1) {
            return Err(PersistenceError::MapCount {
                dims: dims.len(),
                maps: maps.len(),
            });
        }
        for (k, m) in maps.iter().enumerate() {
            if m.field() != field {
                return Err(PersistenceError::FieldMismatch);
            }
            let expected = (dims[k + 1], dims[k]);
            if m.shape() != expected {
                return Err(PersistenceError::MapShape {
                    index: start + k as i64 + 1,
                    expected,
                    found: m.shape(),
                });
            }
        }
        Ok(PersistenceModule {
            field,
            start,
            dims,
            maps,
        })
    }

    pub fn zero(field: Field) -> PersistenceModule {
        PersistenceModule {
            field,
            start: 0,
            dims: Vec::new(),
            maps: Vec::new(),
        }
    }

    /// The interval module `k_J`.
    pub fn interval_module(field: Field, bar: Interval) -> PersistenceModule {
        let n = (bar.length() + 1) as usize;
        PersistenceModule {
            field,
            start: bar.birth(),
            dims: vec![1; n],
            maps: vec![Matrix::identity(field, 1); n - 1],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last stored index; `start - 1` for an empty module.
    pub fn end(&self) -> i64 {
        self.start + self.dims.len() as i64 - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn dim(&self, t: i64) -> usize {
        if t < self.start || t > self.end() {
            0
        } else {
            self.dims[(t - self.start) as usize]
        }
    }

    /// Structure map `V_t -> V_{t+1}`.
    pub fn map(&self, t: i64) -> Matrix {
        if t >= self.start && t < self.end() {
            self.maps[(t - self.start) as usize].clone()
        } else {
            Matrix::zeros(self.field, self.dim(t + 1), self.dim(t))
        }
    }

    /// Smallest index range holding every nonzero space, if any.
    pub fn support(&self) -> Option<(i64, i64)> {
        let first = self.dims.iter().position(|&d| d > 0)?;
        let last = self.dims.iter().rposition(|&d| d > 0)?;
        Some((self.start + first as i64, self.start + last as i64))
    }

    /// `V(delta)`, with `V(delta)_t = V_{t+delta}`. Nothing is lost.
    pub fn shift(&self, delta: i64) -> PersistenceModule {
        PersistenceModule {
            start: self.start - delta,
            ..self.clone()
        }
    }

    /// The same module stored over exactly `lo..=hi`. Spaces outside the
    /// window are replaced by zero, which truncates bars.
    pub fn restrict(&self, lo: i64, hi: i64) -> PersistenceModule {
        if hi < lo {
            return PersistenceModule {
                start: lo,
                ..PersistenceModule::zero(self.field)
            };
        }
        let dims = (lo..=hi).map(|t| self.dim(t)).collect();
        let maps = (lo..hi).map(|t| self.map(t)).collect();
        PersistenceModule {
            field: self.field,
            start: lo,
            dims,
            maps,
        }
    }

    /// Stores the module over `lo..=hi` without changing it.
    pub fn padded(&self, lo: i64, hi: i64) -> Result<PersistenceModule, PersistenceError> {
        if let Some((a, b)) = self.support() {
            if a < lo || b > hi {
                return Err(PersistenceError::WindowTooSmall {
                    lo,
                    hi,
                    support: (a, b),
                });
            }
        }
        Ok(self.restrict(lo, hi))
    }

    /// Drops zero spaces at both ends.
    pub fn trimmed(&self) -> PersistenceModule {
        match self.support() {
            Some((a, b)) => self.restrict(a, b),
            None => PersistenceModule::zero(self.field),
        }
    }

    /// `v_{i,j} = A_j ... A_{i+1}`, zero-extended outside the stored range.
    pub fn inner(&self, i: i64, j: i64) -> Matrix {
        assert!(i <= j, "inner morphism needs i <= j");
        let mut acc = Matrix::identity(self.field, self.dim(i));
        for t in i..j {
            acc = mat_mul(&self.map(t), &acc).expect("consecutive maps compose");
        }
        acc
    }

    /// `v_{i,j}` for indices inside the stored range.
    pub fn inner_morphism_matrix(&self, i: i64, j: i64) -> Result<Matrix, PersistenceError> {
        if i > j || i < self.start || j > self.end() {
            return Err(PersistenceError::IndexOutOfRange {
                i,
                j,
                start: self.start,
                end: self.end(),
            });
        }
        Ok(self.inner(i, j))
    }

    /// Componentwise direct sum; blocks appear in argument order.
    pub fn direct_sum(field: Field, parts: &[PersistenceModule]) -> PersistenceModule {
        let supports: Vec<(i64, i64)> = parts.iter().filter_map(|p| p.support()).collect();
        let Some(lo) = supports.iter().map(|s| s.0).min() else {
            return PersistenceModule::zero(field);
        };
        let hi = supports.iter().map(|s| s.1).max().unwrap();
        let dims: Vec<usize> = (lo..=hi)
            .map(|t| parts.iter().map(|p| p.dim(t)).sum())
            .collect();
        let maps = (lo..hi)
            .map(|t| {
                block_diagonal(
                    field,
                    parts
                        .iter()
                        .map(|p| p.map(t))
                        .collect::<Vec<_>>()
                        .as_slice(),
                )
            })
            .collect();
        PersistenceModule {
            field,
            start: lo,
            dims,
            maps,
        }
    }

    /// Applies pointwise changes of coordinates: `A_t <- g_{t+1} A_t g_t^{-1}`
    /// where `basis(t)` returns `g_t^{-1}`, the new basis in old coordinates.
    pub fn change_basis(
        &self,
        basis: impl Fn(i64) -> Matrix,
    ) -> Result<PersistenceModule, PersistenceError> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for t in self.start..self.end() {
            let p_t = basis(t);
            let q = basis(t + 1).inverse()?;
            maps.push(mat_mul(&q, &mat_mul(&self.map(t), &p_t)?)?);
        }
        PersistenceModule::new(self.field, self.start, self.dims.clone(), maps)
    }
}

pub(crate) fn block_diagonal(field: Field, blocks: &[Matrix]) -> Matrix {
    let rows = blocks.iter().map(Matrix::rows).sum();
    let cols = blocks.iter().map(Matrix::cols).sum();
    let mut out = Matrix::zeros(field, rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                out.set(r0 + r, c0 + c, b.get(r, c).clone());
            }
        }
        r0 += b.rows();
        c0 += b.cols();
    }
    out
}

/// Modules are equal when they agree after trimming zero ends.
impl PartialEq for PersistenceModule {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.trimmed(), other.trimmed());
        a.field == b.field
            && a.dims == b.dims
            && a.maps == b.maps
            && (a.dims.is_empty() || a.start == b.start)
    }
}

impl Eq for PersistenceModule {}

impl fmt::Display for PersistenceModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "module over {} from {} dims {:?}",
            self.field, self.start, self.dims
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn shape_errors_are_reported() {
        let bad = PersistenceModule::new(q(), 0, vec![1, 2], vec![Matrix::zeros(q(), 1, 2)]);
        assert!(matches!(
            bad,
            Err(PersistenceError::MapShape { index: 1, .. })
        ));
        assert!(PersistenceModule::new(q(), 0, vec![1, 2], vec![]).is_err());
    }

    #[test]
    fn shift_is_lossless() {
        let m = PersistenceModule::interval_module(q(), Interval::of(1, 3));
        assert_eq!(m.shift(2).shift(-2), m);
        assert_eq!(m.shift(5).dim(-4), 1);
        assert_eq!(m.shift(0), m);
        assert_eq!(m.padded(-1, 6).unwrap(), m);
        assert!(m.padded(2, 6).is_err());
        assert_eq!(m.restrict(2, 6).support(), Some((2, 3)));
    }

    #[test]
    fn inner_morphisms_compose() {
        let m = PersistenceModule::direct_sum(
            q(),
            &[
                PersistenceModule::interval_module(q(), Interval::of(0, 3)),
                PersistenceModule::interval_module(q(), Interval::of(1, 2)),
            ],
        );
        assert_eq!(m.inner(1, 1), Matrix::identity(q(), 2));
        assert_eq!(m.inner(1, 2).rank(), 2);
        assert_eq!(m.inner(1, 3).rank(), 1);
        assert_eq!(
            m.inner(0, 1),
            mat_mul(&m.inner(1, 1), &m.inner(0, 1)).unwrap()
        );
        assert_eq!(
            m.inner(0, 3),
            mat_mul(&m.inner(2, 3), &m.inner(0, 2)).unwrap()
        );
        assert!(m.inner_morphism_matrix(0, 4).is_err());
        assert_eq!(m.inner(3, 5).rank(), 0);
    }
}
