use crate::algebra::{mat_mul, Field, Matrix, Scalar};
use crate::persistence::{BarGenerator, BarcodeBasis, Interval};

use super::{LadderModule, MorphismError};

/// Coefficients of a morphism in a pair of barcode bases: entry `(K, J)`
/// is the coefficient of `x_K` in `Φ(x_J)` at the birth of `J`.
///
/// Rows belong to codomain generators and columns to domain generators, both
/// sorted by bar and then slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismMatrix {
    row_gens: Vec<BarGenerator>,
    col_gens: Vec<BarGenerator>,
    entries: Matrix,
}

impl MorphismMatrix {
    /// Wraps a coefficient matrix, enforcing that every nonzero entry has
    /// row bar ⪯ column bar.
    pub fn new(
        row_gens: Vec<BarGenerator>,
        col_gens: Vec<BarGenerator>,
        entries: Matrix,
    ) -> Result<MorphismMatrix, MorphismError> {
        if entries.shape() != (row_gens.len(), col_gens.len()) {
            return Err(MorphismError::MatrixShape {
                gens: (row_gens.len(), col_gens.len()),
                found: entries.shape(),
            });
        }
        let mm = MorphismMatrix {
            row_gens,
            col_gens,
            entries,
        };
        mm.check_support()?;
        Ok(mm)
    }

    pub fn field(&self) -> Field {
        self.entries.field()
    }

    pub fn row_gens(&self) -> &[BarGenerator] {
        &self.row_gens
    }

    pub fn col_gens(&self) -> &[BarGenerator] {
        &self.col_gens
    }

    pub fn row_bar(&self, r: usize) -> Interval {
        self.row_gens[r].bar
    }

    pub fn col_bar(&self, c: usize) -> Interval {
        self.col_gens[c].bar
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut Matrix {
        &mut self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        self.entries.get(r, c)
    }

    pub fn rows(&self) -> usize {
        self.entries.rows()
    }

    pub fn cols(&self) -> usize {
        self.entries.cols()
    }

    pub fn check_support(&self) -> Result<(), MorphismError> {
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                if !self.get(r, c).is_zero() && !self.row_bar(r).overlaps(self.col_bar(c)) {
                    return Err(MorphismError::SupportViolation {
                        row: self.row_bar(r),
                        col: self.col_bar(c),
                    });
                }
            }
        }
        Ok(())
    }

    /// Indices of the rows with a nonzero entry in column `c`.
    pub fn support(&self, c: usize) -> Result<Vec<usize>, MorphismError> {
        if c >= self.cols() {
            return Err(MorphismError::UnknownGenerator(c));
        }
        Ok((0..self.rows())
            .filter(|&r| !self.get(r, c).is_zero())
            .collect())
    }

    /// Generators in the support of column `c`.
    pub fn support_generators(&self, c: usize) -> Result<Vec<&BarGenerator>, MorphismError> {
        Ok(self
            .support(c)?
            .into_iter()
            .map(|r| &self.row_gens[r])
            .collect())
    }
}

fn same_bars(a: &[BarGenerator], b: &[BarGenerator]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.bar == y.bar && x.slot == y.slot)
}

fn column_vector(values: Vec<Scalar>) -> Matrix {
    let n = values.len();
    let field = values.first().map(Scalar::field);
    match field {
        Some(f) => Matrix::from_entries(f, n, 1, values).expect("column of scalars"),
        None => Matrix::zeros(Field::Rational, 0, 1),
    }
}

fn check_bases(
    m: &LadderModule,
    dom: &BarcodeBasis,
    cod: &BarcodeBasis,
) -> Result<(), MorphismError> {
    if dom.module() != m.dom() {
        return Err(MorphismError::BasisMismatch(
            "domain basis belongs to another module".into(),
        ));
    }
    if cod.module() != m.cod() {
        return Err(MorphismError::BasisMismatch(
            "codomain basis belongs to another module".into(),
        ));
    }
    Ok(())
}

/// Reads off `M_Φ` in the given barcode bases.
pub fn to_single_matrix(
    m: &LadderModule,
    dom: &BarcodeBasis,
    cod: &BarcodeBasis,
) -> Result<MorphismMatrix, MorphismError> {
    check_bases(m, dom, cod)?;
    let field = m.field();
    let rows = cod.generators().len();
    let cols = dom.generators().len();
    let mut entries = Matrix::zeros(field, rows, cols);
    for (c, gen) in dom.generators().iter().enumerate() {
        let a = gen.bar.birth();
        let x = column_vector(dom.vector(c, a).expect("generator alive at birth"));
        let image = mat_mul(&m.comp(a), &x)?;
        let coords = cod.coordinates(a, &image);
        for (r, k) in cod.generators().iter().enumerate() {
            if let Some(pos) = k.position(a) {
                entries.set(r, c, coords.get(pos, 0).clone());
            }
        }
    }
    MorphismMatrix::new(
        cod.generators().to_vec(),
        dom.generators().to_vec(),
        entries,
    )
}

/// Rebuilds the components `Φ_t = Q_t N_t P_t^{-1}` from coefficients.
pub fn from_single_matrix(
    mm: &MorphismMatrix,
    dom: &BarcodeBasis,
    cod: &BarcodeBasis,
) -> Result<LadderModule, MorphismError> {
    if !same_bars(mm.col_gens(), dom.generators()) || !same_bars(mm.row_gens(), cod.generators()) {
        return Err(MorphismError::BasisMismatch(
            "matrix generators differ from basis generators".into(),
        ));
    }
    mm.check_support()?;
    let field = mm.field();
    let mut err = None;
    let out = LadderModule::from_fn(dom.module().clone(), cod.module().clone(), |t| {
        let mut n = Matrix::zeros(field, cod.module().dim(t), dom.module().dim(t));
        for (c, j) in mm.col_gens().iter().enumerate() {
            let Some(pj) = j.position(t) else { continue };
            for (r, k) in mm.row_gens().iter().enumerate() {
                if let Some(pk) = k.position(t) {
                    n.set(pk, pj, mm.get(r, c).clone());
                }
            }
        }
        let q = cod.change().basis(t);
        let p_inv = dom.change().g(t);
        mat_mul(&q, &n)
            .and_then(|qn| mat_mul(&qn, &p_inv))
            .unwrap_or_else(|e| {
                err = Some(e);
                n
            })
    })?;
    match err {
        Some(e) => Err(e.into()),
        None => Ok(out),
    }
}

/// `outer ∘ inner` on coefficient matrices: the matrix product with every
/// entry whose row bar fails ⪯ its column bar set to zero.
pub fn compose_single(
    outer: &MorphismMatrix,
    inner: &MorphismMatrix,
) -> Result<MorphismMatrix, MorphismError> {
    let inner_rows: Vec<Interval> = inner.row_gens().iter().map(|g| g.bar).collect();
    let outer_cols: Vec<Interval> = outer.col_gens().iter().map(|g| g.bar).collect();
    if inner_rows != outer_cols {
        return Err(MorphismError::BasisMismatch(
            "inner codomain bars differ from outer domain bars".into(),
        ));
    }
    let mut product = mat_mul(outer.entries(), inner.entries())?;
    for r in 0..product.rows() {
        for c in 0..product.cols() {
            if !outer.row_bar(r).overlaps(inner.col_bar(c)) {
                product.set(r, c, product.field().zero());
            }
        }
    }
    MorphismMatrix::new(
        outer.row_gens().to_vec(),
        inner.col_gens().to_vec(),
        product,
    )
}
