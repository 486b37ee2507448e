use std::fmt;

use super::{AlgebraError, Field, Scalar};

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_entries(
        field: Field,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Matrix, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch {
                op: "from_entries",
                left: (rows, cols),
                right: (entries.len(), 1),
            });
        }
        if let Some(bad) = entries.iter().find(|s| s.field() != field) {
            return Err(AlgebraError::FieldMismatch(field, bad.field()));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    /// Convenience constructor from small integers, row-major.
    pub fn from_i64(field: Field, rows: usize, cols: usize, values: &[i64]) -> Matrix {
        assert_eq!(
            values.len(),
            rows * cols,
            "entry count does not match shape"
        );
        Matrix {
            field,
            rows,
            cols,
            entries: values.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    /// Parses every entry with [`Field::parse_scalar`].
    pub fn parse(
        field: Field,
        rows: usize,
        cols: usize,
        values: &[&str],
    ) -> Result<Matrix, AlgebraError> {
        let entries = values
            .iter()
            .map(|v| field.parse_scalar(v))
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::from_entries(field, rows, cols, entries)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds {:?}",
            self.shape()
        );
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds {:?}",
            self.shape()
        );
        debug_assert_eq!(value.field(), self.field);
        self.entries[r * self.cols + c] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn set_column(&mut self, c: usize, values: &[Scalar]) {
        assert_eq!(values.len(), self.rows);
        for (r, v) in values.iter().enumerate() {
            self.set(r, c, v.clone());
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, AlgebraError> {
        mat_mul(self, rhs)
    }

    pub fn inverse(&self) -> Result<Matrix, AlgebraError> {
        mat_inverse(self)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix, AlgebraError> {
        if self.field != rhs.field {
            return Err(AlgebraError::FieldMismatch(self.field, rhs.field));
        }
        if self.shape() != rhs.shape() {
            return Err(AlgebraError::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let entries = self.entries.iter().map(|a| a * s).collect();
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// `row[target] += coeff * row[source]`
    pub fn add_row_multiple(&mut self, target: usize, source: usize, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(target, c) + &(coeff * self.get(source, c));
            self.set(target, c, v);
        }
    }

    /// `col[target] += coeff * col[source]`
    pub fn add_col_multiple(&mut self, target: usize, source: usize, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, target) + &(coeff * self.get(r, source));
            self.set(r, target, v);
        }
    }

    pub fn scale_row(&mut self, r: usize, s: &Scalar) {
        for c in 0..self.cols {
            let v = self.get(r, c) * s;
            self.set(r, c, v);
        }
    }

    pub fn scale_col(&mut self, c: usize, s: &Scalar) {
        for r in 0..self.rows {
            let v = self.get(r, c) * s;
            self.set(r, c, v);
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// Submatrix with the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &Matrix) -> Result<Matrix, AlgebraError> {
        if self.cols != below.cols {
            return Err(AlgebraError::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: below.shape(),
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(below.entries.iter().cloned());
        Ok(Matrix {
            field: self.field,
            rows: self.rows + below.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().pivots.len()
    }

    /// Reduced row echelon form together with its pivot columns.
    pub fn row_echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            m.scale_row(row, &inv);
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let coeff = -m.get(r, col);
                    m.add_row_multiple(r, row, &coeff);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    /// Indices of a maximal set of linearly independent columns, chosen
    /// greedily left to right.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.row_echelon().pivots
    }

    /// Solves `self * x = b`, returning one solution if any exists.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>, AlgebraError> {
        if self.rows != b.rows {
            return Err(AlgebraError::DimensionMismatch {
                op: "solve",
                left: self.shape(),
                right: b.shape(),
            });
        }
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + b.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            for c in 0..b.cols {
                aug.set(r, self.cols + c, b.get(r, c).clone());
            }
        }
        let ech = aug.row_echelon();
        if ech.pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (i, &p) in ech.pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(p, c, ech.reduced.get(i, self.cols + c).clone());
            }
        }
        Ok(Some(x))
    }
}

/// Result of [`Matrix::row_echelon`].
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix, AlgebraError> {
    if a.field != b.field {
        return Err(AlgebraError::FieldMismatch(a.field, b.field));
    }
    if a.cols != b.rows {
        return Err(AlgebraError::DimensionMismatch {
            op: "mat_mul",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let mut out = Matrix::zeros(a.field, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.get(k, j);
                if bkj.is_zero() {
                    continue;
                }
                let v = out.get(i, j) + &(aik * bkj);
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

/// Gauss-Jordan inverse.
pub fn mat_inverse(a: &Matrix) -> Result<Matrix, AlgebraError> {
    if !a.is_square() {
        return Err(AlgebraError::NotSquare(a.shape()));
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut inv = Matrix::identity(a.field, n);
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !m.get(r, col).is_zero())
            .ok_or(AlgebraError::Singular)?;
        m.swap_rows(col, p);
        inv.swap_rows(col, p);
        let s = m.get(col, col).inv().expect("pivot is nonzero");
        m.scale_row(col, &s);
        inv.scale_row(col, &s);
        for r in 0..n {
            if r != col && !m.get(r, col).is_zero() {
                let coeff = -m.get(r, col);
                m.add_row_multiple(r, col, &coeff);
                inv.add_row_multiple(r, col, &coeff);
            }
        }
    }
    Ok(inv)
}

/// Checks whether `a` is in barcode form: at most one nonzero per row and
/// column, every nonzero equal to one, nonzero rows on top and their
/// columns strictly increasing. Returns the (0-based) column map on success.
pub fn is_barcode_form(a: &Matrix) -> Option<Vec<usize>> {
    let mut map = Vec::new();
    let mut seen_zero_row = false;
    for r in 0..a.rows() {
        let nonzero: Vec<usize> = (0..a.cols()).filter(|&c| !a.get(r, c).is_zero()).collect();
        match nonzero.as_slice() {
            [] => seen_zero_row = true,
            [c] => {
                if seen_zero_row || !a.get(r, *c).is_one() {
                    return None;
                }
                if map.last().is_some_and(|&prev| prev >= *c) {
                    return None;
                }
                map.push(*c);
            }
            _ => return None,
        }
    }
    Some(map)
}
