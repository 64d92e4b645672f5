//! Dense exact matrices over a [`Field`].
//!
//! Pivoting always takes the first nonzero entry in the current column, so
//! every elimination is deterministic. Determinants over ℚ go through
//! fraction-free (Bareiss) elimination on an integer-scaled copy; over GF(p)
//! plain Gaussian elimination is used.

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(field: Field, entries: &[Scalar]) -> Result<Self> {
        let n = entries.len();
        let mut m = Self::zeros(field, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone())?;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries; every entry must live in `field`.
    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|s| s.field() != field) {
            return Err(Error::MixedFields(field, bad.field()));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Integer entries mapped into `field`. Convenient for literals.
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            field,
            rows.iter()
                .map(|row| row.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "({r},{c}) outside {}x{}", self.rows, self.cols);
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) -> Result<()> {
        if v.field() != self.field {
            return Err(Error::MixedFields(self.field, v.field()));
        }
        if r >= self.rows || c >= self.cols {
            return Err(Error::DimensionMismatch(format!(
                "({r},{c}) outside {}x{}",
                self.rows, self.cols
            )));
        }
        self.data[r * self.cols + c] = v;
        Ok(())
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// The submatrix made of the given column range.
    pub fn columns(&self, range: Range<usize>) -> Matrix {
        assert!(range.end <= self.cols);
        let width = range.len();
        let mut data = Vec::with_capacity(self.rows * width);
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[range.clone()]);
        }
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: width,
            data,
        }
    }

    /// Horizontal concatenation `(m₁|m₂|…)`.
    pub fn hstack(field: Field, parts: &[Matrix]) -> Result<Matrix> {
        let rows = parts.first().map_or(0, Matrix::rows);
        for p in parts {
            p.expect_field(field)?;
            if p.rows != rows {
                return Err(Error::DimensionMismatch("hstack row counts differ".into()));
            }
        }
        let cols = parts.iter().map(Matrix::cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for p in parts {
                data.extend_from_slice(p.row(r));
            }
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Vertical concatenation `(m₁/m₂/…)`.
    pub fn vstack(field: Field, parts: &[Matrix]) -> Result<Matrix> {
        let cols = parts.first().map_or(0, Matrix::cols);
        for p in parts {
            p.expect_field(field)?;
            if p.cols != cols {
                return Err(Error::DimensionMismatch("vstack column counts differ".into()));
            }
        }
        let rows = parts.iter().map(Matrix::rows).sum();
        let data = parts.iter().flat_map(|p| p.data.iter().cloned()).collect();
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    fn expect_field(&self, field: Field) -> Result<()> {
        if self.field == field {
            Ok(())
        } else {
            Err(Error::MixedFields(field, self.field))
        }
    }

    fn expect_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        self.expect_field(other.field)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Scalar) -> Result<Matrix> {
        self.expect_field(s.field())?;
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        })
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        self.expect_field(other.field)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product: block `(i, j)` of the result is `self[i,j]·other`.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix> {
        self.expect_field(other.field)?;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(self.field, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * cols + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self ⊗ self ⊗ … ⊗ self` (`k` factors); the 1×1 identity for `k = 0`.
    pub fn kron_power(&self, k: usize) -> Matrix {
        let mut acc = Matrix::identity(self.field, 1);
        for _ in 0..k {
            acc = acc.kron(self).expect("same field");
        }
        acc
    }

    pub fn pow(&self, k: usize) -> Result<Matrix> {
        let n = self.expect_square()?;
        let mut acc = Matrix::identity(self.field, n);
        for _ in 0..k {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<Scalar> {
        let n = self.expect_square()?;
        Ok((0..n).fold(self.field.zero(), |acc, i| &acc + self.get(i, i)))
    }

    pub fn det(&self) -> Result<Scalar> {
        self.expect_square()?;
        Ok(match self.field.modulus() {
            None => self.det_bareiss(),
            Some(_) => self.det_gauss(),
        })
    }

    // Each row is scaled to integers by the lcm of its denominators, Bareiss
    // runs over ℤ, and the scaling is divided back out at the end.
    fn det_bareiss(&self) -> Scalar {
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|r| {
                let row = self.row(r);
                let lcm = row
                    .iter()
                    .map(|s| s.as_rational().expect("rational entry").denom().clone())
                    .fold(BigInt::one(), |acc, d| acc.lcm(&d));
                scale *= &lcm;
                row.iter()
                    .map(|s| {
                        let q = s.as_rational().expect("rational entry");
                        q.numer() * (&lcm / q.denom())
                    })
                    .collect()
            })
            .collect();

        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
                return self.field.zero();
            };
            if p != k {
                m.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let mut det = if n == 0 { BigInt::one() } else { m[n - 1][n - 1].clone() };
        if negate {
            det = -det;
        }
        let q = BigRational::new(det, scale);
        self.field
            .from_bigint(q.numer())
            .checked_div(&self.field.from_bigint(q.denom()))
            .expect("nonzero denominator")
    }

    fn det_gauss(&self) -> Scalar {
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m.get(r, k).is_zero()) else {
                return self.field.zero();
            };
            if p != k {
                m.swap_rows(p, k);
                det = -det;
            }
            let pivot = m.get(k, k).clone();
            det = &det * &pivot;
            let pinv = pivot.inv().expect("nonzero pivot");
            for i in k + 1..n {
                let f = m.get(i, k) * &pinv;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = m.get(i, j) - &(&f * m.get(k, j));
                    m.data[i * n + j] = v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Exact inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.expect_square()?;
        if n == 0 {
            return Ok(self.clone());
        }
        let aug = Matrix::hstack(self.field, &[self.clone(), Matrix::identity(self.field, n)])?;
        let (reduced, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular {
                det: self.field.zero(),
            });
        }
        Ok(reduced.columns(n..2 * n))
    }

    /// Reduced row echelon form and the list of pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
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
            m.swap_rows(p, row);
            let pinv = m.get(row, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let idx = row * m.cols + c;
                m.data[idx] = &m.data[idx] * &pinv;
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.get(r, c) - &(&f * m.get(row, c));
                    m.data[r * m.cols + c] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self·x = 0}`, returned as the rows of a matrix in
    /// reduced row echelon form (the unique such basis of the subspace).
    pub fn null_space(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(self.field, free.len(), self.cols);
        for (b, &f) in free.iter().enumerate() {
            basis.data[b * self.cols + f] = self.field.one();
            for (pr, &pc) in pivots.iter().enumerate() {
                basis.data[b * self.cols + pc] = -r.get(pr, f);
            }
        }
        basis.rref().0
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Rows of scalar tokens, as used in reports and documents.
    pub fn to_tokens(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(Scalar::to_string).collect())
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (c, v) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
