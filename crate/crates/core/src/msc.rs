//! Matrices of structure constants and row-block machinery.
//!
//! An `n`-dimensional algebra with basis `e₁,…,eₙ` is stored as the `n × n²`
//! matrix `A = (A₁|A₂|…|Aₙ)` where `eᵢ·eⱼ = Σₖ a_{ij}^k eₖ` and the block `Aᵢ`
//! holds `Aᵢ[k, j] = a_{ij}^k`, i.e. `eᵢ·e = e·Aᵢ`. With this layout the product
//! of coordinate columns is `x·y = A(x ⊗ y)`.
//!
//! Block indices in this API are zero-based.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

/// A row of `width` square blocks, each `block_size × block_size`.
///
/// Kept distinct from [`StructureMatrix`] so that block powers (whose width is
/// `nᵏ`) cannot stand in for an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowBlock {
    block_size: usize,
    width: usize,
    data: Matrix,
}

impl RowBlock {
    pub fn new(data: Matrix, block_size: usize) -> Result<Self> {
        if data.rows() != block_size || block_size == 0 || !data.cols().is_multiple_of(block_size) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is not a row of {block_size}x{block_size} blocks",
                data.rows(),
                data.cols()
            )));
        }
        Ok(RowBlock {
            block_size,
            width: data.cols() / block_size,
            data,
        })
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn block(&self, i: usize) -> Result<Matrix> {
        if i >= self.width {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.width,
            });
        }
        let m = self.block_size;
        Ok(self.data.columns(i * m..(i + 1) * m))
    }

    /// `(tr B₁, tr B₂, …)` as a `1 × width` row.
    pub fn trbar(&self) -> Matrix {
        let f = self.data.field();
        let m = self.block_size;
        let traces = (0..self.width)
            .map(|b| (0..m).fold(f.zero(), |acc, i| &acc + self.data.get(i, b * m + i)))
            .collect();
        Matrix::from_vec(f, 1, self.width, traces).expect("traces share the field")
    }

    /// `(M·B₁ | … | M·B_w)`.
    pub fn left_mul(&self, m: &Matrix) -> Result<RowBlock> {
        RowBlock::new(m.matmul(&self.data)?, self.block_size)
    }

    /// `X^[1] = X`, `X^[k] = (X₁X^[k-1] | … | X_w X^[k-1])`; width `wᵏ`.
    pub fn power(&self, k: usize) -> Result<RowBlock> {
        if k == 0 {
            return Err(Error::DimensionMismatch("block power needs k >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            let parts = (0..self.width)
                .map(|i| self.block(i)?.matmul(&acc.data))
                .collect::<Result<Vec<_>>>()?;
            acc = RowBlock::new(Matrix::hstack(self.data.field(), &parts)?, self.block_size)?;
        }
        Ok(acc)
    }
}

/// The matrix of structure constants of an `n`-dimensional algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructureMatrix {
    n: usize,
    data: Matrix,
}

impl StructureMatrix {
    pub fn new(data: Matrix) -> Result<Self> {
        let n = data.rows();
        if n == 0 || data.cols() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "a structure matrix is n x n^2, got {}x{}",
                data.rows(),
                data.cols()
            )));
        }
        Ok(StructureMatrix { n, data })
    }

    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Result<Self> {
        Self::new(Matrix::from_ints(field, rows)?)
    }

    /// The algebra with identically zero product.
    pub fn zero(field: Field, n: usize) -> Self {
        StructureMatrix {
            n,
            data: Matrix::zeros(field, n, n * n),
        }
    }

    /// Builds `(A₁|…|Aₙ)` from its blocks.
    pub fn from_blocks(field: Field, blocks: &[Matrix]) -> Result<Self> {
        Self::new(Matrix::hstack(field, blocks)?)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.data.field()
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    /// The structure constant `a_{ij}^k`, the coefficient of `e_k` in `e_i·e_j`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        self.data.get(k, i * self.n + j)
    }

    pub fn block(&self, i: usize) -> Result<Matrix> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, len: self.n });
        }
        Ok(self.data.columns(i * self.n..(i + 1) * self.n))
    }

    pub fn blocks(&self) -> Vec<Matrix> {
        (0..self.n)
            .map(|i| self.data.columns(i * self.n..(i + 1) * self.n))
            .collect()
    }

    pub fn as_row_block(&self) -> RowBlock {
        RowBlock {
            block_size: self.n,
            width: self.n,
            data: self.data.clone(),
        }
    }

    /// The opposite matrix `A°` with `A°ₖ[i, j] = a_{jk}^i`, which encodes
    /// right multiplications: `e·eₖ = e·A°ₖ`.
    pub fn opposite(&self) -> StructureMatrix {
        let n = self.n;
        let mut data = Matrix::zeros(self.field(), n, n * n);
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    data.set(i, k * n + j, self.data.get(i, j * n + k).clone())
                        .expect("in range");
                }
            }
        }
        StructureMatrix { n, data }
    }

    /// `τ(g, A) = g·A·(g⁻¹ ⊗ g⁻¹)`: the same algebra written in the basis `e·g⁻¹`.
    pub fn act(&self, g: &Matrix) -> Result<StructureMatrix> {
        self.check_square(g)?;
        let ginv = g.inverse()?;
        let data = g.matmul(&self.data)?.matmul(&ginv.kron(&ginv)?)?;
        Ok(StructureMatrix { n: self.n, data })
    }

    fn check_square(&self, g: &Matrix) -> Result<()> {
        if g.field() != self.field() {
            return Err(Error::MixedFields(self.field(), g.field()));
        }
        if g.rows() != self.n || g.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n}, got {}x{}",
                g.rows(),
                g.cols(),
                n = self.n
            )));
        }
        Ok(())
    }

    fn check_vector(&self, v: &[Scalar]) -> Result<Matrix> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for dimension {}",
                v.len(),
                self.n
            )));
        }
        Matrix::from_vec(self.field(), self.n, 1, v.to_vec())
    }

    /// Coordinates of `x·y`, computed as `A(x ⊗ y)`.
    pub fn evaluate_product(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        let (x, y) = (self.check_vector(x)?, self.check_vector(y)?);
        Ok(self.data.matmul(&x.kron(&y)?)?.entries().to_vec())
    }

    /// Coordinates of `x·y` read through the opposite matrix, `A°(y ⊗ x)`.
    pub fn evaluate_product_opposite(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        let (x, y) = (self.check_vector(x)?, self.check_vector(y)?);
        Ok(self.opposite().data.matmul(&y.kron(&x)?)?.entries().to_vec())
    }

    /// Largest `k` accepted by [`block_power`](Self::block_power). Width grows as
    /// `nᵏ`; `n + 1` covers every power the invariants and the tests use.
    pub fn block_power_cap(&self) -> usize {
        self.n + 1
    }

    pub fn block_power(&self, k: usize) -> Result<RowBlock> {
        let cap = self.block_power_cap();
        if k > cap {
            return Err(Error::BlockPowerCap { k, n: self.n, cap });
        }
        self.as_row_block().power(k)
    }

    /// `(tr A₁, …, tr Aₙ)` as a `1 × n` row.
    pub fn trbar(&self) -> Matrix {
        self.as_row_block().trbar()
    }

    /// `A` with every entry mapped into another field: integers and fractions
    /// whose denominators are units there. Used to reduce ℚ-algebras mod p.
    pub fn reduce_to(&self, field: Field) -> Result<StructureMatrix> {
        let entries = self
            .data
            .entries()
            .iter()
            .map(|s| match s.as_rational() {
                Some(r) => field.from_bigint(r.numer()).checked_div(&field.from_bigint(r.denom())),
                None => field.parse_scalar(&s.to_string()),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(Matrix::from_vec(field, self.n, self.n * self.n, entries)?)
    }
}
