//! Automorphisms and derivations.
//!
//! In matrix form `g` is an automorphism iff `A = g A (g⁻¹)^⊗2`, and `D` is a
//! derivation iff `D A = A (D ⊗ I + I ⊗ D)`. Blockwise the derivation equation
//! reads `D Aᵢ = Aᵢ D + Σₖ Aₖ d_{ki}`, which is what [`derivation_space`]
//! assembles and solves.

use crate::canonical::frame;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::msc::StructureMatrix;

/// Why an automorphism group is known to be trivial.
pub const PROOF_P_COVARIANCE: &str = "P-covariance";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomorphismGroup {
    /// `{I}`; `proof` names the argument.
    Trivial { identity: Matrix, proof: &'static str },
    /// Outside the invertible-`P` stratum nothing is claimed; over a finite
    /// field the brute-force oracle can enumerate the group instead.
    Unknown,
}

pub fn is_automorphism(a: &StructureMatrix, g: &Matrix) -> Result<bool> {
    if g.rows() != a.dim() || g.cols() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "expected {n}x{n}, got {}x{}",
            g.rows(),
            g.cols(),
            n = a.dim()
        )));
    }
    match a.act(g) {
        Ok(moved) => Ok(moved == *a),
        Err(Error::Singular { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `P(τ(g,A)) = P(A)g⁻¹` and `τ(g,A) = A` force `P(A) = P(A)g⁻¹`, so `g = I`
/// whenever `P(A)` is invertible.
pub fn automorphism_group(a: &StructureMatrix) -> AutomorphismGroup {
    match frame(a) {
        Ok(_) => AutomorphismGroup::Trivial {
            identity: Matrix::identity(a.field(), a.dim()),
            proof: PROOF_P_COVARIANCE,
        },
        Err(_) => AutomorphismGroup::Unknown,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpace {
    pub n: usize,
    /// Reduced-echelon basis (as flattened row-major `n²`-vectors).
    pub basis: Vec<Matrix>,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// The `n³ × n²` coefficient matrix of `D ↦ D Aᵢ − Aᵢ D − Σₖ Aₖ d_{ki}`,
/// unknown `d_{rs}` in column `r·n + s`, equation `(i, r, c)` in row
/// `i·n² + r·n + c`.
pub fn derivation_system(a: &StructureMatrix) -> Matrix {
    let n = a.dim();
    let field = a.field();
    let blocks = a.blocks();
    let mut sys = Matrix::zeros(field, n * n * n, n * n);
    let mut bump = |row: usize, col: usize, v: &crate::field::Scalar| {
        let cur = sys.get(row, col) + v;
        sys.set(row, col, cur).expect("in range");
    };
    for (i, ai) in blocks.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                let eq = i * n * n + r * n + c;
                // (D Aᵢ)[r,c] = Σ_s d_{rs} Aᵢ[s,c]
                for s in 0..n {
                    bump(eq, r * n + s, ai.get(s, c));
                }
                // −(Aᵢ D)[r,c] = −Σ_s Aᵢ[r,s] d_{sc}
                for s in 0..n {
                    bump(eq, s * n + c, &-ai.get(r, s));
                }
                // −Σₖ Aₖ[r,c] d_{ki}
                for (k, ak) in blocks.iter().enumerate() {
                    bump(eq, k * n + i, &-ak.get(r, c));
                }
            }
        }
    }
    sys
}

pub fn derivation_space(a: &StructureMatrix) -> DerivationSpace {
    let n = a.dim();
    let ns = derivation_system(a).null_space();
    let basis = (0..ns.rows())
        .map(|r| Matrix::from_vec(a.field(), n, n, ns.row(r).to_vec()).expect("n² entries"))
        .collect();
    DerivationSpace { n, basis }
}

/// `D A = A (D ⊗ I + I ⊗ D)`, checked directly in Kronecker form.
pub fn is_derivation(a: &StructureMatrix, d: &Matrix) -> Result<bool> {
    let i = Matrix::identity(a.field(), a.dim());
    let lhs = d.matmul(a.data())?;
    let rhs = a.data().matmul(&d.kron(&i)?.add(&i.kron(d)?)?)?;
    Ok(lhs == rhs)
}

/// `tr̄(A)·D = 0` and `tr̄(A°)·D = 0`: the necessary trace conditions every
/// derivation satisfies.
pub fn derivation_trace_check(a: &StructureMatrix, d: &Matrix) -> Result<bool> {
    if d.rows() != a.dim() || d.cols() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "expected {n}x{n}, got {}x{}",
            d.rows(),
            d.cols(),
            n = a.dim()
        )));
    }
    Ok(a.trbar().matmul(d)?.is_zero() && a.opposite().trbar().matmul(d)?.is_zero())
}
