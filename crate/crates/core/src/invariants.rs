//! Trace forms and the covariant matrix `P(A)`.
//!
//! `B(A) = (tr AᵢAⱼ)` and `B°(A) = (tr A°ᵢA°ⱼ)` transform as
//! `B ↦ (g⁻¹)ᵗ B g⁻¹` under a change of basis, so on the stratum `det B ≠ 0`
//! the matrix `M = B⁻¹B°` is conjugated, `M ↦ g M g⁻¹`. Stacking the trace
//! rows `tr̄(Mᵏ A)` for `k = 0..n-1` gives `P(A)` with `P(τ(g, A)) = P(A) g⁻¹`.

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::msc::StructureMatrix;

fn gram_of_traces(blocks: &[Matrix]) -> Matrix {
    let n = blocks.len();
    let field = blocks[0].field();
    let mut b = Matrix::zeros(field, n, n);
    for i in 0..n {
        for j in i..n {
            let t = blocks[i]
                .matmul(&blocks[j])
                .and_then(|m| m.trace())
                .expect("blocks are n x n");
            b.set(j, i, t.clone()).expect("in range");
            b.set(i, j, t).expect("in range");
        }
    }
    b
}

/// `B(A)`, the Gram matrix of the left trace form.
pub fn killing_left(a: &StructureMatrix) -> Matrix {
    gram_of_traces(&a.blocks())
}

/// `B°(A)`, the same form built from right multiplications.
pub fn killing_right(a: &StructureMatrix) -> Matrix {
    killing_left(&a.opposite())
}

/// `M = B(A)⁻¹ B°(A)`; refuses outside `det B ≠ 0`.
pub fn conjugating_matrix(a: &StructureMatrix) -> Result<Matrix> {
    let b = killing_left(a);
    let det_b = b.det()?;
    if det_b.is_zero() {
        return Err(Error::NotInA0 { det_b });
    }
    b.inverse()?.matmul(&killing_right(a))
}

fn p_from(a: &StructureMatrix, m: &Matrix) -> Result<Matrix> {
    let n = a.dim();
    let blocks = a.blocks();
    let mut power = Matrix::identity(a.field(), n);
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            power = power.matmul(m)?;
        }
        let row = blocks
            .iter()
            .map(|ai| power.matmul(ai)?.trace())
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Matrix::from_rows(a.field(), rows)
}

/// `P(A)`: row `k` is `tr̄(Mᵏ A) = (tr(Mᵏ A₁), …, tr(Mᵏ Aₙ))`, so row 0 is `tr̄(A)`.
pub fn p_matrix(a: &StructureMatrix) -> Result<Matrix> {
    p_from(a, &conjugating_matrix(a)?)
}

/// Everything the classification needs to know about one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub b: Matrix,
    pub b_op: Matrix,
    pub det_b: Scalar,
    /// `B⁻¹B°`, present iff `det_b ≠ 0`.
    pub m: Option<Matrix>,
    pub p: Option<Matrix>,
    pub det_p: Option<Scalar>,
    pub in_a0: bool,
    pub p_invertible: bool,
}

/// Full membership report; a degenerate trace form is an outcome here, not an error.
pub fn membership(a: &StructureMatrix) -> InvariantReport {
    let b = killing_left(a);
    let b_op = killing_right(a);
    let det_b = b.det().expect("square");
    let in_a0 = !det_b.is_zero();
    let (m, p, det_p) = if in_a0 {
        let m = b
            .inverse()
            .and_then(|inv| inv.matmul(&b_op))
            .expect("det B is nonzero");
        let p = p_from(a, &m).expect("shapes agree");
        let det_p = p.det().expect("square");
        (Some(m), Some(p), Some(det_p))
    } else {
        (None, None, None)
    };
    let p_invertible = det_p.as_ref().is_some_and(|d| !d.is_zero());
    InvariantReport {
        b,
        b_op,
        det_b,
        m,
        p,
        det_p,
        in_a0,
        p_invertible,
    }
}
