//! Canonical forms and isomorphism certificates.
//!
//! On the stratum where both `B(A)` and `P(A)` are invertible, `P` is a
//! moving frame: `P(τ(g, A)) = P(A) g⁻¹`. Hence `τ(P(A), A)` is constant on
//! orbits, has `P = I`, and two algebras are isomorphic exactly when these
//! normal forms coincide entry by entry.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::invariants::{membership, p_matrix};
use crate::matrix::Matrix;
use crate::msc::StructureMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// `P(A)·A·(P(A)⁻¹)^⊗2`.
    pub msc: StructureMatrix,
    /// The `P(A)` used to produce it.
    pub source_p: Matrix,
}

/// An invertible `g` with `τ(g, B) = A` for the pair it was issued for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCertificate {
    pub g: Matrix,
}

impl OrbitCertificate {
    /// Independent check: `τ(g, b) = a`.
    pub fn verify(&self, a: &StructureMatrix, b: &StructureMatrix) -> bool {
        b.act(&self.g).is_ok_and(|moved| moved == *a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoDecision {
    pub isomorphic: bool,
    pub certificate: Option<OrbitCertificate>,
    pub canonical_a: CanonicalForm,
    pub canonical_b: CanonicalForm,
}

/// `P(A)` for an algebra on the invertible-`P` stratum, or the refusal naming
/// the determinant that vanished.
pub fn frame(a: &StructureMatrix) -> Result<Matrix> {
    let report = membership(a);
    if !report.in_a0 {
        return Err(Error::NotInA0 { det_b: report.det_b });
    }
    if !report.p_invertible {
        return Err(Error::PSingular {
            det_p: report.det_p.expect("present on A0"),
        });
    }
    Ok(report.p.expect("present on A0"))
}

pub fn canonical_form(a: &StructureMatrix) -> Result<CanonicalForm> {
    let p = frame(a)?;
    let msc = a.act(&p)?;
    let fixed = p_matrix(&msc)?;
    assert!(fixed.is_identity(), "P of a canonical form must be I, got {fixed}");
    Ok(CanonicalForm { msc, source_p: p })
}

/// The orbit label: the unique algebra in the orbit of `a` with `P = I`.
pub fn normal_representative(a: &StructureMatrix) -> Result<StructureMatrix> {
    canonical_form(a).map(|c| c.msc)
}

/// Canonicalise many algebras in parallel; output order matches input order.
pub fn canonical_forms(algebras: &[StructureMatrix]) -> Vec<Result<CanonicalForm>> {
    algebras.par_iter().map(canonical_form).collect()
}

/// Decide whether `a ≅ b`. On a positive answer the certificate
/// `g = P(a)⁻¹ P(b)` satisfies `τ(g, b) = a` and has been checked.
pub fn is_isomorphic(a: &StructureMatrix, b: &StructureMatrix) -> Result<IsoDecision> {
    if a.field() != b.field() {
        return Err(Error::MixedFields(a.field(), b.field()));
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let canonical_a = canonical_form(a)?;
    let canonical_b = canonical_form(b)?;
    let isomorphic = canonical_a.msc == canonical_b.msc;
    let certificate = if isomorphic {
        let g = canonical_a.source_p.inverse()?.matmul(&canonical_b.source_p)?;
        let cert = OrbitCertificate { g };
        assert!(cert.verify(a, b), "certificate failed to verify");
        Some(cert)
    } else {
        None
    };
    Ok(IsoDecision {
        isomorphic,
        certificate,
        canonical_a,
        canonical_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn q() -> Field {
        Field::rationals()
    }

    fn seed_algebra(f: Field) -> StructureMatrix {
        StructureMatrix::from_ints(f, &[&[0, 0, 1, -1], &[1, 0, 1, 0]]).unwrap()
    }

    #[test]
    fn one_dimensional_canonical_form_is_one() {
        for v in [2, 5, -7] {
            let a = StructureMatrix::from_ints(q(), &[&[v]]).unwrap();
            assert_eq!(normal_representative(&a).unwrap(), StructureMatrix::from_ints(q(), &[&[1]]).unwrap());
        }
        let f5 = Field::prime(5).unwrap();
        let a = StructureMatrix::from_ints(f5, &[&[3]]).unwrap();
        assert_eq!(normal_representative(&a).unwrap(), StructureMatrix::from_ints(f5, &[&[1]]).unwrap());
    }

    #[test]
    fn seed_algebra_canonical_form() {
        let a = seed_algebra(q());
        let c = canonical_form(&a).unwrap();
        assert_eq!(c.source_p, Matrix::from_ints(q(), &[&[0, 1], &[-1, 6]]).unwrap());
        // frozen from an independent fraction-arithmetic evaluation of P·A·(P⁻¹⊗P⁻¹)
        let expected = StructureMatrix::from_ints(q(), &[&[42, -7, -6, 1], &[247, -41, -36, 6]]).unwrap();
        assert_eq!(c.msc, expected);
        assert!(p_matrix(&c.msc).unwrap().is_identity());
        assert_eq!(canonical_form(&c.msc).unwrap().msc, c.msc);
    }

    #[test]
    fn reduction_commutes_with_canonicalisation() {
        let f3 = Field::prime(3).unwrap();
        let over_q = normal_representative(&seed_algebra(q())).unwrap();
        let over_f3 = normal_representative(&seed_algebra(f3)).unwrap();
        assert_eq!(over_q.reduce_to(f3).unwrap(), over_f3);
    }

    #[test]
    fn isomorphism_with_certificates() {
        let a = seed_algebra(q());
        let d = is_isomorphic(&a, &a).unwrap();
        assert!(d.isomorphic);
        assert!(d.certificate.unwrap().g.is_identity());

        let g = Matrix::from_ints(q(), &[&[2, 1], &[-1, 3]]).unwrap();
        let b = a.act(&g).unwrap();
        let d = is_isomorphic(&a, &b).unwrap();
        assert!(d.isomorphic);
        let cert = d.certificate.unwrap();
        assert!(cert.verify(&a, &b));
        // Aut(A) is trivial, so the certificate must undo g
        assert_eq!(cert.g, g.inverse().unwrap());

        let two = StructureMatrix::from_ints(q(), &[&[2]]).unwrap();
        let five = StructureMatrix::from_ints(q(), &[&[5]]).unwrap();
        assert!(is_isomorphic(&two, &five).unwrap().isomorphic);
    }

    #[test]
    fn refusals() {
        let z = StructureMatrix::zero(q(), 2);
        assert!(matches!(canonical_form(&z), Err(Error::NotInA0 { .. })));
        // commutative algebra e1e1 = e1, e2e2 = e2: B = I but tr̄(MᵏA) rows coincide
        let idem = StructureMatrix::from_ints(q(), &[&[1, 0, 0, 0], &[0, 0, 0, 1]]).unwrap();
        assert!(matches!(canonical_form(&idem), Err(Error::PSingular { .. })));
        let a = seed_algebra(q());
        let f5 = Field::prime(5).unwrap();
        assert!(matches!(is_isomorphic(&a, &seed_algebra(f5)), Err(Error::MixedFields(..))));
        let one = StructureMatrix::from_ints(q(), &[&[1]]).unwrap();
        assert!(matches!(is_isomorphic(&a, &one), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn batch_matches_single() {
        let a = seed_algebra(q());
        let items = vec![a.clone(), StructureMatrix::zero(q(), 2), a.act(&Matrix::from_ints(q(), &[&[1, 1], &[0, 1]]).unwrap()).unwrap()];
        let out = canonical_forms(&items);
        assert_eq!(out[0].as_ref().unwrap(), &canonical_form(&a).unwrap());
        assert!(out[1].is_err());
        assert_eq!(out[2].as_ref().unwrap().msc, out[0].as_ref().unwrap().msc);
    }
}
