//! Exact classification of finite-dimensional algebras from their matrices
//! of structure constants.
//!
//! An algebra on `Fⁿ` is stored as the `n × n²` matrix `A = (A₁|…|Aₙ)`
//! ([`StructureMatrix`]); a change of basis `g` acts by
//! `τ(g, A) = g·A·(g⁻¹ ⊗ g⁻¹)`. On the stratum where the trace-form matrix
//! `B(A)` and the covariant matrix `P(A)` are both invertible, the algebra
//! `τ(P(A), A)` is a canonical orbit representative, which gives an exact
//! isomorphism test with explicit certificates ([`canonical`]).
//!
//! All arithmetic is exact, over ℚ or a prime field GF(p) ([`field`]).

pub mod canonical;
pub mod error;
pub mod experiments;
pub mod field;
pub mod invariants;
pub mod matrix;
pub mod morphisms;
pub mod msc;
pub mod oracle;
pub mod rng;

pub use canonical::{canonical_form, is_isomorphic, normal_representative, CanonicalForm, IsoDecision, OrbitCertificate};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use invariants::{killing_left, killing_right, membership, p_matrix, InvariantReport};
pub use matrix::Matrix;
pub use msc::{RowBlock, StructureMatrix};
