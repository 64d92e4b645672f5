//! Explicit algebras with invertible `P`, and sampled stratum densities.
//!
//! The witness is built by induction on the dimension. From an
//! `(n-1)`-dimensional algebra `A″` with `det P(A″) ≠ 0` we form
//!
//! ```text
//! A₁ = E₁₁,    Aᵢ = [ 0    0   ]   (i = 2..n),
//!                   [ t·xᵢ A″ᵢ ]
//! ```
//!
//! where the columns `x₂..xₙ` of `X″` satisfy `tr(X″ A″°ᵢ) = 0` for all `i` and
//! `tr(X″²) ≠ 0`. Then `B(A) = diag(1, B(A″))`,
//! `B°(A) = diag(1 + t² tr(X″²), B°(A″))`, and `det P(A)` is a nonzero
//! polynomial of degree at most `2(n-1)` in `t`, so one of `2n-1` distinct
//! values of `t` works.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::invariants::{killing_left, killing_right, membership};
use crate::matrix::Matrix;
use crate::msc::StructureMatrix;
use crate::oracle::{random_matrix, random_msc_from};
use crate::rng::{derive_seed, XorShift64Star};

/// Coefficients tried, in order, when combining null-space basis vectors.
pub const COEFFICIENTS: [i64; 4] = [0, 1, -1, 2];
/// Cap on deterministic coefficient combinations before random sampling.
pub const MAX_COMBINATIONS: usize = 4096;
/// Seed and count for the random fallback over the null space.
pub const FALLBACK_SEED: u64 = 0x5eed;
pub const FALLBACK_SAMPLES: usize = 256;

/// One induction step from dimension `dim - 1` to `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessStep {
    pub dim: usize,
    /// `X″` before scaling by `t`; column `c` feeds block `c + 1`.
    pub x: Matrix,
    pub trace_x_squared: Scalar,
    pub t: Scalar,
    pub det_b: Scalar,
    pub det_p: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTrace {
    pub n: usize,
    pub base: StructureMatrix,
    pub steps: Vec<WitnessStep>,
}

/// The two-dimensional seed: `A = [[0,0,1,-1],[1,0,1,0]]`, with `det B = -1`
/// and `det P = 1` in every field.
pub fn base_algebra(field: Field) -> StructureMatrix {
    StructureMatrix::from_ints(field, &[&[0, 0, 1, -1], &[1, 0, 1, 0]]).expect("2 x 4")
}

fn block_diag(field: Field, a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.rows() + b.rows();
    let mut out = Matrix::zeros(field, n, n);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            out.set(r, c, a.get(r, c).clone()).expect("in range");
        }
    }
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            out.set(a.rows() + r, a.cols() + c, b.get(r, c).clone()).expect("in range");
        }
    }
    out
}

/// Embed `prev` one dimension up with `A₁ = E₁₁` and `Aᵢ = [[0,0],[xᵢ, A″ᵢ]]`,
/// where `xᵢ` is column `i - 2` of `x` (one-based `i`).
pub fn embed(prev: &StructureMatrix, x: &Matrix) -> Result<StructureMatrix> {
    let m = prev.dim();
    let n = m + 1;
    let field = prev.field();
    if x.rows() != m || x.cols() != m {
        return Err(Error::DimensionMismatch(format!("X must be {m}x{m}")));
    }
    let mut blocks = Vec::with_capacity(n);
    let mut first = Matrix::zeros(field, n, n);
    first.set(0, 0, field.one())?;
    blocks.push(first);
    for (c, inner) in prev.blocks().iter().enumerate() {
        let mut b = Matrix::zeros(field, n, n);
        for r in 0..m {
            b.set(r + 1, 0, x.get(r, c).clone())?;
            for s in 0..m {
                b.set(r + 1, s + 1, inner.get(r, s).clone())?;
            }
        }
        blocks.push(b);
    }
    StructureMatrix::from_blocks(field, &blocks)
}

/// Row `k` holds the coefficients of `tr(X·A°ₖ)` in the entries of `X` (row-major).
fn orthogonality_system(prev: &StructureMatrix) -> Matrix {
    let m = prev.dim();
    let op = prev.opposite();
    let mut sys = Matrix::zeros(prev.field(), m, m * m);
    for (k, ok) in op.blocks().iter().enumerate() {
        for r in 0..m {
            for s in 0..m {
                sys.set(k, r * m + s, ok.get(s, r).clone()).expect("in range");
            }
        }
    }
    sys
}

fn combine(field: Field, m: usize, basis: &Matrix, coeffs: &[Scalar]) -> Matrix {
    let len = basis.cols();
    let mut v = vec![field.zero(); len];
    for (b, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (j, e) in basis.row(b).iter().enumerate() {
            v[j] = &v[j] + &(c * e);
        }
    }
    Matrix::from_vec(field, m, m, v).expect("square")
}

fn trace_sq(x: &Matrix) -> Scalar {
    x.matmul(x).and_then(|s| s.trace()).expect("square")
}

/// A matrix in the null space of the orthogonality constraints with `tr(X²) ≠ 0`.
fn choose_x(prev: &StructureMatrix) -> Result<Matrix> {
    let field = prev.field();
    let basis = orthogonality_system(prev).null_space();
    let d = basis.rows();
    if d == 0 {
        return Err(Error::ConstructionFailed(format!(
            "no X satisfies the orthogonality constraints at dimension {}",
            prev.dim() + 1
        )));
    }
    let coeffs: Vec<Scalar> = COEFFICIENTS.iter().map(|&c| field.from_i64(c)).collect();
    // odometer over COEFFICIENTS^d, least significant digit last
    let mut digits = vec![0usize; d];
    for _ in 0..MAX_COMBINATIONS {
        let mut i = d;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < coeffs.len() {
                break;
            }
            digits[i] = 0;
        }
        if digits.iter().all(|&g| g == 0) {
            break;
        }
        let pick: Vec<Scalar> = digits.iter().map(|&g| coeffs[g].clone()).collect();
        let x = combine(field, prev.dim(), &basis, &pick);
        if !trace_sq(&x).is_zero() {
            return Ok(x);
        }
    }
    let mut rng = XorShift64Star::new(FALLBACK_SEED);
    for _ in 0..FALLBACK_SAMPLES {
        let pick = random_matrix(&mut rng, field, 1, d, 8);
        let x = combine(field, prev.dim(), &basis, pick.entries());
        if !trace_sq(&x).is_zero() {
            return Ok(x);
        }
    }
    Err(Error::ConstructionFailed(format!(
        "tr(X²) vanished on every sampled X at dimension {}",
        prev.dim() + 1
    )))
}

fn step(prev: &StructureMatrix) -> Result<(StructureMatrix, WitnessStep)> {
    let field = prev.field();
    let n = prev.dim() + 1;
    let x = choose_x(prev)?;
    let tr_x2 = trace_sq(&x);
    let b_prev = killing_left(prev);
    let b_op_prev = killing_right(prev);
    let one = Matrix::identity(field, 1);

    for t in 1..=(2 * n as i64 - 1) {
        let t = field.from_i64(t);
        let a = embed(prev, &x.scale(&t)?)?;
        let report = membership(&a);

        if report.b != block_diag(field, &one, &b_prev) {
            return Err(Error::ConstructionFailed(format!("B(A) != diag(1, B(A'')) at dimension {n}")));
        }
        let corner = &field.one() + &(&(&t * &t) * &tr_x2);
        let corner = Matrix::diag(field, &[corner])?;
        if report.b_op != block_diag(field, &corner, &b_op_prev) {
            return Err(Error::ConstructionFailed(format!(
                "B°(A) != diag(1 + t² tr(X²), B°(A'')) at dimension {n}"
            )));
        }

        if report.p_invertible {
            let det_p = report.det_p.expect("in A0");
            return Ok((
                a,
                WitnessStep {
                    dim: n,
                    x,
                    trace_x_squared: tr_x2,
                    t,
                    det_b: report.det_b,
                    det_p,
                },
            ));
        }
    }
    Err(Error::ConstructionFailed(format!(
        "det P(A) vanished for every t in 1..={} at dimension {n}",
        2 * n - 1
    )))
}

/// An `n`-dimensional algebra with `det B ≠ 0` and `det P ≠ 0`, plus the record
/// of every choice made. Requires `|F| > 2(n-1)`.
pub fn witness_construct(n: usize, field: Field) -> Result<(StructureMatrix, WitnessTrace)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("witness needs n >= 2, got {n}")));
    }
    let needed = 2 * (n - 1);
    if let Some(p) = field.modulus() {
        if (p as usize) <= needed {
            return Err(Error::FieldTooSmall { field, n, needed });
        }
    }
    let base = base_algebra(field);
    let mut current = base.clone();
    let mut steps = Vec::with_capacity(n - 2);
    while current.dim() < n {
        let (next, record) = step(&current)?;
        steps.push(record);
        current = next;
    }
    Ok((current, WitnessTrace { n, base, steps }))
}

/// Stratum counts over uniformly drawn (or all) algebras of GF(p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityEstimate {
    pub n: usize,
    pub p: u32,
    pub samples: u64,
    pub count_in_a0: u64,
    pub count_p_invertible: u64,
    /// `None` in exhaustive mode.
    pub seed: Option<u64>,
    pub exhaustive: bool,
}

impl DensityEstimate {
    pub fn fraction_in_a0(&self) -> f64 {
        self.count_in_a0 as f64 / self.samples as f64
    }

    pub fn fraction_p_invertible(&self) -> f64 {
        self.count_p_invertible as f64 / self.samples as f64
    }

    /// Binomial standard error of [`fraction_in_a0`](Self::fraction_in_a0);
    /// zero for an exhaustive count.
    pub fn std_error_in_a0(&self) -> f64 {
        if self.exhaustive {
            return 0.0;
        }
        let f = self.fraction_in_a0();
        (f * (1.0 - f) / self.samples as f64).sqrt()
    }
}

/// Samples per independently seeded chunk.
pub const CHUNK: u64 = 1024;
/// Exhaustive mode is allowed while `p^{n³}` stays at or below this.
pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000;

fn classify(a: &StructureMatrix) -> (u64, u64) {
    let r = membership(a);
    (r.in_a0 as u64, r.p_invertible as u64)
}

fn sum_pairs(a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
    (a.0 + b.0, a.1 + b.1)
}

/// Monte-Carlo counts. Chunk `c` draws from the sub-stream
/// `derive_seed(seed, c)`, so the result is independent of thread count.
pub fn density_estimate(n: usize, p: u64, samples: u64, seed: u64) -> Result<DensityEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let field = Field::prime(p)?;
    let chunks = samples.div_ceil(CHUNK);
    let (count_in_a0, count_p_invertible) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = XorShift64Star::new(derive_seed(seed, c));
            let len = CHUNK.min(samples - c * CHUNK);
            (0..len)
                .map(|_| classify(&random_msc_from(&mut rng, n, field, 1)))
                .fold((0, 0), sum_pairs)
        })
        .reduce(|| (0, 0), sum_pairs);
    Ok(DensityEstimate {
        n,
        p: p as u32,
        samples,
        count_in_a0,
        count_p_invertible,
        seed: Some(seed),
        exhaustive: false,
    })
}

/// Exact counts over all `p^{n³}` algebras.
pub fn density_exhaustive(n: usize, p: u64) -> Result<DensityEstimate> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let field = Field::prime(p)?;
    let len = n * n * n;
    let total = (p as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if total > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge(format!(
            "{p}^{len} algebras exceed the exhaustive limit {EXHAUSTIVE_LIMIT}"
        )));
    }
    let total = total as u64;
    let (count_in_a0, count_p_invertible) = (0..total)
        .into_par_iter()
        .map(|code| {
            let mut c = code;
            let mut entries = vec![field.zero(); len];
            for slot in entries.iter_mut().rev() {
                *slot = field.from_i64((c % p) as i64);
                c /= p;
            }
            let a = StructureMatrix::new(Matrix::from_vec(field, n, n * n, entries).expect("sized"))
                .expect("n x n²");
            classify(&a)
        })
        .reduce(|| (0, 0), sum_pairs);
    Ok(DensityEstimate {
        n,
        p: p as u32,
        samples: total,
        count_in_a0,
        count_p_invertible,
        seed: None,
        exhaustive: true,
    })
}

/// Whether the `det B ≠ 0` fractions of `estimates` (ordered by increasing `p`)
/// never drop by more than `sigmas` combined standard errors.
pub fn nondecreasing_within(estimates: &[DensityEstimate], sigmas: f64) -> bool {
    estimates.windows(2).all(|w| {
        let (lo, hi) = (&w[0], &w[1]);
        let slack = sigmas * (lo.std_error_in_a0().powi(2) + hi.std_error_in_a0().powi(2)).sqrt();
        lo.fraction_in_a0() <= hi.fraction_in_a0() + slack
    })
}
