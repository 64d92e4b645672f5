//! Command-line front end for the `msc` library.
//!
//! [`run`] takes an argument vector and returns the exit status together with
//! the text for standard output and standard error, so the binary is a thin
//! shell around it. Reports are JSON objects whose scalars are exact tokens.
//!
//! Exit status: `0` success, `1` usage or input error, `2` the input lies
//! outside the domain of the requested procedure (the report names the
//! refusal).

#![allow(clippy::result_large_err)]

pub mod document;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use msc::canonical::{canonical_form, frame, is_isomorphic};
use msc::experiments::{density_estimate, density_exhaustive, witness_construct, FALLBACK_SEED};
use msc::morphisms::{automorphism_group, derivation_space, derivation_trace_check, AutomorphismGroup};
use msc::oracle::{automorphisms_bruteforce, enumerate_gl_over, orbit_equivalent_bruteforce};
use msc::{membership, Field, Matrix, Scalar, StructureMatrix};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::document::{emit, normalize, parse_msc, Parsed};

pub const TOOL: &str = "msc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Environment variable naming the field for documents without a `field` key.
pub const FIELD_ENV: &str = "MSC_FIELD";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{input}: {message}")]
    Parse { input: String, message: String },

    #[error("{input}: {location}: {error}")]
    Token {
        input: String,
        location: String,
        error: msc::Error,
    },

    #[error(transparent)]
    Library(#[from] msc::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) if e.is_domain_refusal() => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Io { .. } => "Io",
            CliError::Parse { .. } => "ParseError",
            CliError::Token { error, .. } => error.refusal_name(),
            CliError::Library(e) => e.refusal_name(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = TOOL, version = VERSION, about = "Exact classification of algebras given by structure constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Trace forms, P(A) and stratum membership.
    Member { file: PathBuf },
    /// Canonical orbit representative and the P(A) that produced it.
    Canon { file: PathBuf },
    /// Isomorphism test with certificate.
    Iso { a: PathBuf, b: PathBuf },
    /// Automorphism group on the invertible-P stratum.
    Aut { file: PathBuf },
    /// Basis of the derivation algebra.
    Der { file: PathBuf },
    /// Isomorphism by exhaustive search over GL(n, p).
    OracleIso { a: PathBuf, b: PathBuf },
    /// Automorphisms by exhaustive search over GL(n, p).
    OracleAut { file: PathBuf },
    /// Inductive construction of an algebra with invertible P.
    Witness {
        #[arg(long)]
        n: usize,
        /// `Q` or `GF(p)`; defaults to $MSC_FIELD, then `Q`.
        #[arg(long)]
        field: Option<String>,
    },
    /// Stratum counts over GF(p), sampled or exhaustive.
    Density {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, required_unless_present = "exhaustive")]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Count every algebra instead of sampling.
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
    },
    /// Re-emit a document in normal form.
    Normalize { file: PathBuf },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run with the default field taken from `$MSC_FIELD`.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_default_field(args, std::env::var(FIELD_ENV).ok().as_deref())
}

/// Run with an explicit default-field descriptor (`None` means `Q`).
pub fn run_with_default_field<I, T>(args: I, default_field: Option<&str>) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let ctx = match Context::new(default_field) {
        Ok(ctx) => ctx,
        Err(e) => return failure(&e, Map::new()),
    };
    match ctx.dispatch(cli.command) {
        Ok(report) => Output {
            code: 0,
            stdout: pretty(&Value::Object(report)),
            stderr: String::new(),
        },
        Err((e, header)) => failure(&e, header),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn failure(e: &CliError, mut header: Map<String, Value>) -> Output {
    let code = e.exit_code();
    if code == 2 {
        header.insert("status".into(), json!("refused"));
        header.insert("refusal".into(), json!(e.kind()));
        header.insert("message".into(), json!(e.to_string()));
        Output {
            code,
            stdout: pretty(&Value::Object(header)),
            stderr: format!("refused: {e}\n"),
        }
    } else {
        Output {
            code,
            stdout: String::new(),
            stderr: format!("error [{}]: {e}\n", e.kind()),
        }
    }
}

fn tokens(m: &Matrix) -> Value {
    json!(m.to_tokens())
}

fn scalar(s: &Scalar) -> Value {
    json!(s.to_string())
}

fn ratio(count: u64, total: u64) -> Value {
    let r = Field::rationals()
        .fraction(count as i64, total as i64)
        .expect("total is positive");
    scalar(&r)
}

fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!(TOOL));
    m.insert("version".into(), json!(VERSION));
    m.insert("command".into(), json!(command));
    m
}

fn describe(h: &mut Map<String, Value>, key: &str, p: &Parsed) {
    h.insert(
        key.into(),
        json!({ "label": p.label, "field": p.msc.field().to_string(), "n": p.msc.dim() }),
    );
}

type Failure = (CliError, Map<String, Value>);
type Report = Result<Map<String, Value>, Failure>;

/// Attach a header to an error so refusals still carry provenance.
trait WithHeader<T> {
    fn with(self, h: &Map<String, Value>) -> Result<T, Failure>;
}

impl<T, E: Into<CliError>> WithHeader<T> for Result<T, E> {
    fn with(self, h: &Map<String, Value>) -> Result<T, Failure> {
        self.map_err(|e| (e.into(), h.clone()))
    }
}

struct Context {
    default_field: Field,
}

impl Context {
    fn new(default_field: Option<&str>) -> Result<Self, CliError> {
        let default_field = match default_field {
            Some(s) => s
                .parse()
                .map_err(|e| CliError::Usage(format!("${FIELD_ENV}: {e}")))?,
            None => Field::rationals(),
        };
        Ok(Context { default_field })
    }

    fn field_arg(&self, arg: Option<String>) -> Result<Field, CliError> {
        match arg {
            Some(s) => s.parse().map_err(|e| CliError::Usage(format!("--field: {e}"))),
            None => Ok(self.default_field),
        }
    }

    fn load(&self, path: &PathBuf) -> Result<Parsed, CliError> {
        let name = path.display().to_string();
        let text = if name == "-" {
            std::io::read_to_string(std::io::stdin())
        } else {
            std::fs::read_to_string(path)
        }
        .map_err(|source| CliError::Io { path: name.clone(), source })?;
        parse_msc(&text, &name, self.default_field)
    }

    fn load_one(&self, command: &str, path: &PathBuf) -> Result<(Parsed, Map<String, Value>), Failure> {
        let mut h = header(command);
        let p = self.load(path).with(&h)?;
        describe(&mut h, "input", &p);
        Ok((p, h))
    }

    fn load_two(
        &self,
        command: &str,
        a: &PathBuf,
        b: &PathBuf,
    ) -> Result<(Parsed, Parsed, Map<String, Value>), Failure> {
        let mut h = header(command);
        let pa = self.load(a).with(&h)?;
        let pb = self.load(b).with(&h)?;
        describe(&mut h, "input_a", &pa);
        describe(&mut h, "input_b", &pb);
        if pa.msc.field() != pb.msc.field() {
            return Err((msc::Error::MixedFields(pa.msc.field(), pb.msc.field()).into(), h));
        }
        if pa.msc.dim() != pb.msc.dim() {
            return Err((
                msc::Error::DimensionMismatch(format!("dimensions {} and {}", pa.msc.dim(), pb.msc.dim())).into(),
                h,
            ));
        }
        Ok((pa, pb, h))
    }

    fn dispatch(&self, command: Command) -> Report {
        match command {
            Command::Member { file } => self.member(&file),
            Command::Canon { file } => self.canon(&file),
            Command::Iso { a, b } => self.iso(&a, &b),
            Command::Aut { file } => self.aut(&file),
            Command::Der { file } => self.der(&file),
            Command::OracleIso { a, b } => self.oracle_iso(&a, &b),
            Command::OracleAut { file } => self.oracle_aut(&file),
            Command::Witness { n, field } => self.witness(n, field),
            Command::Density { n, p, samples, seed, exhaustive } => density(n, p, samples, seed, exhaustive),
            Command::Normalize { file } => self.normalize(&file),
        }
    }

    fn member(&self, file: &PathBuf) -> Report {
        let (p, mut h) = self.load_one("member", file)?;
        let r = membership(&p.msc);
        h.insert("B".into(), tokens(&r.b));
        h.insert("B_op".into(), tokens(&r.b_op));
        h.insert("det_B".into(), scalar(&r.det_b));
        h.insert("in_a0".into(), json!(r.in_a0));
        if !r.in_a0 {
            return Err((msc::Error::NotInA0 { det_b: r.det_b }.into(), h));
        }
        h.insert("M".into(), tokens(r.m.as_ref().expect("in A0")));
        h.insert("P".into(), tokens(r.p.as_ref().expect("in A0")));
        h.insert("det_P".into(), scalar(r.det_p.as_ref().expect("in A0")));
        h.insert("p_invertible".into(), json!(r.p_invertible));
        h.insert("status".into(), json!("ok"));
        Ok(h)
    }

    fn canon(&self, file: &PathBuf) -> Report {
        let (p, mut h) = self.load_one("canon", file)?;
        let c = canonical_form(&p.msc).with(&h)?;
        h.insert("P".into(), tokens(&c.source_p));
        h.insert("canonical".into(), json!(emit(&c.msc, p.label.as_deref())));
        h.insert("status".into(), json!("ok"));
        Ok(h)
    }

    fn iso(&self, a: &PathBuf, b: &PathBuf) -> Report {
        let (pa, pb, mut h) = self.load_two("iso", a, b)?;
        let d = is_isomorphic(&pa.msc, &pb.msc).with(&h)?;
        h.insert("answer".into(), json!(if d.isomorphic { "YES" } else { "NO" }));
        h.insert(
            "certificate".into(),
            d.certificate.as_ref().map_or(Value::Null, |c| tokens(&c.g)),
        );
        h.insert("canonical_a".into(), tokens(d.canonical_a.msc.data()));
        h.insert("canonical_b".into(), tokens(d.canonical_b.msc.data()));
        h.insert("status".into(), json!("ok"));
        Ok(h)
    }

    fn aut(&self, file: &PathBuf) -> Report {
        let (p, mut h) = self.load_one("aut", file)?;
        match automorphism_group(&p.msc) {
            AutomorphismGroup::Trivial { identity, proof } => {
                h.insert("order".into(), json!(1));
                h.insert("elements".into(), json!([tokens(&identity)]));
                h.insert("proof".into(), json!(proof));
                h.insert("status".into(), json!("ok"));
                Ok(h)
            }
            AutomorphismGroup::Unknown => {
                let e = frame(&p.msc).expect_err("group is only unknown off the stratum");
                h.insert("hint".into(), json!("oracle-aut enumerates the group over small prime fields"));
                Err((e.into(), h))
            }
        }
    }

    fn der(&self, file: &PathBuf) -> Report {
        let (p, mut h) = self.load_one("der", file)?;
        let a = &p.msc;
        let space = derivation_space(a);
        let checks = space
            .basis
            .iter()
            .map(|d| derivation_trace_check(a, d))
            .collect::<Result<Vec<_>, _>>()
            .with(&h)?;
        h.insert("dimension".into(), json!(space.dim()));
        h.insert("basis".into(), Value::Array(space.basis.iter().map(tokens).collect()));
        h.insert("trbar".into(), tokens(&a.trbar()));
        h.insert("trbar_op".into(), tokens(&a.opposite().trbar()));
        h.insert("trace_conditions_hold".into(), json!(checks.iter().all(|&c| c)));
        h.insert("status".into(), json!("ok"));
        Ok(h)
    }

    fn oracle_iso(&self, a: &PathBuf, b: &PathBuf) -> Report {
        let (pa, pb, mut h) = self.load_two("oracle-iso", a, b)?;
        let gl = enumerate_gl_over(pa.msc.dim(), pa.msc.field()).with(&h)?;
        let found = orbit_equivalent_bruteforce(&pa.msc, &pb.msc).with(&h)?;
        h.insert("group_order".into(), json!(gl.order().to_string()));
        h.insert("answer".into(), json!(if found.is_some() { "YES" } else { "NO" }));
        h.insert("certificate".into(), found.as_ref().map_or(Value::Null, |c| tokens(&c.g)));
        h.insert("status".into(), json!("ok"));
        Ok(h)
    }

    fn oracle_aut(&self, file: &PathBuf) -> Report {
        let (p, mut h) = self.load_one("oracle-aut", file)?;
        let gl = enumerate_gl_over(p.msc.dim(), p.msc.field()).with(&h)?;
        let auts = automorphisms_bruteforce(&p.msc).with(&h)?;
        h.insert("group_order".into(), json!(gl.order().to_string()));
        h.insert("order".into(), json!(auts.len()));
        h.insert("elements".into(), Value::Array(auts.iter().map(tokens).collect()));
        h.insert("status".into(), json!("ok"));
        Ok(h)
    }

    fn witness(&self, n: usize, field: Option<String>) -> Report {
        let mut h = header("witness");
        let field = self.field_arg(field).with(&h)?;
        h.insert("n".into(), json!(n));
        h.insert("field".into(), json!(field.to_string()));
        h.insert("seed".into(), json!(FALLBACK_SEED));
        let (a, trace) = witness_construct(n, field).with(&h)?;
        let r = membership(&a);
        let steps = trace
            .steps
            .iter()
            .map(|s| {
                json!({
                    "dim": s.dim,
                    "x": tokens(&s.x),
                    "trace_x_squared": scalar(&s.trace_x_squared),
                    "t": scalar(&s.t),
                    "det_B": scalar(&s.det_b),
                    "det_P": scalar(&s.det_p),
                })
            })
            .collect::<Vec<_>>();
        h.insert("base".into(), tokens(trace.base.data()));
        h.insert("steps".into(), Value::Array(steps));
        h.insert("det_B".into(), scalar(&r.det_b));
        h.insert("det_P".into(), r.det_p.as_ref().map_or(Value::Null, scalar));
        let label = format!("witness-{n}");
        h.insert("msc".into(), json!(emit(&a, Some(&label))));
        h.insert("status".into(), json!("ok"));
        Ok(h)
    }

    fn normalize(&self, file: &PathBuf) -> Report {
        let name = file.display().to_string();
        let h = header("normalize");
        let text = std::fs::read_to_string(file)
            .map_err(|source| CliError::Io { path: name.clone(), source })
            .with(&h)?;
        let doc = normalize(&text, &name, self.default_field).with(&h)?;
        match serde_json::to_value(doc).expect("serializable") {
            Value::Object(m) => Ok(m),
            _ => unreachable!("documents serialize to objects"),
        }
    }
}

fn density(n: usize, p: u64, samples: Option<u64>, seed: u64, exhaustive: bool) -> Report {
    let mut h = header("density");
    let est = if exhaustive {
        density_exhaustive(n, p)
    } else {
        density_estimate(n, p, samples.expect("required by the parser"), seed)
    }
    .map_err(|e| match e {
        msc::Error::InvalidArgument(m) => CliError::Usage(m),
        msc::Error::NotPrime(_) => CliError::Usage(e.to_string()),
        other => other.into(),
    })
    .with(&h)?;
    h.insert("n".into(), json!(est.n));
    h.insert("p".into(), json!(est.p));
    h.insert("field".into(), json!(format!("GF({})", est.p)));
    h.insert("seed".into(), json!(est.seed));
    h.insert("exhaustive".into(), json!(est.exhaustive));
    h.insert("samples".into(), json!(est.samples));
    h.insert("count_in_a0".into(), json!(est.count_in_a0));
    h.insert("count_p_invertible".into(), json!(est.count_p_invertible));
    h.insert("fraction_in_a0".into(), ratio(est.count_in_a0, est.samples));
    h.insert("fraction_p_invertible".into(), ratio(est.count_p_invertible, est.samples));
    h.insert("status".into(), json!("ok"));
    Ok(h)
}

/// Exposed for tests that build inputs programmatically.
pub fn document_for(msc: &StructureMatrix, label: Option<&str>) -> String {
    pretty(&serde_json::to_value(emit(msc, label)).expect("serializable"))
}
