//! Command-line front end.
//!
//! Every invocation writes exactly one JSON document to standard output.
//! Exit codes: 0 success (including "not normal" answers), 2 malformed input,
//! 3 theorem violation or route disagreement, 64 usage error.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::classify::{self, ClassificationResult, ProofTrace};
use crate::error::{Error, Result};
use crate::genlab::{self, EnumRequest, GenKind, GenRequest, Sample};
use crate::normality;
use crate::polyid;
use crate::scalar::{parse_fraction, ExactComplex, Mode, Scalar, ScalarPolicy};
use crate::toeplitz::{commutator_norm, ToeplitzSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable overriding the default relative tolerance.
pub const EPS_ENV: &str = "TOEPNORM_EPS";

#[derive(Debug, Parser)]
#[command(
    name = "toepnorm",
    version,
    about = "Normality and classification of Toeplitz matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct PolicyArgs {
    /// Comparison mode; defaults to the encoding of the input.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Relative tolerance for approximate comparisons.
    #[arg(long)]
    eps: Option<f64>,
    /// Absolute tolerance floor for approximate comparisons.
    #[arg(long)]
    eps_floor: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Direct,
    Proof,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "8")]
    Eight,
    #[value(name = "9")]
    Nine,
    #[value(name = "14")]
    Fourteen,
    #[value(name = "16")]
    Sixteen,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ValueSet {
    /// Gaussian integers with components in {-1, 0, 1}.
    Gauss1,
    /// Integers in {-1, 0, 1}.
    Int1,
    /// Integers in {-2, ..., 2}.
    Int2,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the element-wise normality test and the commutator oracle.
    Check {
        /// Spec JSON file; standard input when absent or `-`.
        input: Option<PathBuf>,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Classify a spec as type I / type II (and real labels for real input).
    Classify {
        input: Option<PathBuf>,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long, value_enum, default_value = "direct")]
        route: Route,
    },
    /// Check the polynomial identities behind the classification.
    VerifyIdentities {
        input: Option<PathBuf>,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
        /// Seed for the sampled (x, y) pairs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a spec of the requested kind.
    Generate {
        #[arg(value_parser = parse_kind)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Unit witness as `re,im`; fractions with --exact.
        #[arg(long, allow_hyphen_values = true)]
        witness: Option<String>,
        #[arg(long)]
        exact: bool,
        /// Bound on each component of the drawn entries.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Exhaustively verify every spec over a small value set.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "gauss1")]
        values: ValueSet,
        /// Real enumeration with the four-label classifier.
        #[arg(long)]
        real: bool,
        #[arg(long, default_value_t = genlab::DEFAULT_BUDGET)]
        budget: u64,
        /// Skip the constructive-route cross-check.
        #[arg(long)]
        no_routes: bool,
    },
    /// Time the element-wise test against the dense oracle.
    Bench {
        /// Orders to time, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repeat: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn parse_kind(s: &str) -> std::result::Result<GenKind, String> {
    s.parse::<GenKind>().map_err(|e| e.to_string())
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or(Value::Null)
    }
}

/// What a command produced before it is rendered.
struct Outcome {
    code: i32,
    body: Value,
    summary: String,
}

impl Outcome {
    fn ok(body: Value, summary: impl Into<String>) -> Self {
        Self {
            code: EXIT_OK,
            body,
            summary: summary.into(),
        }
    }
}

/// Runs one invocation. `args` includes the program name. `eps_env` is the
/// value of [`EPS_ENV`], if set. The human summary goes to `stderr` only when
/// `tty` is set.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, eps_env: Option<&str>, tty: bool) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            return CliOutput {
                code,
                stdout: String::new(),
                stderr: e.render().to_string(),
            };
        }
    };
    match dispatch(cli.command, stdin, eps_env) {
        Ok(outcome) => CliOutput {
            code: outcome.code,
            stdout: render(&outcome.body),
            stderr: if tty {
                format!("{}\n", outcome.summary)
            } else {
                String::new()
            },
        },
        Err(e) => {
            let (code, kind) = match &e {
                Error::Malformed(_) => (EXIT_MALFORMED, "malformed_input"),
                Error::TheoremViolation(_) => (EXIT_VIOLATION, "theorem_violation"),
                Error::Contract(_) | Error::BudgetExceeded { .. } => (EXIT_USAGE, "usage"),
            };
            let mut body = json!({ "error": kind, "message": e.to_string() });
            if let Error::BudgetExceeded { required, budget } = &e {
                body["required"] = json!(required.to_string());
                body["budget"] = json!(budget);
            }
            CliOutput {
                code,
                stdout: render(&body),
                stderr: format!("toepnorm: {e}\n"),
            }
        }
    }
}

fn render(body: &Value) -> String {
    let mut s = serde_json::to_string(body).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn dispatch(command: Command, stdin: &mut dyn Read, eps_env: Option<&str>) -> Result<Outcome> {
    match command {
        Command::Check { input, policy } => {
            let (spec, policy) = load(input, stdin, &policy, eps_env)?;
            with_spec!(spec, s => cmd_check(&s, &policy))
        }
        Command::Classify {
            input,
            policy,
            route,
        } => {
            let (spec, policy) = load(input, stdin, &policy, eps_env)?;
            with_spec!(spec, s => cmd_classify(&s, &policy, route))
        }
        Command::VerifyIdentities {
            input,
            policy,
            which,
            seed,
        } => {
            let (spec, policy) = load(input, stdin, &policy, eps_env)?;
            with_spec!(spec, s => cmd_identities(&s, &policy, which, seed))
        }
        Command::Generate {
            kind,
            n,
            seed,
            witness,
            exact,
            scale,
        } => {
            if exact {
                let witness = witness.as_deref().map(parse_exact_witness).transpose()?;
                cmd_generate::<ExactComplex>(kind, n, seed, witness, scale)
            } else {
                let witness = witness.as_deref().map(parse_approx_witness).transpose()?;
                cmd_generate::<Complex64>(kind, n, seed, witness, scale)
            }
        }
        Command::Enumerate {
            n,
            values,
            real,
            budget,
            no_routes,
        } => {
            let value_set = match values {
                ValueSet::Gauss1 => genlab::gauss1(),
                ValueSet::Int1 => genlab::int_range(1),
                ValueSet::Int2 => genlab::int_range(2),
            };
            let mut req = EnumRequest::new(n, value_set, real);
            req.budget = budget;
            req.check_routes = !no_routes;
            let report = genlab::enumerate_and_verify(&req)?;
            let code = if report.violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            };
            let summary = format!(
                "{} instances, {} normal ({} classified, {} degenerate), {} violations",
                report.total,
                report.normal,
                report.classified,
                report.degenerate,
                report.violations.len()
            );
            Ok(Outcome {
                code,
                body: report.to_json(),
                summary,
            })
        }
        Command::Bench { n, repeat, seed } => {
            let rows = bench(&n, repeat, seed)?;
            let summary = rows
                .iter()
                .map(|r| {
                    format!(
                        "N={} {}: fast/oracle speedup {:.1}x",
                        r.n,
                        r.kind.as_str(),
                        r.ratio
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::ok(
                json!({ "rows": rows.iter().map(BenchRow::to_json).collect::<Vec<_>>() }),
                summary,
            ))
        }
    }
}

/// Spec parsed in whichever arithmetic its encoding selects.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySpec {
    Exact(ToeplitzSpec<ExactComplex>),
    Approx(ToeplitzSpec<Complex64>),
}

macro_rules! with_spec {
    ($spec:expr, $s:ident => $body:expr) => {
        match $spec {
            AnySpec::Exact($s) => $body,
            AnySpec::Approx($s) => $body,
        }
    };
}
use with_spec;

impl AnySpec {
    /// Exact when the scalars are fraction strings, approximate when they are numbers.
    pub fn from_json(value: &Value) -> Result<Self> {
        let first = value
            .get("diag")
            .and_then(Value::as_array)
            .and_then(|d| d.first())
            .ok_or_else(|| Error::malformed("spec needs a nonempty array field `diag`"))?;
        let probe = match first {
            Value::Object(map) => map.get("re").unwrap_or(&Value::Null),
            other => other,
        };
        match probe {
            Value::String(_) => Ok(AnySpec::Exact(ToeplitzSpec::from_json(value)?)),
            Value::Number(_) => Ok(AnySpec::Approx(ToeplitzSpec::from_json(value)?)),
            other => Err(Error::malformed(format!(
                "cannot tell the scalar encoding from {other}"
            ))),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AnySpec::Exact(_))
    }
}

fn load(
    input: Option<PathBuf>,
    stdin: &mut dyn Read,
    args: &PolicyArgs,
    eps_env: Option<&str>,
) -> Result<(AnySpec, ScalarPolicy)> {
    let text = match input {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(&path)
            .map_err(|e| Error::malformed(format!("cannot read {}: {e}", path.display())))?,
        _ => {
            let mut buf = String::new();
            stdin
                .read_to_string(&mut buf)
                .map_err(|e| Error::malformed(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Error::malformed(format!("invalid JSON: {e}")))?;
    let spec = AnySpec::from_json(&value)?;
    let policy = build_policy(args, spec.is_exact(), eps_env)?;
    Ok((spec, policy))
}

fn build_policy(
    args: &PolicyArgs,
    exact_input: bool,
    eps_env: Option<&str>,
) -> Result<ScalarPolicy> {
    let mode = match args.mode {
        Some(ModeArg::Exact) => Mode::Exact,
        Some(ModeArg::Approx) => Mode::Approx,
        None if exact_input => Mode::Exact,
        None => Mode::Approx,
    };
    let mut policy = ScalarPolicy {
        mode,
        ..ScalarPolicy::approx()
    };
    if let Some(raw) = eps_env {
        let eps = raw
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::contract(format!("{EPS_ENV}=`{raw}` is not a number")))?;
        policy = policy.with_eps_rel(eps)?;
    }
    if let Some(eps) = args.eps {
        policy = policy.with_eps_rel(eps)?;
    }
    if let Some(floor) = args.eps_floor {
        policy = policy.with_eps_abs_floor(floor)?;
    }
    Ok(policy)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_check<S: Scalar>(spec: &ToeplitzSpec<S>, policy: &ScalarPolicy) -> Result<Outcome> {
    let report = normality::check(spec, policy);
    let mut body = report.to_json();
    body["n"] = json!(spec.order());
    let summary = format!(
        "normal: {} (max residual {} at {:?}; oracle {}; agree: {})",
        yes_no(report.is_normal_fast),
        report.max_residual,
        report.worst_pair,
        report.oracle_norm,
        yes_no(report.agrees)
    );
    Ok(Outcome::ok(body, summary))
}

fn classification_body<S: Scalar>(
    result: &ClassificationResult<S>,
    real_labels: &[&str],
    trace: Option<&ProofTrace<S>>,
) -> Value {
    let mut body = result.to_json();
    body["real_labels"] = json!(real_labels);
    body["trace"] = trace.map_or(Value::Null, ProofTrace::to_json);
    body
}

fn cmd_classify<S: Scalar>(
    spec: &ToeplitzSpec<S>,
    policy: &ScalarPolicy,
    route: Route,
) -> Result<Outcome> {
    let real_labels = if spec.is_real() {
        classify::classify_real(spec, policy)?.label_names()
    } else {
        vec![]
    };
    let (result, trace, agree) = match route {
        Route::Direct => (classify::classify_complex(spec, policy)?, None, None),
        Route::Proof => {
            let (result, trace) = classify::classify_via_proof(spec, policy)?;
            (result, trace, None)
        }
        Route::Both => {
            let direct = classify::classify_complex(spec, policy)?;
            let (proof, trace) = classify::classify_via_proof(spec, policy)?;
            let agree = direct.same_witnesses(&proof, policy);
            if !agree {
                let body = json!({
                    "error": "route_disagreement",
                    "direct": classification_body(&direct, &real_labels, None),
                    "proof": classification_body(&proof, &real_labels, trace.as_ref()),
                });
                return Ok(Outcome {
                    code: EXIT_VIOLATION,
                    body,
                    summary: "direct and constructive classifiers disagree".into(),
                });
            }
            (direct, trace, Some(agree))
        }
    };
    let mut body = classification_body(&result, &real_labels, trace.as_ref());
    if let Some(agree) = agree {
        body["routes_agree"] = json!(agree);
    }
    let witness = |w: &Option<S>| {
        w.as_ref()
            .map_or("-".to_string(), |w| format!("{}", w.to_c64()))
    };
    let summary = format!(
        "{}: type I {}, type II {}{}",
        result.verdict.as_str(),
        witness(&result.type_i),
        witness(&result.type_ii),
        if real_labels.is_empty() {
            String::new()
        } else {
            format!(", labels {}", real_labels.join(", "))
        }
    );
    Ok(Outcome::ok(body, summary))
}

/// Number of random (x, y) pairs for the sampled two-variable identity.
pub const IDENTITY8_PAIRS: usize = 64;
/// Number of grid angles for the sampled modulus identity.
pub const IDENTITY9_ANGLES: usize = 16;

fn cmd_identities<S: Scalar>(
    spec: &ToeplitzSpec<S>,
    policy: &ScalarPolicy,
    which: Which,
    seed: u64,
) -> Result<Outcome> {
    let normal = normality::is_normal(spec, policy);
    let sampled = ScalarPolicy {
        mode: Mode::Approx,
        ..*policy
    };
    let threshold = sampled.threshold(polyid::identity_scale(spec));
    let wants = |w: Which| which == Which::All || which == w;
    let mut body = json!({ "normal": normal });
    let mut failures: Vec<&str> = vec![];

    if wants(Which::Eight) {
        let coefficient_check = polyid::identity8_coefficient_check(spec, policy);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max_sampled = (0..IDENTITY8_PAIRS)
            .map(|_| {
                let x = rng.random_range(0.0..std::f64::consts::TAU);
                let y = rng.random_range(0.0..std::f64::consts::TAU);
                polyid::identity8_residual(spec, x, y).norm()
            })
            .fold(0.0, f64::max);
        let grid = S::unit_grid(classify::sample_count(spec.order()));
        let scale = polyid::identity_scale(spec);
        let lattice_refutes = grid.iter().any(|zx| {
            grid.iter()
                .any(|zy| !policy.is_zero(&polyid::identity8_at(spec, zx, zy), scale))
        });
        if coefficient_check && max_sampled > threshold {
            failures.push("8 (sampled)");
        }
        if coefficient_check == lattice_refutes {
            failures.push("8 (lattice)");
        }
        body["identity8"] = json!({
            "holds": coefficient_check,
            "coefficient_check": coefficient_check,
            "sampled_pairs": IDENTITY8_PAIRS,
            "sampled_max_residual": max_sampled,
            "threshold": threshold,
            "lattice_refutes": lattice_refutes,
        });
    }
    if wants(Which::Nine) {
        let max_residual = (0..IDENTITY9_ANGLES)
            .map(|j| {
                let x = std::f64::consts::TAU * j as f64 / IDENTITY9_ANGLES as f64;
                polyid::identity9_residual(spec, x).abs()
            })
            .fold(0.0, f64::max);
        let holds = max_residual <= threshold;
        if normal && !holds {
            failures.push("9");
        }
        body["identity9"] = json!({
            "holds": holds,
            "angles": IDENTITY9_ANGLES,
            "max_residual": max_residual,
            "threshold": threshold,
        });
    }
    let real = spec.is_real();
    if wants(Which::Fourteen) {
        body["identity14"] = if real {
            let holds = polyid::identity14_check(spec, policy)?;
            if holds != normal {
                failures.push("14");
            }
            json!({ "applicable": true, "holds": holds })
        } else {
            json!({ "applicable": false, "holds": null })
        };
    }
    if wants(Which::Sixteen) {
        body["identity16"] = if real && normal {
            let holds = polyid::identity16_holds(spec, policy)?;
            let (f1, f2) = polyid::factor_polys(spec)?;
            let scale = normality::residual_scale(spec);
            if !holds {
                failures.push("16");
            }
            json!({
                "applicable": true,
                "holds": holds,
                "crossing_relation": polyid::crossing_relation_holds(spec, policy)?,
                "f1_zero": f1.is_zero_under(policy, scale),
                "f2_zero": f2.is_zero_under(policy, scale),
                "f1": f1.to_json(),
                "f2": f2.to_json(),
            })
        } else {
            json!({ "applicable": false, "holds": null })
        };
    }

    let code = if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    if !failures.is_empty() {
        body["violations"] = json!(failures);
    }
    let summary = if failures.is_empty() {
        format!("identities consistent (normal: {})", yes_no(normal))
    } else {
        format!("identity violations: {}", failures.join(", "))
    };
    Ok(Outcome {
        code,
        body,
        summary,
    })
}

fn split_pair(s: &str) -> Result<(&str, &str)> {
    s.split_once(',')
        .ok_or_else(|| Error::contract(format!("witness `{s}` must be written as re,im")))
}

fn parse_exact_witness(s: &str) -> Result<ExactComplex> {
    let (re, im) = split_pair(s)?;
    let part = |p: &str| {
        parse_fraction(p).map_err(|_| Error::contract(format!("`{p}` is not a fraction")))
    };
    Ok(ExactComplex::new(part(re)?, part(im)?))
}

fn parse_approx_witness(s: &str) -> Result<Complex64> {
    let (re, im) = split_pair(s)?;
    let part = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|_| Error::contract(format!("`{p}` is not a number")))
    };
    Ok(Complex64::new(part(re)?, part(im)?))
}

fn cmd_generate<S: Sample>(
    kind: GenKind,
    n: usize,
    seed: u64,
    witness: Option<S>,
    scale: f64,
) -> Result<Outcome> {
    let mut req = GenRequest::new(n, kind, seed).with_scale(scale);
    req.witness = witness;
    let spec = genlab::generate(&req)?;
    Ok(Outcome::ok(
        spec.to_json(),
        format!("generated {} spec with N = {n}", kind.as_str()),
    ))
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub n: usize,
    pub kind: GenKind,
    pub fast_median_s: f64,
    pub oracle_median_s: f64,
    /// Oracle time over fast time; above 1 when the element-wise test wins.
    pub ratio: f64,
}

impl BenchRow {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "kind": self.kind.as_str(),
            "fast_median_s": self.fast_median_s,
            "oracle_median_s": self.oracle_median_s,
            "ratio": self.ratio,
        })
    }
}

fn median(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2.0
    }
}

fn time_median(repeat: usize, mut f: impl FnMut()) -> f64 {
    median(
        (0..repeat)
            .map(|_| {
                let start = Instant::now();
                f();
                start.elapsed().as_secs_f64()
            })
            .collect(),
    )
}

/// For each order, times the streaming element-wise test and the dense
/// commutator on one unconstrained and one type I spec.
pub fn bench(orders: &[usize], repeat: usize, seed: u64) -> Result<Vec<BenchRow>> {
    if repeat == 0 {
        return Err(Error::contract("repeat must be at least 1"));
    }
    let mut rows = Vec::new();
    for &n in orders {
        for kind in [GenKind::Unconstrained, GenKind::TypeI] {
            let spec: ToeplitzSpec<Complex64> = genlab::generate(&GenRequest::new(n, kind, seed))?;
            let fast = time_median(repeat, || {
                std::hint::black_box(normality::fast_max_residual(std::hint::black_box(&spec)));
            });
            let oracle = time_median(repeat, || {
                std::hint::black_box(commutator_norm(std::hint::black_box(&spec)));
            });
            rows.push(BenchRow {
                n,
                kind,
                fast_median_s: fast,
                oracle_median_s: oracle,
                ratio: oracle / fast.max(f64::MIN_POSITIVE),
            });
        }
    }
    Ok(rows)
}
