//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use common::{all_specs, naive_frobenius, naive_is_normal_exact, q};
use num::complex::Complex64;
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use toepnorm::classify::{self, Verdict};
use toepnorm::cli;
use toepnorm::genlab::{self, EnumRequest, GenKind, GenRequest};
use toepnorm::normality;
use toepnorm::polyid;
use toepnorm::scalar::rational_unit_circle;
use toepnorm::{ExactComplex, Scalar, ScalarPolicy, ToeplitzSpec};

/// Generated specs per normal kind.
const PER_KIND: u64 = 1_000;
/// Random specs for the oracle comparison.
const ORACLE_CASES: u64 = 10_000;
/// Commutator bound factor for approximate generator output: norm <= this * N * max|a|^2.
const GENERATOR_EPS: f64 = 1e-10;
/// Agreement bound for the canonical identity residual.
const CANONICAL_TOL: f64 = 1e-12;
const EXHAUSTIVE_COMPLEX_LIMIT: Duration = Duration::from_secs(10);
const EXHAUSTIVE_REAL_LIMIT: Duration = Duration::from_secs(30);
const BENCH_ORDER: usize = 1024;
const BENCH_REPEAT: usize = 3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    match failures.first() {
        None => Outcome { pass: true, detail },
        Some(first) => Outcome {
            pass: false,
            detail: format!("{detail}; {} failures, first: {first}", failures.len()),
        },
    }
}

/// `value <= bound`, false for NaN.
fn within(value: f64, bound: f64) -> bool {
    value <= bound
}

fn max_abs<S: Scalar>(spec: &ToeplitzSpec<S>) -> f64 {
    let n = spec.order() as isize;
    (1..=n)
        .flat_map(|k| [k, -k])
        .map(|k| spec.entry(k).abs_f64())
        .fold(0.0, f64::max)
}

/// Exhaustive complex instances, shared by the theorem and route criteria.
struct ComplexCorpus {
    specs: Vec<ToeplitzSpec<ExactComplex>>,
    elapsed: Duration,
}

fn complex_corpus() -> ComplexCorpus {
    let start = Instant::now();
    let specs: Vec<_> = [1, 2]
        .iter()
        .flat_map(|&n| all_specs(n, &genlab::gauss1()))
        .collect();
    ComplexCorpus {
        specs,
        elapsed: start.elapsed(),
    }
}

fn criterion_1(corpus: &ComplexCorpus) -> Outcome {
    let start = Instant::now();
    let p = ScalarPolicy::exact();
    let mut failures = Vec::new();
    let mut counts = [0u64; 3];
    for (n, expected_total) in [(1usize, 81u64), (2, 6561)] {
        let report =
            genlab::enumerate_and_verify(&EnumRequest::new(n, genlab::gauss1(), false)).unwrap();
        if report.total != expected_total || !report.violations.is_empty() {
            failures.push(format!(
                "N={n}: total {} with {} violations",
                report.total,
                report.violations.len()
            ));
        }
    }
    let verdicts: Vec<_> = corpus
        .specs
        .par_iter()
        .map(|s| {
            (
                normality::is_normal(s, &p),
                naive_is_normal_exact(s),
                classify::classify_complex(s, &p),
            )
        })
        .collect();
    for (i, (fast, oracle, result)) in verdicts.into_iter().enumerate() {
        if fast != oracle {
            failures.push(format!("instance {i}: fast {fast} vs oracle {oracle}"));
        }
        match result {
            Ok(r) => {
                let slot = match r.verdict {
                    Verdict::NotNormal => 0,
                    Verdict::Classified => 1,
                    Verdict::Degenerate => 2,
                };
                counts[slot] += 1;
                if (r.verdict != Verdict::NotNormal) != fast {
                    failures.push(format!(
                        "instance {i}: verdict {:?} but normal {fast}",
                        r.verdict
                    ));
                }
            }
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    let elapsed = corpus.elapsed + start.elapsed();
    if elapsed > EXHAUSTIVE_COMPLEX_LIMIT {
        failures.push(format!("took {elapsed:?}"));
    }
    outcome(
        &failures,
        format!(
            "{} instances, {} not normal, {} classified, {} degenerate, 0 diagnostics, tolerance exact, {:.2?}",
            corpus.specs.len(),
            counts[0],
            counts[1],
            counts[2],
            elapsed
        ),
    )
}

/// Real normal instances from the exhaustive real enumeration.
fn real_normal_corpus() -> (Vec<ToeplitzSpec<ExactComplex>>, usize, Duration) {
    let start = Instant::now();
    let p = ScalarPolicy::exact();
    let all: Vec<_> = [2, 3]
        .iter()
        .flat_map(|&n| all_specs(n, &genlab::int_range(2)))
        .collect();
    let total = all.len();
    let normal = all
        .into_par_iter()
        .filter(|s| normality::is_normal(s, &p))
        .collect();
    (normal, total, start.elapsed())
}

fn criterion_2(normal: &[ToeplitzSpec<ExactComplex>], total: usize, elapsed: Duration) -> Outcome {
    let start = Instant::now();
    let p = ScalarPolicy::exact();
    let mut failures = Vec::new();
    for (n, expected_total) in [(2usize, 625u64), (3, 15625)] {
        let report =
            genlab::enumerate_and_verify(&EnumRequest::new(n, genlab::int_range(2), true)).unwrap();
        if report.total != expected_total || !report.violations.is_empty() {
            failures.push(format!(
                "N={n}: total {} with {} violations",
                report.total,
                report.violations.len()
            ));
        }
    }
    let checks: Vec<_> = normal
        .par_iter()
        .map(|s| {
            let labelled = classify::classify_real(s, &p).map(|r| !r.labels.is_empty());
            let identity = polyid::identity16_holds(s, &p);
            (labelled, identity)
        })
        .collect();
    for (i, result) in checks.into_iter().enumerate() {
        match result {
            (Ok(true), Ok(true)) => {}
            other => failures.push(format!("normal instance {i}: {other:?}")),
        }
    }
    let elapsed = elapsed + start.elapsed();
    if elapsed > EXHAUSTIVE_REAL_LIMIT {
        failures.push(format!("took {elapsed:?}"));
    }
    outcome(
        &failures,
        format!("{total} instances, {} normal, all labelled, identity16 on all, tolerance exact, {elapsed:.2?}", normal.len()),
    )
}

/// Mixed normal and non-normal exact specs with orders 1..=8.
fn oracle_case(i: u64) -> ToeplitzSpec<ExactComplex> {
    let n = 1 + (i % 8) as usize;
    let kind = GenKind::ALL[(i / 8 % 7) as usize];
    let spec: ToeplitzSpec<ExactComplex> = genlab::generate(&GenRequest::new(n, kind, i)).unwrap();
    if i % 3 != 2 || kind == GenKind::Unconstrained {
        return spec;
    }
    // nudge one entry of an otherwise normal spec
    let mut diag = spec.diagonals().to_vec();
    let slot = (i / 56) as usize % (2 * n + 1);
    let slot = if slot == n { 0 } else { slot };
    diag[slot] = diag[slot].clone() + ExactComplex::from_real(BigRational::new(1.into(), 7.into()));
    ToeplitzSpec::from_diagonals(diag).unwrap()
}

fn criterion_3() -> Outcome {
    let p = ScalarPolicy::exact();
    let results: Vec<_> = (0..ORACLE_CASES)
        .into_par_iter()
        .map(|i| {
            let spec = oracle_case(i);
            (
                i,
                normality::is_normal(&spec, &p),
                naive_is_normal_exact(&spec),
            )
        })
        .collect();
    let normal = results.iter().filter(|r| r.2).count();
    let failures: Vec<_> = results
        .iter()
        .filter(|(_, fast, oracle)| fast != oracle)
        .map(|(i, fast, oracle)| format!("case {i}: fast {fast} vs oracle {oracle}"))
        .collect();
    outcome(
        &failures,
        format!(
            "{ORACLE_CASES} exact specs (N <= 8), {normal} normal and {} not, agreement {}/{ORACLE_CASES}",
            ORACLE_CASES as usize - normal,
            ORACLE_CASES as usize - failures.len()
        ),
    )
}

struct GeneratedCorpus {
    approx: Vec<(GenKind, u64, ToeplitzSpec<Complex64>)>,
    exact: Vec<(GenKind, u64, ToeplitzSpec<ExactComplex>)>,
}

fn generated_corpus() -> GeneratedCorpus {
    let mut approx = Vec::new();
    let mut exact = Vec::new();
    for kind in GenKind::NORMAL {
        for seed in 0..PER_KIND {
            let n = 1 + (seed % 32) as usize;
            approx.push((
                kind,
                seed,
                genlab::generate(&GenRequest::new(n, kind, seed)).unwrap(),
            ));

            let n = 1 + (seed % 8) as usize;
            let mut req = GenRequest::new(n, kind, seed);
            if kind.takes_witness() {
                let u =
                    BigRational::new((seed as i64 % 17 - 8).into(), (1 + seed as i64 % 5).into());
                req = req.with_witness(rational_unit_circle(&u));
            }
            exact.push((kind, seed, genlab::generate(&req).unwrap()));
        }
    }
    GeneratedCorpus { approx, exact }
}

fn criterion_4(corpus: &GeneratedCorpus) -> Outcome {
    let mut failures = Vec::new();
    let worst = corpus
        .approx
        .par_iter()
        .map(|(kind, seed, spec)| {
            let m = max_abs(spec);
            let ratio = naive_frobenius(spec) / (GENERATOR_EPS * spec.order() as f64 * m * m);
            (ratio, *kind, *seed)
        })
        .collect::<Vec<_>>();
    for (ratio, kind, seed) in &worst {
        if !within(*ratio, 1.0) {
            failures.push(format!(
                "approx {kind:?} seed {seed}: norm at {ratio:.3e} of the bound"
            ));
        }
    }
    let worst_ratio = worst.iter().map(|w| w.0).fold(0.0, f64::max);
    let exact_bad: Vec<_> = corpus
        .exact
        .par_iter()
        .filter(|(_, _, spec)| !naive_is_normal_exact(spec))
        .map(|(kind, seed, _)| format!("exact {kind:?} seed {seed}: nonzero commutator"))
        .collect();
    failures.extend(exact_bad);
    outcome(
        &failures,
        format!(
            "{PER_KIND} per kind x {} kinds; approx N 1..=32 worst norm {worst_ratio:.2e} of {GENERATOR_EPS:e} * N * max^2; exact N 1..=8 all commutators zero",
            GenKind::NORMAL.len()
        ),
    )
}

fn criterion_5(complex: &ComplexCorpus, generated: &GeneratedCorpus) -> Outcome {
    let exact = ScalarPolicy::exact();
    let approx = ScalarPolicy::approx();
    let mut failures: Vec<String> = complex
        .specs
        .par_iter()
        .enumerate()
        .filter_map(|(i, s)| {
            let direct = classify::classify_complex(s, &exact).ok()?;
            let (proof, _) = classify::classify_via_proof(s, &exact).ok()?;
            (direct != proof).then(|| format!("exhaustive instance {i}: {direct:?} vs {proof:?}"))
        })
        .collect();
    failures.extend(
        generated
            .exact
            .par_iter()
            .filter_map(|(kind, seed, s)| {
                let direct = classify::classify_complex(s, &exact);
                let proof = classify::classify_via_proof(s, &exact).map(|r| r.0);
                match (direct, proof) {
                    (Ok(d), Ok(p)) if d == p => None,
                    other => Some(format!("exact {kind:?} seed {seed}: {other:?}")),
                }
            })
            .collect::<Vec<_>>(),
    );
    failures.extend(
        generated
            .approx
            .par_iter()
            .filter_map(|(kind, seed, s)| {
                let direct = classify::classify_complex(s, &approx);
                let proof = classify::classify_via_proof(s, &approx).map(|r| r.0);
                match (direct, proof) {
                    (Ok(d), Ok(p)) if d.same_witnesses(&p, &approx) => None,
                    other => Some(format!("approx {kind:?} seed {seed}: {other:?}")),
                }
            })
            .collect::<Vec<_>>(),
    );
    outcome(
        &failures,
        format!(
            "{} exhaustive + {} exact generated (identical) + {} approx generated (within policy)",
            complex.specs.len(),
            generated.exact.len(),
            generated.approx.len()
        ),
    )
}

fn identity_failures<S: Scalar>(
    kind: GenKind,
    seed: u64,
    spec: &ToeplitzSpec<S>,
) -> Option<String> {
    let threshold = ScalarPolicy::approx().threshold(polyid::identity_scale(spec));
    for j in 0..cli::IDENTITY9_ANGLES {
        let x = std::f64::consts::TAU * j as f64 / cli::IDENTITY9_ANGLES as f64;
        let r = polyid::identity9_residual(spec, x).abs();
        if !within(r, threshold) {
            return Some(format!(
                "{kind:?} seed {seed}: identity9 {r:.3e} at angle {j}"
            ));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cli::IDENTITY8_PAIRS {
        let x = rng.random_range(0.0..std::f64::consts::TAU);
        let y = rng.random_range(0.0..std::f64::consts::TAU);
        let r = polyid::identity8_residual(spec, x, y).norm();
        if !within(r, threshold) {
            return Some(format!(
                "{kind:?} seed {seed}: identity8 {r:.3e} at ({x}, {y})"
            ));
        }
    }
    None
}

fn criterion_6(generated: &GeneratedCorpus) -> Outcome {
    let mut failures: Vec<String> = generated
        .approx
        .par_iter()
        .filter_map(|(k, s, spec)| identity_failures(*k, *s, spec))
        .collect();
    failures.extend(
        generated
            .exact
            .par_iter()
            .filter_map(|(k, s, spec)| identity_failures(*k, *s, spec))
            .collect::<Vec<_>>(),
    );

    let canonical = ToeplitzSpec::from_diagonals(vec![q(2, 0), q(0, 0), q(1, 0)]).unwrap();
    let r = polyid::identity8_residual(&canonical, 0.0, 0.0);
    if !within((r - Complex64::new(-6.0, 0.0)).norm(), CANONICAL_TOL) {
        failures.push(format!("canonical residual {r}"));
    }
    outcome(
        &failures,
        format!(
            "{} normal instances: identity9 at {} angles and identity8 at {} pairs within eps_rel * N^2 * max^2; canonical residual {r} (tol {CANONICAL_TOL:e})",
            generated.approx.len() + generated.exact.len(),
            cli::IDENTITY9_ANGLES,
            cli::IDENTITY8_PAIRS
        ),
    )
}

fn criterion_7(real_normal: &[ToeplitzSpec<ExactComplex>]) -> Outcome {
    let p = ScalarPolicy::exact();
    let signs = [q(1, 0), q(-1, 0)];
    let failures: Vec<String> = real_normal
        .par_iter()
        .enumerate()
        .filter_map(|(i, s)| match classify::classify_complex(s, &p) {
            Ok(r) => {
                let ok = [&r.type_i, &r.type_ii]
                    .iter()
                    .all(|w| w.as_ref().is_none_or(|w| signs.contains(w)));
                (!ok).then(|| format!("instance {i}: {r:?}"))
            }
            Err(e) => Some(format!("instance {i}: {e}")),
        })
        .collect();
    outcome(
        &failures,
        format!(
            "{} real normal instances, witnesses in {{+1, -1}} exactly",
            real_normal.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    match cli::bench(&[BENCH_ORDER], BENCH_REPEAT, 1) {
        Ok(rows) => {
            let failures: Vec<String> = rows
                .iter()
                .filter(|r| r.fast_median_s >= r.oracle_median_s || r.fast_median_s.is_nan())
                .map(|r| {
                    format!(
                        "{}: fast {:.3e}s vs oracle {:.3e}s",
                        r.kind.as_str(),
                        r.fast_median_s,
                        r.oracle_median_s
                    )
                })
                .collect();
            let detail = rows
                .iter()
                .map(|r| {
                    format!(
                        "{} fast {:.3e}s oracle {:.3e}s ratio {:.0}",
                        r.kind.as_str(),
                        r.fast_median_s,
                        r.oracle_median_s,
                        r.ratio
                    )
                })
                .collect::<Vec<_>>()
                .join("; ");
            outcome(
                &failures,
                format!("N = {BENCH_ORDER}, median of {BENCH_REPEAT}: {detail}"),
            )
        }
        Err(e) => Outcome {
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn report(id: u32, name: &str, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = run();
    println!(
        "{} criterion {id} ({name}): {} [{:.2?}]",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        start.elapsed()
    );
    o.pass
}

fn main() {
    let complex = complex_corpus();
    let (real_normal, real_total, real_elapsed) = real_normal_corpus();
    let generated = generated_corpus();

    let results = [
        report(1, "exhaustive complex classification", || {
            criterion_1(&complex)
        }),
        report(2, "exhaustive real labels", || {
            criterion_2(&real_normal, real_total, real_elapsed)
        }),
        report(3, "oracle equivalence", criterion_3),
        report(4, "generator soundness", || criterion_4(&generated)),
        report(5, "route agreement", || criterion_5(&complex, &generated)),
        report(6, "identity suite", || criterion_6(&generated)),
        report(7, "real witness restriction", || criterion_7(&real_normal)),
        report(8, "benchmark sanity", criterion_8),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
