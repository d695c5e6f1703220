//! Seeded generators for every classified kind, perturbation fuzzing, and the
//! exhaustive enumerator behind the theorem-level checks.

use std::collections::BTreeMap;
use std::str::FromStr;

use num::complex::Complex64;
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classify::{self, RealLabel, Verdict};
use crate::error::{Error, Result};
use crate::normality;
use crate::polyid;
use crate::scalar::{is_unit_modulus, rational_unit_circle, ExactComplex, Scalar, ScalarPolicy};
use crate::toeplitz::ToeplitzSpec;

/// Scalars the generators know how to draw.
pub trait Sample: Scalar {
    /// A value whose real and imaginary parts lie in `[-scale, scale]`;
    /// the imaginary part is zero when `real` is set.
    fn draw(rng: &mut ChaCha8Rng, scale: f64, real: bool) -> Self;

    /// A unit-modulus value.
    fn draw_unit(rng: &mut ChaCha8Rng) -> Self;
}

impl Sample for Complex64 {
    fn draw(rng: &mut ChaCha8Rng, scale: f64, real: bool) -> Self {
        let re = rng.random_range(-scale..=scale);
        let im = if real {
            0.0
        } else {
            rng.random_range(-scale..=scale)
        };
        Complex64::new(re, im)
    }

    fn draw_unit(rng: &mut ChaCha8Rng) -> Self {
        Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
    }
}

/// Largest denominator used for exact draws.
const EXACT_DENOM: i64 = 4;

impl Sample for ExactComplex {
    /// Fractions with denominators up to 4 and components bounded by `round(scale)`.
    fn draw(rng: &mut ChaCha8Rng, scale: f64, real: bool) -> Self {
        let bound = (scale.round() as i64).max(1);
        let part = |rng: &mut ChaCha8Rng| {
            let den = rng.random_range(1..=EXACT_DENOM);
            let num = rng.random_range(-bound * den..=bound * den);
            BigRational::new(num.into(), den.into())
        };
        let re = part(rng);
        let im = if real {
            BigRational::from_integer(0.into())
        } else {
            part(rng)
        };
        ExactComplex::new(re, im)
    }

    fn draw_unit(rng: &mut ChaCha8Rng) -> Self {
        let u = BigRational::new(
            rng.random_range(-8i64..=8).into(),
            rng.random_range(1i64..=8).into(),
        );
        rational_unit_circle(&u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    TypeI,
    TypeII,
    Symmetric,
    SkewSymmetric,
    Circulant,
    SkewCirculant,
    Unconstrained,
}

impl GenKind {
    pub const ALL: [GenKind; 7] = [
        GenKind::TypeI,
        GenKind::TypeII,
        GenKind::Symmetric,
        GenKind::SkewSymmetric,
        GenKind::Circulant,
        GenKind::SkewCirculant,
        GenKind::Unconstrained,
    ];

    /// Every kind that is normal by construction.
    pub const NORMAL: [GenKind; 6] = [
        GenKind::TypeI,
        GenKind::TypeII,
        GenKind::Symmetric,
        GenKind::SkewSymmetric,
        GenKind::Circulant,
        GenKind::SkewCirculant,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GenKind::TypeI => "type-i",
            GenKind::TypeII => "type-ii",
            GenKind::Symmetric => "symmetric",
            GenKind::SkewSymmetric => "skew-symmetric",
            GenKind::Circulant => "circulant",
            GenKind::SkewCirculant => "skew-circulant",
            GenKind::Unconstrained => "unconstrained",
        }
    }

    pub fn takes_witness(self) -> bool {
        matches!(self, GenKind::TypeI | GenKind::TypeII)
    }

    pub fn is_real(self) -> bool {
        matches!(
            self,
            GenKind::Symmetric
                | GenKind::SkewSymmetric
                | GenKind::Circulant
                | GenKind::SkewCirculant
        )
    }

    /// The real label a kind produces, if any.
    pub fn real_label(self) -> Option<RealLabel> {
        match self {
            GenKind::Symmetric => Some(RealLabel::Symmetric),
            GenKind::SkewSymmetric => Some(RealLabel::SkewSymmetric),
            GenKind::Circulant => Some(RealLabel::Circulant),
            GenKind::SkewCirculant => Some(RealLabel::SkewCirculant),
            _ => None,
        }
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_lowercase();
        Ok(match key.as_str() {
            "typei" | "type1" | "i" => GenKind::TypeI,
            "typeii" | "type2" | "ii" => GenKind::TypeII,
            "symmetric" => GenKind::Symmetric,
            "skewsymmetric" => GenKind::SkewSymmetric,
            "circulant" => GenKind::Circulant,
            "skewcirculant" => GenKind::SkewCirculant,
            "unconstrained" => GenKind::Unconstrained,
            _ => return Err(Error::contract(format!("unknown generator kind `{s}`"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct GenRequest<S> {
    pub n: usize,
    pub kind: GenKind,
    /// Unit-modulus witness for type I / type II; drawn from the seed when absent.
    pub witness: Option<S>,
    pub seed: u64,
    /// Bound on each component of the drawn entries.
    pub value_scale: f64,
}

impl<S> GenRequest<S> {
    pub fn new(n: usize, kind: GenKind, seed: u64) -> Self {
        Self {
            n,
            kind,
            witness: None,
            seed,
            value_scale: 1.0,
        }
    }

    pub fn with_witness(mut self, witness: S) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_scale(mut self, value_scale: f64) -> Self {
        self.value_scale = value_scale;
        self
    }
}

/// Draws `a_1..a_N`, not all zero, and derives `a_{-1}..a_{-N}` from the
/// defining condition of the kind. Unconstrained output is redrawn until it is
/// not normal.
pub fn generate<S: Sample>(req: &GenRequest<S>) -> Result<ToeplitzSpec<S>> {
    if req.n == 0 {
        return Err(Error::contract("generator order must be at least 1"));
    }
    if !(req.value_scale > 0.0 && req.value_scale.is_finite()) {
        return Err(Error::contract(format!(
            "value scale must be positive, got {}",
            req.value_scale
        )));
    }
    if let Some(w) = &req.witness {
        if !req.kind.takes_witness() {
            return Err(Error::contract(format!(
                "kind {} takes no witness",
                req.kind.as_str()
            )));
        }
        if !is_unit_modulus(w, &S::default_policy()) {
            return Err(Error::contract("witness must have unit modulus"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let real = req.kind.is_real();
    let lower: Vec<S> = loop {
        let lower: Vec<S> = (0..req.n)
            .map(|_| S::draw(&mut rng, req.value_scale, real))
            .collect();
        if lower.iter().any(|a| !Scalar::is_zero(a)) {
            break lower;
        }
    };
    let reversed: Vec<S> = lower.iter().rev().cloned().collect();
    let upper: Vec<S> = match req.kind {
        GenKind::TypeI | GenKind::TypeII => {
            let w = req
                .witness
                .clone()
                .unwrap_or_else(|| S::draw_unit(&mut rng));
            if req.kind == GenKind::TypeI {
                lower.iter().map(|a| w.clone() * a.conj()).collect()
            } else {
                reversed.iter().map(|a| w.clone() * a.clone()).collect()
            }
        }
        GenKind::Symmetric => lower.clone(),
        GenKind::SkewSymmetric => lower.iter().map(|a| -a.clone()).collect(),
        GenKind::Circulant => reversed,
        GenKind::SkewCirculant => reversed.into_iter().map(|a| -a).collect(),
        GenKind::Unconstrained => loop {
            let upper: Vec<S> = (0..req.n)
                .map(|_| S::draw(&mut rng, req.value_scale, false))
                .collect();
            let spec = ToeplitzSpec::from_parts(&lower, &upper, S::zero())?;
            if !normality::is_normal(&spec, &S::default_policy()) {
                return Ok(spec);
            }
        },
    };
    ToeplitzSpec::from_parts(&lower, &upper, S::zero())
}

/// Adds an independent perturbation of modulus at most `magnitude`, uniform on
/// the disk, to every off-diagonal entry.
pub fn perturb<S: Scalar>(
    spec: &ToeplitzSpec<S>,
    magnitude: f64,
    seed: u64,
) -> Result<ToeplitzSpec<Complex64>> {
    if S::EXACT {
        return Err(Error::contract(
            "perturbation applies to approximate specs only",
        ));
    }
    if !(magnitude >= 0.0 && magnitude.is_finite()) {
        return Err(Error::contract(format!(
            "perturbation magnitude must be nonnegative, got {magnitude}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.order();
    let entries = spec
        .diagonals()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let a = a.to_c64();
            if i == n || magnitude == 0.0 {
                return a;
            }
            let r = magnitude * rng.random::<f64>().sqrt();
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            a + Complex64::from_polar(r, theta)
        })
        .collect();
    ToeplitzSpec::from_diagonals(entries)
}

/// Default cap on enumerated instances.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Gaussian integers with both components in `{-1, 0, 1}`.
pub fn gauss1() -> Vec<ExactComplex> {
    let mut out = Vec::with_capacity(9);
    for re in -1..=1 {
        for im in -1..=1 {
            out.push(ExactComplex::from_i64(re, im));
        }
    }
    out
}

/// Integers in `{-k, ..., k}`.
pub fn int_range(k: i64) -> Vec<ExactComplex> {
    (-k..=k).map(|v| ExactComplex::from_i64(v, 0)).collect()
}

#[derive(Debug, Clone)]
pub struct EnumRequest {
    pub n: usize,
    pub value_set: Vec<ExactComplex>,
    pub real_only: bool,
    pub budget: u64,
    /// Also run the constructive classifier and require identical witnesses.
    pub check_routes: bool,
}

impl EnumRequest {
    pub fn new(n: usize, value_set: Vec<ExactComplex>, real_only: bool) -> Self {
        Self {
            n,
            value_set,
            real_only,
            budget: DEFAULT_BUDGET,
            check_routes: true,
        }
    }

    /// `|value_set|^(2N)`, or `None` on overflow.
    pub fn instance_count(&self) -> Option<u128> {
        (self.value_set.len() as u128).checked_pow(u32::try_from(2 * self.n).ok()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Fast test and dense commutator disagree.
    OracleDisagreement,
    /// Normal but unclassifiable.
    Theorem,
    /// Direct and constructive classifiers disagree.
    RouteDisagreement,
    /// Real normal spec fails the factorization check.
    Factorization,
    /// Real normal spec got a complex witness other than +1 or -1.
    RealWitness,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::OracleDisagreement => "oracle_disagreement",
            ViolationKind::Theorem => "theorem",
            ViolationKind::RouteDisagreement => "route_disagreement",
            ViolationKind::Factorization => "factorization",
            ViolationKind::RealWitness => "real_witness",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub index: u64,
    pub kind: ViolationKind,
    pub detail: String,
    pub spec: ToeplitzSpec<ExactComplex>,
}

#[derive(Debug, Clone, Default)]
pub struct EnumReport {
    pub total: u64,
    pub normal: u64,
    pub classified: u64,
    pub degenerate: u64,
    pub violations: Vec<Violation>,
    pub label_histogram: BTreeMap<String, u64>,
}

impl EnumReport {
    fn merge(mut self, other: Self) -> Self {
        self.total += other.total;
        self.normal += other.normal;
        self.classified += other.classified;
        self.degenerate += other.degenerate;
        self.violations.extend(other.violations);
        for (k, v) in other.label_histogram {
            *self.label_histogram.entry(k).or_default() += v;
        }
        self
    }

    fn bump(&mut self, label: &str) {
        *self.label_histogram.entry(label.to_string()).or_default() += 1;
    }

    pub fn to_json(&self) -> Value {
        json!({
            "total": self.total,
            "normal": self.normal,
            "classified": self.classified,
            "degenerate": self.degenerate,
            "violations": self.violations.iter().map(|v| json!({
                "index": v.index,
                "kind": v.kind.as_str(),
                "detail": v.detail,
                "spec": v.spec.to_json(),
            })).collect::<Vec<_>>(),
            "label_histogram": self.label_histogram,
        })
    }
}

/// Spec number `index` in the enumeration order: base-`|values|` digits fill
/// `a_{-N}, ..., a_{-1}, a_1, ..., a_N`, last position fastest.
fn decode(index: u64, n: usize, values: &[ExactComplex]) -> ToeplitzSpec<ExactComplex> {
    let base = values.len() as u64;
    let mut digits = vec![0usize; 2 * n];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = (rest % base) as usize;
        rest /= base;
    }
    let mut entries: Vec<ExactComplex> = digits[..n].iter().map(|&d| values[d].clone()).collect();
    entries.push(ExactComplex::zero());
    entries.extend(digits[n..].iter().map(|&d| values[d].clone()));
    ToeplitzSpec::from_diagonals(entries).expect("2N+1 entries")
}

fn verify_one(index: u64, req: &EnumRequest, acc: &mut EnumReport) {
    let policy = ScalarPolicy::exact();
    let spec = decode(index, req.n, &req.value_set);
    acc.total += 1;
    let flag = |acc: &mut EnumReport, kind: ViolationKind, detail: String| {
        acc.violations.push(Violation {
            index,
            kind,
            detail,
            spec: spec.clone(),
        });
    };

    let report = normality::check(&spec, &policy);
    if !report.agrees {
        flag(
            acc,
            ViolationKind::OracleDisagreement,
            format!(
                "fast verdict {} but oracle {}",
                report.is_normal_fast, report.oracle_norm
            ),
        );
    }
    if !report.is_normal_fast {
        return;
    }
    acc.normal += 1;

    let direct = match classify::classify_complex(&spec, &policy) {
        Ok(r) => r,
        Err(e) => {
            flag(acc, ViolationKind::Theorem, e.to_string());
            return;
        }
    };
    match direct.verdict {
        Verdict::Degenerate => acc.degenerate += 1,
        Verdict::Classified => acc.classified += 1,
        Verdict::NotNormal => unreachable!("normality was established above"),
    }

    if req.check_routes {
        match classify::classify_via_proof(&spec, &policy) {
            Ok((proof, _)) if proof == direct => {}
            Ok((proof, _)) => flag(
                acc,
                ViolationKind::RouteDisagreement,
                format!("direct {direct:?} but constructive {proof:?}"),
            ),
            Err(e) => flag(acc, ViolationKind::RouteDisagreement, e.to_string()),
        }
    }

    if !req.real_only {
        if direct.type_i.is_some() {
            acc.bump("type_I");
        }
        if direct.type_ii.is_some() {
            acc.bump("type_II");
        }
        return;
    }

    match classify::classify_real(&spec, &policy) {
        Ok(real) if real.verdict == Verdict::Degenerate => {}
        Ok(real) => {
            for label in &real.labels {
                acc.bump(label.as_str());
            }
        }
        Err(e) => flag(acc, ViolationKind::Theorem, e.to_string()),
    }
    match polyid::identity16_holds(&spec, &policy) {
        Ok(true) => {}
        Ok(false) => flag(
            acc,
            ViolationKind::Factorization,
            "neither factor vanishes".into(),
        ),
        Err(e) => flag(acc, ViolationKind::Factorization, e.to_string()),
    }
    let signs = [ExactComplex::one(), -ExactComplex::one()];
    for w in direct.type_i.iter().chain(direct.type_ii.iter()) {
        if !signs.contains(w) {
            flag(
                acc,
                ViolationKind::RealWitness,
                format!("witness {w} is not +1 or -1"),
            );
        }
    }
}

/// Runs every assignment of the value set through the exact normality test
/// and the classifiers. Zero violations is the expected outcome.
pub fn enumerate_and_verify(req: &EnumRequest) -> Result<EnumReport> {
    if req.value_set.is_empty() {
        return Err(Error::contract("value set must be nonempty"));
    }
    if req.n == 0 {
        return Err(Error::contract("enumeration order must be at least 1"));
    }
    if req.real_only && !req.value_set.iter().all(|v| v.imag_is_zero()) {
        return Err(Error::contract(
            "real-only enumeration needs a real value set",
        ));
    }
    let total = match req.instance_count() {
        Some(t) if t <= u128::from(req.budget) => t as u64,
        Some(t) => {
            return Err(Error::BudgetExceeded {
                required: t,
                budget: req.budget,
            })
        }
        None => {
            return Err(Error::BudgetExceeded {
                required: u128::MAX,
                budget: req.budget,
            })
        }
    };
    let mut report = (0..total)
        .into_par_iter()
        .fold(EnumReport::default, |mut acc, index| {
            verify_one(index, req, &mut acc);
            acc
        })
        .reduce(EnumReport::default, EnumReport::merge);
    report
        .violations
        .sort_by_key(|v| (v.index, v.kind.as_str()));
    Ok(report)
}
