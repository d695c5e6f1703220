//! Type I / type II classification of normal Toeplitz matrices.
//!
//! A normal spec is of type I when `a_{-k} = alpha0 * conj(a_k)` for one
//! unit-modulus `alpha0` and all `k`, and of type II when
//! `a_{-k} = beta0 * a_{N+1-k}`. Real specs refine these into symmetric and
//! skew-symmetric (`alpha0 = +1 / -1`), circulant and skew-circulant
//! (`beta0 = +1 / -1`).
//!
//! Two routes are provided. [`classify_complex`] tests the coefficient
//! ratios directly. [`classify_via_proof`] follows the constructive argument:
//! pick a point `z0 = e^{i x0}` where `t` is as large as possible, form
//! `alpha = s(z0)/t(z0)` and `beta = t(z0)/conj(t(z0))`, and check the two
//! candidates `alpha * beta` and `conj(alpha) * z0^{N+1}`.

use serde_json::{json, Value};

use crate::error::{Diagnostic, Error, NearMiss, Result};
use crate::normality::{self, NormalityReport};
use crate::polyid;
use crate::scalar::{angle_of, is_unit_modulus, Scalar, ScalarPolicy};
use crate::toeplitz::ToeplitzSpec;

#[derive(Debug, Clone, PartialEq)]
pub enum UnitRatio<S> {
    Unit(S),
    /// Both sequences vanish, so every unit scalar works.
    Any,
    Absent,
}

impl<S> UnitRatio<S> {
    pub fn unit(self) -> Option<S> {
        match self {
            UnitRatio::Unit(c) => Some(c),
            _ => None,
        }
    }
}

fn max_abs<S: Scalar>(values: &[S]) -> f64 {
    values.iter().map(S::abs_f64).fold(0.0, f64::max)
}

fn sequence_scale<S: Scalar>(numer: &[S], denom: &[S]) -> f64 {
    max_abs(numer).max(max_abs(denom))
}

/// `numer[k] == c * denom[k]` for every `k` under `policy`.
fn holds_with<S: Scalar>(
    numer: &[S],
    denom: &[S],
    c: &S,
    policy: &ScalarPolicy,
    scale: f64,
) -> bool {
    numer
        .iter()
        .zip(denom)
        .all(|(n, d)| policy.eq(n, &(c.clone() * d.clone()), scale))
}

/// Finds a unit-modulus `c` with `numer = c * denom`, taking `c` from the first
/// index where `denom` is nonzero and checking it at every index.
pub fn extract_unit_ratio<S: Scalar>(
    numer: &[S],
    denom: &[S],
    policy: &ScalarPolicy,
) -> Result<UnitRatio<S>> {
    if numer.is_empty() || numer.len() != denom.len() {
        return Err(Error::contract(format!(
            "ratio sequences must be nonempty and of equal length, got {} and {}",
            numer.len(),
            denom.len()
        )));
    }
    let scale = sequence_scale(numer, denom);
    let Some(k) = denom.iter().position(|d| !policy.is_zero(d, scale)) else {
        return Ok(if numer.iter().all(|n| policy.is_zero(n, scale)) {
            UnitRatio::Any
        } else {
            UnitRatio::Absent
        });
    };
    let c = numer[k]
        .checked_div(&denom[k])
        .expect("denominator is nonzero");
    if is_unit_modulus(&c, policy) && holds_with(numer, denom, &c, policy, scale) {
        Ok(UnitRatio::Unit(c))
    } else {
        Ok(UnitRatio::Absent)
    }
}

fn near_miss<S: Scalar>(
    condition: &str,
    numer: &[S],
    denom: &[S],
    candidate: Option<S>,
) -> NearMiss {
    let candidate = candidate.or_else(|| {
        denom
            .iter()
            .position(|d| !d.is_zero())
            .and_then(|k| numer[k].checked_div(&denom[k]))
    });
    let (max_deviation, unit_deviation) = match &candidate {
        Some(c) => (
            numer
                .iter()
                .zip(denom)
                .map(|(n, d)| (n.clone() - c.clone() * d.clone()).abs_f64())
                .fold(0.0, f64::max),
            (S::real_to_f64(&c.modulus_sq()) - 1.0).abs(),
        ),
        None => (max_abs(numer), f64::NAN),
    };
    NearMiss {
        condition: condition.to_string(),
        candidate: candidate.map(|c| {
            let c = c.to_c64();
            (c.re, c.im)
        }),
        max_deviation,
        unit_deviation,
    }
}

fn violation<S: Scalar>(
    message: String,
    report: &NormalityReport<S>,
    near_misses: Vec<NearMiss>,
) -> Error {
    Error::TheoremViolation(Box::new(Diagnostic {
        message,
        max_residual: report.max_residual.clone(),
        worst_pair: Some(report.worst_pair),
        oracle_norm: report.oracle_norm.clone(),
        agrees: report.agrees,
        near_misses,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NotNormal,
    /// Every off-diagonal entry is zero.
    Degenerate,
    Classified,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NotNormal => "NotNormal",
            Verdict::Degenerate => "Degenerate",
            Verdict::Classified => "Classified",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult<S> {
    pub verdict: Verdict,
    /// `alpha0` of `a_{-k} = alpha0 * conj(a_k)`.
    pub type_i: Option<S>,
    /// `beta0` of `a_{-k} = beta0 * a_{N+1-k}`.
    pub type_ii: Option<S>,
}

impl<S: Scalar> ClassificationResult<S> {
    fn bare(verdict: Verdict) -> Self {
        Self {
            verdict,
            type_i: None,
            type_ii: None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.verdict == Verdict::Degenerate
    }

    /// Same verdict and the same witnesses, compared under `policy`.
    pub fn same_witnesses(&self, other: &Self, policy: &ScalarPolicy) -> bool {
        let same = |a: &Option<S>, b: &Option<S>| match (a, b) {
            (None, None) => true,
            (Some(x), Some(y)) => policy.eq(x, y, 1.0),
            _ => false,
        };
        self.verdict == other.verdict
            && same(&self.type_i, &other.type_i)
            && same(&self.type_ii, &other.type_ii)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "type_I": self.type_i.as_ref().map(S::to_json),
            "type_II": self.type_ii.as_ref().map(S::to_json),
            "degenerate": self.is_degenerate(),
        })
    }
}

/// Every off-diagonal entry is zero under `policy`.
pub fn is_degenerate<S: Scalar>(spec: &ToeplitzSpec<S>, policy: &ScalarPolicy) -> bool {
    spec.lower()
        .iter()
        .chain(spec.upper().iter())
        .all(|a| policy.is_zero(a, 0.0))
}

/// The vectors compared by the type I and type II conditions: `a_{-1..-N}`,
/// `conj(a_{1..N})` and `a_{N..1}`.
fn condition_vectors<S: Scalar>(spec: &ToeplitzSpec<S>) -> (Vec<S>, Vec<S>, Vec<S>) {
    let upper = spec.upper();
    let conj_lower = spec.lower().iter().map(S::conj).collect();
    let reversed_lower = spec.lower().iter().rev().cloned().collect();
    (upper, conj_lower, reversed_lower)
}

/// Classifies by testing the ratio conditions directly.
pub fn classify_complex<S: Scalar>(
    spec: &ToeplitzSpec<S>,
    policy: &ScalarPolicy,
) -> Result<ClassificationResult<S>> {
    let report = normality::check(spec, policy);
    if !report.is_normal_fast {
        return Ok(ClassificationResult::bare(Verdict::NotNormal));
    }
    if is_degenerate(spec, policy) {
        return Ok(ClassificationResult::bare(Verdict::Degenerate));
    }
    let (upper, conj_lower, reversed_lower) = condition_vectors(spec);
    let type_i = extract_unit_ratio(&upper, &conj_lower, policy)?.unit();
    let type_ii = extract_unit_ratio(&upper, &reversed_lower, policy)?.unit();
    if type_i.is_none() && type_ii.is_none() {
        return Err(violation(
            "normal spec satisfies neither the type I nor the type II condition".into(),
            &report,
            vec![
                near_miss("type I", &upper, &conj_lower, None),
                near_miss("type II", &upper, &reversed_lower, None),
            ],
        ));
    }
    Ok(ClassificationResult {
        verdict: Verdict::Classified,
        type_i,
        type_ii,
    })
}

/// Intermediate values of the constructive route at the chosen sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofTrace<S> {
    /// Angle of `z0`.
    pub x0: f64,
    /// `e^{i x0}`; exact for exact scalars because sample points are rational.
    pub z0: S,
    pub s_at_x0: S,
    pub t_at_x0: S,
    /// `s(x0) / t(x0)`.
    pub alpha: S,
    /// `t(x0) / conj(t(x0))`.
    pub beta: S,
    /// `alpha * beta`, the type I candidate.
    pub derived_alpha0: S,
    /// `conj(alpha) * z0^{N+1}`, the type II candidate.
    pub derived_beta0: S,
}

impl<S: Scalar> ProofTrace<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "x0": self.x0,
            "z0": self.z0.to_json(),
            "s_at_x0": self.s_at_x0.to_json(),
            "t_at_x0": self.t_at_x0.to_json(),
            "alpha": self.alpha.to_json(),
            "beta": self.beta.to_json(),
            "derived_alpha0": self.derived_alpha0.to_json(),
            "derived_beta0": self.derived_beta0.to_json(),
        })
    }
}

/// Evaluates the constructive step at the unit-modulus point `z0`.
/// Returns `None` when `t(z0)` is exactly zero.
pub fn proof_step<S: Scalar>(spec: &ToeplitzSpec<S>, z0: &S) -> Option<ProofTrace<S>> {
    let (s, t) = polyid::trig_coeffs(spec);
    let s_at = s.eval_at_unit(z0);
    let t_at = t.eval_at_unit(z0);
    let alpha = s_at.checked_div(&t_at)?;
    let beta = t_at.checked_div(&t_at.conj())?;
    let derived_alpha0 = alpha.clone() * beta.clone();
    let derived_beta0 = alpha.conj() * z0.powu(spec.order() as u32 + 1);
    Some(ProofTrace {
        x0: angle_of(z0),
        z0: z0.clone(),
        s_at_x0: s_at,
        t_at_x0: t_at,
        alpha,
        beta,
        derived_alpha0,
        derived_beta0,
    })
}

/// Number of sample points scanned for `x0`.
pub fn sample_count(order: usize) -> usize {
    4 * (order + 1)
}

/// Classifies through the constructive route. Non-normal input yields
/// `NotNormal` with no trace; degenerate input yields `Degenerate` with no trace.
pub fn classify_via_proof<S: Scalar>(
    spec: &ToeplitzSpec<S>,
    policy: &ScalarPolicy,
) -> Result<(ClassificationResult<S>, Option<ProofTrace<S>>)> {
    if !normality::is_normal(spec, policy) {
        return Ok((ClassificationResult::bare(Verdict::NotNormal), None));
    }
    let (_, t) = polyid::trig_coeffs(spec);
    let grid = S::unit_grid(sample_count(spec.order()));
    let mut best: Option<(S::Real, &S, S)> = None;
    for z in &grid {
        let value = t.eval_at_unit(z);
        let size = value.modulus_sq();
        if best.as_ref().is_none_or(|(b, _, _)| size > *b) {
            best = Some((size, z, value));
        }
    }
    let (_, z0, t_at) = best.expect("grid is nonempty");
    let linear_scale = spec.order() as f64 * spec.max_abs();
    if policy.is_zero(&t_at, linear_scale) {
        return Ok((ClassificationResult::bare(Verdict::Degenerate), None));
    }
    let trace = proof_step(spec, z0).expect("t(z0) is nonzero");

    let (upper, conj_lower, reversed_lower) = condition_vectors(spec);
    let scale = sequence_scale(&upper, spec.lower());
    let verify = |denom: &[S], c: &S| {
        is_unit_modulus(c, policy) && holds_with(&upper, denom, c, policy, scale)
    };
    let type_i = verify(&conj_lower, &trace.derived_alpha0).then(|| trace.derived_alpha0.clone());
    let type_ii =
        verify(&reversed_lower, &trace.derived_beta0).then(|| trace.derived_beta0.clone());
    if type_i.is_none() && type_ii.is_none() {
        let report = normality::check(spec, policy);
        return Err(violation(
            format!("neither candidate from x0 = {} verifies", trace.x0),
            &report,
            vec![
                near_miss(
                    "type I",
                    &upper,
                    &conj_lower,
                    Some(trace.derived_alpha0.clone()),
                ),
                near_miss(
                    "type II",
                    &upper,
                    &reversed_lower,
                    Some(trace.derived_beta0.clone()),
                ),
            ],
        ));
    }
    Ok((
        ClassificationResult {
            verdict: Verdict::Classified,
            type_i,
            type_ii,
        },
        Some(trace),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RealLabel {
    Symmetric,
    SkewSymmetric,
    Circulant,
    SkewCirculant,
}

impl RealLabel {
    pub const ALL: [RealLabel; 4] = [
        RealLabel::Symmetric,
        RealLabel::SkewSymmetric,
        RealLabel::Circulant,
        RealLabel::SkewCirculant,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RealLabel::Symmetric => "symmetric",
            RealLabel::SkewSymmetric => "skew_symmetric",
            RealLabel::Circulant => "circulant",
            RealLabel::SkewCirculant => "skew_circulant",
        }
    }

    /// Whether the label compares against the reversed lower diagonals.
    fn reversed(self) -> bool {
        matches!(self, RealLabel::Circulant | RealLabel::SkewCirculant)
    }

    fn negated(self) -> bool {
        matches!(self, RealLabel::SkewSymmetric | RealLabel::SkewCirculant)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealClassificationResult {
    pub verdict: Verdict,
    /// In [`RealLabel::ALL`] order.
    pub labels: Vec<RealLabel>,
}

impl RealClassificationResult {
    pub fn label_names(&self) -> Vec<&'static str> {
        self.labels.iter().map(|l| l.as_str()).collect()
    }
}

/// Labels of a real spec whose defining vector equality holds, regardless of normality.
pub fn real_labels<S: Scalar>(spec: &ToeplitzSpec<S>, policy: &ScalarPolicy) -> Vec<RealLabel> {
    let upper = spec.upper();
    let scale = spec.max_abs();
    RealLabel::ALL
        .into_iter()
        .filter(|label| {
            let lower: Vec<S> = if label.reversed() {
                spec.lower().iter().rev().cloned().collect()
            } else {
                spec.lower().to_vec()
            };
            upper.iter().zip(&lower).all(|(u, l)| {
                let rhs = if label.negated() {
                    -l.clone()
                } else {
                    l.clone()
                };
                policy.eq(u, &rhs, scale)
            })
        })
        .collect()
}

/// Four-way classification of a real spec.
pub fn classify_real<S: Scalar>(
    spec: &ToeplitzSpec<S>,
    policy: &ScalarPolicy,
) -> Result<RealClassificationResult> {
    if !spec.is_real() {
        return Err(Error::contract(
            "real classification needs entries with zero imaginary part",
        ));
    }
    let report = normality::check(spec, policy);
    if !report.is_normal_fast {
        return Ok(RealClassificationResult {
            verdict: Verdict::NotNormal,
            labels: vec![],
        });
    }
    let labels = real_labels(spec, policy);
    if is_degenerate(spec, policy) {
        // every label holds vacuously
        return Ok(RealClassificationResult {
            verdict: Verdict::Degenerate,
            labels,
        });
    }
    if labels.is_empty() {
        let upper = spec.upper();
        let lower = spec.lower().to_vec();
        let reversed: Vec<S> = lower.iter().rev().cloned().collect();
        let one = S::one();
        let minus_one = -S::one();
        return Err(violation(
            "real normal spec carries none of the four labels".into(),
            &report,
            vec![
                near_miss("symmetric", &upper, &lower, Some(one.clone())),
                near_miss("skew-symmetric", &upper, &lower, Some(minus_one.clone())),
                near_miss("circulant", &upper, &reversed, Some(one)),
                near_miss("skew-circulant", &upper, &reversed, Some(minus_one)),
            ],
        ));
    }
    Ok(RealClassificationResult {
        verdict: Verdict::Classified,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactComplex;
    use num::complex::Complex64;
    use num::BigRational;

    fn z(re: i64, im: i64) -> ExactComplex {
        ExactComplex::from_i64(re, im)
    }

    /// Spec from `a_1..a_N` and `a_{-1}..a_{-N}`.
    fn parts(lower: &[(i64, i64)], upper: &[(i64, i64)]) -> ToeplitzSpec<ExactComplex> {
        let l: Vec<_> = lower.iter().map(|&(a, b)| z(a, b)).collect();
        let u: Vec<_> = upper.iter().map(|&(a, b)| z(a, b)).collect();
        ToeplitzSpec::from_parts(&l, &u, z(0, 0)).unwrap()
    }

    fn real(lower: &[i64], upper: &[i64]) -> ToeplitzSpec<ExactComplex> {
        let l: Vec<_> = lower.iter().map(|&a| (a, 0)).collect();
        let u: Vec<_> = upper.iter().map(|&a| (a, 0)).collect();
        parts(&l, &u)
    }

    #[test]
    fn unit_ratio_examples() {
        let p = ScalarPolicy::exact();
        let r = extract_unit_ratio(&[z(0, 1), z(0, 2)], &[z(1, 0), z(2, 0)], &p).unwrap();
        assert_eq!(r, UnitRatio::Unit(z(0, 1)));
        let r = extract_unit_ratio(&[z(0, 1), z(0, 2)], &[z(2, 0), z(1, 0)], &p).unwrap();
        assert_eq!(r, UnitRatio::Absent);
        let r = extract_unit_ratio(&[z(0, 0), z(0, 0)], &[z(0, 0), z(0, 0)], &p).unwrap();
        assert_eq!(r, UnitRatio::Any);
    }

    #[test]
    fn unit_ratio_zero_denominators_force_zero_numerators() {
        let p = ScalarPolicy::exact();
        let r = extract_unit_ratio(&[z(0, 0), z(1, 0)], &[z(0, 0), z(1, 0)], &p).unwrap();
        assert_eq!(r, UnitRatio::Unit(z(1, 0)));
        let r = extract_unit_ratio(&[z(1, 0), z(1, 0)], &[z(0, 0), z(1, 0)], &p).unwrap();
        assert_eq!(r, UnitRatio::Absent);
        let r = extract_unit_ratio(&[z(1, 0), z(0, 0)], &[z(0, 0), z(0, 0)], &p).unwrap();
        assert_eq!(r, UnitRatio::Absent);
        assert!(matches!(
            extract_unit_ratio(&[z(1, 0)], &[], &p),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn complex_examples() {
        let p = ScalarPolicy::exact();
        let r = classify_complex(&parts(&[(1, 0), (2, 0)], &[(0, 1), (0, 2)]), &p).unwrap();
        assert_eq!(r.verdict, Verdict::Classified);
        assert_eq!(r.type_i, Some(z(0, 1)));
        assert_eq!(r.type_ii, None);

        let r = classify_complex(&parts(&[(1, 0)], &[(0, 1)]), &p).unwrap();
        assert_eq!(r.type_i, Some(z(0, 1)));
        assert_eq!(r.type_ii, Some(z(0, 1)));

        let r = classify_complex(&real(&[1], &[2]), &p).unwrap();
        assert_eq!(r.verdict, Verdict::NotNormal);

        let r = classify_complex(
            &ToeplitzSpec::<ExactComplex>::zero(3)
                .unwrap()
                .with_a0(z(4, 4)),
            &p,
        )
        .unwrap();
        assert!(r.is_degenerate());
        assert!(r.type_i.is_none() && r.type_ii.is_none());
    }

    #[test]
    fn proof_step_at_zero_angle() {
        let spec = parts(&[(1, 0), (2, 0)], &[(0, 1), (0, 2)]);
        let trace = proof_step(&spec, &ExactComplex::one()).unwrap();
        assert_eq!(trace.x0, 0.0);
        assert_eq!(trace.s_at_x0, z(3, 0));
        assert_eq!(trace.t_at_x0, z(0, 3));
        assert_eq!(trace.alpha, z(0, -1));
        assert_eq!(trace.beta, z(-1, 0));
        assert_eq!(trace.derived_alpha0, z(0, 1));
        assert_eq!(trace.derived_beta0, z(0, 1));
    }

    #[test]
    fn proof_route_examples() {
        let p = ScalarPolicy::exact();
        let (r, trace) =
            classify_via_proof(&parts(&[(1, 0), (2, 0)], &[(0, 1), (0, 2)]), &p).unwrap();
        assert_eq!(r.verdict, Verdict::Classified);
        assert_eq!(r.type_i, Some(z(0, 1)));
        assert_eq!(r.type_ii, None);
        assert!(trace.is_some());

        let (r, trace) =
            classify_via_proof(&ToeplitzSpec::<ExactComplex>::zero(2).unwrap(), &p).unwrap();
        assert!(r.is_degenerate());
        assert!(trace.is_none());

        let (r, _) = classify_via_proof(&real(&[1], &[1]), &p).unwrap();
        assert_eq!(r.type_i, Some(z(1, 0)));
        assert_eq!(r.type_ii, Some(z(1, 0)));

        let (r, trace) = classify_via_proof(&real(&[1], &[2]), &p).unwrap();
        assert_eq!(r.verdict, Verdict::NotNormal);
        assert!(trace.is_none());
    }

    #[test]
    fn proof_route_handles_t_vanishing_at_one() {
        // t(1) = a_{-1} + a_{-2} = 0, so the scan has to move off x0 = 0.
        let p = ScalarPolicy::exact();
        let spec = real(&[-1, 1], &[1, -1]);
        let direct = classify_complex(&spec, &p).unwrap();
        let (proof, trace) = classify_via_proof(&spec, &p).unwrap();
        assert_eq!(direct, proof);
        assert_ne!(trace.unwrap().z0, ExactComplex::one());
    }

    #[test]
    fn real_examples() {
        let p = ScalarPolicy::exact();
        let r = classify_real(&real(&[1, 2], &[2, 1]), &p).unwrap();
        assert_eq!(r.labels, vec![RealLabel::Circulant]);
        let r = classify_real(&real(&[1, 2], &[1, 2]), &p).unwrap();
        assert_eq!(r.labels, vec![RealLabel::Symmetric]);
        let r = classify_real(&real(&[1], &[1]), &p).unwrap();
        assert_eq!(r.labels, vec![RealLabel::Symmetric, RealLabel::Circulant]);
        let r = classify_real(&real(&[1, 2], &[-2, -1]), &p).unwrap();
        assert_eq!(r.labels, vec![RealLabel::SkewCirculant]);
        let r = classify_real(&real(&[1], &[2]), &p).unwrap();
        assert_eq!(r.verdict, Verdict::NotNormal);
        assert!(r.labels.is_empty());
    }

    #[test]
    fn real_degenerate_carries_every_label() {
        let r = classify_real(&real(&[0, 0], &[0, 0]), &ScalarPolicy::exact()).unwrap();
        assert_eq!(r.verdict, Verdict::Degenerate);
        assert_eq!(r.labels, RealLabel::ALL.to_vec());
    }

    #[test]
    fn real_rejects_complex_entries() {
        let r = classify_real(&parts(&[(1, 0)], &[(0, 1)]), &ScalarPolicy::exact());
        assert!(matches!(r, Err(Error::Contract(_))));
    }

    #[test]
    fn loose_tolerance_reports_violation_with_margins() {
        // |a_{-2} / a_1| = 0.995 is within 5e-3 for the normality residuals but
        // not for the unit-modulus test, so no witness survives.
        let skewed = ToeplitzSpec::from_parts(
            &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            &[Complex64::new(0.0, 0.0), Complex64::new(0.995, 0.0)],
            Complex64::new(0.0, 0.0),
        )
        .unwrap();
        let loose = ScalarPolicy::approx().with_eps_rel(5e-3).unwrap();
        assert!(normality::is_normal(&skewed, &loose));
        match classify_complex(&skewed, &loose) {
            Err(Error::TheoremViolation(d)) => {
                assert_eq!(d.near_misses.len(), 2);
                assert!(d.near_misses[1].unit_deviation > 5e-3);
            }
            other => panic!("expected a theorem violation, got {other:?}"),
        }
    }

    #[test]
    fn real_positive_scaling_keeps_witnesses() {
        let p = ScalarPolicy::exact();
        let spec = parts(&[(1, 2), (3, -1)], &[(2, 1), (-1, 3)]);
        let c = ExactComplex::from_real(BigRational::new(7.into(), 3.into()));
        let a = classify_complex(&spec, &p).unwrap();
        let b = classify_complex(&spec.scaled(&c), &p).unwrap();
        assert_eq!(a, b);
    }
}
