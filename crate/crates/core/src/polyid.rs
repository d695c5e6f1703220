//! Polynomial forms of the normality condition.
//!
//! Complex case: `s(x) = sum a_k e^{ikx}` and `t(x) = sum a_{-k} e^{-ikx}`
//! for `k = 1..N`. Summing the element-wise condition against
//! `e^{imx} e^{-iny}` gives
//!
//! ```text
//! s(x) conj(s(y)) - conj(t(x)) t(y)
//!     + (conj(s(x)) s(y) - t(x) conj(t(y))) e^{i(N+1)(x-y)} = 0,
//! ```
//!
//! and on the diagonal `x = y` this is `|s(x)| = |t(x)|`.
//!
//! Real case: `p(x) = sum a_k x^k`, `q(x) = sum a_{-k} x^k` and their
//! reciprocals `p~(x) = x^{N+1} p(1/x)`, `q~(x) = x^{N+1} q(1/x)`. Normality
//! is `p(x)p(y) - q(x)q(y) + p~(x)p~(y) - q~(x)q~(y) = 0` coefficient-wise,
//! which forces `p p~ = q q~` and `(p^2 - q^2)(p^2 - q~^2) = 0`.
//!
//! Formal identities are checked on coefficients. Point evaluation is only a
//! numerical cross-check: `e^{ix}` is irrational at most rational angles.

use num::complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::normality;
use crate::scalar::{Scalar, ScalarPolicy};
use crate::toeplitz::ToeplitzSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreqSign {
    /// Coefficient `k` multiplies `e^{ikx}` (or `x^k`).
    Positive,
    /// Coefficient `k` multiplies `e^{-ikx}`.
    Negative,
}

/// Dense polynomial whose first stored coefficient has degree `offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffPoly<S> {
    offset: usize,
    coeffs: Vec<S>,
    tag: FreqSign,
}

impl<S: Scalar> CoeffPoly<S> {
    pub fn new(offset: usize, coeffs: Vec<S>, tag: FreqSign) -> Self {
        Self {
            offset,
            coeffs,
            tag,
        }
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn tag(&self) -> FreqSign {
        self.tag
    }

    /// Coefficient of degree `d`, zero outside the stored window.
    pub fn coeff(&self, d: usize) -> S {
        d.checked_sub(self.offset)
            .and_then(|i| self.coeffs.get(i))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    /// Reverses the coefficient window. With offset 1 and length N this is
    /// `x^{N+1} P(1/x)`.
    pub fn reciprocal(&self) -> Self {
        Self {
            offset: self.offset,
            coeffs: self.coeffs.iter().rev().cloned().collect(),
            tag: self.tag,
        }
    }

    /// Horner evaluation at `x`, including the `x^offset` factor. Ignores the tag.
    pub fn eval_alg(&self, x: &S) -> S {
        let inner = self
            .coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone());
        inner * x.powu(self.offset as u32)
    }

    /// Trigonometric evaluation at the unit-modulus point `z = e^{ix}`:
    /// powers of `z` for a positive tag, of `conj(z) = e^{-ix}` for a negative one.
    pub fn eval_at_unit(&self, z: &S) -> S {
        match self.tag {
            FreqSign::Positive => self.eval_alg(z),
            FreqSign::Negative => self.eval_alg(&z.conj()),
        }
    }

    /// Convolution product.
    pub fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::new(self.offset + rhs.offset, vec![], FreqSign::Positive);
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(self.offset + rhs.offset, out, FreqSign::Positive)
    }

    /// Difference over the union of both windows.
    pub fn sub(&self, rhs: &Self) -> Self {
        let lo = self.offset.min(rhs.offset);
        let hi = (self.offset + self.coeffs.len()).max(rhs.offset + rhs.coeffs.len());
        let coeffs = (lo..hi).map(|d| self.coeff(d) - rhs.coeff(d)).collect();
        Self::new(lo, coeffs, self.tag)
    }

    pub fn is_zero_under(&self, policy: &ScalarPolicy, scale: f64) -> bool {
        self.coeffs.iter().all(|c| policy.is_zero(c, scale))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree_offset": self.offset,
            "coeffs": self.coeffs.iter().map(S::to_json).collect::<Vec<_>>(),
            "tag": match self.tag { FreqSign::Positive => "pos", FreqSign::Negative => "neg" },
        })
    }
}

/// `s` (coefficients `a_1..a_N`, positive frequencies) and `t`
/// (coefficients `a_{-1}..a_{-N}`, negative frequencies).
pub fn trig_coeffs<S: Scalar>(spec: &ToeplitzSpec<S>) -> (CoeffPoly<S>, CoeffPoly<S>) {
    (
        CoeffPoly::new(1, spec.lower().to_vec(), FreqSign::Positive),
        CoeffPoly::new(1, spec.upper(), FreqSign::Negative),
    )
}

/// Evaluates a trigonometric polynomial at the real angle `x` in double precision.
pub fn eval_trig<S: Scalar>(poly: &CoeffPoly<S>, x: f64) -> Complex64 {
    let approx = CoeffPoly::new(
        poly.offset,
        poly.coeffs.iter().map(S::to_c64).collect(),
        poly.tag,
    );
    approx.eval_at_unit(&Complex64::from_polar(1.0, x))
}

/// Two-variable identity evaluated at the unit points `zx = e^{ix}`, `zy = e^{iy}`.
pub fn identity8_at<S: Scalar>(spec: &ToeplitzSpec<S>, zx: &S, zy: &S) -> S {
    let (s, t) = trig_coeffs(spec);
    let (sx, sy) = (s.eval_at_unit(zx), s.eval_at_unit(zy));
    let (tx, ty) = (t.eval_at_unit(zx), t.eval_at_unit(zy));
    let phase = (zx.clone() * zy.conj()).powu(spec.order() as u32 + 1);
    sx.clone() * sy.conj() - tx.conj() * ty.clone() + (sx.conj() * sy - tx * ty.conj()) * phase
}

/// Two-variable identity at real angles, in double precision.
pub fn identity8_residual<S: Scalar>(spec: &ToeplitzSpec<S>, x: f64, y: f64) -> Complex64 {
    identity8_at(
        &spec.map(S::to_c64),
        &Complex64::from_polar(1.0, x),
        &Complex64::from_polar(1.0, y),
    )
}

/// `|s|^2 - |t|^2` at the unit point `z`.
pub fn identity9_at<S: Scalar>(spec: &ToeplitzSpec<S>, z: &S) -> S::Real {
    let (s, t) = trig_coeffs(spec);
    s.eval_at_unit(z).modulus_sq() - t.eval_at_unit(z).modulus_sq()
}

/// `|s(x)|^2 - |t(x)|^2` in double precision.
pub fn identity9_residual<S: Scalar>(spec: &ToeplitzSpec<S>, x: f64) -> f64 {
    identity9_at(&spec.map(S::to_c64), &Complex64::from_polar(1.0, x))
}

/// Natural size of the sampled identities: `N^2 * max|a_k|^2`.
pub fn identity_scale<S: Scalar>(spec: &ToeplitzSpec<S>) -> f64 {
    let n = spec.order() as f64;
    let m = spec.max_abs();
    n * n * m * m
}

/// Checks the two-variable identity as a formal identity. The coefficient of
/// `e^{imx} e^{-iny}` is exactly the `(m, n)` normality residual, so this is
/// the element-wise normality test.
pub fn identity8_coefficient_check<S: Scalar>(
    spec: &ToeplitzSpec<S>,
    policy: &ScalarPolicy,
) -> bool {
    normality::is_normal(spec, policy)
}

/// `p`, `q` and their reciprocals.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgPolys<S> {
    pub p: CoeffPoly<S>,
    pub q: CoeffPoly<S>,
    pub p_rec: CoeffPoly<S>,
    pub q_rec: CoeffPoly<S>,
}

fn require_real<S: Scalar>(spec: &ToeplitzSpec<S>) -> Result<()> {
    if spec.is_real() {
        Ok(())
    } else {
        Err(Error::contract(
            "algebraic polynomials need entries with zero imaginary part",
        ))
    }
}

pub fn alg_polys<S: Scalar>(spec: &ToeplitzSpec<S>) -> Result<AlgPolys<S>> {
    require_real(spec)?;
    let p = CoeffPoly::new(1, spec.lower().to_vec(), FreqSign::Positive);
    let q = CoeffPoly::new(1, spec.upper(), FreqSign::Positive);
    Ok(AlgPolys {
        p_rec: p.reciprocal(),
        q_rec: q.reciprocal(),
        p,
        q,
    })
}

/// `p^2 - q^2` and `p^2 - q~^2`, supported on degrees `2..=2N`.
pub fn factor_polys<S: Scalar>(spec: &ToeplitzSpec<S>) -> Result<(CoeffPoly<S>, CoeffPoly<S>)> {
    let AlgPolys { p, q, q_rec, .. } = alg_polys(spec)?;
    let p2 = p.mul(&p);
    Ok((p2.sub(&q.mul(&q)), p2.sub(&q_rec.mul(&q_rec))))
}

/// Checks `p(x)p(y) - q(x)q(y) + p~(x)p~(y) - q~(x)q~(y) = 0` coefficient by
/// coefficient in `x^m y^n`.
pub fn identity14_check<S: Scalar>(spec: &ToeplitzSpec<S>, policy: &ScalarPolicy) -> Result<bool> {
    let AlgPolys { p, q, p_rec, q_rec } = alg_polys(spec)?;
    let scale = normality::residual_scale(spec);
    let order = spec.order();
    Ok((1..=order).all(|m| {
        (1..=order).all(|n| {
            let c = p.coeff(m) * p.coeff(n) - q.coeff(m) * q.coeff(n)
                + p_rec.coeff(m) * p_rec.coeff(n)
                - q_rec.coeff(m) * q_rec.coeff(n);
            policy.is_zero(&c, scale)
        })
    }))
}

/// `p p~ = q q~` coefficient-wise.
pub fn crossing_relation_holds<S: Scalar>(
    spec: &ToeplitzSpec<S>,
    policy: &ScalarPolicy,
) -> Result<bool> {
    let AlgPolys { p, q, p_rec, q_rec } = alg_polys(spec)?;
    let diff = p.mul(&p_rec).sub(&q.mul(&q_rec));
    Ok(diff.is_zero_under(policy, normality::residual_scale(spec)))
}

/// One of `p^2 - q^2`, `p^2 - q~^2` vanishes identically, and `p p~ = q q~`.
/// For a normal real spec a `false` here is a theorem violation.
pub fn identity16_holds<S: Scalar>(spec: &ToeplitzSpec<S>, policy: &ScalarPolicy) -> Result<bool> {
    let (f1, f2) = factor_polys(spec)?;
    let scale = normality::residual_scale(spec);
    let factor_vanishes = f1.is_zero_under(policy, scale) || f2.is_zero_under(policy, scale);
    Ok(factor_vanishes && crossing_relation_holds(spec, policy)?)
}
