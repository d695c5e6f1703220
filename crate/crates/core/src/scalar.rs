//! Arithmetic domains and the tolerance policy.
//!
//! Two scalar types implement [`Scalar`]: [`ExactComplex`] (Gaussian rationals
//! over arbitrary-precision integers, closed under every field operation) and
//! [`Complex64`]. Real inputs are represented as scalars with zero imaginary
//! part; conjugation is the identity on them.
//!
//! How equality is judged is decided by the [`ScalarPolicy`], not by the type:
//! an exact policy compares literally, an approximate policy compares
//! magnitudes against `max(eps_rel * scale, eps_abs_floor)`. Every caller
//! supplies the `scale` that is natural for the quantity it tests.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::{BigRational, Complex, One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Gaussian rational: complex number with rational real and imaginary parts.
pub type ExactComplex = Complex<BigRational>;

/// A field element with conjugation.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// The real subdomain, home of moduli and real parts.
    type Real: Clone
        + fmt::Debug
        + PartialOrd
        + Send
        + Sync
        + Add<Output = Self::Real>
        + Sub<Output = Self::Real>
        + Zero
        + One;

    /// Whether arithmetic on this type is closed with no rounding.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(re: i64, im: i64) -> Self;
    fn from_real(r: Self::Real) -> Self;

    fn conj(&self) -> Self;
    fn modulus_sq(&self) -> Self::Real;
    fn real_part(&self) -> Self::Real;
    fn imag_part(&self) -> Self::Real;
    fn is_zero(&self) -> bool;

    /// `None` when dividing by zero.
    fn checked_div(&self, rhs: &Self) -> Option<Self>;

    fn to_c64(&self) -> Complex64;
    fn real_to_f64(r: &Self::Real) -> f64;

    /// Wraps a squared norm for reporting. Exact types keep the square so
    /// the value stays rational.
    fn magnitude_from_sq(sq: Self::Real) -> Magnitude;

    /// `count` distinct unit-modulus points, starting with 1. Exact types
    /// draw them from rational points on the unit circle.
    fn unit_grid(count: usize) -> Vec<Self>;

    fn to_json(&self) -> Value;
    fn from_json(value: &Value) -> Result<Self>;

    fn default_policy() -> ScalarPolicy;

    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }

    fn imag_is_zero(&self) -> bool {
        self.imag_part().is_zero()
    }

    /// Integer power by repeated squaring.
    fn powu(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for ExactComplex {
    type Real = BigRational;
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }

    fn from_i64(re: i64, im: i64) -> Self {
        Complex::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    fn from_real(r: BigRational) -> Self {
        Complex::new(r, BigRational::zero())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn modulus_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn real_part(&self) -> BigRational {
        self.re.clone()
    }

    fn imag_part(&self) -> BigRational {
        self.im.clone()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if Scalar::is_zero(rhs) {
            return None;
        }
        let denom = rhs.modulus_sq();
        let num = self * Complex::conj(rhs);
        Some(Complex::new(num.re / &denom, num.im / denom))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn real_to_f64(r: &BigRational) -> f64 {
        rational_to_f64(r)
    }

    fn magnitude_from_sq(sq: BigRational) -> Magnitude {
        Magnitude::ExactSquared(sq)
    }

    fn unit_grid(count: usize) -> Vec<Self> {
        exact_unit_grid(count)
    }

    fn to_json(&self) -> Value {
        json!({ "re": self.re.to_string(), "im": self.im.to_string() })
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::String(s) => Ok(Self::from_real(parse_fraction(s)?)),
            Value::Object(map) => {
                let part = |key: &str| -> Result<BigRational> {
                    match map.get(key) {
                        Some(Value::String(s)) => parse_fraction(s),
                        Some(other) => Err(Error::malformed(format!(
                            "exact scalar component `{key}` must be a fraction string, got {other}"
                        ))),
                        None => Err(Error::malformed(format!("scalar is missing `{key}`"))),
                    }
                };
                Ok(Complex::new(part("re")?, part("im")?))
            }
            other => Err(Error::malformed(format!("not an exact scalar: {other}"))),
        }
    }

    fn default_policy() -> ScalarPolicy {
        ScalarPolicy::exact()
    }
}

impl Scalar for Complex64 {
    type Real = f64;
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(re: i64, im: i64) -> Self {
        Complex64::new(re as f64, im as f64)
    }

    fn from_real(r: f64) -> Self {
        Complex64::new(r, 0.0)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn modulus_sq(&self) -> f64 {
        self.norm_sqr()
    }

    fn real_part(&self) -> f64 {
        self.re
    }

    fn imag_part(&self) -> f64 {
        self.im
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if Scalar::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn real_to_f64(r: &f64) -> f64 {
        *r
    }

    fn magnitude_from_sq(sq: f64) -> Magnitude {
        Magnitude::Norm(sq.max(0.0).sqrt())
    }

    fn unit_grid(count: usize) -> Vec<Self> {
        (0..count)
            .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / count as f64))
            .collect()
    }

    fn to_json(&self) -> Value {
        json!({ "re": self.re, "im": self.im })
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::Number(n) => Ok(Complex64::new(json_f64(n)?, 0.0)),
            Value::Object(map) => {
                let part = |key: &str| -> Result<f64> {
                    match map.get(key) {
                        Some(Value::Number(n)) => json_f64(n),
                        Some(other) => Err(Error::malformed(format!(
                            "approximate scalar component `{key}` must be a number, got {other}"
                        ))),
                        None => Err(Error::malformed(format!("scalar is missing `{key}`"))),
                    }
                };
                Ok(Complex64::new(part("re")?, part("im")?))
            }
            other => Err(Error::malformed(format!(
                "not an approximate scalar: {other}"
            ))),
        }
    }

    fn default_policy() -> ScalarPolicy {
        ScalarPolicy::approx()
    }
}

fn json_f64(n: &serde_json::Number) -> Result<f64> {
    n.as_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::malformed(format!("number {n} is not a finite double")))
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"` or `"p"`. Decimal notation is rejected.
pub fn parse_fraction(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::malformed(format!("`{s}` is not a fraction of integers"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::malformed(format!("`{s}` has a zero denominator")));
    }
    Ok(BigRational::new(num, den))
}

/// Exact-or-approximate nonnegative size of a quantity.
#[derive(Debug, Clone, PartialEq)]
pub enum Magnitude {
    /// An ordinary norm.
    Norm(f64),
    /// The square of a norm, kept exact.
    ExactSquared(BigRational),
}

impl Magnitude {
    pub fn is_zero(&self) -> bool {
        match self {
            Magnitude::Norm(v) => *v == 0.0,
            Magnitude::ExactSquared(v) => v.is_zero(),
        }
    }

    /// Plain (unsquared) norm as a double.
    pub fn norm_f64(&self) -> f64 {
        match self {
            Magnitude::Norm(v) => *v,
            Magnitude::ExactSquared(v) => rational_to_f64(v).sqrt(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Magnitude::Norm(v) => json!(v),
            Magnitude::ExactSquared(v) => json!({ "norm_sq": v.to_string() }),
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Norm(v) => write!(f, "{v:.3e}"),
            Magnitude::ExactSquared(v) => write!(f, "norm^2 = {v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarPolicy {
    pub mode: Mode,
    pub eps_rel: f64,
    pub eps_abs_floor: f64,
}

impl Default for ScalarPolicy {
    fn default() -> Self {
        Self::approx()
    }
}

impl ScalarPolicy {
    pub const DEFAULT_EPS_REL: f64 = 1e-10;
    pub const DEFAULT_EPS_ABS_FLOOR: f64 = 1e-12;

    pub fn exact() -> Self {
        Self {
            mode: Mode::Exact,
            eps_rel: Self::DEFAULT_EPS_REL,
            eps_abs_floor: Self::DEFAULT_EPS_ABS_FLOOR,
        }
    }

    pub fn approx() -> Self {
        Self {
            mode: Mode::Approx,
            eps_rel: Self::DEFAULT_EPS_REL,
            eps_abs_floor: Self::DEFAULT_EPS_ABS_FLOOR,
        }
    }

    pub fn with_eps_rel(self, eps_rel: f64) -> Result<Self> {
        if !(eps_rel >= 0.0 && eps_rel.is_finite()) {
            return Err(Error::contract(format!(
                "eps_rel must be finite and nonnegative, got {eps_rel}"
            )));
        }
        Ok(Self { eps_rel, ..self })
    }

    pub fn with_eps_abs_floor(self, eps_abs_floor: f64) -> Result<Self> {
        if !(eps_abs_floor >= 0.0 && eps_abs_floor.is_finite()) {
            return Err(Error::contract(format!(
                "eps_abs_floor must be finite and nonnegative, got {eps_abs_floor}"
            )));
        }
        Ok(Self {
            eps_abs_floor,
            ..self
        })
    }

    pub fn is_exact(&self) -> bool {
        self.mode == Mode::Exact
    }

    /// Largest magnitude still treated as zero for a quantity of natural size `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        (self.eps_rel * scale).max(self.eps_abs_floor)
    }

    pub fn is_zero<S: Scalar>(&self, z: &S, scale: f64) -> bool {
        match self.mode {
            Mode::Exact => z.is_zero(),
            Mode::Approx => z.abs_f64() <= self.threshold(scale),
        }
    }

    pub fn is_real_zero<S: Scalar>(&self, r: &S::Real, scale: f64) -> bool {
        match self.mode {
            Mode::Exact => r.is_zero(),
            Mode::Approx => S::real_to_f64(r).abs() <= self.threshold(scale),
        }
    }

    pub fn eq<S: Scalar>(&self, a: &S, b: &S, scale: f64) -> bool {
        match self.mode {
            Mode::Exact => a == b,
            Mode::Approx => self.is_zero(&(a.clone() - b.clone()), scale),
        }
    }

    /// Zero test for an already-computed magnitude.
    pub fn magnitude_is_zero(&self, m: &Magnitude, scale: f64) -> bool {
        match self.mode {
            Mode::Exact => m.is_zero(),
            Mode::Approx => m.norm_f64() <= self.threshold(scale),
        }
    }
}

pub fn is_unit_modulus<S: Scalar>(z: &S, policy: &ScalarPolicy) -> bool {
    let m = z.modulus_sq();
    match policy.mode {
        Mode::Exact => m == S::Real::one(),
        Mode::Approx => {
            (S::real_to_f64(&m) - 1.0).abs() <= policy.eps_rel.max(policy.eps_abs_floor)
        }
    }
}

/// The point `((1 - u^2) + 2u i) / (1 + u^2)`, which always lies exactly on the unit circle.
pub fn rational_unit_circle(u: &BigRational) -> ExactComplex {
    let one = BigRational::one();
    let u2 = u * u;
    let denom = &one + &u2;
    Complex::new((&one - &u2) / &denom, (u + u) / denom)
}

/// Distinct exact points on the unit circle: 1, i, -1, -i, then the images
/// of u = k, -k, 1/k, -1/k for k = 2, 3, ...
fn exact_unit_grid(count: usize) -> Vec<ExactComplex> {
    let mut out: Vec<ExactComplex> = [(1, 0), (0, 1), (-1, 0), (0, -1)]
        .iter()
        .take(count)
        .map(|&(re, im)| ExactComplex::from_i64(re, im))
        .collect();
    let mut k: i64 = 2;
    while out.len() < count {
        let kk = BigRational::from_integer(k.into());
        let inv = kk.recip();
        for u in [kk.clone(), -kk.clone(), inv.clone(), -inv] {
            if out.len() == count {
                break;
            }
            out.push(rational_unit_circle(&u));
        }
        k += 1;
    }
    out
}

/// Signed angle of a nonzero scalar, in `(-pi, pi]`.
pub fn angle_of<S: Scalar>(z: &S) -> f64 {
    z.to_c64().arg()
}
