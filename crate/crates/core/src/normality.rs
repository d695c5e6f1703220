//! Element-wise normality test for Toeplitz matrices.
//!
//! A Toeplitz `T` with `a_0 = 0` is normal iff for every `1 <= m, n <= N`
//!
//! ```text
//! a_m conj(a_n) - conj(a_{-m}) a_{-n}
//!     + conj(a_{N+1-m}) a_{N+1-n} - a_{-(N+1-m)} conj(a_{-(N+1-n)}) = 0.
//! ```
//!
//! That is `O(N^2)` scalar work against the `O(N^3)` dense commutator, which
//! [`check`] still runs as an independent oracle and compares against.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Magnitude, Scalar, ScalarPolicy};
use crate::toeplitz::{commutator_norm, ToeplitzSpec};

/// Row count above which the residual table is split across threads.
const PARALLEL_ROWS: usize = 128;

#[derive(Debug, Clone)]
pub struct NormalityReport<S: Scalar> {
    order: usize,
    /// Row-major `N x N`, entry `(m-1) * N + (n-1)`.
    residuals: Vec<S>,
    pub max_residual: Magnitude,
    /// 1-based `(m, n)` of the largest residual; first in row-major order on ties.
    pub worst_pair: (usize, usize),
    /// Natural size `N * max|a_k|^2` used for approximate zero tests.
    pub scale: f64,
    pub is_normal_fast: bool,
    pub oracle_norm: Magnitude,
    pub oracle_normal: bool,
    pub agrees: bool,
}

impl<S: Scalar> NormalityReport<S> {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Residual at 1-based `(m, n)`.
    pub fn residual(&self, m: usize, n: usize) -> &S {
        assert!((1..=self.order).contains(&m) && (1..=self.order).contains(&n));
        &self.residuals[(m - 1) * self.order + (n - 1)]
    }

    pub fn residuals(&self) -> &[S] {
        &self.residuals
    }

    pub fn to_json(&self) -> Value {
        json!({
            "normal": self.is_normal_fast,
            "max_residual": self.max_residual.to_json(),
            "worst_pair": [self.worst_pair.0, self.worst_pair.1],
            "oracle_norm": self.oracle_norm.to_json(),
            "oracle_normal": self.oracle_normal,
            "agrees": self.agrees,
        })
    }
}

/// Zero-test scale for degree-two quantities in the entries: `N * max|a_k|^2`.
pub fn residual_scale<S: Scalar>(spec: &ToeplitzSpec<S>) -> f64 {
    let m = spec.max_abs();
    spec.order() as f64 * m * m
}

/// Left-hand side of the normality condition at 1-based `(m, n)`.
pub fn residual<S: Scalar>(spec: &ToeplitzSpec<S>, m: usize, n: usize) -> Result<S> {
    let order = spec.order();
    if !(1..=order).contains(&m) || !(1..=order).contains(&n) {
        return Err(Error::contract(format!(
            "residual index ({m}, {n}) outside 1..={order}"
        )));
    }
    Ok(residual_at(spec, m, n))
}

fn residual_at<S: Scalar>(spec: &ToeplitzSpec<S>, m: usize, n: usize) -> S {
    let a = |k: isize| spec.coeff(k);
    let (m, n) = (m as isize, n as isize);
    let np1 = spec.order() as isize + 1;
    let (mr, nr) = (np1 - m, np1 - n);
    a(m) * a(n).conj() - a(-m).conj() * a(-n) + a(mr).conj() * a(nr) - a(-mr) * a(-nr).conj()
}

fn residual_row<S: Scalar>(spec: &ToeplitzSpec<S>, m: usize) -> Vec<S> {
    (1..=spec.order())
        .map(|n| residual_at(spec, m, n))
        .collect()
}

/// Largest squared residual in a row with its 1-based column.
fn row_max<S: Scalar>(row: impl Iterator<Item = S>) -> (S::Real, usize) {
    let mut best: Option<(S::Real, usize)> = None;
    for (idx, r) in row.enumerate() {
        let sq = r.modulus_sq();
        if best.as_ref().is_none_or(|(b, _)| sq > *b) {
            best = Some((sq, idx + 1));
        }
    }
    best.expect("rows are nonempty")
}

/// Picks the larger entry, the earlier position on ties, independent of reduction order.
fn pick_max<R: PartialOrd>(a: (R, (usize, usize)), b: (R, (usize, usize))) -> (R, (usize, usize)) {
    match a.0.partial_cmp(&b.0) {
        Some(Ordering::Greater) => a,
        Some(Ordering::Less) => b,
        _ => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

/// Residual table, maximum and oracle comparison.
pub fn check<S: Scalar>(spec: &ToeplitzSpec<S>, policy: &ScalarPolicy) -> NormalityReport<S> {
    let order = spec.order();
    let rows: Vec<Vec<S>> = if order >= PARALLEL_ROWS {
        (1..=order)
            .into_par_iter()
            .map(|m| residual_row(spec, m))
            .collect()
    } else {
        (1..=order).map(|m| residual_row(spec, m)).collect()
    };
    let (max_sq, worst_pair) = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let (sq, n) = row_max::<S>(row.iter().cloned());
            (sq, (i + 1, n))
        })
        .reduce(pick_max)
        .expect("order is at least 1");

    let scale = residual_scale(spec);
    let max_residual = S::magnitude_from_sq(max_sq);
    let is_normal_fast = policy.magnitude_is_zero(&max_residual, scale);
    let oracle_norm = commutator_norm(spec);
    let oracle_normal = policy.magnitude_is_zero(&oracle_norm, scale);
    NormalityReport {
        order,
        residuals: rows.into_iter().flatten().collect(),
        max_residual,
        worst_pair,
        scale,
        is_normal_fast,
        oracle_norm,
        oracle_normal,
        agrees: is_normal_fast == oracle_normal,
    }
}

/// Maximum residual and its position without materializing the table or running the oracle.
pub fn fast_max_residual<S: Scalar>(spec: &ToeplitzSpec<S>) -> (Magnitude, (usize, usize)) {
    let order = spec.order();
    let per_row = |m: usize| {
        let (sq, n) = row_max::<S>((1..=order).map(|n| residual_at(spec, m, n)));
        (sq, (m, n))
    };
    let (sq, pair) = if order >= PARALLEL_ROWS {
        (1..=order)
            .into_par_iter()
            .map(per_row)
            .reduce_with(pick_max)
    } else {
        (1..=order).map(per_row).reduce(pick_max)
    }
    .expect("order is at least 1");
    (S::magnitude_from_sq(sq), pair)
}

/// Fast verdict alone.
pub fn is_normal<S: Scalar>(spec: &ToeplitzSpec<S>, policy: &ScalarPolicy) -> bool {
    if policy.is_exact() {
        return (1..=spec.order())
            .all(|m| (1..=spec.order()).all(|n| residual_at(spec, m, n).is_zero()));
    }
    let (max, _) = fast_max_residual(spec);
    policy.magnitude_is_zero(&max, residual_scale(spec))
}
