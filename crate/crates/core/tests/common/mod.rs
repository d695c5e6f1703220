//! Independent reference implementations for integration tests.
#![allow(dead_code)]

use num::complex::Complex64;
use toepnorm::{ExactComplex, Scalar, ToeplitzSpec};

/// `T T* - T* T` by the textbook triple loop, built straight from the stored
/// diagonals (including `a_0`, which must not matter).
pub fn naive_commutator<S: Scalar>(spec: &ToeplitzSpec<S>) -> Vec<Vec<S>> {
    let n = spec.order() as isize;
    let d = (n + 1) as usize;
    let diag = spec.diagonals();
    let t = |i: usize, j: usize| diag[(i as isize - j as isize + n) as usize].clone();
    let mut out = vec![vec![S::zero(); d]; d];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = S::zero();
            for k in 0..d {
                acc = acc + t(i, k) * t(j, k).conj() - t(k, i).conj() * t(k, j);
            }
            *cell = acc;
        }
    }
    out
}

pub fn naive_is_normal_exact(spec: &ToeplitzSpec<ExactComplex>) -> bool {
    naive_commutator(spec).iter().flatten().all(Scalar::is_zero)
}

pub fn naive_frobenius(spec: &ToeplitzSpec<Complex64>) -> f64 {
    naive_commutator(spec)
        .iter()
        .flatten()
        .map(|c| c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn q(re: i64, im: i64) -> ExactComplex {
    ExactComplex::from_i64(re, im)
}

pub fn exact_spec(entries: &[(i64, i64)]) -> ToeplitzSpec<ExactComplex> {
    ToeplitzSpec::from_diagonals(entries.iter().map(|&(a, b)| q(a, b)).collect()).unwrap()
}

/// Every spec with off-diagonal entries from `values` and `a_0 = 0`, in a fixed order.
pub fn all_specs(n: usize, values: &[ExactComplex]) -> Vec<ToeplitzSpec<ExactComplex>> {
    let slots = 2 * n;
    (0..values.len().pow(slots as u32))
        .map(|idx| {
            let mut rest = idx;
            let mut entries: Vec<ExactComplex> = (0..slots)
                .map(|_| {
                    let v = values[rest % values.len()].clone();
                    rest /= values.len();
                    v
                })
                .collect();
            entries.insert(n, q(0, 0));
            ToeplitzSpec::from_diagonals(entries).unwrap()
        })
        .collect()
}
