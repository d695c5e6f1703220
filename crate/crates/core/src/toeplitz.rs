//! Toeplitz specs, dense materialization and the commutator oracle.

use num::Zero as _;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Magnitude, Scalar};

/// A Toeplitz matrix of dimension `n + 1`, stored as its `2n + 1` diagonals.
///
/// `diag[k + n]` holds `a_k` for `k = -n..=n`: positive `k` runs down the
/// first column, negative `k` across the first row. The main diagonal `a_0`
/// is kept for round-tripping but every analysis treats it as zero, since a
/// multiple of the identity never affects normality.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSpec<S> {
    n: usize,
    diag: Vec<S>,
}

impl<S: Scalar> ToeplitzSpec<S> {
    /// Builds a spec from `a_{-N}, ..., a_0, ..., a_N` in ascending order.
    pub fn from_diagonals(entries: Vec<S>) -> Result<Self> {
        if entries.len() < 3 || entries.len().is_multiple_of(2) {
            return Err(Error::malformed(format!(
                "a Toeplitz spec needs an odd number (at least 3) of diagonals, got {}",
                entries.len()
            )));
        }
        Ok(Self {
            n: (entries.len() - 1) / 2,
            diag: entries,
        })
    }

    /// Builds a spec from the lower diagonals `a_1..a_N` and the upper
    /// diagonals `a_{-1}..a_{-N}` (both listed outward from the main diagonal).
    pub fn from_parts(lower: &[S], upper: &[S], a0: S) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::contract(format!(
                "lower and upper diagonals must be nonempty and of equal length, got {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        let mut diag: Vec<S> = upper.iter().rev().cloned().collect();
        diag.push(a0);
        diag.extend(lower.iter().cloned());
        Ok(Self {
            n: lower.len(),
            diag,
        })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::from_diagonals(vec![S::zero(); 2 * n + 1])
    }

    /// The order parameter N; the matrix is `(N+1) x (N+1)`.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn diagonals(&self) -> &[S] {
        &self.diag
    }

    /// Stored `a_k`, including the main diagonal.
    pub fn entry(&self, k: isize) -> &S {
        let n = self.n as isize;
        assert!(
            (-n..=n).contains(&k),
            "diagonal index {k} outside -{n}..={n}"
        );
        &self.diag[(k + n) as usize]
    }

    /// `a_k` as seen by the analysis: the main diagonal reads as zero.
    pub fn coeff(&self, k: isize) -> S {
        if k == 0 {
            S::zero()
        } else {
            self.entry(k).clone()
        }
    }

    /// `a_1, ..., a_N`.
    pub fn lower(&self) -> &[S] {
        &self.diag[self.n + 1..]
    }

    /// `a_{-1}, ..., a_{-N}`.
    pub fn upper(&self) -> Vec<S> {
        self.diag[..self.n].iter().rev().cloned().collect()
    }

    pub fn a0(&self) -> &S {
        &self.diag[self.n]
    }

    pub fn with_a0(mut self, a0: S) -> Self {
        self.diag[self.n] = a0;
        self
    }

    /// Every off-diagonal entry is literally zero.
    pub fn is_zero_off_diagonal(&self) -> bool {
        self.diag
            .iter()
            .enumerate()
            .all(|(i, a)| i == self.n || a.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.diag.iter().all(|a| a.imag_is_zero())
    }

    /// Largest off-diagonal modulus, as a double.
    pub fn max_abs(&self) -> f64 {
        self.diag
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.n)
            .map(|(_, a)| a.abs_f64())
            .fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ToeplitzSpec<T> {
        ToeplitzSpec {
            n: self.n,
            diag: self.diag.iter().map(f).collect(),
        }
    }

    pub fn scaled(&self, c: &S) -> Self {
        self.map(|a| c.clone() * a.clone())
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "diag": self.diag.iter().map(S::to_json).collect::<Vec<_>>() })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let n = value
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::malformed("spec needs a nonnegative integer field `n`"))?;
        let diag = value
            .get("diag")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::malformed("spec needs an array field `diag`"))?;
        if n < 1 || diag.len() as u64 != 2 * n + 1 {
            return Err(Error::malformed(format!(
                "spec with n = {n} needs n >= 1 and exactly {} diagonals, got {}",
                2 * n + 1,
                diag.len()
            )));
        }
        let entries = diag.iter().map(S::from_json).collect::<Result<Vec<_>>>()?;
        Self::from_diagonals(entries)
    }
}

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let data = (0..dim * dim).map(|idx| f(idx / dim, idx % dim)).collect();
        Self { dim, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::malformed("matrix rows must form a square"));
        }
        Ok(Self {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.data.chunks(self.dim).map(<[S]>::to_vec).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let dim = self.dim;
        let row = |i: usize| -> Vec<S> {
            let mut acc = vec![S::zero(); dim];
            for k in 0..dim {
                let lhs = self.get(i, k);
                if lhs.is_zero() {
                    continue;
                }
                for (j, slot) in acc.iter_mut().enumerate() {
                    *slot = slot.clone() + lhs.clone() * rhs.get(k, j).clone();
                }
            }
            acc
        };
        let data: Vec<S> = if dim >= 64 {
            (0..dim).into_par_iter().flat_map_iter(row).collect()
        } else {
            (0..dim).flat_map(row).collect()
        };
        Self { dim, data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    pub fn trace(&self) -> S {
        (0..self.dim).fold(S::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    /// Sum of squared moduli of all entries.
    pub fn frobenius_sq(&self) -> S::Real {
        self.data
            .iter()
            .fold(S::Real::zero(), |acc, a| acc + a.modulus_sq())
    }
}

/// Dense `(N+1) x (N+1)` matrix with `M[i][j] = a_{i-j}`, stored `a_0` on the diagonal.
pub fn materialize<S: Scalar>(spec: &ToeplitzSpec<S>) -> DenseMatrix<S> {
    DenseMatrix::from_fn(spec.dim(), |i, j| {
        spec.entry(i as isize - j as isize).clone()
    })
}

/// `T T* - T* T` with `a_0` forced to zero.
pub fn commutator<S: Scalar>(spec: &ToeplitzSpec<S>) -> DenseMatrix<S> {
    let t = DenseMatrix::from_fn(spec.dim(), |i, j| spec.coeff(i as isize - j as isize));
    let t_star = t.adjoint();
    t.matmul(&t_star).sub(&t_star.matmul(&t))
}

/// Frobenius norm of the commutator; exact types report the norm squared.
pub fn commutator_norm<S: Scalar>(spec: &ToeplitzSpec<S>) -> Magnitude {
    S::magnitude_from_sq(commutator(spec).frobenius_sq())
}
