//! Test matrices from the numerical experiments.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::linalg::LuFactorization;
use crate::pattern::power_of_two_offsets;

const INVERSE_RESIDUAL_TOL: f64 = 1e-8;

/// `tridiag(-1, 4, -1)` of order `d`.
pub fn model_problem_operator(d: usize) -> DenseMatrix {
    DenseMatrix::from_fn(d, d, |i, j| match i.abs_diff(j) {
        0 => 4.0,
        1 => -1.0,
        _ => 0.0,
    })
}

/// `tridiag(-1, 4, -1)^{-1}`, formed densely.
pub fn model_problem_matrix(d: usize) -> Result<DenseMatrix> {
    if d < 2 {
        return Err(Error::invalid(format!(
            "model problem needs d >= 2, got {d}"
        )));
    }
    checked_inverse(&model_problem_operator(d))
}

/// The first `n` primes, by a sieve sized from the prime-counting bound
/// `p_n < n (ln n + ln ln n)` for `n >= 6`.
pub fn first_primes(n: usize) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let limit = if n < 6 {
        15
    } else {
        let nf = n as f64;
        (nf * (nf.ln() + nf.ln().ln())).ceil() as usize + 1
    };
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::with_capacity(n);
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        primes.push(p);
        if primes.len() == n {
            break;
        }
        let mut q = p * p;
        while q <= limit {
            composite[q] = true;
            q += p;
        }
    }
    debug_assert_eq!(primes.len(), n);
    primes
}

/// Primes on the diagonal, ones wherever `|i - j|` is a power of two below `d`.
pub fn trefethen_operator(d: usize) -> DenseMatrix {
    let primes = first_primes(d);
    let offsets = power_of_two_offsets(d);
    DenseMatrix::from_fn(d, d, |i, j| {
        if i == j {
            primes[i] as f64
        } else if offsets.contains(&i.abs_diff(j)) {
            1.0
        } else {
            0.0
        }
    })
}

/// Dense inverse of [`trefethen_operator`].
pub fn trefethen_matrix(d: usize) -> Result<DenseMatrix> {
    if d == 0 {
        return Err(Error::invalid("trefethen matrix needs d >= 1"));
    }
    checked_inverse(&trefethen_operator(d))
}

pub fn checked_inverse(m: &DenseMatrix) -> Result<DenseMatrix> {
    let inv = LuFactorization::factor(m)?.inverse();
    let residual = m
        .matmul(&inv)?
        .axpby(1.0, &DenseMatrix::identity(m.n_rows()), -1.0)?
        .frobenius_norm();
    if residual > INVERSE_RESIDUAL_TOL {
        return Err(Error::InaccurateInverse { residual });
    }
    Ok(inv)
}
