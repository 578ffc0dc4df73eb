// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense non-Hermitian eigen-solver for 16×16 complex matrices.
//!
//! The complex Schur form `M = Q T Qᴴ` does the heavy lifting; eigenvectors
//! of the triangular factor come from back-substitution, with near-zero
//! pivots perturbed the same way LAPACK's `ztrevc` does.

use num_complex::Complex64;

use super::superop::{Mat16, Vec16};
use crate::{Error, Result};

const MAX_SCHUR_ITERATIONS: usize = 100_000;

/// Eigenvalues and unit-norm right eigenvectors (as columns).
pub(crate) fn eigen_decompose(m: &Mat16) -> Result<(Vec16, Mat16)> {
    let schur = m
        .try_schur(f64::EPSILON, MAX_SCHUR_ITERATIONS)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let n = 16;
    let values = Vec16::from_fn(|i, _| t[(i, i)]);

    let tnorm = t.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE);

    let mut y = Mat16::zeros();
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in (j + 1)..=k {
                acc += t[(j, l)] * y[(l, k)];
            }
            let mut d = t[(j, j)] - lambda;
            if d.norm() < smin {
                d = Complex64::new(smin, 0.0);
            }
            y[(j, k)] = -acc / d;
        }
    }

    let mut v = q * y;
    for k in 0..n {
        let mut col = v.column_mut(k);
        let norm = col.norm();
        if norm > 0.0 {
            col /= Complex64::new(norm, 0.0);
        }
    }
    Ok((values, v))
}
