// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use coupled_emitters::model::Op4;
use coupled_emitters::{DensityMatrix, SystemParams};
use num_complex::Complex64;
use proptest::prelude::*;

/// Arbitrary complex 4×4 matrix with entries in the unit square.
pub fn matrix() -> impl Strategy<Value = Op4> {
    prop::array::uniform32(-1.0f64..1.0).prop_map(|a| Op4::from_fn(|r, c| Complex64::new(a[4 * r + c], a[16 + 4 * r + c])))
}

/// `M M† / Tr(M M†)`, full rank with probability one.
pub fn density_matrix() -> impl Strategy<Value = DensityMatrix> {
    matrix().prop_filter_map("degenerate draw", |m| {
        let rho = m * m.adjoint();
        let tr = rho.trace().re;
        (tr > 1e-6).then(|| DensityMatrix::new(rho / Complex64::new(tr, 0.0)).ok()).flatten()
    })
}

/// Valid parameters with some dephasing, so the steady state is unique.
pub fn params() -> impl Strategy<Value = SystemParams> {
    (
        0.05f64..1.0,
        -1.0f64..1.0,
        -30.0f64..30.0,
        0.01f64..50.0,
        -5.0f64..5.0,
        -30.0f64..30.0,
        0.0f64..10.0,
        0.0f64..10.0,
    )
        .prop_map(|(alpha, g12, omega12, gamma_star, delta, det, r1, r2)| SystemParams {
            gamma0: 1.0,
            alpha,
            omega12,
            gamma12: g12 * alpha,
            gamma_star,
            delta,
            laser_detuning: det,
            rabi: [r1, r2],
        })
}

/// Frobenius norm.
pub fn norm(m: &Op4) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
