// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

use coupled_emitters::coupling::{coupling_rates, green_scalar, Geometry};
use coupled_emitters::sweep::logspace;
use proptest::prelude::*;
use std::f64::consts::PI;

fn unit() -> impl Strategy<Value = [f64; 3]> {
    (0.0f64..PI, 0.0f64..2.0 * PI).prop_map(|(t, p)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
}

proptest! {
    #[test]
    fn dyad_is_symmetric(d1 in unit(), d2 in unit(), axis in unit(), sep in 1e-3f64..1.0) {
        let g = Geometry { separation_over_lambda: sep, dipole1: d1, dipole2: d2, axis };
        let swapped = Geometry { dipole1: d2, dipole2: d1, ..g };
        let a = green_scalar(&g, 0.3, 1.0).unwrap();
        let b = green_scalar(&swapped, 0.3, 1.0).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }
}

#[test]
fn dissipative_coupling_is_bounded_for_parallel_dipoles() {
    for (alpha, axis) in [(0.3, [1.0, 0.0, 0.0]), (1.0, [0.0, 0.0, 1.0]), (0.7, [0.6, 0.0, 0.8])] {
        for kr in logspace(1e-3, 10.0, 4001) {
            let g = Geometry {
                axis,
                ..Geometry::h_configuration(kr / (2.0 * PI))
            };
            let (_, gamma12) = coupling_rates(green_scalar(&g, alpha, 1.0).unwrap());
            assert!(gamma12.abs() <= alpha + 1e-9, "kr = {kr}: {gamma12}");
        }
    }
}

#[test]
fn near_field_scaling() {
    let mut last = f64::INFINITY;
    for kr in [1e-1, 1e-2, 1e-3, 1e-4] {
        let g = green_scalar(&Geometry::h_configuration(kr / (2.0 * PI)), 0.3, 1.0).unwrap();
        let err = (g.re * kr.powi(3) - 0.75 * 0.3).abs();
        assert!(err < last);
        last = err;
    }
    assert!(last < 1e-8);
}
