// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Free-space dipole-dipole coupling from the dyadic Green's function.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Lower end of the separation bracket searched by [`distance_for_coupling`].
pub const MIN_SEPARATION: f64 = 1e-4;
/// Upper end of the separation bracket searched by [`distance_for_coupling`].
pub const MAX_SEPARATION: f64 = 1.0;

const UNIT_TOL: f64 = 1e-12;

/// Relative placement of the two dipoles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// Separation r/λ.
    pub separation_over_lambda: f64,
    pub dipole1: [f64; 3],
    pub dipole2: [f64; 3],
    /// Unit vector from emitter 1 to emitter 2.
    pub axis: [f64; 3],
}

impl Geometry {
    /// Both dipoles along ẑ, emitters on the x axis ('H' configuration).
    pub fn h_configuration(separation_over_lambda: f64) -> Self {
        Self {
            separation_over_lambda,
            dipole1: [0.0, 0.0, 1.0],
            dipole2: [0.0, 0.0, 1.0],
            axis: [1.0, 0.0, 0.0],
        }
    }

    pub fn with_separation(mut self, separation_over_lambda: f64) -> Self {
        self.separation_over_lambda = separation_over_lambda;
        self
    }

    /// kr = 2π r/λ.
    pub fn kr(&self) -> f64 {
        2.0 * PI * self.separation_over_lambda
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("dipole1", self.dipole1),
            ("dipole2", self.dipole2),
            ("axis", self.axis),
        ] {
            let n = dot(&v, &v).sqrt();
            if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
                return Err(Error::param(name, format!("norm {n} is not 1")));
            }
        }
        if !(self.separation_over_lambda > 0.0) || !self.separation_over_lambda.is_finite() {
            return Err(Error::param(
                "separation_over_lambda",
                format!("{} must be positive", self.separation_over_lambda),
            ));
        }
        Ok(())
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `G = d̂₁ᵀ Ḡ(r) d̂₂` for the free-space dyad renormalised by `alpha`,
///
/// ```text
/// Ḡ = −¾ αΓ₀ e^{ikr}/kr [ I (1 + i/kr − 1/(kr)²) + r̂r̂ᵀ (−1 − 3i/kr + 3/(kr)²) ]
/// ```
pub fn green_scalar(geom: &Geometry, alpha: f64, gamma0: f64) -> Result<Complex64> {
    let kr = geom.kr();
    if !(kr > 0.0) || !kr.is_finite() {
        return Err(Error::SingularGreenFunction(kr));
    }
    let inv = 1.0 / kr;
    let transverse = Complex64::new(1.0 - inv * inv, inv);
    let longitudinal = Complex64::new(-1.0 + 3.0 * inv * inv, -3.0 * inv);
    let d1d2 = dot(&geom.dipole1, &geom.dipole2);
    let d1r = dot(&geom.dipole1, &geom.axis);
    let d2r = dot(&geom.dipole2, &geom.axis);
    let bracket = transverse * d1d2 + longitudinal * (d1r * d2r);
    let prefactor = Complex64::from_polar(-0.75 * alpha * gamma0 * inv, kr);
    Ok(prefactor * bracket)
}

/// `(Ω₁₂, γ₁₂) = (Re G, −2 Im G)`.
pub fn coupling_rates(g: Complex64) -> (f64, f64) {
    (g.re, -2.0 * g.im)
}

/// Smallest separation r/λ in `(MIN_SEPARATION, MAX_SEPARATION)` at which
/// `Re G` equals `target_omega12`, keeping the dipole and axis directions of
/// `template`.
pub fn distance_for_coupling(
    target_omega12: f64,
    template: &Geometry,
    alpha: f64,
    gamma0: f64,
) -> Result<f64> {
    let not_achievable = Error::CouplingNotAchievable {
        target: target_omega12,
        lower: MIN_SEPARATION,
        upper: MAX_SEPARATION,
    };
    if !target_omega12.is_finite() {
        return Err(not_achievable);
    }
    let residual = |x: f64| -> Result<f64> {
        let g = green_scalar(&template.with_separation(x), alpha, gamma0)?;
        Ok(g.re - target_omega12)
    };

    // Log-spaced scan for the first sign change, refined by bisection.
    const SCAN: usize = 2000;
    let ratio = (MAX_SEPARATION / MIN_SEPARATION).ln();
    let at = |k: usize| MIN_SEPARATION * (ratio * k as f64 / SCAN as f64).exp();
    let mut lo = at(0);
    let mut f_lo = residual(lo)?;
    let mut bracket = None;
    for k in 1..=SCAN {
        let hi = at(k);
        let f_hi = residual(hi)?;
        if f_lo == 0.0 {
            return Ok(lo);
        }
        if f_lo.signum() != f_hi.signum() {
            bracket = Some((lo, hi, f_lo));
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    let (mut a, mut b, f_a) = bracket.ok_or(not_achievable)?;
    let sign_a = f_a.signum();
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let f_m = residual(m)?;
        if f_m == 0.0 {
            return Ok(m);
        }
        if f_m.signum() == sign_a {
            a = m;
        } else {
            b = m;
        }
        if (b - a) <= 4.0 * f64::EPSILON * b {
            break;
        }
    }
    Ok(0.5 * (a + b))
}
