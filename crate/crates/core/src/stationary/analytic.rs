// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form steady-state approximations.
//!
//! Each formula is valid only in its stated regime and with `Δ = 0`. Nothing
//! here is used by the solver; these exist to be compared against it.

use crate::{Error, Result, SystemParams};

/// Common factor `Γ₀² + Γ₀γ* − γ₁₂²`.
fn kappa(p: &SystemParams) -> f64 {
    p.gamma0 * p.gamma0 + p.gamma0 * p.gamma_star - p.gamma12 * p.gamma12
}

/// Superradiant line `L_S` at laser detuning `omega`, including the
/// power-broadening term. Valid for `Ω₁₂ ≫ Γ₀, γ₁₂, Ω_R, γ*`.
pub fn lorentzian_s(p: &SystemParams, omega: f64) -> f64 {
    let w = p.rabi[0];
    let g = p.gamma0 + p.gamma_star + p.gamma12;
    let num = 2.0 * w * w * (p.gamma0 + p.gamma_star - p.gamma12) * g;
    let a = 4.0 * w * w * (p.gamma0 + 0.75 * p.gamma_star - p.gamma12) * g;
    num / (a + lorentzian_s_tail(p, omega))
}

/// `B_S + C_S`.
fn lorentzian_s_tail(p: &SystemParams, omega: f64) -> f64 {
    let g = p.gamma0 + p.gamma_star + p.gamma12;
    let k = kappa(p);
    4.0 * (omega - p.omega12).powi(2) * k + g * g * k
}

/// Weak-drive limit of [`lorentzian_s`]; a Lorentzian of full width
/// `Γ₀ + γ* + γ₁₂` centred on `Ω₁₂`.
pub fn lorentzian_s_weak(p: &SystemParams, omega: f64) -> f64 {
    let w = p.rabi[0];
    let g = p.gamma0 + p.gamma_star + p.gamma12;
    2.0 * w * w * (p.gamma0 + p.gamma_star - p.gamma12) * g / lorentzian_s_tail(p, omega)
}

/// Peak value of [`lorentzian_s_weak`].
pub fn lorentzian_s_peak(p: &SystemParams) -> f64 {
    let w = p.rabi[0];
    let g = p.gamma0 + p.gamma_star + p.gamma12;
    2.0 * w * w * (p.gamma0 + p.gamma_star - p.gamma12) / (g * kappa(p))
}

/// Full width of [`lorentzian_s_weak`].
pub fn lorentzian_s_width(p: &SystemParams) -> f64 {
    p.gamma0 + p.gamma_star + p.gamma12
}

/// Scaling regime of the two-photon peak height.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPhotonRegime {
    /// Drive dominates the coupling: height near 1.
    Saturated,
    /// Doubly excited population dominates: height `∝ Ω_R⁴`.
    Quadratic,
    /// Tail of the superradiant line dominates: height `∝ Ω_R²`.
    Linear,
}

/// Two-photon peak height `2(X²+2X⁴)/[4(X²+X⁴+Y²)]` with `X = Ω_R/Γ₀`,
/// `Y = Ω₁₂/Γ₀`, and the regime picked by whichever term dominates:
/// `X⁴` against `Y²` for saturation, then `X⁴` against `X²`.
pub fn lorentzian_e_amplitude(p: &SystemParams) -> (f64, TwoPhotonRegime) {
    let x = p.rabi[0] / p.gamma0;
    let y = p.omega12 / p.gamma0;
    let (x2, x4) = (x * x, x.powi(4));
    let amp = if x == 0.0 {
        0.0
    } else {
        2.0 * (x2 + 2.0 * x4) / (4.0 * (x2 + x4 + y * y))
    };
    let regime = if x4 >= y * y {
        TwoPhotonRegime::Saturated
    } else if x4 >= x2 {
        TwoPhotonRegime::Quadratic
    } else {
        TwoPhotonRegime::Linear
    };
    (amp, regime)
}

/// Low-drive expansion coefficients of `n_exc(ω = ω₀)` in powers of
/// `Ω_R²`: the exact linear coefficient and the large-coupling,
/// large-dephasing form of the quadratic one. At `γ* = 0` the quadratic
/// form is singular and its sign limit `+∞` is returned.
pub fn saturation_expansion_coefficients(p: &SystemParams) -> (f64, f64) {
    let g = p.gamma0 + p.gamma_star + p.gamma12;
    let linear = 2.0 * g * (p.gamma0 + p.gamma_star - p.gamma12)
        / (kappa(p) * (4.0 * p.omega12 * p.omega12 + g * g));
    let w2 = 4.0 * p.omega12 * p.omega12;
    let quadratic = if p.gamma_star == 0.0 {
        if w2 * p.gamma0 > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        let gs = p.gamma_star;
        4.0 * (w2 * p.gamma0 - gs.powi(3)) / (p.gamma0 * p.gamma0 * gs * (w2 + gs * gs).powi(2))
    };
    (linear, quadratic)
}

/// Exact `γ* = 0`, `ω = ω₀` populations `(ρ_{ee,ee}, ρ_ee)`, where `ρ_ee` is
/// the excited-state population of one emitter.
pub fn exact_populations_two_photon(p: &SystemParams) -> Result<(f64, f64)> {
    if p.gamma_star != 0.0 {
        return Err(Error::param("gamma_star", "exact populations need γ* = 0"));
    }
    let (w, g0) = (p.rabi[0], p.gamma0);
    let w2 = w * w;
    let den = 4.0 * w2 * w2
        + g0 * g0 * ((g0 + p.gamma12).powi(2) + 4.0 * w2 + 4.0 * p.omega12 * p.omega12);
    Ok((w2 * w2 / den, (g0 * g0 * w2 + 2.0 * w2 * w2) / den))
}
