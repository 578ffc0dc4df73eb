// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form eigen-operators of the undriven, undetuned generator and the
//! correlation functions that follow from them for a doubly excited start.
//!
//! The four operators here span the population sector `{G, S, A, E}`.
//! Labels follow the `±` branch of `γ₁₂* = √(γ*² + 4γ₁₂²)`: `S` takes the
//! upper sign. For `γ₁₂ > 0` and small `γ*` these reduce to the
//! superradiant and subradiant populations.

use crate::model::{c, NamedState, Op4};
use crate::{DetectionGeometry, Error, Result, SystemParams};

/// Relative size of `Γ₀² − γ₁₂² − Γ₀γ*` below which `λ_S` and `λ_E`
/// coalesce and the operators below stop being defined.
const EXCEPTIONAL_TOL: f64 = 1e-10;

/// `γ₁₂* = √(γ*² + 4γ₁₂²)`.
pub fn gamma12_star(p: &SystemParams) -> f64 {
    p.gamma_star.hypot(2.0 * p.gamma12)
}

/// `γ₁₂* − γ*`, written so that it keeps its precision when `γ₁₂ ≪ γ*`.
fn star_gap(p: &SystemParams) -> f64 {
    4.0 * p.gamma12 * p.gamma12 / (gamma12_star(p) + p.gamma_star)
}

/// Decay rates `γ± = Γ₀ + ½(γ* ± γ₁₂*)` of the single-excitation
/// populations, returned as `[γ₋, γ₊]`.
pub fn population_decay_rates(p: &SystemParams) -> [f64; 2] {
    let gs = gamma12_star(p);
    [p.gamma0 - 0.5 * star_gap(p), p.gamma0 + 0.5 * (p.gamma_star + gs)]
}

/// One eigenvalue with its right and left eigen-operators, normalised so
/// that `Tr(left† right) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenTriple {
    pub eigenvalue: f64,
    pub right: Op4,
    pub left: Op4,
}

impl EigenTriple {
    /// `Tr(left† x)`.
    pub fn projection(&self, x: &Op4) -> f64 {
        (self.left.adjoint() * x).trace().re
    }
}

/// The four population-sector eigen-triples.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticEigensystem {
    pub ground: EigenTriple,
    pub symmetric: EigenTriple,
    pub antisymmetric: EigenTriple,
    pub doubly: EigenTriple,
}

fn real4(rows: [[f64; 4]; 4]) -> Op4 {
    Op4::from_fn(|r, col| c(rows[r][col]))
}

fn check_free(p: &SystemParams) -> Result<()> {
    p.validate()?;
    if p.rabi != [0.0, 0.0] {
        return Err(Error::param("rabi", "closed forms need an undriven pair"));
    }
    if p.delta != 0.0 {
        return Err(Error::param("delta", "closed forms need identical emitters"));
    }
    if p.gamma12 == 0.0 {
        return Err(Error::SingularFormula("γ₁₂ = 0 makes γ₁₂* − γ* vanish"));
    }
    let n = p.gamma0 * p.gamma0 - p.gamma12 * p.gamma12 - p.gamma0 * p.gamma_star;
    let scale = p.gamma0 * p.gamma0 + p.gamma12 * p.gamma12 + p.gamma0 * p.gamma_star;
    if n.abs() <= EXCEPTIONAL_TOL * scale {
        return Err(Error::SingularFormula("λ_S = λ_E at Γ₀² − γ₁₂² − Γ₀γ* = 0"));
    }
    Ok(())
}

impl AnalyticEigensystem {
    /// Requires `Ω_R = 0`, `Δ = 0`, `γ₁₂ ≠ 0` and `λ_S ≠ λ_E`.
    pub fn new(p: &SystemParams) -> Result<Self> {
        check_free(p)?;
        let (g0, g12, gst) = (p.gamma0, p.gamma12, p.gamma_star);
        let gs = gamma12_star(p);
        let gap = star_gap(p);

        let ground = EigenTriple {
            eigenvalue: 0.0,
            right: real4([[1.0, 0.0, 0.0, 0.0], [0.0; 4], [0.0; 4], [0.0; 4]]),
            left: Op4::identity(),
        };

        let branch = |sign: f64| {
            // γ* ± γ₁₂* and γ₁₂* ± γ*.
            let (sum, diff) = if sign > 0.0 { (gst + gs, gs + gst) } else { (-gap, gap) };
            let off = 0.5 * sum;
            let right = real4([
                [-2.0 * g12, 0.0, 0.0, 0.0],
                [0.0, g12, off, 0.0],
                [0.0, off, g12, 0.0],
                [0.0, 0.0, 0.0, 0.0],
            ]) / c(gs);
            let pe = 2.0 * g12 * (2.0 * g0 + sum) / (2.0 * g0 - sum);
            let left = real4([
                [0.0; 4],
                [0.0, g12, off, 0.0],
                [0.0, off, g12, 0.0],
                [0.0, 0.0, 0.0, pe],
            ]) / c(diff);
            EigenTriple {
                eigenvalue: -(g0 + 0.5 * sum),
                right,
                left,
            }
        };

        let n = g0 * g0 - g12 * g12 - g0 * gst;
        let cc = -2.0 * g0 * g12;
        let pp = g0 * gst - g0 * g0 - g12 * g12;
        let doubly = EigenTriple {
            eigenvalue: -2.0 * g0,
            right: real4([
                [-2.0 * pp - n, 0.0, 0.0, 0.0],
                [0.0, pp, cc, 0.0],
                [0.0, cc, pp, 0.0],
                [0.0, 0.0, 0.0, n],
            ]) / c(n),
            left: real4([[0.0; 4], [0.0; 4], [0.0; 4], [0.0, 0.0, 0.0, 1.0]]),
        };

        Ok(Self {
            ground,
            symmetric: branch(1.0),
            antisymmetric: branch(-1.0),
            doubly,
        })
    }

    pub fn triples(&self) -> [(NamedState, &EigenTriple); 4] {
        [
            (NamedState::Ground, &self.ground),
            (NamedState::Symmetric, &self.symmetric),
            (NamedState::Antisymmetric, &self.antisymmetric),
            (NamedState::Doubly, &self.doubly),
        ]
    }

    /// `Σ_μ Tr(ρ_{L,μ}† ρ₀) e^{λ_μ t} ρ_{R,μ}` over the four modes. Exact for
    /// any `ρ₀` diagonal in the `{G, S, A, E}` basis.
    pub fn reconstruct(&self, rho0: &Op4, t: f64) -> Op4 {
        self.triples()
            .iter()
            .map(|(_, m)| m.right * c(m.projection(rho0) * (m.eigenvalue * t).exp()))
            .sum()
    }
}

/// `Tr(ρ_{L,μ}† |E⟩⟨E|)` for `μ = G, S, A, E`.
pub fn doubly_excited_projections(p: &SystemParams) -> Result<[f64; 4]> {
    check_free(p)?;
    let (g0, g12, gst) = (p.gamma0, p.gamma12, p.gamma_star);
    let gs = gamma12_star(p);
    let gap = star_gap(p);
    let s = 2.0 * g12 * (2.0 * g0 + gst + gs) / ((gst + gs) * (2.0 * g0 - gst - gs));
    let a = 2.0 * g12 * (2.0 * g0 - gap) / (gap * (2.0 * g0 + gap));
    Ok([1.0, s, a, 1.0])
}

/// `Tr(D†D ρ_{R,μ})` for `μ = G, S, A, E`.
pub fn intensity_weights(p: &SystemParams, geom: DetectionGeometry) -> Result<[f64; 4]> {
    check_free(p)?;
    let (g0, g12, gst) = (p.gamma0, p.gamma12, p.gamma_star);
    let gs = gamma12_star(p);
    let cos = geom.phi.cos();
    let n = g0 * g0 - g12 * g12 - g0 * gst;
    Ok([
        0.0,
        (2.0 * g12 + (gst + gs) * cos) / (2.0 * gs),
        (2.0 * g12 - star_gap(p) * cos) / (2.0 * gs),
        -2.0 * g12 * (g0 * cos + g12) / n,
    ])
}

/// `Tr(ρ_{L,μ}† D ρ_{R,E} D†)` for `μ = S, A`.
pub fn emission_kernel(p: &SystemParams, geom: DetectionGeometry) -> Result<[f64; 2]> {
    check_free(p)?;
    let (g12, gst) = (p.gamma12, p.gamma_star);
    let gs = gamma12_star(p);
    let gap = star_gap(p);
    let cos = geom.phi.cos();
    Ok([
        (2.0 * g12 + (gst + gs) * cos) / (2.0 * (gs + gst)),
        (2.0 * g12 - gap * cos) / (2.0 * gap),
    ])
}

/// Intensity `⟨D†D⟩(t)` after a doubly excited start.
pub fn closed_form_intensity(p: &SystemParams, geom: DetectionGeometry, t: f64) -> Result<f64> {
    let sys = AnalyticEigensystem::new(p)?;
    let proj = doubly_excited_projections(p)?;
    let w = intensity_weights(p, geom)?;
    Ok(sys
        .triples()
        .iter()
        .enumerate()
        .map(|(k, (_, m))| proj[k] * w[k] * (m.eigenvalue * t).exp())
        .sum())
}

/// Unnormalised `G²(t, t+τ)` after a doubly excited start, keeping the
/// `(E, S)` and `(E, A)` mode pairs of the regression sum.
pub fn closed_form_g2(p: &SystemParams, geom: DetectionGeometry, t: f64, tau: f64) -> Result<f64> {
    check_free(p)?;
    let (g0, g12, gst) = (p.gamma0, p.gamma12, p.gamma_star);
    let gs = gamma12_star(p);
    let gap = star_gap(p);
    let cos = geom.phi.cos();
    let upper = (2.0 * g12 + (gst + gs) * cos).powi(2) / (4.0 * gs * (gs + gst));
    let lower = (2.0 * g12 - gap * cos).powi(2) / (4.0 * gs * gap);
    let envelope = (-2.0 * g0 * t - (g0 + 0.5 * gst) * tau).exp();
    Ok(envelope * ((-0.5 * gs * tau).exp() * upper + (0.5 * gs * tau).exp() * lower))
}

/// `⟨D†D†DD⟩ / ⟨D†D⟩²` of a state diagonal in `{G, S, A, E}`, written with
/// its populations:
/// `ρ_EE / (ρ_EE + ρ_SS cos²(φ/2) + ρ_AA sin²(φ/2))²`.
pub fn g2_equal_time_population_form(rho: &Op4, geom: DetectionGeometry) -> Result<f64> {
    let pop = |s: NamedState| {
        let k = s.ket();
        (k.adjoint() * rho * k)[(0, 0)].re
    };
    let (half_cos, half_sin) = ((0.5 * geom.phi).cos(), (0.5 * geom.phi).sin());
    let ee = pop(NamedState::Doubly);
    let den = ee
        + pop(NamedState::Symmetric) * half_cos * half_cos
        + pop(NamedState::Antisymmetric) * half_sin * half_sin;
    if !(den * den > 1e-30) {
        return Err(Error::UndefinedCorrelation(den));
    }
    Ok(ee / (den * den))
}

