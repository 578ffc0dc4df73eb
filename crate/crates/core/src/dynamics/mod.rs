// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Free evolution of the pair: excitation decay, first- and second-order
//! field correlations and the time-resolved emission spectrum.
//!
//! Every observable is computed from the modal expansion when the
//! eigenbasis is well conditioned and from the RK4 integrator otherwise.

pub mod analytic;

use num_complex::Complex64;

use crate::liouvillian::{
    build_liouvillian, evolve_operator_ode, propagate_ode, propagate_spectral, regression_ode_grid,
    spectral_decompose, RegressionKernel, SpectralDecomposition,
};
use crate::model::{detection_operator, DensityMatrix, EmitterOperator};
use crate::stationary::n_exc;
use crate::sweep::{linspace, try_map};
use crate::{DetectionGeometry, Error, Result, SystemParams};

pub use analytic::{g2_equal_time_population_form, population_decay_rates};

/// Below this `I(t)·I(t+τ)` the normalised `g²` is undefined.
const MIN_INTENSITY_PRODUCT: f64 = 1e-30;

/// Delay window and interval count of the quadrature spectrum.
pub const QUADRATURE_SPAN: f64 = 40.0;
pub const QUADRATURE_INTERVALS: usize = 16_000;

/// Time-resolved spectrum `G̃¹(t, ω)`, one row per time sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub t_grid: Vec<f64>,
    pub omega_grid: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl Spectrogram {
    fn new(t_grid: &[f64], omega_grid: &[f64], values: Vec<Vec<f64>>) -> Result<Self> {
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("spectrum has non-finite entries".into()));
        }
        Ok(Self {
            t_grid: t_grid.to_vec(),
            omega_grid: omega_grid.to_vec(),
            values,
        })
    }

    /// Frequency of the largest value in row `row`.
    pub fn peak_frequency(&self, row: usize) -> f64 {
        let r = &self.values[row];
        let best = (0..r.len()).fold(0, |b, j| if r[j] > r[b] { j } else { b });
        self.omega_grid[best]
    }
}

fn strictly_increasing(grid: &[f64], name: &'static str) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param(name, "must be finite and strictly increasing"));
    }
    Ok(())
}

fn times(grid: &[f64]) -> Result<()> {
    if grid.is_empty()
        || grid.iter().any(|t| !t.is_finite() || *t < 0.0)
        || grid.windows(2).any(|w| w[1] < w[0])
    {
        return Err(Error::InvalidTimeGrid);
    }
    Ok(())
}

/// The generator of one parameter point with its eigen-decomposition.
#[derive(Debug, Clone)]
pub struct FreeEvolution {
    params: SystemParams,
    dec: SpectralDecomposition,
}

impl FreeEvolution {
    pub fn new(p: &SystemParams) -> Result<Self> {
        p.validate()?;
        Ok(Self {
            params: *p,
            dec: spectral_decompose(&build_liouvillian(p))?,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.dec
    }

    /// `ρ(t)` on a non-decreasing grid.
    pub fn states(&self, rho0: &DensityMatrix, t_grid: &[f64]) -> Result<Vec<DensityMatrix>> {
        times(t_grid)?;
        if self.dec.is_flagged() {
            return propagate_ode(self.dec.generator(), rho0, t_grid);
        }
        t_grid.iter().map(|&t| propagate_spectral(&self.dec, rho0, t)).collect()
    }

    pub fn n_exc_trajectory(&self, rho0: &DensityMatrix, t_grid: &[f64]) -> Result<Vec<f64>> {
        Ok(self.states(rho0, t_grid)?.iter().map(n_exc).collect())
    }

    /// `⟨D†D⟩` at arbitrary (unsorted) times.
    pub fn intensity(&self, rho0: &DensityMatrix, geom: DetectionGeometry, at: &[f64]) -> Result<Vec<f64>> {
        let d = detection_operator(geom);
        let dd = d.adjoint() * d;
        let mut order: Vec<usize> = (0..at.len()).collect();
        order.sort_by(|&a, &b| at[a].total_cmp(&at[b]));
        let sorted: Vec<f64> = order.iter().map(|&k| at[k]).collect();
        let states = self.states(rho0, &sorted)?;
        let mut out = vec![0.0; at.len()];
        for (k, rho) in order.into_iter().zip(&states) {
            out[k] = dd.expectation(rho).re;
        }
        Ok(out)
    }

    /// `⟨A(t) B(t+τ) C(t)⟩` on a `(t, τ)` grid, rows indexed by `t`.
    fn correlation_grid(
        &self,
        rho0: &DensityMatrix,
        ops: [&EmitterOperator; 3],
        t_grid: &[f64],
        tau_grid: &[f64],
    ) -> Result<Vec<Vec<Complex64>>> {
        times(t_grid)?;
        times(tau_grid)?;
        let [a, b, c] = ops;
        if self.dec.is_flagged() {
            return regression_ode_grid(self.dec.generator(), rho0, a, b, c, t_grid, tau_grid);
        }
        let kernel = RegressionKernel::new(&self.dec, rho0, a, b, c)?;
        try_map(t_grid, |&t| {
            Ok::<_, Error>(tau_grid.iter().map(|&tau| kernel.evaluate(t, tau)).collect())
        })
    }

    /// `G¹(t, t+τ) = ⟨D†(t) D(t+τ)⟩`.
    pub fn g1_grid(
        &self,
        rho0: &DensityMatrix,
        geom: DetectionGeometry,
        t_grid: &[f64],
        tau_grid: &[f64],
    ) -> Result<Vec<Vec<Complex64>>> {
        let d = detection_operator(geom);
        let id = EmitterOperator::identity();
        self.correlation_grid(rho0, [&d.adjoint(), &d, &id], t_grid, tau_grid)
    }

    /// `Re ∫₀^∞ e^{iωτ} G¹(t, t+τ) dτ` from the modal resolvent, or from
    /// quadrature when the eigenbasis is flagged.
    pub fn g1_spectrum(
        &self,
        rho0: &DensityMatrix,
        geom: DetectionGeometry,
        t_grid: &[f64],
        omega_grid: &[f64],
    ) -> Result<Spectrogram> {
        strictly_increasing(t_grid, "t_grid")?;
        strictly_increasing(omega_grid, "omega_grid")?;
        times(t_grid)?;
        if self.dec.is_flagged() {
            return self.g1_spectrum_quadrature(rho0, geom, t_grid, omega_grid);
        }
        let d = detection_operator(geom);
        let kernel = RegressionKernel::two_op(&self.dec, rho0, &d.adjoint(), &d)?;
        let values = try_map(t_grid, |&t| {
            omega_grid
                .iter()
                .map(|&w| kernel.laplace(t, w).map(|z| z.re))
                .collect::<Result<Vec<_>>>()
        })?;
        Spectrogram::new(t_grid, omega_grid, values)
    }

    /// The same spectrum by composite Simpson quadrature of the ODE
    /// correlation over `τ ∈ [0, 40]`.
    pub fn g1_spectrum_quadrature(
        &self,
        rho0: &DensityMatrix,
        geom: DetectionGeometry,
        t_grid: &[f64],
        omega_grid: &[f64],
    ) -> Result<Spectrogram> {
        strictly_increasing(t_grid, "t_grid")?;
        strictly_increasing(omega_grid, "omega_grid")?;
        times(t_grid)?;
        let d = detection_operator(geom);
        let id = EmitterOperator::identity();
        let tau = linspace(0.0, QUADRATURE_SPAN, QUADRATURE_INTERVALS + 1);
        let g1 = regression_ode_grid(self.dec.generator(), rho0, &d.adjoint(), &d, &id, t_grid, &tau)?;
        let h = QUADRATURE_SPAN / QUADRATURE_INTERVALS as f64;
        let weight = |k: usize| {
            if k == 0 || k == QUADRATURE_INTERVALS {
                h / 3.0
            } else if k % 2 == 1 {
                4.0 * h / 3.0
            } else {
                2.0 * h / 3.0
            }
        };
        let values = g1
            .iter()
            .map(|row| {
                omega_grid
                    .iter()
                    .map(|&w| {
                        row.iter()
                            .zip(&tau)
                            .enumerate()
                            .map(|(k, (g, &s))| weight(k) * (Complex64::new(0.0, w * s).exp() * g).re)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Spectrogram::new(t_grid, omega_grid, values)
    }

    /// Unnormalised `G²(t, t+τ) = ⟨D†(t) D†D(t+τ) D(t)⟩`.
    pub fn g2_numerator_grid(
        &self,
        rho0: &DensityMatrix,
        geom: DetectionGeometry,
        t_grid: &[f64],
        tau_grid: &[f64],
    ) -> Result<Vec<Vec<f64>>> {
        let d = detection_operator(geom);
        let dd = d.adjoint() * d;
        let g = self.correlation_grid(rho0, [&d.adjoint(), &dd, &d], t_grid, tau_grid)?;
        Ok(g.into_iter().map(|row| row.into_iter().map(|z| z.re).collect()).collect())
    }

    /// `g²(t, t+τ) = G²(t, t+τ) / (I(t) I(t+τ))`.
    pub fn g2_time_grid(
        &self,
        rho0: &DensityMatrix,
        geom: DetectionGeometry,
        t_grid: &[f64],
        tau_grid: &[f64],
    ) -> Result<Vec<Vec<f64>>> {
        let num = self.g2_numerator_grid(rho0, geom, t_grid, tau_grid)?;
        let mut at = Vec::with_capacity(t_grid.len() * (tau_grid.len() + 1));
        at.extend_from_slice(t_grid);
        for &t in t_grid {
            at.extend(tau_grid.iter().map(|&tau| t + tau));
        }
        let intensity = self.intensity(rho0, geom, &at)?;
        let (now, later) = intensity.split_at(t_grid.len());
        let m = tau_grid.len();
        num.iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, g)| {
                        let prod = now[i] * later[i * m + j];
                        if !(prod > MIN_INTENSITY_PRODUCT) {
                            return Err(Error::UndefinedCorrelation(prod.max(0.0).sqrt()));
                        }
                        Ok(g / prod)
                    })
                    .collect()
            })
            .collect()
    }

    /// Equal-time `g²(t, t) = ⟨D†D†DD⟩(t) / ⟨D†D⟩(t)²`.
    pub fn g2_equal_time(&self, rho0: &DensityMatrix, geom: DetectionGeometry, t_grid: &[f64]) -> Result<Vec<f64>> {
        let d = detection_operator(geom);
        let dd = d.adjoint() * d;
        let pair = d.adjoint() * d.adjoint() * d * d;
        self.states(rho0, t_grid)?
            .iter()
            .map(|rho| {
                let i = dd.expectation(rho).re;
                if !(i * i > MIN_INTENSITY_PRODUCT) {
                    return Err(Error::UndefinedCorrelation(i));
                }
                Ok(pair.expectation(rho).re / (i * i))
            })
            .collect()
    }
}

/// `n_exc(t)` for `ρ₀` under the generator of `p`.
pub fn n_exc_trajectory(p: &SystemParams, rho0: &DensityMatrix, t_grid: &[f64]) -> Result<Vec<f64>> {
    FreeEvolution::new(p)?.n_exc_trajectory(rho0, t_grid)
}

/// `G¹(t, t+τ)` at one point.
pub fn g1(p: &SystemParams, rho0: &DensityMatrix, geom: DetectionGeometry, t: f64, tau: f64) -> Result<Complex64> {
    Ok(FreeEvolution::new(p)?.g1_grid(rho0, geom, &[t], &[tau])?[0][0])
}

pub fn g1_spectrum(
    p: &SystemParams,
    rho0: &DensityMatrix,
    geom: DetectionGeometry,
    t_grid: &[f64],
    omega_grid: &[f64],
) -> Result<Spectrogram> {
    FreeEvolution::new(p)?.g1_spectrum(rho0, geom, t_grid, omega_grid)
}

/// Normalised `g²(t, t+τ)` at one point.
pub fn g2_time(p: &SystemParams, rho0: &DensityMatrix, geom: DetectionGeometry, t: f64, tau: f64) -> Result<f64> {
    Ok(FreeEvolution::new(p)?.g2_time_grid(rho0, geom, &[t], &[tau])?[0][0])
}

/// ODE-only `ρ(t)` used where an independent trajectory is wanted.
pub fn states_ode(p: &SystemParams, rho0: &DensityMatrix, t_grid: &[f64]) -> Result<Vec<DensityMatrix>> {
    p.validate()?;
    let ops = evolve_operator_ode(&build_liouvillian(p), rho0.matrix(), t_grid)?;
    ops.into_iter()
        .map(|m| DensityMatrix::new(crate::model::hermitian_part(&m)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::analytic::*;
    use super::*;
    use crate::fit::{biexponential, exponential_rate};
    use crate::liouvillian::{build_liouvillian, evolve_operator_ode};
    use crate::model::{c, named_state, NamedState, Op4};

    fn free(gamma_star: f64) -> SystemParams {
        SystemParams::standard().with_gamma_star(gamma_star)
    }

    #[test]
    fn mono_exponential_single_excitation_decay() {
        let t = linspace(0.0, 5.0, 51);
        for (state, rate) in [(NamedState::Symmetric, 1.3), (NamedState::Antisymmetric, 0.7)] {
            let n = n_exc_trajectory(&free(0.0), &named_state(state), &t).unwrap();
            assert!((exponential_rate(&t, &n).unwrap() - rate).abs() < 1e-9);
        }
    }

    #[test]
    fn dephased_decay_is_bi_exponential() {
        let p = free(2.0);
        let [lo, hi] = population_decay_rates(&p);
        assert!((lo - 0.9560).abs() < 5e-5 && (hi - 3.0440).abs() < 5e-5);
        let t = linspace(0.0, 8.0, 161);
        let n = n_exc_trajectory(&p, &named_state(NamedState::Symmetric), &t).unwrap();
        let fit = biexponential(&t, &n, [lo * 1.1, hi * 0.9]).unwrap();
        assert!((fit.rates[0] - lo).abs() < 1e-8, "{:?}", fit);
        assert!((fit.rates[1] - hi).abs() < 1e-8, "{:?}", fit);
    }

    #[test]
    fn strong_dephasing_gives_independent_decay() {
        let t = linspace(0.5, 5.0, 10);
        for state in [NamedState::Symmetric, NamedState::Antisymmetric] {
            let n = n_exc_trajectory(&free(100.0), &named_state(state), &t).unwrap();
            for (x, &s) in n.iter().zip(&t) {
                assert!((x / (-s).exp() - 1.0).abs() < 0.01);
            }
        }
    }

    #[test]
    fn g1_equal_time_is_intensity() {
        let fe = FreeEvolution::new(&free(0.5)).unwrap();
        let geom = DetectionGeometry::along_axis(0.0357);
        let rho0 = named_state(NamedState::Doubly);
        let t = [0.0, 0.7, 2.0];
        let g = fe.g1_grid(&rho0, geom, &t, &[0.0]).unwrap();
        let i = fe.intensity(&rho0, geom, &t).unwrap();
        for k in 0..3 {
            assert!(g[k][0].im.abs() < 1e-10);
            assert!((g[k][0].re - i[k]).abs() < 1e-10);
        }
        assert!((g[0][0].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn g1_envelope_and_phase() {
        let p = free(0.0);
        let s = named_state(NamedState::Symmetric);
        let perp = DetectionGeometry::perpendicular();
        for tau in [0.5, 1.0, 3.0] {
            let g = g1(&p, &s, perp, 0.0, tau).unwrap();
            assert!((g.norm() - (-0.65 * tau).exp()).abs() < 1e-10);
        }
        // The antisymmetric state radiates at φ = π and rotates as e^{+iΩ₁₂τ}.
        let a = named_state(NamedState::Antisymmetric);
        let axis = DetectionGeometry { phi: std::f64::consts::PI };
        let tau = 0.01;
        let g = g1(&p, &a, axis, 0.0, tau).unwrap();
        let expect = Complex64::new(-0.35 * tau, 20.0 * tau).exp();
        assert!((g - expect).norm() < 1e-10, "{g}");
    }

    #[test]
    fn antisymmetric_line_sits_at_negative_coupling() {
        let p = free(0.0);
        let a = named_state(NamedState::Antisymmetric);
        let axis = DetectionGeometry { phi: std::f64::consts::PI };
        let w = linspace(-30.0, 30.0, 1201);
        let sp = g1_spectrum(&p, &a, axis, &[0.0], &w).unwrap();
        assert!((sp.peak_frequency(0) + 20.0).abs() < 1e-9);
        // Lorentzian of full width 0.7.
        let peak = sp.values[0][200];
        let half = FreeEvolution::new(&p)
            .unwrap()
            .g1_spectrum(&a, axis, &[0.0], &[-20.35, -19.65])
            .unwrap();
        assert!((half.values[0][0] / peak - 0.5).abs() < 1e-9);
        assert!((half.values[0][1] / peak - 0.5).abs() < 1e-9);
    }

    #[test]
    fn bright_states_have_no_pair_emission() {
        let fe = FreeEvolution::new(&free(0.5)).unwrap();
        let geom = DetectionGeometry::along_axis(0.1);
        for state in [NamedState::Symmetric, NamedState::Antisymmetric] {
            let num = fe
                .g2_numerator_grid(&named_state(state), geom, &[0.0, 1.0], &[0.0, 0.5, 2.0])
                .unwrap();
            assert!(num.iter().flatten().all(|x| x.abs() < 1e-14));
        }
    }

    #[test]
    fn doubly_excited_start_is_coherent_at_zero_delay() {
        let g = g2_time(&free(0.0), &named_state(NamedState::Doubly), DetectionGeometry::perpendicular(), 0.0, 0.0)
            .unwrap();
        assert!((g - 1.0).abs() < 1e-12);
        let dark = g2_time(
            &free(0.0),
            &named_state(NamedState::Antisymmetric),
            DetectionGeometry::perpendicular(),
            0.0,
            0.0,
        );
        assert!(matches!(dark, Err(Error::UndefinedCorrelation(_))));
    }

    #[test]
    fn analytic_triples_are_eigen_operators() {
        for (gs, g12) in [(0.0, 0.3), (0.5, 0.3), (2.0, -0.2), (40.0, 0.05)] {
            let p = free(gs).with_coupling(20.0, g12);
            let l = build_liouvillian(&p);
            let ladj = l.adjoint();
            let sys = AnalyticEigensystem::new(&p).unwrap();
            let triples = sys.triples();
            for (name, m) in triples {
                let lam = c(m.eigenvalue);
                let r = (l.apply(&m.right) - m.right * lam).norm();
                let lres = (ladj.apply(&m.left) - m.left * lam).norm();
                assert!(r < 1e-12 * (1.0 + m.right.norm()), "{name} right {r}");
                assert!(lres < 1e-12 * (1.0 + m.left.norm()), "{name} left {lres}");
            }
            for (i, (_, a)) in triples.iter().enumerate() {
                for (j, (_, b)) in triples.iter().enumerate() {
                    let overlap = a.projection(&b.right);
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((overlap - target).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn singular_cases_are_reported() {
        assert!(matches!(
            AnalyticEigensystem::new(&free(1.0).with_coupling(20.0, 0.0)),
            Err(Error::SingularFormula(_))
        ));
        // Γ₀² − γ₁₂² − Γ₀γ* = 0.
        assert!(matches!(AnalyticEigensystem::new(&free(0.91)), Err(Error::SingularFormula(_))));
        assert!(AnalyticEigensystem::new(&free(0.0).with_rabi(0.1)).is_err());
        assert!(closed_form_g2(&free(1.0).with_coupling(20.0, 0.0), DetectionGeometry::perpendicular(), 0.0, 0.0)
            .is_err());
    }

    #[test]
    fn doubly_excited_projections_match_left_operators() {
        let p = free(0.5);
        let sys = AnalyticEigensystem::new(&p).unwrap();
        let e = named_state(NamedState::Doubly).into_matrix();
        let proj = doubly_excited_projections(&p).unwrap();
        for (k, (_, m)) in sys.triples().iter().enumerate() {
            assert!((m.projection(&e) - proj[k]).abs() < 1e-13);
        }
    }

    #[test]
    fn reconstruction_matches_integrator() {
        let p = free(0.5);
        let sys = AnalyticEigensystem::new(&p).unwrap();
        let e = named_state(NamedState::Doubly).into_matrix();
        let t = linspace(0.0, 4.0, 9);
        let ode = evolve_operator_ode(&build_liouvillian(&p), &e, &t).unwrap();
        for (rho, &s) in ode.iter().zip(&t) {
            assert!((sys.reconstruct(&e, s) - rho).norm() < 1e-9);
        }
    }

    #[test]
    fn closed_form_g2_at_origin() {
        for gs in [0.0, 0.5, 2.0] {
            let g = closed_form_g2(&free(gs), DetectionGeometry::perpendicular(), 0.0, 0.0).unwrap();
            assert!((g - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn closed_form_g2_matches_regression_perpendicular() {
        let geom = DetectionGeometry::perpendicular();
        let t = linspace(0.0, 3.0, 4);
        let tau = linspace(0.0, 3.0, 4);
        for gs in [0.0, 0.5, 2.0] {
            let p = free(gs);
            let num = FreeEvolution::new(&p)
                .unwrap()
                .g2_numerator_grid(&named_state(NamedState::Doubly), geom, &t, &tau)
                .unwrap();
            for (i, &a) in t.iter().enumerate() {
                for (j, &b) in tau.iter().enumerate() {
                    let cf = closed_form_g2(&p, geom, a, b).unwrap();
                    assert!((cf - num[i][j]).abs() < 1e-10, "γ*={gs} t={a} τ={b}");
                }
            }
        }
    }

    #[test]
    fn closed_form_intensity_matches_trajectory() {
        let geom = DetectionGeometry::along_axis(0.0357);
        let p = free(2.0);
        let t = [0.0, 0.5, 1.5, 4.0];
        let i = FreeEvolution::new(&p)
            .unwrap()
            .intensity(&named_state(NamedState::Doubly), geom, &t)
            .unwrap();
        for (k, &s) in t.iter().enumerate() {
            assert!((closed_form_intensity(&p, geom, s).unwrap() - i[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn population_form_matches_operator_form() {
        let geom = DetectionGeometry::along_axis(0.0357);
        let fe = FreeEvolution::new(&free(0.5)).unwrap();
        let rho0 = named_state(NamedState::Doubly);
        let t = linspace(0.0, 5.0, 11);
        let direct = fe.g2_equal_time(&rho0, geom, &t).unwrap();
        for (rho, g) in fe.states(&rho0, &t).unwrap().iter().zip(&direct) {
            let pop = g2_equal_time_population_form(rho.matrix(), geom).unwrap();
            assert!((pop - g).abs() < 1e-10);
        }
        let zero = Op4::zeros();
        assert!(g2_equal_time_population_form(&zero, geom).is_err());
    }

    #[test]
    fn grids_are_checked() {
        let fe = FreeEvolution::new(&free(0.0)).unwrap();
        let rho0 = named_state(NamedState::Doubly);
        let geom = DetectionGeometry::perpendicular();
        assert!(fe.g1_grid(&rho0, geom, &[1.0, 0.5], &[0.0]).is_err());
        assert!(fe.g1_spectrum(&rho0, geom, &[0.0], &[1.0, 1.0]).is_err());
        assert!(fe.n_exc_trajectory(&rho0, &[-1.0]).is_err());
    }
}
