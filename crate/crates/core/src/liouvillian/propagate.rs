// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

use super::spectral::SpectralDecomposition;
use super::superop::{unvec, vec, Mat16, Superoperator};
use crate::model::{c, hermitian_part, DensityMatrix, Op4};
use crate::{Error, Result};

/// Largest endpoint change tolerated when the step is halved.
const REFINEMENT_TOL: f64 = 1e-8;
const MAX_STEP: f64 = 1e-3;

/// `ρ(t) = Σ_μ e^{λ_μ t} Tr(ρ_{L,μ}†ρ₀) ρ_{R,μ}`.
///
/// Refuses flagged decompositions, whose modal sums are unreliable.
pub fn propagate_spectral(
    dec: &SpectralDecomposition,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    if dec.is_flagged() {
        return Err(Error::FlaggedDecomposition(dec.condition()));
    }
    if !t.is_finite() {
        return Err(Error::InvalidTimeGrid);
    }
    let rho = dec.synthesize(&dec.projections(rho0.matrix()), t);
    DensityMatrix::new(hermitian_part(&rho))
}

/// Default RK4 step for `l`: `min(1e-3, 0.01/‖L‖∞)`.
pub fn default_step(l: &Superoperator) -> f64 {
    let norm = l.norm_inf();
    if norm > 0.0 {
        MAX_STEP.min(0.01 / norm)
    } else {
        MAX_STEP
    }
}

/// One classical fourth-order Runge-Kutta step of `dX/dt = L[X]`.
pub fn ode_step(l: &Superoperator, x: &Op4, h: f64) -> Op4 {
    let m = l.matrix();
    let y = vec(x);
    let hh = c(h);
    let k1 = m * y;
    let k2 = m * (y + k1 * (hh * 0.5));
    let k3 = m * (y + k2 * (hh * 0.5));
    let k4 = m * (y + k3 * hh);
    unvec(&(y + (k1 + k2 * c(2.0) + k3 * c(2.0) + k4) * (hh / 6.0)))
}

/// The RK4 update written as a single matrix. For a linear generator one
/// step is exactly multiplication by `I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24`.
fn rk4_matrix(l: &Superoperator, h: f64) -> Mat16 {
    let a = l.matrix() * c(h);
    let a2 = a * a;
    let a3 = a2 * a;
    let a4 = a3 * a;
    Mat16::identity() + a + a2 * c(0.5) + a3 * c(1.0 / 6.0) + a4 * c(1.0 / 24.0)
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    let ordered = t_grid.windows(2).all(|w| w[1] >= w[0]);
    if t_grid.is_empty() || !ordered || t_grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidTimeGrid);
    }
    Ok(())
}

/// Fixed-step RK4 trajectory of an arbitrary operator, sampled on `t_grid`
/// (non-decreasing, starting at or after 0). Each interval is split into
/// equal sub-steps no longer than `h`.
pub fn propagate_ode_with_step(
    l: &Superoperator,
    x0: &Op4,
    t_grid: &[f64],
    h: f64,
) -> Result<Vec<Op4>> {
    check_grid(t_grid)?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::param("step", "must be positive and finite"));
    }
    let mut out = Vec::with_capacity(t_grid.len());
    let mut y = vec(x0);
    let mut now = 0.0;
    for &t in t_grid {
        let span = t - now;
        if span > 0.0 {
            let n = (span / h).ceil().max(1.0) as usize;
            let p = rk4_matrix(l, span / n as f64);
            for _ in 0..n {
                y = p * y;
            }
        }
        now = t;
        out.push(unvec(&y));
    }
    Ok(out)
}

/// RK4 trajectory of an arbitrary operator with step validation: the grid
/// is integrated at the default step and at half of it, and the finer run is
/// returned if every sample agrees to 1e-8.
pub fn evolve_operator_ode(l: &Superoperator, x0: &Op4, t_grid: &[f64]) -> Result<Vec<Op4>> {
    let h = default_step(l);
    let coarse = propagate_ode_with_step(l, x0, t_grid, h)?;
    let fine = propagate_ode_with_step(l, x0, t_grid, 0.5 * h)?;
    let scale = x0.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    let change = coarse
        .iter()
        .zip(&fine)
        .flat_map(|(a, b)| (a - b).iter().map(|z| z.norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    if !(change < REFINEMENT_TOL * scale) {
        return Err(Error::StepRefinement(change));
    }
    Ok(fine)
}

/// Validated RK4 trajectory of a density matrix.
pub fn propagate_ode(
    l: &Superoperator,
    rho0: &DensityMatrix,
    t_grid: &[f64],
) -> Result<Vec<DensityMatrix>> {
    evolve_operator_ode(l, rho0.matrix(), t_grid)?
        .into_iter()
        .map(|m| DensityMatrix::new(hermitian_part(&m)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouvillian::{build_liouvillian, spectral_decompose};
    use crate::model::{named_state, NamedState, EE};
    use crate::SystemParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_abs(m: &Op4) -> f64 {
        m.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    fn random_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
        let a = Op4::from_fn(|_, _| {
            num_complex::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        DensityMatrix::normalized(a * a.adjoint()).unwrap()
    }

    #[test]
    fn rk4_matrix_matches_stage_form() {
        let l = build_liouvillian(&SystemParams::standard().with_rabi(2.0).with_gamma_star(0.5));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_state(&mut rng);
        let h = 1e-3;
        let direct = ode_step(&l, x.matrix(), h);
        let via_matrix = unvec(&(rk4_matrix(&l, h) * vec(x.matrix())));
        assert!(max_abs(&(direct - via_matrix)) < 1e-15);
    }

    #[test]
    fn finite_difference_matches_generator() {
        let l = build_liouvillian(&SystemParams::standard().with_rabi(1.0).with_gamma_star(0.3));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = 1e-6;
        for _ in 0..5 {
            let x = random_state(&mut rng);
            let next = ode_step(&l, x.matrix(), h);
            let fd = (next - x.matrix()) / c(h);
            let scale = max_abs(&l.apply(x.matrix())).max(1.0);
            assert!(max_abs(&(fd - l.apply(x.matrix()))) < 1e-4 * scale);
        }
    }

    #[test]
    fn spectral_reconstruction_at_zero() {
        let p = SystemParams::standard().with_rabi(0.7).with_gamma_star(0.2);
        let dec = spectral_decompose(&build_liouvillian(&p)).unwrap();
        let rho0 = named_state(NamedState::Antisymmetric);
        let back = propagate_spectral(&dec, &rho0, 0.0).unwrap();
        assert!(max_abs(&(back.matrix() - rho0.matrix())) < 1e-9);
    }

    #[test]
    fn doubly_excited_population_decays_at_twice_the_rate() {
        let p = SystemParams::standard().with_gamma_star(0.5);
        let dec = spectral_decompose(&build_liouvillian(&p)).unwrap();
        let rho0 = named_state(NamedState::Doubly);
        for t in [0.1, 0.5, 1.0, 3.0] {
            let rho = propagate_spectral(&dec, &rho0, t).unwrap();
            assert!((rho.element(EE, EE).re - (-2.0 * t).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn symmetric_start_decays_superradiantly() {
        let dec = spectral_decompose(&build_liouvillian(&SystemParams::standard())).unwrap();
        let rho = propagate_spectral(&dec, &named_state(NamedState::Symmetric), 1.0).unwrap();
        let n = rho.population(NamedState::Symmetric);
        assert!((n - 0.27253).abs() < 1e-5);
        assert!((n - (-1.3f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn ode_relaxes_to_ground() {
        let l = build_liouvillian(&SystemParams::standard().with_gamma_star(0.5));
        let traj = propagate_ode(&l, &named_state(NamedState::Doubly), &[0.0, 25.0, 50.0]).unwrap();
        let end = traj.last().unwrap();
        assert!(max_abs(&(end.matrix() - DensityMatrix::ground().matrix())) < 1e-8);
        for rho in &traj {
            assert!((rho.trace() - c(1.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn zero_generator_is_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rho0 = random_state(&mut rng);
        let traj = propagate_ode(&Superoperator::zero(), &rho0, &[0.0, 1.0, 7.5]).unwrap();
        for rho in traj {
            assert_eq!(rho.matrix(), rho0.matrix());
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let l = Superoperator::zero();
        let x = Op4::identity();
        assert_eq!(
            propagate_ode_with_step(&l, &x, &[1.0, 0.5], 1e-3),
            Err(Error::InvalidTimeGrid)
        );
        assert_eq!(
            propagate_ode_with_step(&l, &x, &[], 1e-3),
            Err(Error::InvalidTimeGrid)
        );
        assert!(propagate_ode_with_step(&l, &x, &[1.0], 0.0).is_err());
    }

    #[test]
    fn too_coarse_step_is_caught() {
        let l = build_liouvillian(&SystemParams::standard());
        let x = named_state(NamedState::Symmetric);
        let coarse = propagate_ode_with_step(&l, x.matrix(), &[2.0], 0.05).unwrap();
        let fine = propagate_ode_with_step(&l, x.matrix(), &[2.0], 0.025).unwrap();
        assert!(max_abs(&(coarse[0] - fine[0])) > REFINEMENT_TOL);
    }

    #[test]
    fn defective_generator_is_refused() {
        // A single Jordan block has one eigenvector; the basis is singular.
        let mut m = Mat16::zeros();
        for i in 0..15 {
            m[(i, i)] = c(-1.0);
            m[(i, i + 1)] = c(1.0);
        }
        m[(15, 15)] = c(-1.0);
        let dec = spectral_decompose(&Superoperator(m)).unwrap();
        assert!(dec.is_flagged());
        let rho0 = DensityMatrix::ground();
        assert!(matches!(
            propagate_spectral(&dec, &rho0, 1.0),
            Err(Error::FlaggedDecomposition(_))
        ));
    }
}
