// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-time correlations from the quantum regression theorem.
//!
//! `⟨A(t) B(t+τ) C(t)⟩ = Tr(B e^{Lτ}[C ρ(t) A])`, and the two-operator
//! function is the special case `C = I`. In the eigenbasis this is the
//! double sum
//! `Σ_{μμ'} e^{λ_μ t} e^{λ_μ' τ} Tr(ρ_{L,μ}†ρ₀) Tr(ρ_{L,μ'}† C ρ_{R,μ} A) Tr(B ρ_{R,μ'})`.

use num_complex::Complex64;

use super::propagate::evolve_operator_ode;
use super::spectral::SpectralDecomposition;
use super::superop::{sandwich, vec, Mat16, Superoperator, Vec16};
use crate::model::{DensityMatrix, EmitterOperator, Op4};
use crate::{Error, Result};

/// Terms whose combined weight falls below this are dropped from the
/// resolvent sum, so that dark zero modes do not produce 0/0 at ω = 0.
const NEGLIGIBLE_WEIGHT: f64 = 1e-13;

/// Precomputed factors of the regression double sum for fixed `ρ₀`, `A`,
/// `B` and `C`; evaluation on a `(t, τ)` grid is then a pair of 16-term
/// sums per point.
#[derive(Debug, Clone)]
pub struct RegressionKernel {
    eigenvalues: [Complex64; 16],
    coeffs: Vec16,
    kernel: Mat16,
    readout: Vec16,
}

impl RegressionKernel {
    /// Kernel of `⟨A(t) B(t+τ) C(t)⟩`. Fails on a flagged decomposition.
    pub fn new(
        dec: &SpectralDecomposition,
        rho0: &DensityMatrix,
        a: &EmitterOperator,
        b: &EmitterOperator,
        c: &EmitterOperator,
    ) -> Result<Self> {
        if dec.is_flagged() {
            return Err(Error::FlaggedDecomposition(dec.condition()));
        }
        let right = dec.right_matrix();
        let kernel = dec.inverse_matrix() * sandwich(&c.0, &a.0) * right;
        // Tr(B X) = vec(Bᵀ) · vec(X) without conjugation.
        let readout = (vec(&b.0.transpose()).transpose() * right).transpose();
        Ok(Self {
            eigenvalues: *dec.eigenvalues(),
            coeffs: dec.projections(rho0.matrix()),
            kernel,
            readout,
        })
    }

    /// Kernel of `⟨A(t) B(t+τ)⟩`.
    pub fn two_op(
        dec: &SpectralDecomposition,
        rho0: &DensityMatrix,
        a: &EmitterOperator,
        b: &EmitterOperator,
    ) -> Result<Self> {
        Self::new(dec, rho0, a, b, &EmitterOperator::identity())
    }

    /// Overlaps of `C ρ(t) A` with the left eigen-operators.
    fn sandwiched(&self, t: f64) -> Vec16 {
        let evolved = Vec16::from_fn(|m, _| self.coeffs[m] * (self.eigenvalues[m] * t).exp());
        self.kernel * evolved
    }

    pub fn evaluate(&self, t: f64, tau: f64) -> Complex64 {
        let d = self.sandwiched(t);
        (0..16)
            .map(|m| self.readout[m] * d[m] * (self.eigenvalues[m] * tau).exp())
            .sum()
    }

    /// `∫₀^∞ e^{iωτ} ⟨A(t)B(t+τ)C(t)⟩ dτ = −Σ_μ' w_μ'(t)/(iω + λ_μ')`.
    ///
    /// Only meaningful when every contributing mode decays; a pure
    /// oscillation with non-negligible weight gives an error.
    pub fn laplace(&self, t: f64, omega: f64) -> Result<Complex64> {
        let d = self.sandwiched(t);
        let iw = Complex64::new(0.0, omega);
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..16 {
            let w = self.readout[m] * d[m];
            if w.norm() <= NEGLIGIBLE_WEIGHT {
                continue;
            }
            let lam = self.eigenvalues[m];
            if lam.re > -1e-12 {
                return Err(Error::Numerical(format!(
                    "non-decaying mode λ = {lam} carries weight {:.3e}",
                    w.norm()
                )));
            }
            acc -= w / (iw + lam);
        }
        Ok(acc)
    }

    /// `(λ_μ', w_μ'(t))` for every mode with non-negligible weight.
    pub fn mode_weights(&self, t: f64) -> Vec<(Complex64, Complex64)> {
        let d = self.sandwiched(t);
        (0..16)
            .map(|m| (self.eigenvalues[m], self.readout[m] * d[m]))
            .filter(|(_, w)| w.norm() > NEGLIGIBLE_WEIGHT)
            .collect()
    }
}

/// `⟨A(t) B(t+τ)⟩`, routed through the ODE path when `dec` is flagged.
pub fn two_time_correlation(
    dec: &SpectralDecomposition,
    rho0: &DensityMatrix,
    a: &EmitterOperator,
    b: &EmitterOperator,
    t: f64,
    tau: f64,
) -> Result<Complex64> {
    three_op_correlation(dec, rho0, a, b, &EmitterOperator::identity(), t, tau)
}

/// `⟨A(t) B(t+τ) C(t)⟩`, routed through the ODE path when `dec` is flagged.
pub fn three_op_correlation(
    dec: &SpectralDecomposition,
    rho0: &DensityMatrix,
    a: &EmitterOperator,
    b: &EmitterOperator,
    c: &EmitterOperator,
    t: f64,
    tau: f64,
) -> Result<Complex64> {
    if dec.is_flagged() {
        return three_op_correlation_ode(dec.generator(), rho0, a, b, c, t, tau);
    }
    check_times(t, tau)?;
    Ok(RegressionKernel::new(dec, rho0, a, b, c)?.evaluate(t, tau))
}

fn check_times(t: f64, tau: f64) -> Result<()> {
    if t >= 0.0 && tau >= 0.0 && t.is_finite() && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTimeGrid)
    }
}

/// ODE-path `⟨A(t) B(t+τ)⟩`.
pub fn two_time_correlation_ode(
    l: &Superoperator,
    rho0: &DensityMatrix,
    a: &EmitterOperator,
    b: &EmitterOperator,
    t: f64,
    tau: f64,
) -> Result<Complex64> {
    three_op_correlation_ode(l, rho0, a, b, &EmitterOperator::identity(), t, tau)
}

/// ODE-path `⟨A(t) B(t+τ) C(t)⟩`: propagate `ρ₀` to `t`, form `C ρ(t) A`,
/// propagate that for `τ` and take `Tr(B ·)`.
pub fn three_op_correlation_ode(
    l: &Superoperator,
    rho0: &DensityMatrix,
    a: &EmitterOperator,
    b: &EmitterOperator,
    c: &EmitterOperator,
    t: f64,
    tau: f64,
) -> Result<Complex64> {
    check_times(t, tau)?;
    let grid = regression_ode_grid(l, rho0, a, b, c, &[t], &[tau])?;
    Ok(grid[0][0])
}

/// ODE-path correlation on a `(t, τ)` grid with one integration over `t`
/// and one over `τ` per `t` sample. Both grids must be non-decreasing.
pub fn regression_ode_grid(
    l: &Superoperator,
    rho0: &DensityMatrix,
    a: &EmitterOperator,
    b: &EmitterOperator,
    c: &EmitterOperator,
    t_grid: &[f64],
    tau_grid: &[f64],
) -> Result<Vec<Vec<Complex64>>> {
    let states = evolve_operator_ode(l, rho0.matrix(), t_grid)?;
    states
        .iter()
        .map(|rho_t| {
            let x: Op4 = c.0 * rho_t * a.0;
            let ys = evolve_operator_ode(l, &x, tau_grid)?;
            Ok(ys.iter().map(|y| (b.0 * y).trace()).collect())
        })
        .collect()
}
