// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;

use num_complex::Complex64;

use super::eigen::eigen_decompose;
use super::superop::{singular_values, unvec, vec, Mat16, Superoperator, Vec16};
use crate::model::Op4;
use crate::Result;

/// Right-eigenvector bases with a larger condition number are treated as
/// defective; propagation then has to go through the ODE integrator.
pub const CONDITION_LIMIT: f64 = 1e8;

const ZERO_MODE_TOL: f64 = 1e-9;

/// Eigenvalues with biorthonormal right/left eigen-operators of a
/// Liouvillian, sorted by descending real part.
///
/// `Tr(ρ_{L,μ}† ρ_{R,μ'}) = δ_{μμ'}` holds by construction: the left
/// operators are read off the rows of the inverse of the right-eigenvector
/// matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: [Complex64; 16],
    right: Mat16,
    inverse: Mat16,
    condition: f64,
    generator: Superoperator,
}

/// Eigen-decomposition of `l`. Never fails on conditioning alone; check
/// [`SpectralDecomposition::is_flagged`] before using the modal expansions.
pub fn spectral_decompose(l: &Superoperator) -> Result<SpectralDecomposition> {
    let (values, vectors) = eigen_decompose(l.matrix())?;

    let mut order: Vec<usize> = (0..16).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (values[a], values[b]);
        y.re.partial_cmp(&x.re)
            .unwrap_or(Ordering::Equal)
            .then(y.im.partial_cmp(&x.im).unwrap_or(Ordering::Equal))
    });

    let mut eigenvalues = [Complex64::new(0.0, 0.0); 16];
    let mut right = Mat16::zeros();
    for (slot, &k) in order.iter().enumerate() {
        eigenvalues[slot] = values[k];
        right.set_column(slot, &fix_phase(vectors.column(k).into_owned()));
    }

    let condition = match singular_values(&right) {
        Some(sv) if sv.min() > 0.0 => sv.max() / sv.min(),
        _ => f64::INFINITY,
    };

    // Trace-normalise zero modes so that a unique one is the steady state.
    let trace_row = vec(&Op4::identity()).transpose();
    for (slot, lam) in eigenvalues.iter().enumerate() {
        if lam.norm() < ZERO_MODE_TOL {
            let tr = (trace_row * right.column(slot))[(0, 0)];
            if tr.norm() > 1e-8 {
                let col = right.column(slot) / tr;
                right.set_column(slot, &col);
            }
        }
    }

    let inverse = right.try_inverse().unwrap_or_else(Mat16::zeros);
    let condition = if inverse.iter().all(|z| z.re.is_finite() && z.im.is_finite())
        && inverse != Mat16::zeros()
    {
        condition
    } else {
        f64::INFINITY
    };

    Ok(SpectralDecomposition {
        eigenvalues,
        right,
        inverse,
        condition,
        generator: *l,
    })
}

/// Unit norm with the largest entry real and positive.
fn fix_phase(mut v: Vec16) -> Vec16 {
    let (mut best, mut idx) = (0.0, 0);
    for (i, z) in v.iter().enumerate() {
        // Ties are resolved towards the first index so the result is stable.
        if z.norm() > best * (1.0 + 1e-12) {
            best = z.norm();
            idx = i;
        }
    }
    if best > 0.0 {
        let phase = v[idx] / best;
        v /= phase * v.norm();
    }
    v
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[Complex64; 16] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, mode: usize) -> Complex64 {
        self.eigenvalues[mode]
    }

    /// Right eigen-operator `ρ_{R,μ}`.
    pub fn right_op(&self, mode: usize) -> Op4 {
        unvec(&self.right.column(mode).into_owned())
    }

    /// Left eigen-operator `ρ_{L,μ}` (not its adjoint).
    pub fn left_op(&self, mode: usize) -> Op4 {
        unvec(&self.inverse.row(mode).adjoint())
    }

    pub fn right_ops(&self) -> Vec<Op4> {
        (0..16).map(|m| self.right_op(m)).collect()
    }

    pub fn left_ops(&self) -> Vec<Op4> {
        (0..16).map(|m| self.left_op(m)).collect()
    }

    /// Condition number of the right-eigenvector basis (unit columns).
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// True when the basis is too ill-conditioned for modal expansions.
    pub fn is_flagged(&self) -> bool {
        !(self.condition <= CONDITION_LIMIT)
    }

    /// The Liouvillian this decomposition was computed from.
    pub fn generator(&self) -> &Superoperator {
        &self.generator
    }

    /// `Tr(ρ_{L,μ}† X)` for a single mode.
    pub fn projection(&self, mode: usize, x: &Op4) -> Complex64 {
        (self.inverse.row(mode) * vec(x))[(0, 0)]
    }

    /// All sixteen overlaps `Tr(ρ_{L,μ}† X)`.
    pub fn projections(&self, x: &Op4) -> Vec16 {
        self.inverse * vec(x)
    }

    /// `Σ_μ coeff_μ e^{λ_μ t} ρ_{R,μ}`.
    pub fn synthesize(&self, coeffs: &Vec16, t: f64) -> Op4 {
        let weighted = Vec16::from_fn(|m, _| coeffs[m] * (self.eigenvalues[m] * t).exp());
        unvec(&(self.right * weighted))
    }

    /// Index of the eigenvalue closest to zero.
    pub fn steady_mode(&self) -> usize {
        (0..16)
            .min_by(|&a, &b| {
                self.eigenvalues[a]
                    .norm()
                    .partial_cmp(&self.eigenvalues[b].norm())
                    .unwrap_or(Ordering::Equal)
            })
            .unwrap_or(0)
    }

    /// Number of eigenvalues within `tol` of zero.
    pub fn zero_modes(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|z| z.norm() < tol).count()
    }

    /// Largest `‖L ρ_R − λ ρ_R‖` and `‖L† ρ_L − λ* ρ_L‖` over all modes.
    pub fn max_residual(&self) -> (f64, f64) {
        let l = self.generator.matrix();
        let ladj = l.adjoint();
        let mut right_res: f64 = 0.0;
        let mut left_res: f64 = 0.0;
        for m in 0..16 {
            let lam = self.eigenvalues[m];
            let r = self.right.column(m);
            right_res = right_res.max((l * r - r * lam).norm() / r.norm().max(1e-300));
            let w = self.inverse.row(m).adjoint();
            left_res = left_res.max((ladj * w - w * lam.conj()).norm() / w.norm().max(1e-300));
        }
        (right_res, left_res)
    }

    /// Largest deviation of `Tr(ρ_{L,μ}† ρ_{R,μ'})` from `δ_{μμ'}`.
    pub fn biorthonormality_error(&self) -> f64 {
        let g = self.inverse * self.right;
        (g - Mat16::identity())
            .iter()
            .fold(0.0, |a, z| a.max(z.norm()))
    }

    pub(crate) fn right_matrix(&self) -> &Mat16 {
        &self.right
    }

    pub(crate) fn inverse_matrix(&self) -> &Mat16 {
        &self.inverse
    }
}
