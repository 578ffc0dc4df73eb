// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, Mul};

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::model::{c, excitation, sigmas, EmitterOperator, Op4};
use crate::SystemParams;

pub type Mat16 = SMatrix<Complex64, 16, 16>;
pub type Vec16 = SVector<Complex64, 16>;

/// Column-stacking vectorisation.
pub fn vec(m: &Op4) -> Vec16 {
    Vec16::from_column_slice(m.as_slice())
}

pub fn unvec(v: &Vec16) -> Op4 {
    Op4::from_column_slice(v.as_slice())
}

/// Matrix of the map `ρ ↦ A ρ B`, i.e. `Bᵀ ⊗ A`.
pub fn sandwich(a: &Op4, b: &Op4) -> Mat16 {
    b.transpose().kronecker(a)
}

/// Matrix of `L_{O₁,O₂}[ρ] = 2 O₁ ρ O₂† − {O₂†O₁, ρ}`.
pub fn lindblad_pair(o1: &Op4, o2: &Op4) -> Mat16 {
    let id = Op4::identity();
    let k = o2.adjoint() * o1;
    sandwich(o1, &o2.adjoint()) * c(2.0) - sandwich(&k, &id) - sandwich(&id, &k)
}

const SVD_MAX_ITERATIONS: usize = 10_000;

/// Singular values, or `None` if the iteration does not converge.
pub(crate) fn singular_values(m: &Mat16) -> Option<SVector<f64, 16>> {
    m.try_svd(false, false, f64::EPSILON, SVD_MAX_ITERATIONS)
        .map(|svd| svd.singular_values)
}

/// A linear map on 4×4 operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superoperator(pub Mat16);

impl Superoperator {
    pub fn zero() -> Self {
        Self(Mat16::zeros())
    }

    pub fn matrix(&self) -> &Mat16 {
        &self.0
    }

    pub fn apply(&self, rho: &Op4) -> Op4 {
        unvec(&(self.0 * vec(rho)))
    }

    /// Adjoint with respect to the Hilbert-Schmidt inner product.
    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `vec(I)ᴴ L`: the functional `X ↦ Tr(L[X])`. Zero for a
    /// trace-preserving generator.
    pub fn trace_functional(&self) -> Vec16 {
        (vec(&Op4::identity()).adjoint() * self.0).adjoint()
    }

    /// Maximum absolute row sum, an upper bound on every eigenvalue modulus.
    pub fn norm_inf(&self) -> f64 {
        self.0
            .row_iter()
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl Add for Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Mul<f64> for Superoperator {
    type Output = Superoperator;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0 * c(rhs))
    }
}

/// Hamiltonian (units of ħ) in the frame rotating at the drive frequency:
/// `Σᵢ (ωᵢ − ω) σᵢ†σᵢ + (Ω_Rᵢ/2)(σᵢ + σᵢ†) + Ω₁₂ (σ₁†σ₂ + σ₂†σ₁)`.
pub fn build_hamiltonian(p: &SystemParams) -> EmitterOperator {
    let s = sigmas();
    let offsets = p.emitter_offsets();
    let mut h = Op4::zeros();
    for i in 0..2 {
        let n = s[i].adjoint().0 * s[i].0;
        h += n * c(offsets[i] - p.laser_detuning);
        h += (s[i].0 + s[i].0.adjoint()) * c(0.5 * p.rabi[i]);
    }
    h += (s[0].0.adjoint() * s[1].0 + s[1].0.adjoint() * s[0].0) * c(p.omega12);
    EmitterOperator(h)
}

/// Full generator: commutator, collective radiative dissipator with
/// `γ₁₁ = γ₂₂ = Γ₀`, `γ₁₂ = γ₂₁`, and local pure dephasing.
pub fn build_liouvillian(p: &SystemParams) -> Superoperator {
    let h = build_hamiltonian(p).0;
    let id = Op4::identity();
    let minus_i = Complex64::new(0.0, -1.0);
    let mut l = (sandwich(&h, &id) - sandwich(&id, &h)) * minus_i;

    let s = sigmas();
    let rates = [[p.gamma0, p.gamma12], [p.gamma12, p.gamma0]];
    for i in 0..2 {
        for j in 0..2 {
            if rates[i][j] != 0.0 {
                l += lindblad_pair(&s[i].0, &s[j].0) * c(0.5 * rates[i][j]);
            }
        }
    }
    if p.gamma_star != 0.0 {
        for i in 1..=2 {
            let n = excitation(i).unwrap().0;
            l += lindblad_pair(&n, &n) * c(0.5 * p.gamma_star);
        }
    }
    Superoperator(l)
}
