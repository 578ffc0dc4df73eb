// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! The Lindblad generator as a 16×16 superoperator.
//!
//! Density matrices are vectorised by stacking columns, so that
//! `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)` and entry `ρ[(r, c)]` sits at index
//! `4c + r`. Under this convention the Hilbert-Schmidt product is
//! `Tr(X†Y) = vec(X)ᴴ vec(Y)` and the adjoint generator `L†` is the
//! conjugate transpose of the matrix of `L`.

mod correlation;
mod eigen;
mod propagate;
mod spectral;
mod steady;
mod superop;

pub use correlation::{
    regression_ode_grid, three_op_correlation, three_op_correlation_ode, two_time_correlation,
    two_time_correlation_ode, RegressionKernel,
};
pub use propagate::{
    default_step, evolve_operator_ode, ode_step, propagate_ode, propagate_ode_with_step, propagate_spectral,
};
pub use spectral::{spectral_decompose, SpectralDecomposition, CONDITION_LIMIT};
pub use steady::{steady_state, steady_state_offset};
pub use superop::{
    build_hamiltonian, build_liouvillian, lindblad_pair, sandwich, unvec, vec, Superoperator,
    Vec16, Mat16,
};
