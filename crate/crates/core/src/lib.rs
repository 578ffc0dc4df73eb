// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Two dipole-coupled two-level emitters with pure dephasing.
//!
//! The crate builds the Lindblad generator of the pair as a 16×16
//! superoperator and derives from it
//!
//! * steady states and their observables (excitation spectra, saturation
//!   curves, zero-delay photon correlations),
//! * free-evolution observables through the Liouvillian spectral
//!   decomposition and the quantum regression theorem,
//! * analytic closed forms (critical dephasing rates, Lorentzian line
//!   shapes, eigen-operators, second-order correlations) that are kept in
//!   separate `analytic` modules and only ever compared against the solver.
//!
//! All rates are in units of the single-emitter decay rate Γ₀ and times in
//! units of 1/Γ₀.

// `!(x > 0.0)` is used throughout to reject NaN along with the bound.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod dynamics;
mod error;
pub mod fit;
pub mod liouvillian;
pub mod model;
pub mod stationary;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{
    DensityMatrix, DetectionGeometry, EmitterOperator, NamedState, SystemParams,
};

/// Library version, recorded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
