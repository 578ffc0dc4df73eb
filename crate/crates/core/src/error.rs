// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("emitter index {0} is out of range (expected 1 or 2)")]
    InvalidEmitter(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("Green's function is singular at kr = {0}")]
    SingularGreenFunction(f64),

    #[error("coupling {target} is not achievable for r/λ in ({lower}, {upper})")]
    CouplingNotAchievable { target: f64, lower: f64, upper: f64 },

    #[error("steady state is not unique: Liouvillian kernel has dimension {0}")]
    DegenerateSteadyState(usize),

    #[error("eigenvector basis is ill-conditioned (condition number {0:.3e}); use the ODE path")]
    FlaggedDecomposition(f64),

    #[error("ODE step refinement failed: halving the step moved the endpoint by {0:.3e}")]
    StepRefinement(f64),

    #[error("time grid must be non-decreasing and finite")]
    InvalidTimeGrid,

    #[error("correlation is undefined: intensity {0:.3e} vanishes")]
    UndefinedCorrelation(f64),

    #[error("closed form is singular: {0}")]
    SingularFormula(&'static str),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
