// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

use super::superop::{singular_values, unvec, vec, Superoperator, Vec16};
use crate::model::{c, hermitian_part, Op4, DensityMatrix};
use crate::{Error, Result};

/// Singular values below this fraction of the largest one span the kernel.
const KERNEL_TOL: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-10;

/// Unique trace-one solution of `L[ρ] = 0`.
///
/// The kernel dimension is measured from the singular values of `L`; the
/// state itself comes from an LU solve of `L` with the first population
/// equation replaced by the trace condition, followed by one step of
/// iterative refinement.
pub fn steady_state(l: &Superoperator) -> Result<DensityMatrix> {
    let m = l.matrix();
    let sv = singular_values(m)
        .ok_or_else(|| Error::Numerical("SVD of the Liouvillian did not converge".into()))?;
    let smax = sv.max();
    let dim = sv.iter().filter(|&&s| s <= KERNEL_TOL * smax.max(1.0)).count();
    if dim != 1 {
        return Err(Error::DegenerateSteadyState(dim));
    }

    // Row 0 is the ρ_{gg,gg} equation; the trace rows of L sum to zero, so
    // it is redundant and can carry Tr ρ = 1 instead.
    let trace_row = vec(&Op4::identity()).transpose();
    let mut a = *m;
    a.set_row(0, &trace_row);
    let mut rhs = Vec16::zeros();
    rhs[0] = c(1.0);
    let lu = a.lu();
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("steady-state system is singular".into()))?;
    let r = rhs - a * x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }

    let rho = hermitian_part(&unvec(&x));
    let tr = rho.trace();
    let rho = rho / tr;
    let residual = (m * vec(&rho)).norm();
    if residual > RESIDUAL_TOL * smax.max(1.0) {
        return Err(Error::Numerical(format!(
            "steady-state residual {residual:.3e} too large"
        )));
    }
    DensityMatrix::new(rho)
}

/// Deviation `δ = ρ_ss − ρ_ref` of the steady state from a trace-one
/// reference, solved directly from `L[δ] = −L[ρ_ref]`, `Tr δ = 0`.
///
/// Small deviations keep their full relative precision this way, which
/// matters for observables that vanish with the drive (`ρ_ref = |G⟩⟨G|`).
/// The kernel is assumed to be one-dimensional; use [`steady_state`] to
/// check that first.
pub fn steady_state_offset(l: &Superoperator, reference: &Op4) -> Result<Op4> {
    let m = l.matrix();
    let trace_row = vec(&Op4::identity()).transpose();
    let mut a = *m;
    a.set_row(0, &trace_row);
    let mut rhs = -(m * vec(reference));
    rhs[0] = c(0.0);
    let lu = a.lu();
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("steady-state system is singular".into()))?;
    for _ in 0..2 {
        let r = rhs - a * x;
        match lu.solve(&r) {
            Some(dx) => x += dx,
            None => break,
        }
    }
    Ok(hermitian_part(&unvec(&x)))
}
