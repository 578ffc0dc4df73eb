// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Basis conventions, emitter operators and the parameter record.
//!
//! The canonical basis is `{|gg⟩, |ge⟩, |eg⟩, |ee⟩}` where the first letter
//! is emitter 1 and the second emitter 2, so `|ge⟩` has emitter 2 excited.
//! Every 4×4 matrix in the crate is written in this order.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use crate::{Error, Result};

pub type Op4 = Matrix4<Complex64>;

/// Index of `|gg⟩` in the canonical basis.
pub const GG: usize = 0;
/// Index of `|ge⟩` (emitter 2 excited).
pub const GE: usize = 1;
/// Index of `|eg⟩` (emitter 1 excited).
pub const EG: usize = 2;
/// Index of `|ee⟩`.
pub const EE: usize = 3;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Physical rates of the pair, all in units of Γ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Single-emitter radiative decay γ₁₁ = γ₂₂ = Γ₀.
    pub gamma0: f64,
    /// Debye-Waller/Franck-Condon factor (zero-phonon-line fraction).
    pub alpha: f64,
    /// Coherent dipole-dipole coupling Ω₁₂.
    pub omega12: f64,
    /// Dissipative coupling γ₁₂.
    pub gamma12: f64,
    /// Pure dephasing rate γ* of each emitter.
    pub gamma_star: f64,
    /// Inter-emitter detuning Δ = ω₂ − ω₁.
    pub delta: f64,
    /// Drive detuning ω − ω₀ with ω₀ = (ω₁ + ω₂)/2.
    pub laser_detuning: f64,
    /// Rabi frequencies (Ω_R1, Ω_R2).
    pub rabi: [f64; 2],
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::standard()
    }
}

impl SystemParams {
    /// The reference pair: α = 0.3, Ω₁₂ = 20Γ₀, γ₁₂ = 0.3Γ₀, no drive,
    /// no dephasing, no detuning.
    pub fn standard() -> Self {
        Self {
            gamma0: 1.0,
            alpha: 0.3,
            omega12: 20.0,
            gamma12: 0.3,
            gamma_star: 0.0,
            delta: 0.0,
            laser_detuning: 0.0,
            rabi: [0.0, 0.0],
        }
    }

    pub fn with_rabi(mut self, rabi: f64) -> Self {
        self.rabi = [rabi, rabi];
        self
    }

    pub fn with_gamma_star(mut self, gamma_star: f64) -> Self {
        self.gamma_star = gamma_star;
        self
    }

    pub fn with_laser_detuning(mut self, detuning: f64) -> Self {
        self.laser_detuning = detuning;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_coupling(mut self, omega12: f64, gamma12: f64) -> Self {
        self.omega12 = omega12;
        self.gamma12 = gamma12;
        self
    }

    /// Resonance frequencies of the two emitters relative to ω₀,
    /// split symmetrically: ω₁ − ω₀ = −Δ/2, ω₂ − ω₀ = +Δ/2.
    pub fn emitter_offsets(&self) -> [f64; 2] {
        [-0.5 * self.delta, 0.5 * self.delta]
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("gamma0", self.gamma0),
            ("alpha", self.alpha),
            ("omega12", self.omega12),
            ("gamma12", self.gamma12),
            ("gamma_star", self.gamma_star),
            ("delta", self.delta),
            ("laser_detuning", self.laser_detuning),
            ("rabi", self.rabi[0]),
            ("rabi", self.rabi[1]),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(Error::param(name, format!("{value} is not finite")));
            }
        }
        if self.gamma0 <= 0.0 {
            return Err(Error::param("gamma0", "must be positive"));
        }
        if self.gamma_star < 0.0 {
            return Err(Error::param("gamma_star", "must be non-negative"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::param("alpha", "must lie in (0, 1]"));
        }
        if self.gamma12.abs() > self.alpha * self.gamma0 * (1.0 + 1e-12) {
            return Err(Error::param(
                "gamma12",
                format!(
                    "|gamma12| = {} exceeds alpha * gamma0 = {}",
                    self.gamma12.abs(),
                    self.alpha * self.gamma0
                ),
            ));
        }
        Ok(())
    }
}

/// Observation direction, reduced to the phase φ = k R̂·r between the fields
/// of the two emitters at the detector. φ = 0 is detection perpendicular to
/// the inter-emitter axis; φ = kr is detection along it.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DetectionGeometry {
    pub phi: f64,
}

impl DetectionGeometry {
    pub fn perpendicular() -> Self {
        Self { phi: 0.0 }
    }

    /// Detection along the inter-emitter axis for separation `r/λ`.
    pub fn along_axis(separation_over_lambda: f64) -> Self {
        Self {
            phi: 2.0 * std::f64::consts::PI * separation_over_lambda,
        }
    }
}

/// A general (not necessarily Hermitian) operator on the pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterOperator(pub Op4);

impl EmitterOperator {
    pub fn zero() -> Self {
        Self(Op4::zeros())
    }

    pub fn identity() -> Self {
        Self(Op4::identity())
    }

    pub fn matrix(&self) -> &Op4 {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(self.0 * factor)
    }

    /// `⟨ψ|O|ψ⟩`-style expectation `Tr(O ρ)`.
    pub fn expectation(&self, rho: &DensityMatrix) -> Complex64 {
        (self.0 * rho.0).trace()
    }

    pub fn apply(&self, psi: &Vector4<Complex64>) -> Vector4<Complex64> {
        self.0 * psi
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Mul for EmitterOperator {
    type Output = EmitterOperator;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl Add for EmitterOperator {
    type Output = EmitterOperator;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for EmitterOperator {
    type Output = EmitterOperator;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

/// A validated two-emitter density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Op4);

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(m: Op4) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        let herm = (m - m.adjoint()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - c(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        let min_eig = min_eigenvalue(&m);
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self(m))
    }

    /// Symmetrises `m`, rescales it to unit trace and then validates it.
    pub fn normalized(m: Op4) -> Result<Self> {
        let h = hermitian_part(&m);
        let tr = h.trace().re;
        if tr.abs() < f64::MIN_POSITIVE || !tr.is_finite() {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        Self::new(h / c(tr))
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) state vector.
    pub fn pure(psi: &Vector4<Complex64>) -> Result<Self> {
        let norm2 = psi.norm_squared();
        if norm2 == 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidDensityMatrix("zero state vector".into()));
        }
        Self::new(psi * psi.adjoint() / c(norm2))
    }

    pub fn ground() -> Self {
        named_state(NamedState::Ground)
    }

    pub fn matrix(&self) -> &Op4 {
        &self.0
    }

    pub fn into_matrix(self) -> Op4 {
        self.0
    }

    /// `ρ_{ab,cd} = ⟨a b|ρ|c d⟩` with canonical indices.
    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    /// Population `⟨s|ρ|s⟩` of a named state.
    pub fn population(&self, state: NamedState) -> f64 {
        let v = state.ket();
        (v.adjoint() * self.0 * v)[(0, 0)].re
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }
}

impl fmt::Display for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn hermitian_part(m: &Op4) -> Op4 {
    (m + m.adjoint()) * c(0.5)
}

fn min_eigenvalue(m: &Op4) -> f64 {
    let h = hermitian_part(m);
    SymmetricEigen::new(h)
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &x| a.min(x))
}

/// Eigenstates of the undriven, undetuned pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedState {
    /// `|G⟩ = |gg⟩`
    Ground,
    /// `|S⟩ = (|ge⟩ + |eg⟩)/√2`
    Symmetric,
    /// `|A⟩ = (|eg⟩ − |ge⟩)/√2`
    Antisymmetric,
    /// `|E⟩ = |ee⟩`
    Doubly,
}

impl NamedState {
    pub const ALL: [NamedState; 4] = [
        NamedState::Ground,
        NamedState::Symmetric,
        NamedState::Antisymmetric,
        NamedState::Doubly,
    ];

    pub fn ket(self) -> Vector4<Complex64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = Vector4::zeros();
        match self {
            NamedState::Ground => v[GG] = c(1.0),
            NamedState::Symmetric => {
                v[GE] = c(h);
                v[EG] = c(h);
            }
            NamedState::Antisymmetric => {
                v[EG] = c(h);
                v[GE] = c(-h);
            }
            NamedState::Doubly => v[EE] = c(1.0),
        }
        v
    }

    pub fn label(self) -> &'static str {
        match self {
            NamedState::Ground => "G",
            NamedState::Symmetric => "S",
            NamedState::Antisymmetric => "A",
            NamedState::Doubly => "E",
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g" | "ground" => Ok(NamedState::Ground),
            "s" | "symmetric" => Ok(NamedState::Symmetric),
            "a" | "antisymmetric" => Ok(NamedState::Antisymmetric),
            "e" | "doubly" | "doubly_excited" => Ok(NamedState::Doubly),
            _ => Err(Error::param("state", format!("unknown state `{s}`"))),
        }
    }
}

/// Lowering operator σᵢ of emitter `i ∈ {1, 2}`.
pub fn sigma(i: usize) -> Result<EmitterOperator> {
    let mut m = Op4::zeros();
    match i {
        1 => {
            m[(GG, EG)] = c(1.0);
            m[(GE, EE)] = c(1.0);
        }
        2 => {
            m[(GG, GE)] = c(1.0);
            m[(EG, EE)] = c(1.0);
        }
        _ => return Err(Error::InvalidEmitter(i)),
    }
    Ok(EmitterOperator(m))
}

pub(crate) fn sigmas() -> [EmitterOperator; 2] {
    [sigma(1).unwrap(), sigma(2).unwrap()]
}

/// Number operator σᵢ†σᵢ.
pub fn excitation(i: usize) -> Result<EmitterOperator> {
    let s = sigma(i)?;
    Ok(s.adjoint() * s)
}

/// Normalised collective jump operator seen by a far-field detector,
/// `D = (e^{iφ/2} σ₁ + e^{−iφ/2} σ₂)/√2`.
pub fn detection_operator(geom: DetectionGeometry) -> EmitterOperator {
    let [s1, s2] = sigmas();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    if geom.phi == 0.0 {
        return (s1 + s2).scale(c(h));
    }
    let p = Complex64::from_polar(h, 0.5 * geom.phi);
    s1.scale(p) + s2.scale(p.conj())
}

pub fn named_state(tag: NamedState) -> DensityMatrix {
    let v = tag.ket();
    DensityMatrix(v * v.adjoint())
}
