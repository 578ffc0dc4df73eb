// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Steady-state observables under continuous coherent drive.

pub mod analytic;

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};

use crate::fit::log_log_slopes;
use crate::liouvillian::{build_liouvillian, lindblad_pair, steady_state, steady_state_offset, vec};
use crate::model::{c, detection_operator, sigmas, DensityMatrix, Op4, EE, EG, GE, GG};
use crate::sweep::{grid_indices, try_map};
use crate::{DetectionGeometry, Error, Result, SystemParams};

/// Below this `⟨D†D⟩²` the normalised correlation is undefined.
const MIN_INTENSITY_SQ: f64 = 1e-30;

/// Default absolute prominence (in `n_exc` units) for spectral peaks.
pub const PEAK_PROMINENCE: f64 = 1e-3;

/// Drive frequency choices with a closed-form threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Excitation {
    /// Laser at `ω₀`, resonant with the `|G⟩ → |E⟩` two-photon transition.
    TwoPhoton,
    /// Laser at `ω₀ + Ω₁₂`, resonant with `|G⟩ → |S⟩`.
    Superradiant,
}

impl Excitation {
    pub fn laser_detuning(self, p: &SystemParams) -> f64 {
        match self {
            Excitation::TwoPhoton => 0.0,
            Excitation::Superradiant => p.omega12,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Excitation::TwoPhoton => "two_photon",
            Excitation::Superradiant => "superradiant",
        }
    }
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Excitation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two_photon" => Ok(Excitation::TwoPhoton),
            "superradiant" => Ok(Excitation::Superradiant),
            _ => Err(Error::param(
                "excitation",
                format!("`{s}` is not one of two_photon, superradiant"),
            )),
        }
    }
}

/// `n_exc = 2ρ_{ee,ee} + ρ_{eg,eg} + ρ_{ge,ge}`.
pub fn n_exc(rho: &DensityMatrix) -> f64 {
    n_exc_of(rho.matrix())
}

pub(crate) fn n_exc_of(m: &Op4) -> f64 {
    2.0 * m[(EE, EE)].re + m[(EG, EG)].re + m[(GE, GE)].re
}

/// Rate of red-shifted (phonon sideband) photon emission,
/// `⟨G|𝒥_vib[ρ]|G⟩ − ⟨E|𝒥_vib[ρ]|E⟩` with
/// `𝒥_vib = ½(1−α)Γ₀ Σᵢ L_{σᵢ,σᵢ}`.
pub fn redshifted_emission_rate(rho: &DensityMatrix, p: &SystemParams) -> f64 {
    let s = sigmas();
    let mut j = lindblad_pair(&s[0].0, &s[0].0) + lindblad_pair(&s[1].0, &s[1].0);
    j *= c(0.5 * (1.0 - p.alpha) * p.gamma0);
    let out = j * vec(rho.matrix());
    // ⟨G|X|G⟩ and ⟨E|X|E⟩ sit at vec indices 0 and 15.
    out[4 * GG + GG].re - out[4 * EE + EE].re
}

/// Zero-delay `g²(0) = ⟨D†D†DD⟩ / ⟨D†D⟩²`.
pub fn g2_zero(rho: &DensityMatrix, geom: DetectionGeometry) -> Result<f64> {
    let d = detection_operator(geom).0;
    let dd = d.adjoint() * d;
    let intensity = (dd * rho.matrix()).trace().re;
    if !(intensity * intensity > MIN_INTENSITY_SQ) {
        return Err(Error::UndefinedCorrelation(intensity));
    }
    let pair = (d.adjoint() * d.adjoint() * d * d * rho.matrix()).trace().re;
    Ok(pair / (intensity * intensity))
}

/// Perpendicular-detection `g²(0)` written with density-matrix elements,
/// `4ρ_{ee,ee} / (2ρ_{ee,ee} + ρ_{eg,eg} + ρ_{ge,ge} + ρ_{eg,ge} + ρ_{ge,eg})²`.
pub fn g2_zero_population_form(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    let den = 2.0 * m[(EE, EE)].re + m[(EG, EG)].re + m[(GE, GE)].re + m[(EG, GE)].re + m[(GE, EG)].re;
    if !(den * den > 4.0 * MIN_INTENSITY_SQ) {
        return Err(Error::UndefinedCorrelation(0.5 * den));
    }
    Ok(4.0 * m[(EE, EE)].re / (den * den))
}

/// Steady state of `p` (validated parameters).
pub fn steady(p: &SystemParams) -> Result<DensityMatrix> {
    p.validate()?;
    steady_state(&build_liouvillian(p))
}

/// One-dimensional sweep result.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub params: SystemParams,
}

impl SpectrumResult {
    /// Indices of local maxima whose prominence is at least `prominence`.
    pub fn peaks(&self, prominence: f64) -> Vec<usize> {
        find_peaks(&self.values, prominence)
    }

    /// Grid positions of [`SpectrumResult::peaks`].
    pub fn peak_positions(&self, prominence: f64) -> Vec<f64> {
        self.peaks(prominence).into_iter().map(|i| self.grid[i]).collect()
    }
}

/// Local maxima (plateaus reported at their first index) with absolute
/// topographic prominence `≥ prominence`.
pub fn find_peaks(y: &[f64], prominence: f64) -> Vec<usize> {
    let n = y.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if y[i] > y[i - 1] {
            let mut j = i;
            while j + 1 < n && y[j + 1] == y[i] {
                j += 1;
            }
            if j + 1 < n && y[j + 1] < y[i] {
                let mut left_min = y[i];
                let mut k = i;
                while k > 0 {
                    k -= 1;
                    if y[k] > y[i] {
                        break;
                    }
                    left_min = left_min.min(y[k]);
                }
                let mut right_min = y[i];
                let mut k = j;
                while k + 1 < n {
                    k += 1;
                    if y[k] > y[i] {
                        break;
                    }
                    right_min = right_min.min(y[k]);
                }
                if y[i] - left_min.max(right_min) >= prominence {
                    out.push(i);
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// `n_exc` of the steady state with the laser detuning swept over `grid`.
pub fn excitation_spectrum(p: &SystemParams, grid: &[f64]) -> Result<SpectrumResult> {
    check_grid(grid, "detuning_grid")?;
    p.validate()?;
    let values = try_map(grid, |&w| steady(&p.with_laser_detuning(w)).map(|r| n_exc(&r)))?;
    Ok(SpectrumResult {
        grid: grid.to_vec(),
        values,
        params: *p,
    })
}

fn check_grid(grid: &[f64], name: &'static str) -> Result<()> {
    if grid.len() < 2 || grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param(name, "needs at least two strictly increasing finite points"));
    }
    Ok(())
}

/// Steady-state `n_exc` as a function of drive strength.
#[derive(Debug, Clone, PartialEq)]
pub struct SaturationCurve {
    pub rabi: Vec<f64>,
    /// `Ω_R²/Γ₀²`.
    pub intensity: Vec<f64>,
    pub n_exc: Vec<f64>,
    /// Local `d ln n_exc / d ln Ω_R²`.
    pub slopes: Vec<f64>,
    /// Intensity at which the curve first reaches half of its infinite-drive
    /// value, by log-log interpolation between samples; `None` if the grid
    /// never gets there.
    pub saturation_intensity: Option<f64>,
    pub params: SystemParams,
}

/// Infinite-drive `n_exc`: the state becomes maximally mixed.
pub const N_EXC_INFINITE_DRIVE: f64 = 1.0;

impl SaturationCurve {
    /// `𝓘/𝓘_sat` per point, when the saturation intensity is known.
    pub fn normalized_intensity(&self) -> Option<Vec<f64>> {
        let sat = self.saturation_intensity?;
        Some(self.intensity.iter().map(|i| i / sat).collect())
    }

    /// Largest local slope below the saturation intensity (or over the
    /// whole curve if it never saturates).
    pub fn max_presaturation_slope(&self) -> f64 {
        let limit = self.saturation_intensity.unwrap_or(f64::INFINITY);
        self.intensity
            .iter()
            .zip(&self.slopes)
            .filter(|(i, _)| **i < limit)
            .map(|(_, s)| *s)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Saturation curve at fixed laser detuning (taken from `p`). `rabi_grid`
/// must be positive and strictly increasing.
pub fn saturation_curve(p: &SystemParams, rabi_grid: &[f64]) -> Result<SaturationCurve> {
    check_grid(rabi_grid, "rabi_grid")?;
    if rabi_grid[0] <= 0.0 {
        return Err(Error::param("rabi_grid", "drive amplitudes must be positive"));
    }
    p.validate()?;
    let n = try_map(rabi_grid, |&r| small_drive_n_exc(&p.with_rabi(r)))?;
    let intensity: Vec<f64> = rabi_grid.iter().map(|r| r * r / (p.gamma0 * p.gamma0)).collect();
    let slopes = log_log_slopes(&intensity, &n);
    let half = 0.5 * N_EXC_INFINITE_DRIVE;
    let saturation_intensity = (1..n.len()).find(|&i| n[i - 1] < half && n[i] >= half).map(|i| {
        let (x0, x1) = (intensity[i - 1].ln(), intensity[i].ln());
        let (y0, y1) = (n[i - 1].ln(), n[i].ln());
        (x0 + (half.ln() - y0) * (x1 - x0) / (y1 - y0)).exp()
    });
    Ok(SaturationCurve {
        rabi: rabi_grid.to_vec(),
        intensity,
        n_exc: n,
        slopes,
        saturation_intensity,
        params: *p,
    })
}

/// `n_exc` of the steady state, accurate to full relative precision even
/// when the excitation is tiny: the state is solved as a deviation from
/// `|G⟩⟨G|`, which carries no excitation.
pub fn small_drive_n_exc(p: &SystemParams) -> Result<f64> {
    p.validate()?;
    let l = build_liouvillian(p);
    // Checks uniqueness; the deviation solve assumes it.
    steady_state(&l)?;
    let delta = steady_state_offset(&l, DensityMatrix::ground().matrix())?;
    Ok(n_exc_of(&delta))
}

/// Two-dimensional sweep result, `values[i][j]` at `(rows[i], cols[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Map2D {
    pub rows: Vec<f64>,
    pub cols: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub params: SystemParams,
}

fn map_2d<F>(p: &SystemParams, rows: &[f64], cols: &[f64], f: F) -> Result<Map2D>
where
    F: Fn(f64, f64) -> Result<f64> + Sync + Send,
{
    let idx = grid_indices(rows.len(), cols.len());
    let flat = try_map(&idx, |&(i, j)| f(rows[i], cols[j]))?;
    let values = flat.chunks(cols.len().max(1)).map(|r| r.to_vec()).collect();
    Ok(Map2D {
        rows: rows.to_vec(),
        cols: cols.to_vec(),
        values,
        params: *p,
    })
}

/// `n_exc` over (dephasing rate, laser detuning); rows are `γ*`.
pub fn spectrum_map(p: &SystemParams, gamma_star_grid: &[f64], detuning_grid: &[f64]) -> Result<Map2D> {
    check_grid(gamma_star_grid, "gamma_star_grid")?;
    check_grid(detuning_grid, "detuning_grid")?;
    p.validate()?;
    map_2d(p, gamma_star_grid, detuning_grid, |g, w| {
        steady(&p.with_gamma_star(g).with_laser_detuning(w)).map(|r| n_exc(&r))
    })
}

/// Steady-state `g²(0)` (perpendicular detection) over (Ω_R, γ*); rows are
/// `Ω_R`, columns `γ*`.
pub fn g2_zero_map(
    p: &SystemParams,
    rabi_grid: &[f64],
    gamma_star_grid: &[f64],
    excitation: Excitation,
) -> Result<Map2D> {
    check_grid(rabi_grid, "rabi_grid")?;
    check_grid(gamma_star_grid, "gamma_star_grid")?;
    p.validate()?;
    let base = p.with_laser_detuning(excitation.laser_detuning(p));
    map_2d(&base, rabi_grid, gamma_star_grid, |r, g| {
        let rho = steady(&base.with_rabi(r).with_gamma_star(g))?;
        g2_zero(&rho, DetectionGeometry::perpendicular())
    })
}

/// Steady-state `g²(0)` for one drive configuration.
pub fn g2_zero_at(p: &SystemParams, excitation: Excitation, geom: DetectionGeometry) -> Result<f64> {
    let rho = steady(&p.with_laser_detuning(excitation.laser_detuning(p)))?;
    g2_zero(&rho, geom)
}

/// Which parameter a level-crossing search varies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossingAxis {
    /// Vary `γ*` at fixed drive `Ω_R`.
    GammaStar { rabi: f64 },
    /// Vary `Ω_R` at fixed `γ*`.
    Rabi { gamma_star: f64 },
}

/// First value on `[lo, hi]` (scanned on a log grid, then bisected) where
/// the steady-state `g²(0)` crosses `level`.
pub fn g2_level_crossing(
    p: &SystemParams,
    excitation: Excitation,
    axis: CrossingAxis,
    level: f64,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::param("bracket", "needs 0 < lo < hi"));
    }
    let eval = |x: f64| -> Result<f64> {
        let q = match axis {
            CrossingAxis::GammaStar { rabi } => p.with_rabi(rabi).with_gamma_star(x),
            CrossingAxis::Rabi { gamma_star } => p.with_rabi(x).with_gamma_star(gamma_star),
        };
        Ok(g2_zero_at(&q, excitation, DetectionGeometry::perpendicular())? - level)
    };
    let xs = crate::sweep::logspace(lo, hi, 200);
    let fs = try_map(&xs, |&x| eval(x))?;
    let k = (1..xs.len())
        .find(|&i| fs[i - 1].signum() != fs[i].signum())
        .ok_or_else(|| Error::Numerical(format!("g²(0) does not cross {level} on [{lo}, {hi}]")))?;
    bisect(eval, xs[k - 1], xs[k], fs[k - 1])
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if (b - a).abs() <= 1e-12 * m.abs() {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Closed-form critical dephasing rate: `(4Ω₁₂²Γ₀)^{1/3}` for two-photon
/// drive and `4|Ω₁₂|` for superradiant drive.
pub fn threshold_gamma_star(p: &SystemParams, excitation: Excitation) -> Result<f64> {
    require_coupling(p)?;
    Ok(match excitation {
        Excitation::TwoPhoton => (4.0 * p.omega12 * p.omega12 * p.gamma0).cbrt(),
        Excitation::Superradiant => 4.0 * p.omega12.abs(),
    })
}

/// Closed-form critical drive: `(|Ω₁₂|Γ₀)^{1/2}` for two-photon drive and
/// `2|Ω₁₂|` for superradiant drive.
pub fn threshold_rabi(p: &SystemParams, excitation: Excitation) -> Result<f64> {
    require_coupling(p)?;
    Ok(match excitation {
        Excitation::TwoPhoton => (p.omega12.abs() * p.gamma0).sqrt(),
        Excitation::Superradiant => 2.0 * p.omega12.abs(),
    })
}

fn require_coupling(p: &SystemParams) -> Result<()> {
    if p.omega12 == 0.0 || !p.omega12.is_finite() {
        return Err(Error::param("omega12", "thresholds need a finite non-zero coupling"));
    }
    Ok(())
}

/// Largest drive used for the finite-difference expansion.
pub const EXPANSION_MAX_RABI: f64 = 0.01;

/// Low-drive expansion `n_exc ≈ a·Ω_R² + b·Ω_R⁴` at the laser detuning of
/// `p`, extracted numerically: `n_exc/Ω_R²` is sampled at three drives up
/// to [`EXPANSION_MAX_RABI`] and a quadratic in `Ω_R²` is fitted exactly,
/// which also removes the `Ω_R⁶` term.
pub fn saturation_coefficients_numeric(p: &SystemParams) -> Result<(f64, f64)> {
    let rabis = [EXPANSION_MAX_RABI / 3.0, 2.0 * EXPANSION_MAX_RABI / 3.0, EXPANSION_MAX_RABI];
    let mut a = Matrix3::zeros();
    let mut y = Vector3::zeros();
    for (k, &r) in rabis.iter().enumerate() {
        let x = r * r;
        a[(k, 0)] = 1.0;
        a[(k, 1)] = x;
        a[(k, 2)] = x * x;
        y[k] = small_drive_n_exc(&p.with_rabi(r))? / x;
    }
    let coef = a
        .lu()
        .solve(&y)
        .ok_or_else(|| Error::Numerical("expansion fit is singular".into()))?;
    Ok((coef[0], coef[1]))
}

/// Dephasing rate in `[lo, hi]` at which the numerically extracted
/// quadratic coefficient changes sign (two-photon drive).
pub fn quadratic_sign_change(p: &SystemParams, lo: f64, hi: f64) -> Result<f64> {
    let base = p.with_laser_detuning(0.0);
    let f = |g: f64| saturation_coefficients_numeric(&base.with_gamma_star(g)).map(|c| c.1);
    let (fa, fb) = (f(lo)?, f(hi)?);
    if fa.signum() == fb.signum() {
        return Err(Error::Numerical(format!(
            "quadratic coefficient keeps its sign on [{lo}, {hi}]"
        )));
    }
    bisect(f, lo, hi, fa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{named_state, NamedState};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
        let a = Op4::from_fn(|_, _| {
            num_complex::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        DensityMatrix::normalized(a * a.adjoint()).unwrap()
    }

    #[test]
    fn excitation_of_named_states() {
        assert_eq!(n_exc(&named_state(NamedState::Doubly)), 2.0);
        assert!((n_exc(&named_state(NamedState::Symmetric)) - 1.0).abs() < 1e-15);
        assert_eq!(n_exc(&named_state(NamedState::Ground)), 0.0);
    }

    #[test]
    fn redshifted_rate_is_proportional_to_excitation() {
        let p = SystemParams::standard();
        assert!((redshifted_emission_rate(&named_state(NamedState::Doubly), &p) - 1.4).abs() < 1e-14);
        assert_eq!(redshifted_emission_rate(&DensityMatrix::ground(), &p), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let rho = random_state(&mut rng);
            let direct = redshifted_emission_rate(&rho, &p);
            assert!((direct - 0.7 * n_exc(&rho)).abs() < 1e-12);
        }
    }

    #[test]
    fn g2_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let rho = random_state(&mut rng);
            let a = g2_zero(&rho, DetectionGeometry::perpendicular()).unwrap();
            let b = g2_zero_population_form(&rho).unwrap();
            assert!((a - b).abs() < 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn g2_of_inverted_pair_and_dark_ground() {
        let e = named_state(NamedState::Doubly);
        assert!((g2_zero(&e, DetectionGeometry::perpendicular()).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(
            g2_zero(&DensityMatrix::ground(), DetectionGeometry::perpendicular()),
            Err(Error::UndefinedCorrelation(_))
        ));
    }

    #[test]
    fn closed_form_thresholds() {
        let p = SystemParams::standard();
        assert!((threshold_gamma_star(&p, Excitation::TwoPhoton).unwrap() - 11.696).abs() < 1e-3);
        assert_eq!(threshold_gamma_star(&p, Excitation::Superradiant).unwrap(), 80.0);
        assert!((threshold_rabi(&p, Excitation::TwoPhoton).unwrap() - 4.4721).abs() < 1e-4);
        assert_eq!(threshold_rabi(&p, Excitation::Superradiant).unwrap(), 40.0);
        let weak = p.with_coupling(0.5, 0.3);
        assert!((threshold_gamma_star(&weak, Excitation::TwoPhoton).unwrap() - 1.0).abs() < 1e-15);
        let unit = p.with_coupling(1.0, 0.3);
        assert_eq!(threshold_rabi(&unit, Excitation::TwoPhoton).unwrap(), 1.0);
        assert!(threshold_rabi(&p.with_coupling(0.0, 0.3), Excitation::TwoPhoton).is_err());
    }

    #[test]
    fn peak_finder() {
        let y = [0.0, 1.0, 0.5, 0.5, 2.0, 1.999, 1.9995, 0.0];
        assert_eq!(find_peaks(&y, 1e-3), vec![1, 4]);
        assert_eq!(find_peaks(&y, 0.0), vec![1, 4, 6]);
        assert!(find_peaks(&[1.0, 1.0, 1.0], 0.0).is_empty());
    }

    #[test]
    fn small_drive_matches_full_solver() {
        let p = SystemParams::standard().with_rabi(0.5).with_gamma_star(2.0);
        let full = n_exc(&steady(&p).unwrap());
        assert!((small_drive_n_exc(&p).unwrap() - full).abs() < 1e-13);
    }

    #[test]
    fn strong_drive_mixes_completely() {
        let p = SystemParams::standard().with_rabi(3e3).with_gamma_star(1.0);
        assert!((n_exc(&steady(&p).unwrap()) - N_EXC_INFINITE_DRIVE).abs() < 1e-3);
    }

    #[test]
    fn grids_are_validated() {
        let p = SystemParams::standard();
        assert!(excitation_spectrum(&p, &[1.0]).is_err());
        assert!(excitation_spectrum(&p, &[1.0, 0.0]).is_err());
        assert!(saturation_curve(&p, &[0.0, 1.0]).is_err());
    }
}
