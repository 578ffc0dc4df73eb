// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: a TOML document with a fixed set of tables.
//!
//! ```toml
//! scenario = "spectrum"
//! output = "map.csv"
//!
//! [params]
//! rabi = 4.0
//! delta = 5.0
//!
//! [grids.detuning]
//! start = -30.0
//! stop = 30.0
//! count = 301
//!
//! [grids.gamma_star]
//! start = 0.1
//! stop = 30.0
//! count = 50
//! scale = "log"
//! ```
//!
//! Every table rejects keys it does not know. Missing parameters take the
//! values of [`SystemParams::standard`].

use coupled_emitters::coupling::Geometry;
use coupled_emitters::stationary::Excitation;
use coupled_emitters::sweep::{linspace, logspace};
use coupled_emitters::{DetectionGeometry, NamedState, SystemParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Steady-state `n_exc` against laser detuning, optionally also against `γ*`.
    Spectrum,
    /// Steady-state `n_exc` at fixed detuning against drive strength.
    Saturation,
    /// Steady-state `g²(0)` over drive strength and dephasing.
    G2map,
    /// `n_exc(t)` of a free decay, optionally with the detected intensity.
    Decay,
    /// Time-resolved emission spectrum of a free decay.
    G1spec,
    /// Second-order correlation of a free decay.
    G2time,
    /// Closed-form critical dephasing rates and drives.
    Thresholds,
    /// Dipole-dipole couplings against emitter separation.
    Coupling,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Spectrum,
        Scenario::Saturation,
        Scenario::G2map,
        Scenario::Decay,
        Scenario::G1spec,
        Scenario::G2time,
        Scenario::Thresholds,
        Scenario::Coupling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Spectrum => "spectrum",
            Scenario::Saturation => "saturation",
            Scenario::G2map => "g2map",
            Scenario::Decay => "decay",
            Scenario::G1spec => "g1spec",
            Scenario::G2time => "g2time",
            Scenario::Thresholds => "thresholds",
            Scenario::Coupling => "coupling",
        }
    }

    /// Grids that must be present, then grids that may be.
    fn grids(self) -> (&'static [GridName], &'static [GridName]) {
        use GridName::*;
        match self {
            Scenario::Spectrum => (&[Detuning], &[GammaStar]),
            Scenario::Saturation => (&[Rabi], &[]),
            Scenario::G2map => (&[Rabi, GammaStar], &[]),
            Scenario::Decay => (&[T], &[]),
            Scenario::G1spec => (&[T, Omega], &[Tau]),
            Scenario::G2time => (&[T], &[Tau]),
            Scenario::Thresholds => (&[], &[]),
            Scenario::Coupling => (&[Separation], &[]),
        }
    }
}

/// Either one value for both emitters or one per emitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerEmitter {
    Both(f64),
    Each([f64; 2]),
}

impl PerEmitter {
    pub fn values(self) -> [f64; 2] {
        match self {
            PerEmitter::Both(x) => [x, x],
            PerEmitter::Each(v) => v,
        }
    }
}

/// One value or a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn values(&self) -> Vec<f64> {
        match self {
            OneOrMany::One(x) => vec![*x],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    pub gamma0: f64,
    pub alpha: f64,
    pub omega12: f64,
    pub gamma12: f64,
    pub gamma_star: f64,
    pub delta: f64,
    pub laser_detuning: f64,
    pub rabi: PerEmitter,
}

impl Default for Params {
    fn default() -> Self {
        let p = SystemParams::standard();
        Self {
            gamma0: p.gamma0,
            alpha: p.alpha,
            omega12: p.omega12,
            gamma12: p.gamma12,
            gamma_star: p.gamma_star,
            delta: p.delta,
            laser_detuning: p.laser_detuning,
            rabi: PerEmitter::Both(0.0),
        }
    }
}

impl Params {
    pub fn system(&self) -> SystemParams {
        SystemParams {
            gamma0: self.gamma0,
            alpha: self.alpha,
            omega12: self.omega12,
            gamma12: self.gamma12,
            gamma_star: self.gamma_star,
            delta: self.delta,
            laser_detuning: self.laser_detuning,
            rabi: self.rabi.values(),
        }
    }
}

/// Far-field detection phase `φ`; a list only where a scenario compares
/// several directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Detection {
    pub phi: OneOrMany,
}

/// Dipole and axis directions for the coupling scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub dipole1: [f64; 3],
    pub dipole2: [f64; 3],
    pub axis: [f64; 3],
}

impl Default for GeometryConfig {
    fn default() -> Self {
        let g = Geometry::h_configuration(0.05);
        Self {
            dipole1: g.dipole1,
            dipole2: g.dipole2,
            axis: g.axis,
        }
    }
}

impl GeometryConfig {
    pub fn at(&self, separation_over_lambda: f64) -> Geometry {
        Geometry {
            separation_over_lambda,
            dipole1: self.dipole1,
            dipole2: self.dipole2,
            axis: self.axis,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self.scale {
            Scale::Linear => linspace(self.start, self.stop, self.count),
            Scale::Log => logspace(self.start, self.stop, self.count),
        }
    }

    fn validate(&self, field: &str) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(format!("grids.{field}: {msg}")));
        if !self.start.is_finite() || !self.stop.is_finite() {
            return bad("start and stop must be finite".into());
        }
        if self.count < 2 {
            return bad(format!("count must be at least 2 (got {})", self.count));
        }
        if self.start >= self.stop {
            return bad(format!("start {} must be below stop {}", self.start, self.stop));
        }
        if self.scale == Scale::Log && self.start <= 0.0 {
            return bad(format!("a log grid needs start > 0 (got {})", self.start));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridName {
    Detuning,
    GammaStar,
    Rabi,
    T,
    Tau,
    Omega,
    Separation,
}

impl GridName {
    const ALL: [GridName; 7] = [
        GridName::Detuning,
        GridName::GammaStar,
        GridName::Rabi,
        GridName::T,
        GridName::Tau,
        GridName::Omega,
        GridName::Separation,
    ];

    pub fn key(self) -> &'static str {
        match self {
            GridName::Detuning => "detuning",
            GridName::GammaStar => "gamma_star",
            GridName::Rabi => "rabi",
            GridName::T => "t",
            GridName::Tau => "tau",
            GridName::Omega => "omega",
            GridName::Separation => "separation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    /// Laser detuning `ω − ω₀`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_star: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi: Option<Grid>,
    /// Time `t` after preparation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Grid>,
    /// Delay `τ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Grid>,
    /// Emission frequency relative to `ω₀`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Grid>,
    /// Separation `r/λ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation: Option<Grid>,
}

impl Grids {
    pub fn get(&self, name: GridName) -> Option<&Grid> {
        match name {
            GridName::Detuning => self.detuning.as_ref(),
            GridName::GammaStar => self.gamma_star.as_ref(),
            GridName::Rabi => self.rabi.as_ref(),
            GridName::T => self.t.as_ref(),
            GridName::Tau => self.tau.as_ref(),
            GridName::Omega => self.omega.as_ref(),
            GridName::Separation => self.separation.as_ref(),
        }
    }

    /// Points of a grid that validation guarantees to be present.
    pub fn points(&self, name: GridName) -> Vec<f64> {
        self.get(name).map(Grid::points).unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExcitationName {
    TwoPhoton,
    Superradiant,
}

impl From<ExcitationName> for Excitation {
    fn from(e: ExcitationName) -> Self {
        match e {
            ExcitationName::TwoPhoton => Excitation::TwoPhoton,
            ExcitationName::Superradiant => Excitation::Superradiant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateName {
    G,
    S,
    A,
    E,
}

impl From<StateName> for NamedState {
    fn from(s: StateName) -> Self {
        match s {
            StateName::G => NamedState::Ground,
            StateName::S => NamedState::Symmetric,
            StateName::A => NamedState::Antisymmetric,
            StateName::E => NamedState::Doubly,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Drive frequency for `g2map`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excitation: Option<ExcitationName>,
    /// Initial state of the time-domain scenarios.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<StateName>,
    /// Several dephasing rates, each run as its own curve; replaces
    /// `params.gamma_star`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_star_values: Option<Vec<f64>>,
    /// Coherent coupling whose separation the coupling scenario reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_omega12: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    /// File name of the main CSV inside the output directory; defaults to
    /// `<scenario>.csv`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detection: Option<Detection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryConfig>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub grids: Grids,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: Options,
}

fn is_default<T: Default + PartialEq>(x: &T) -> bool {
    *x == T::default()
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim_end().to_owned()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Canonical TOML text of a configuration; `parse_config` inverts it.
pub fn render(cfg: &RunConfig) -> String {
    toml::to_string(cfg).expect("configuration always serialises")
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn system(&self) -> SystemParams {
        self.params.system()
    }

    pub fn output_name(&self) -> String {
        self.output
            .clone()
            .unwrap_or_else(|| format!("{}.csv", self.scenario.name()))
    }

    /// Dephasing rates to run: `options.gamma_star_values` or the single
    /// `params.gamma_star`.
    pub fn gamma_stars(&self) -> Vec<f64> {
        self.options
            .gamma_star_values
            .clone()
            .unwrap_or_else(|| vec![self.params.gamma_star])
    }

    pub fn detections(&self) -> Vec<DetectionGeometry> {
        self.detection
            .as_ref()
            .map(|d| d.phi.values())
            .unwrap_or_else(|| vec![0.0])
            .into_iter()
            .map(|phi| DetectionGeometry { phi })
            .collect()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.system()
            .validate()
            .map_err(|e| config_err(format!("params: {e}")))?;

        if let Some(name) = &self.output {
            if name.is_empty() || name.contains(['/', '\\']) || name == "." || name == ".." {
                return Err(config_err(format!("output: `{name}` must be a plain file name")));
            }
        }

        let s = self.scenario;
        let (required, optional) = s.grids();
        for g in GridName::ALL {
            let key = g.key();
            match self.grids.get(g) {
                Some(grid) if required.contains(&g) || optional.contains(&g) => grid.validate(key)?,
                Some(_) => return Err(config_err(format!("grids.{key}: not used by scenario `{}`", s.name()))),
                None if required.contains(&g) => {
                    return Err(config_err(format!("grids.{key}: required by scenario `{}`", s.name())))
                }
                None => {}
            }
        }
        if let Some(g) = &self.grids.rabi {
            if g.start <= 0.0 {
                return Err(config_err("grids.rabi: drive amplitudes must be positive"));
            }
        }
        if let Some(g) = &self.grids.gamma_star {
            if g.start < 0.0 {
                return Err(config_err("grids.gamma_star: dephasing rates must be non-negative"));
            }
        }
        if let Some(g) = &self.grids.separation {
            if g.start <= 0.0 {
                return Err(config_err("grids.separation: separations must be positive"));
            }
        }
        if let Some(g) = &self.grids.t {
            if g.start < 0.0 {
                return Err(config_err("grids.t: times must be non-negative"));
            }
        }
        if let Some(g) = &self.grids.tau {
            if g.start < 0.0 {
                return Err(config_err("grids.tau: delays must be non-negative"));
            }
        }

        let time_domain = matches!(s, Scenario::Decay | Scenario::G1spec | Scenario::G2time);
        let o = &self.options;
        let allowed = |field: &str, ok: bool, present: bool| {
            if present && !ok {
                Err(config_err(format!("{field}: not used by scenario `{}`", s.name())))
            } else {
                Ok(())
            }
        };
        allowed("options.excitation", s == Scenario::G2map, o.excitation.is_some())?;
        allowed("options.initial_state", time_domain, o.initial_state.is_some())?;
        allowed(
            "options.gamma_star_values",
            matches!(s, Scenario::Saturation | Scenario::Decay | Scenario::G2time),
            o.gamma_star_values.is_some(),
        )?;
        allowed("options.target_omega12", s == Scenario::Coupling, o.target_omega12.is_some())?;
        allowed(
            "detection",
            matches!(s, Scenario::Decay | Scenario::G1spec | Scenario::G2time),
            self.detection.is_some(),
        )?;
        allowed("geometry", s == Scenario::Coupling, self.geometry.is_some())?;

        if s == Scenario::G2map && o.excitation.is_none() {
            return Err(config_err("options.excitation: required by scenario `g2map`"));
        }
        if time_domain && o.initial_state.is_none() {
            return Err(config_err(format!("options.initial_state: required by scenario `{}`", s.name())));
        }
        if let Some(v) = &o.gamma_star_values {
            if v.is_empty() || v.iter().any(|g| !g.is_finite() || *g < 0.0) {
                return Err(config_err("options.gamma_star_values: needs finite non-negative rates"));
            }
            for &g in v {
                self.system()
                    .with_gamma_star(g)
                    .validate()
                    .map_err(|e| config_err(format!("options.gamma_star_values: {e}")))?;
            }
        }
        if let Some(t) = o.target_omega12 {
            if !t.is_finite() {
                return Err(config_err("options.target_omega12: must be finite"));
            }
        }
        if let Some(d) = &self.detection {
            let phis = d.phi.values();
            if phis.is_empty() || phis.iter().any(|p| !p.is_finite()) {
                return Err(config_err("detection.phi: needs finite phases"));
            }
            if s == Scenario::G1spec && phis.len() != 1 {
                return Err(config_err("detection.phi: scenario `g1spec` takes a single phase"));
            }
        }
        if let Some(g) = &self.geometry {
            g.at(0.1)
                .validate()
                .map_err(|e| config_err(format!("geometry: {e}")))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = parse_config("scenario = \"thresholds\"").unwrap();
        assert_eq!(cfg.system(), SystemParams::standard());
        assert_eq!(cfg.output_name(), "thresholds.csv");
        assert_eq!(cfg.detections(), vec![DetectionGeometry { phi: 0.0 }]);
    }

    #[test]
    fn integers_are_accepted_for_reals() {
        let cfg = parse_config("scenario = \"thresholds\"\n[params]\nomega12 = 5\nrabi = [1, 2]").unwrap();
        assert_eq!(cfg.params.omega12, 5.0);
        assert_eq!(cfg.params.rabi.values(), [1.0, 2.0]);
    }

    #[test]
    fn unknown_keys_are_named() {
        for (text, key) in [
            ("scenario = \"thresholds\"\nfoo = 1", "foo"),
            ("scenario = \"thresholds\"\n[params]\ngama0 = 1", "gama0"),
            (
                "scenario = \"spectrum\"\n[grids.detuning]\nstart = 0\nstop = 1\ncount = 3\nsteps = 2",
                "steps",
            ),
            ("scenario = \"spectrum\"\n[grids.frequency]\nstart = 0\nstop = 1\ncount = 3", "frequency"),
        ] {
            let err = parse_config(text).unwrap_err().to_string();
            assert!(err.contains(key), "{err}");
        }
    }

    #[test]
    fn scenario_is_required_and_checked() {
        assert!(parse_config("").unwrap_err().to_string().contains("scenario"));
        assert!(parse_config("scenario = \"plot\"").unwrap_err().to_string().contains("plot"));
    }

    #[test]
    fn grid_rules() {
        let grid = |body: &str| parse_config(&format!("scenario = \"spectrum\"\n[grids.detuning]\n{body}"));
        assert!(grid("start = -1\nstop = 1\ncount = 2").is_ok());
        let one = grid("start = -1\nstop = 1\ncount = 1").unwrap_err().to_string();
        assert!(one.contains("grids.detuning") && one.contains("count"), "{one}");
        assert!(grid("start = 1\nstop = 1\ncount = 5").is_err());
        assert!(grid("start = 2\nstop = 1\ncount = 5").is_err());
        assert!(grid("start = -1\nstop = 1\ncount = 5\nscale = \"log\"").is_err());
        assert!(grid("start = 1\nstop = 10\ncount = 5\nscale = \"cubic\"").is_err());
    }

    #[test]
    fn scenario_requirements() {
        let missing = parse_config("scenario = \"spectrum\"").unwrap_err().to_string();
        assert!(missing.contains("grids.detuning"), "{missing}");
        let unused = parse_config(
            "scenario = \"thresholds\"\n[grids.t]\nstart = 0\nstop = 1\ncount = 3",
        )
        .unwrap_err()
        .to_string();
        assert!(unused.contains("grids.t"), "{unused}");
        let no_state = parse_config("scenario = \"decay\"\n[grids.t]\nstart = 0\nstop = 1\ncount = 3")
            .unwrap_err()
            .to_string();
        assert!(no_state.contains("initial_state"), "{no_state}");
        assert!(parse_config("scenario = \"thresholds\"\n[detection]\nphi = 0.2").is_err());
    }

    #[test]
    fn invalid_physics_is_a_config_error() {
        let err = parse_config("scenario = \"thresholds\"\n[params]\ngamma12 = 0.5").unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
        assert!(err.to_string().contains("gamma12"));
    }

    #[test]
    fn render_is_parse_inverse() {
        let text = "scenario = \"g2time\"\noutput = \"x.csv\"\n[params]\nrabi = [0.5, 0.25]\n\
                    [detection]\nphi = [0.0, 0.2243]\n[grids.t]\nstart = 0\nstop = 2\ncount = 5\n\
                    [options]\ninitial_state = \"E\"\ngamma_star_values = [0.0, 1.0]";
        let cfg = parse_config(text).unwrap();
        assert_eq!(parse_config(&render(&cfg)).unwrap(), cfg);
    }
}
