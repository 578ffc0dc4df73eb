// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario runners. Each turns a validated configuration into tables in
//! long format: one row per grid point, parameter columns first.

use coupled_emitters::coupling::{coupling_rates, distance_for_coupling, green_scalar};
use coupled_emitters::dynamics::{population_decay_rates, FreeEvolution};
use coupled_emitters::model::named_state;
use coupled_emitters::stationary::analytic::saturation_expansion_coefficients;
use coupled_emitters::stationary::{
    excitation_spectrum, g2_zero_map, saturation_curve, spectrum_map, threshold_gamma_star, threshold_rabi,
    Excitation, PEAK_PROMINENCE,
};
use coupled_emitters::sweep::try_map;
use coupled_emitters::DensityMatrix;

use crate::config::{GridName, RunConfig, Scenario};
use crate::error::CliError;
use crate::output::{format_number, Table};

type Tables = Result<Vec<Table>, CliError>;

/// Runs the scenario of `cfg`, which must already be validated.
pub fn run_scenario(cfg: &RunConfig) -> Tables {
    match cfg.scenario {
        Scenario::Spectrum => spectrum(cfg),
        Scenario::Saturation => saturation(cfg),
        Scenario::G2map => g2map(cfg),
        Scenario::Decay => decay(cfg),
        Scenario::G1spec => g1spec(cfg),
        Scenario::G2time => g2time(cfg),
        Scenario::Thresholds => thresholds(cfg),
        Scenario::Coupling => coupling(cfg),
    }
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| format_number(x)).collect::<Vec<_>>().join(" ")
}

fn initial_state(cfg: &RunConfig) -> DensityMatrix {
    let s = cfg.options.initial_state.expect("validated");
    named_state(s.into())
}

/// File name with `suffix` inserted before the extension.
fn companion(file: &str, suffix: &str) -> String {
    match file.rsplit_once('.') {
        Some((stem, ext)) => format!("{stem}_{suffix}.{ext}"),
        None => format!("{file}_{suffix}"),
    }
}

fn spectrum(cfg: &RunConfig) -> Tables {
    let p = cfg.system();
    let det = cfg.grids.points(GridName::Detuning);
    let out = match &cfg.grids.gamma_star {
        None => {
            let s = excitation_spectrum(&p, &det)?;
            let mut t = Table::new(cfg.output_name(), &["detuning", "n_exc"]);
            for (w, n) in s.grid.iter().zip(&s.values) {
                t.push(vec![(*w).into(), (*n).into()]);
            }
            t.note("peaks", list(&s.peak_positions(PEAK_PROMINENCE)));
            t
        }
        Some(g) => {
            let m = spectrum_map(&p, &g.points(), &det)?;
            let mut t = Table::new(cfg.output_name(), &["gamma_star", "detuning", "n_exc"]);
            for (gs, row) in m.rows.iter().zip(&m.values) {
                for (w, n) in m.cols.iter().zip(row) {
                    t.push(vec![(*gs).into(), (*w).into(), (*n).into()]);
                }
            }
            t
        }
    };
    Ok(vec![out])
}

fn saturation(cfg: &RunConfig) -> Tables {
    let p = cfg.system();
    let rabi = cfg.grids.points(GridName::Rabi);
    let mut t = Table::new(
        cfg.output_name(),
        &["gamma_star", "rabi", "intensity", "n_exc", "slope", "n_exc_linear"],
    );
    for gs in cfg.gamma_stars() {
        let q = p.with_gamma_star(gs);
        let curve = saturation_curve(&q, &rabi)?;
        let linear = saturation_expansion_coefficients(&q).0;
        for k in 0..rabi.len() {
            t.push(vec![
                gs.into(),
                curve.rabi[k].into(),
                curve.intensity[k].into(),
                curve.n_exc[k].into(),
                curve.slopes[k].into(),
                (linear * curve.rabi[k] * curve.rabi[k]).into(),
            ]);
        }
        let sat = curve
            .saturation_intensity
            .map(format_number)
            .unwrap_or_else(|| "none".into());
        t.note(format!("saturation_intensity[gamma_star={}]", format_number(gs)), sat);
    }
    Ok(vec![t])
}

fn g2map(cfg: &RunConfig) -> Tables {
    let p = cfg.system();
    let exc: Excitation = cfg.options.excitation.expect("validated").into();
    let m = g2_zero_map(
        &p,
        &cfg.grids.points(GridName::Rabi),
        &cfg.grids.points(GridName::GammaStar),
        exc,
    )?;
    let mut t = Table::new(cfg.output_name(), &["rabi", "gamma_star", "g2"]);
    for (r, row) in m.rows.iter().zip(&m.values) {
        for (gs, g) in m.cols.iter().zip(row) {
            t.push(vec![(*r).into(), (*gs).into(), (*g).into()]);
        }
    }
    t.note("threshold_gamma_star", format_number(threshold_gamma_star(&p, exc)?));
    t.note("threshold_rabi", format_number(threshold_rabi(&p, exc)?));
    Ok(vec![t])
}

fn decay(cfg: &RunConfig) -> Tables {
    let p = cfg.system();
    let rho0 = initial_state(cfg);
    let times = cfg.grids.points(GridName::T);
    let with_intensity = cfg.detection.is_some();
    let columns: &[&'static str] = if with_intensity {
        &["gamma_star", "phi", "t", "n_exc", "intensity"]
    } else {
        &["gamma_star", "t", "n_exc"]
    };
    let mut t = Table::new(cfg.output_name(), columns);
    let gammas = cfg.gamma_stars();
    let evolutions = try_map(&gammas, |&gs| FreeEvolution::new(&p.with_gamma_star(gs)))?;
    for (&gs, evo) in gammas.iter().zip(&evolutions) {
        let n = evo.n_exc_trajectory(&rho0, &times)?;
        if with_intensity {
            for geom in cfg.detections() {
                let i = evo.intensity(&rho0, geom, &times)?;
                for k in 0..times.len() {
                    t.push(vec![gs.into(), geom.phi.into(), times[k].into(), n[k].into(), i[k].into()]);
                }
            }
        } else {
            for k in 0..times.len() {
                t.push(vec![gs.into(), times[k].into(), n[k].into()]);
            }
        }
        let [slow, fast] = population_decay_rates(&p.with_gamma_star(gs));
        t.note(
            format!("population_decay_rates[gamma_star={}]", format_number(gs)),
            list(&[slow, fast]),
        );
    }
    Ok(vec![t])
}

fn g1spec(cfg: &RunConfig) -> Tables {
    let p = cfg.system();
    let rho0 = initial_state(cfg);
    let geom = cfg.detections()[0];
    let times = cfg.grids.points(GridName::T);
    let omegas = cfg.grids.points(GridName::Omega);
    let evo = FreeEvolution::new(&p)?;
    let spec = evo.g1_spectrum(&rho0, geom, &times, &omegas)?;
    let mut t = Table::new(cfg.output_name(), &["t", "omega", "spectrum"]);
    for (i, row) in spec.values.iter().enumerate() {
        for (w, s) in omegas.iter().zip(row) {
            t.push(vec![times[i].into(), (*w).into(), (*s).into()]);
        }
    }
    let last = times.len() - 1;
    t.note("peak_frequency[t=first]", format_number(spec.peak_frequency(0)));
    t.note("peak_frequency[t=last]", format_number(spec.peak_frequency(last)));
    let mut out = vec![t];

    if let Some(tau) = &cfg.grids.tau {
        let tau = tau.points();
        let g1 = evo.g1_grid(&rho0, geom, &times[..1], &tau)?;
        let mut c = Table::new(companion(&cfg.output_name(), "g1"), &["t", "tau", "g1_re", "g1_im"]);
        for (s, z) in tau.iter().zip(&g1[0]) {
            c.push(vec![times[0].into(), (*s).into(), z.re.into(), z.im.into()]);
        }
        out.push(c);
    }
    Ok(out)
}

fn g2time(cfg: &RunConfig) -> Tables {
    let p = cfg.system();
    let rho0 = initial_state(cfg);
    let times = cfg.grids.points(GridName::T);
    let tau = cfg.grids.tau.as_ref().map(|g| g.points());
    let columns: &[&'static str] = match tau {
        None => &["gamma_star", "phi", "t", "intensity", "g2"],
        Some(_) => &["gamma_star", "phi", "t", "tau", "g2_numerator", "g2"],
    };
    let mut t = Table::new(cfg.output_name(), columns);
    let gammas = cfg.gamma_stars();
    let evolutions = try_map(&gammas, |&gs| FreeEvolution::new(&p.with_gamma_star(gs)))?;
    for (&gs, evo) in gammas.iter().zip(&evolutions) {
        for geom in cfg.detections() {
            match &tau {
                None => {
                    let i = evo.intensity(&rho0, geom, &times)?;
                    let g = evo.g2_equal_time(&rho0, geom, &times)?;
                    for k in 0..times.len() {
                        t.push(vec![gs.into(), geom.phi.into(), times[k].into(), i[k].into(), g[k].into()]);
                    }
                }
                Some(tau) => {
                    let num = evo.g2_numerator_grid(&rho0, geom, &times, tau)?;
                    let g = evo.g2_time_grid(&rho0, geom, &times, tau)?;
                    for (a, ti) in times.iter().enumerate() {
                        for (b, s) in tau.iter().enumerate() {
                            t.push(vec![
                                gs.into(),
                                geom.phi.into(),
                                (*ti).into(),
                                (*s).into(),
                                num[a][b].into(),
                                g[a][b].into(),
                            ]);
                        }
                    }
                }
            }
        }
    }
    Ok(vec![t])
}

fn thresholds(cfg: &RunConfig) -> Tables {
    let p = cfg.system();
    let mut t = Table::new(cfg.output_name(), &["quantity", "excitation", "value"]);
    for exc in [Excitation::TwoPhoton, Excitation::Superradiant] {
        let name: &'static str = exc.name();
        t.push(vec!["gamma_star".into(), name.into(), threshold_gamma_star(&p, exc)?.into()]);
        t.push(vec!["rabi".into(), name.into(), threshold_rabi(&p, exc)?.into()]);
    }
    Ok(vec![t])
}

fn coupling(cfg: &RunConfig) -> Tables {
    let p = cfg.system();
    let geom = cfg.geometry.clone().unwrap_or_default();
    let mut t = Table::new(cfg.output_name(), &["separation", "kr", "omega12", "gamma12"]);
    for r in cfg.grids.points(GridName::Separation) {
        let g = geom.at(r);
        let (omega12, gamma12) = coupling_rates(green_scalar(&g, p.alpha, p.gamma0)?);
        t.push(vec![r.into(), g.kr().into(), omega12.into(), gamma12.into()]);
    }
    if let Some(target) = cfg.options.target_omega12 {
        let r = distance_for_coupling(target, &geom.at(0.1), p.alpha, p.gamma0)?;
        t.note(format!("separation[omega12={}]", format_number(target)), format_number(r));
    }
    Ok(vec![t])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::output::Cell;

    #[test]
    fn companion_names() {
        assert_eq!(companion("fig4b.csv", "g1"), "fig4b_g1.csv");
        assert_eq!(companion("out", "g1"), "out_g1");
    }

    #[test]
    fn thresholds_table() {
        let cfg = parse_config("scenario = \"thresholds\"").unwrap();
        let t = &run_scenario(&cfg).unwrap()[0];
        let values: Vec<f64> = t
            .rows
            .iter()
            .map(|r| match r[2] {
                Cell::Num(x) => x,
                _ => unreachable!(),
            })
            .collect();
        let expect = [1600f64.cbrt(), 20f64.sqrt(), 80.0, 40.0];
        for (v, e) in values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12 * e, "{values:?}");
        }
    }

    #[test]
    fn decay_from_symmetric_state() {
        let cfg = parse_config(
            "scenario = \"decay\"\n[options]\ninitial_state = \"S\"\n[grids.t]\nstart = 0\nstop = 2\ncount = 21",
        )
        .unwrap();
        let t = &run_scenario(&cfg).unwrap()[0];
        assert_eq!(t.columns, ["gamma_star", "t", "n_exc"]);
        let num = |c: &Cell| match c {
            Cell::Num(x) => *x,
            _ => unreachable!(),
        };
        let (t0, n0) = (num(&t.rows[0][1]), num(&t.rows[0][2]));
        let (t1, n1) = (num(&t.rows[20][1]), num(&t.rows[20][2]));
        let slope = (n1.ln() - n0.ln()) / (t1 - t0);
        assert!((slope + 1.3).abs() < 1e-9, "{slope}");
    }
}
