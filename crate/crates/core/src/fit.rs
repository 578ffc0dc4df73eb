// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Exponential-rate extraction from sampled curves.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::{Error, Result};

const MAX_ITERATIONS: usize = 200;

/// Least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
}

/// `y ≈ Σₖ amplitudes[k]·e^{−rates[k]·t}` with `rates[0] ≤ rates[1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiExponential {
    pub rates: [f64; 2],
    pub amplitudes: [f64; 2],
    pub residual: f64,
}

pub fn line_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::param("samples", "need at least two (x, y) pairs"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::param("samples", "abscissae are all equal"));
    }
    let slope = sxy / sxx;
    Ok(LineFit {
        slope,
        intercept: my - slope * mx,
    })
}

/// Slope of `ln y` against `t`; every sample must be positive.
pub fn log_slope(t: &[f64], y: &[f64]) -> Result<f64> {
    if y.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::param("samples", "logarithmic fit needs positive values"));
    }
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    Ok(line_fit(t, &ly)?.slope)
}

/// Decay rate `k` of `y ≈ A e^{−k t}` by log-linear least squares.
pub fn exponential_rate(t: &[f64], y: &[f64]) -> Result<f64> {
    Ok(-log_slope(t, y)?)
}

/// Local slopes `d ln y / d ln x` by centred differences (one-sided at the
/// ends). Non-positive samples give NaN.
pub fn log_log_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len().min(y.len());
    if n < 2 {
        return vec![f64::NAN; n];
    }
    let lx: Vec<f64> = x[..n].iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y[..n].iter().map(|v| v.ln()).collect();
    (0..n)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1),
                _ if i + 1 == n => (n - 2, n - 1),
                _ => (i - 1, i + 1),
            };
            (ly[b] - ly[a]) / (lx[b] - lx[a])
        })
        .collect()
}

fn basis(t: &[f64], rates: &Vector2<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(t.len(), 2, |i, k| (-rates[k] * t[i]).exp())
}

/// Linear amplitudes and residual vector for fixed rates.
fn project(t: &[f64], y: &DVector<f64>, rates: &Vector2<f64>) -> Option<(Vector2<f64>, DVector<f64>)> {
    let phi = basis(t, rates);
    let svd = phi.clone().try_svd(true, true, f64::EPSILON, 10_000)?;
    let amps = svd.solve(y, 1e-14).ok()?;
    let amps = Vector2::new(amps[0], amps[1]);
    let r = y - phi * amps;
    Some((amps, r))
}

/// Bi-exponential fit by variable projection: the amplitudes are
/// eliminated by linear least squares and the two rates are refined by
/// Levenberg-Marquardt starting from `seed`.
pub fn biexponential(t: &[f64], y: &[f64], seed: [f64; 2]) -> Result<BiExponential> {
    if t.len() != y.len() || t.len() < 4 {
        return Err(Error::param("samples", "need at least four (t, y) pairs"));
    }
    let yv = DVector::from_column_slice(y);
    let mut k = Vector2::new(seed[0], seed[1]);
    let fail = || Error::Numerical("bi-exponential projection is singular".into());
    let (_, mut r) = project(t, &yv, &k).ok_or_else(fail)?;
    let mut cost = r.norm_squared();
    let mut mu = 1e-3;

    for _ in 0..MAX_ITERATIONS {
        let mut jac = DMatrix::zeros(t.len(), 2);
        for p in 0..2 {
            let h = 1e-7 * k[p].abs().max(1.0);
            let mut kp = k;
            let mut km = k;
            kp[p] += h;
            km[p] -= h;
            let rp = project(t, &yv, &kp).ok_or_else(fail)?.1;
            let rm = project(t, &yv, &km).ok_or_else(fail)?.1;
            jac.set_column(p, &((rp - rm) / (2.0 * h)));
        }
        let jtj: Matrix2<f64> = (jac.transpose() * &jac).fixed_view::<2, 2>(0, 0).into_owned();
        let jtr: Vector2<f64> = (jac.transpose() * &r).fixed_rows::<2>(0).into_owned();

        let mut improved = false;
        for _ in 0..30 {
            let damped = jtj + Matrix2::from_diagonal(&jtj.diagonal()) * mu;
            let Some(step) = damped.lu().solve(&(-jtr)) else {
                mu *= 10.0;
                continue;
            };
            let trial = k + step;
            if let Some((_, rt)) = project(t, &yv, &trial) {
                let c = rt.norm_squared();
                if c <= cost {
                    let small = step.norm() <= 1e-15 * (1.0 + k.norm());
                    k = trial;
                    r = rt;
                    cost = c;
                    mu = (mu * 0.3).max(1e-12);
                    improved = !small;
                    break;
                }
            }
            mu *= 10.0;
        }
        if !improved || cost < 1e-30 {
            break;
        }
    }

    let (amps, r) = project(t, &yv, &k).ok_or_else(fail)?;
    let (rates, amplitudes) = if k[0] <= k[1] {
        ([k[0], k[1]], [amps[0], amps[1]])
    } else {
        ([k[1], k[0]], [amps[1], amps[0]])
    };
    Ok(BiExponential {
        rates,
        amplitudes,
        residual: r.norm(),
    })
}
