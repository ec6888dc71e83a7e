//! Multi-step forecasts with psi-weight prediction intervals, mapped back to
//! the case-count scale.

use serde::{Deserialize, Serialize};

use crate::arima::{ArimaFit, ArimaParams};
use crate::error::{Error, Result};
use crate::series::{self, TimeSeries};
use crate::special::z_quantile;

pub const DEFAULT_HORIZON: usize = 5;
pub const DEFAULT_LEVEL: f64 = 0.95;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastResult {
    pub horizon_labels: Vec<i32>,
    /// Point forecasts on the case-count scale, floored at zero.
    pub point: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub level: f64,
    /// `psi_0..psi_{h-1}` of the differenced-scale process.
    pub psi: Vec<f64>,
    /// Forecast standard errors on the case-count scale.
    pub std_errors: Vec<f64>,
    pub point_unclamped: Vec<f64>,
    pub lower_unclamped: Vec<f64>,
    pub upper_unclamped: Vec<f64>,
    /// Whether any of point/lower/upper was raised to zero at each step.
    pub clamped: Vec<bool>,
}

impl ForecastResult {
    pub fn horizon(&self) -> usize {
        self.point.len()
    }
}

/// Moving-average weights `psi_0..psi_{h-1}` of the ARMA part:
/// `psi_0 = 1`, `psi_j = sum_{i=1..min(j,p)} phi_i psi_{j-i} - theta_j`.
pub fn psi_weights(params: &ArimaParams, h: usize) -> Result<Vec<f64>> {
    if h == 0 {
        return Err(Error::Horizon);
    }
    params.validate()?;
    let mut psi = Vec::with_capacity(h);
    psi.push(1.0);
    for j in 1..h {
        let ar: f64 = params
            .phi
            .iter()
            .take(j)
            .enumerate()
            .map(|(i, phi)| phi * psi[j - 1 - i])
            .sum();
        let ma = params.theta.get(j - 1).copied().unwrap_or(0.0);
        psi.push(ar - ma);
    }
    Ok(psi)
}

/// Forecasts `h` periods past the end of `original`, the undifferenced
/// series `fit` was estimated on, with intervals at coverage `level`.
pub fn forecast(fit: &ArimaFit, original: &TimeSeries, h: usize, level: f64) -> Result<ForecastResult> {
    if !fit.converged {
        return Err(Error::NotConverged);
    }
    if h == 0 {
        return Err(Error::Horizon);
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("interval level must lie in (0, 1), got {level}")));
    }
    let d = fit.order.d;
    let p = fit.order.p;
    let w = series::difference(original, d)?;
    if w.len() != fit.residuals.values.len() + p {
        return Err(Error::Domain(
            "series length does not match the fitted residuals".into(),
        ));
    }

    let params = &fit.params;
    let mut w_path = w.values().to_vec();
    let mut a_path = vec![0.0; p];
    a_path.extend_from_slice(&fit.residuals.values);
    let n = w_path.len();
    for t in n..n + h {
        let mut value = params.constant;
        for (i, phi) in params.phi.iter().enumerate() {
            value += phi * w_path[t - 1 - i];
        }
        for (j, theta) in params.theta.iter().enumerate() {
            value -= theta * a_path[t - 1 - j];
        }
        w_path.push(value);
        a_path.push(0.0);
    }
    let mut path: Vec<f64> = w_path.split_off(n);

    // Undo each differencing level, starting from the last observed value
    // at that level.
    let mut level_series = original.values().to_vec();
    let mut anchors = Vec::with_capacity(d);
    for _ in 0..d {
        anchors.push(*level_series.last().expect("nonempty after differencing check"));
        level_series = level_series.windows(2).map(|x| x[1] - x[0]).collect();
    }
    for anchor in anchors.iter().rev() {
        cumulative_sum(&mut path, *anchor);
    }

    let psi = psi_weights(params, h)?;
    let mut psi_integrated = psi.clone();
    for _ in 0..d {
        cumulative_sum(&mut psi_integrated, 0.0);
    }
    let mut acc = 0.0;
    let std_errors: Vec<f64> = psi_integrated
        .iter()
        .map(|psi| {
            acc += psi * psi;
            (params.sigma2 * acc).sqrt()
        })
        .collect();

    let z = z_quantile((1.0 + level) / 2.0)?;
    let lower_unclamped: Vec<f64> = path.iter().zip(&std_errors).map(|(x, se)| x - z * se).collect();
    let upper_unclamped: Vec<f64> = path.iter().zip(&std_errors).map(|(x, se)| x + z * se).collect();
    let floor = |v: &[f64]| v.iter().map(|x| x.max(0.0)).collect::<Vec<_>>();
    let clamped = path
        .iter()
        .zip(&lower_unclamped)
        .zip(&upper_unclamped)
        .map(|((x, lo), hi)| *x < 0.0 || *lo < 0.0 || *hi < 0.0)
        .collect();

    Ok(ForecastResult {
        horizon_labels: (0..h).map(|i| original.next_label() + i as i32).collect(),
        point: floor(&path),
        lower: floor(&lower_unclamped),
        upper: floor(&upper_unclamped),
        level,
        psi,
        std_errors,
        point_unclamped: path,
        lower_unclamped,
        upper_unclamped,
        clamped,
    })
}

fn cumulative_sum(values: &mut [f64], start: f64) {
    let mut acc = start;
    for v in values.iter_mut() {
        acc += *v;
        *v = acc;
    }
}
