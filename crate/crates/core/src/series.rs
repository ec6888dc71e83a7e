//! Annual time-series container and the stationarity toolkit used during
//! model identification: differencing, integration, sample ACF/PACF and
//! year-over-year trend summaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest Durbin-Levinson denominator accepted before the recursion is
/// declared numerically broken.
const DL_DENOMINATOR_FLOOR: f64 = 1e-14;

/// Ordered observations labelled by consecutive integer periods (years).
///
/// Observation `i` carries the label `start_label + i`. `differencing_applied`
/// counts how many times the values have been differenced relative to the raw
/// data they came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    start_label: i32,
    differencing_applied: usize,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, start_label: i32) -> Self {
        Self::with_differencing(values, start_label, 0)
    }

    pub fn with_differencing(values: Vec<f64>, start_label: i32, differencing_applied: usize) -> Self {
        Self {
            values,
            start_label,
            differencing_applied,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start_label(&self) -> i32 {
        self.start_label
    }

    pub fn differencing_applied(&self) -> usize {
        self.differencing_applied
    }

    /// Label of observation `index`.
    pub fn label(&self, index: usize) -> i32 {
        self.start_label + index as i32
    }

    pub fn labels(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.values.len()).map(move |i| self.label(i))
    }

    /// Label that follows the last observation.
    pub fn next_label(&self) -> i32 {
        self.label(self.values.len())
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }
}

/// Sample autocorrelation or partial autocorrelation coefficients by lag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlogram {
    pub lags: Vec<usize>,
    pub coefficients: Vec<f64>,
    /// Half-width of the approximate 95% white-noise band, `1.96 / sqrt(n)`.
    pub confidence_band: f64,
}

impl Correlogram {
    /// Coefficient at `lag`, if the correlogram covers it.
    pub fn at(&self, lag: usize) -> Option<f64> {
        self.lags
            .iter()
            .position(|&l| l == lag)
            .map(|i| self.coefficients[i])
    }
}

/// Direction of a year-over-year change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Increase,
    Decrease,
    Flat,
}

/// Change between one period and the one before it, labelled by the later
/// period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendStep {
    pub label: i32,
    pub delta: f64,
    pub trend: Trend,
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Applies first differences `d` times.
///
/// The result is `d` observations shorter and starts `d` periods later.
pub fn difference(series: &TimeSeries, d: usize) -> Result<TimeSeries> {
    if series.len() <= d {
        return Err(Error::Length {
            needed: d,
            got: series.len(),
        });
    }
    let mut values = series.values.clone();
    for _ in 0..d {
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(TimeSeries {
        values,
        start_label: series.start_label + d as i32,
        differencing_applied: series.differencing_applied + d,
    })
}

/// First value of each differencing level `0..d` of `series`.
///
/// These are the anchors [`integrate`] needs to undo [`difference`]:
/// `integrate(&difference(x, d)?, &difference_anchors(x, d)?)` reproduces `x`.
pub fn difference_anchors(series: &TimeSeries, d: usize) -> Result<Vec<f64>> {
    if series.len() <= d {
        return Err(Error::Length {
            needed: d,
            got: series.len(),
        });
    }
    let mut anchors = Vec::with_capacity(d);
    let mut level = series.values.clone();
    for _ in 0..d {
        anchors.push(level[0]);
        level = level.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(anchors)
}

/// Inverse of [`difference`].
///
/// `initials[k]` is the first observation of the series differenced `k`
/// times, so `initials.len()` must equal `diffs.differencing_applied()`.
/// Each integration level prepends its anchor and takes cumulative sums.
pub fn integrate(diffs: &TimeSeries, initials: &[f64]) -> Result<TimeSeries> {
    let depth = diffs.differencing_applied;
    if initials.len() != depth {
        return Err(Error::Arity {
            expected: depth,
            got: initials.len(),
        });
    }
    let mut values = diffs.values.clone();
    for &anchor in initials.iter().rev() {
        let mut level = Vec::with_capacity(values.len() + 1);
        let mut acc = anchor;
        level.push(acc);
        for v in &values {
            acc += v;
            level.push(acc);
        }
        values = level;
    }
    Ok(TimeSeries {
        values,
        start_label: diffs.start_label - depth as i32,
        differencing_applied: 0,
    })
}

/// Correlogram lag default: `min(n - 1, floor(10 * log10(n)))`, at least 1.
pub fn default_max_lag(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    let by_log = (10.0 * (n as f64).log10()).floor() as usize;
    by_log.min(n - 1).max(1)
}

/// Biased autocovariances `c_0..=c_max_lag` (divisor `n`).
fn autocovariances(values: &[f64], max_lag: usize) -> Vec<f64> {
    let n = values.len();
    let m = mean(values);
    let centered: Vec<f64> = values.iter().map(|v| v - m).collect();
    (0..=max_lag)
        .map(|k| {
            centered[..n - k]
                .iter()
                .zip(&centered[k..])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / n as f64
        })
        .collect()
}

fn check_correlogram_input(values: &[f64], max_lag: usize) -> Result<()> {
    let n = values.len();
    if n < 2 {
        return Err(Error::Length { needed: 1, got: n });
    }
    if max_lag >= n {
        return Err(Error::Lag { max_lag, n });
    }
    Ok(())
}

/// Sample autocorrelations for lags `0..=max_lag` using the biased
/// covariance estimator, so the sequence is positive semidefinite.
pub fn sample_acf(series: &TimeSeries, max_lag: usize) -> Result<Correlogram> {
    let rho = acf_values(&series.values, max_lag)?;
    Ok(Correlogram {
        lags: (0..=max_lag).collect(),
        coefficients: rho,
        confidence_band: white_noise_band(series.len()),
    })
}

pub(crate) fn acf_values(values: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    check_correlogram_input(values, max_lag)?;
    let cov = autocovariances(values, max_lag);
    let c0 = cov[0];
    if !(c0 > 0.0) {
        return Err(Error::Degenerate("series has zero sample variance"));
    }
    let mut rho: Vec<f64> = cov.iter().map(|c| c / c0).collect();
    rho[0] = 1.0;
    Ok(rho)
}

/// Sample partial autocorrelations for lags `1..=max_lag`, obtained from
/// the sample ACF by the Durbin-Levinson recursion.
pub fn sample_pacf(series: &TimeSeries, max_lag: usize) -> Result<Correlogram> {
    if max_lag == 0 {
        return Err(Error::Lag {
            max_lag,
            n: series.len(),
        });
    }
    let rho = acf_values(&series.values, max_lag)?;
    let partials = durbin_levinson(&rho)?;
    Ok(Correlogram {
        lags: (1..=max_lag).collect(),
        coefficients: partials,
        confidence_band: white_noise_band(series.len()),
    })
}

/// Partial autocorrelations `phi_11..phi_KK` from autocorrelations
/// `rho_0..rho_K`.
fn durbin_levinson(rho: &[f64]) -> Result<Vec<f64>> {
    let max_lag = rho.len() - 1;
    let mut partials = Vec::with_capacity(max_lag);
    let mut prev: Vec<f64> = Vec::with_capacity(max_lag);
    for k in 1..=max_lag {
        let num = rho[k]
            - prev
                .iter()
                .enumerate()
                .map(|(j, phi)| phi * rho[k - 1 - j])
                .sum::<f64>();
        let den = 1.0
            - prev
                .iter()
                .enumerate()
                .map(|(j, phi)| phi * rho[j + 1])
                .sum::<f64>();
        if den < DL_DENOMINATOR_FLOOR {
            return Err(Error::Numerical(format!(
                "Durbin-Levinson denominator {den:e} at lag {k}"
            )));
        }
        let phi_kk = num / den;
        let next: Vec<f64> = (0..k - 1)
            .map(|j| prev[j] - phi_kk * prev[k - 2 - j])
            .chain(std::iter::once(phi_kk))
            .collect();
        partials.push(phi_kk);
        prev = next;
    }
    Ok(partials)
}

fn white_noise_band(n: usize) -> f64 {
    1.96 / (n as f64).sqrt()
}

/// Year-over-year changes, one entry per consecutive pair of observations.
pub fn trend_summary(series: &TimeSeries) -> Result<Vec<TrendStep>> {
    if series.len() < 2 {
        return Err(Error::Length {
            needed: 1,
            got: series.len(),
        });
    }
    Ok(series
        .values
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let delta = w[1] - w[0];
            let trend = if delta > 0.0 {
                Trend::Increase
            } else if delta < 0.0 {
                Trend::Decrease
            } else {
                Trend::Flat
            };
            TrendStep {
                label: series.label(i + 1),
                delta,
                trend,
            }
        })
        .collect())
}
