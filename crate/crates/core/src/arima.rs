//! ARIMA(p,d,q) process model, conditional-sum-of-squares estimation and
//! seeded simulation.
//!
//! The differenced series `w_t` follows
//!
//! ```text
//! w_t = c + phi_1 w_{t-1} + ... + phi_p w_{t-p} + a_t - theta_1 a_{t-1} - ... - theta_q a_{t-q}
//! ```
//!
//! with Gaussian innovations `a_t ~ N(0, sigma2)`. Note the MA terms are
//! *subtracted*. Libraries that write `+ theta_j a_{t-j}` (R's `arima`,
//! statsmodels) report MA coefficients with the opposite sign.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::{nelder_mead, SimplexOptions};
use crate::rng::SplitMix64;
use crate::series::{self, TimeSeries};

/// Highest p, d or q the engine accepts.
pub const MAX_ORDER: usize = 2;

/// Observations simulated and discarded before the returned sample.
pub const BURN_IN: usize = 100;

/// Bound on the unconstrained optimizer coordinates; `tanh(7)` keeps every
/// partial autocorrelation strictly inside (-1, 1).
const PARTIAL_BOUND: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl ArimaOrder {
    pub fn new(p: usize, d: usize, q: usize) -> Result<Self> {
        let order = Self { p, d, q };
        order.check_ceiling()?;
        Ok(order)
    }

    pub fn check_ceiling(&self) -> Result<()> {
        if self.p > MAX_ORDER || self.d > MAX_ORDER || self.q > MAX_ORDER {
            return Err(Error::Order(self.to_string()));
        }
        Ok(())
    }

    /// Fewest raw observations [`fit`] accepts for this order.
    pub fn min_observations(&self) -> usize {
        self.p + self.q + self.d + 3
    }
}

impl fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.d, self.q)
    }
}

/// Coefficients of the differenced-scale process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArimaParams {
    /// AR coefficients `phi_1..phi_p`.
    pub phi: Vec<f64>,
    /// MA coefficients `theta_1..theta_q`, subtractive convention.
    pub theta: Vec<f64>,
    /// Intercept `c` of the differenced series; the process mean is
    /// `c / (1 - sum(phi))`.
    pub constant: f64,
    /// Innovation variance.
    pub sigma2: f64,
}

impl ArimaParams {
    pub fn new(phi: Vec<f64>, theta: Vec<f64>, constant: f64, sigma2: f64) -> Self {
        Self {
            phi,
            theta,
            constant,
            sigma2,
        }
    }

    /// Checks stationarity, invertibility and `sigma2 > 0`.
    pub fn validate(&self) -> Result<()> {
        if !check_roots(&self.phi)? || !check_roots(&self.theta)? {
            return Err(Error::Stability);
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::Domain(format!(
                "innovation variance must be positive, got {}",
                self.sigma2
            )));
        }
        Ok(())
    }

    /// Mean of the differenced process.
    pub fn process_mean(&self) -> f64 {
        self.constant / (1.0 - self.phi.iter().sum::<f64>())
    }

    fn check_order(&self, order: &ArimaOrder) -> Result<()> {
        if self.phi.len() != order.p || self.theta.len() != order.q {
            return Err(Error::Domain(format!(
                "parameters have {} AR and {} MA coefficients but order is {order}",
                self.phi.len(),
                self.theta.len()
            )));
        }
        Ok(())
    }
}

/// Innovations `a_t` recovered from a differenced series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSeries {
    pub values: Vec<f64>,
    /// Leading observations used only as AR conditioning (always `p`).
    pub conditioning_dropped: usize,
}

impl ResidualSeries {
    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|a| a * a).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArimaFit {
    pub order: ArimaOrder,
    pub params: ArimaParams,
    pub residuals: ResidualSeries,
    pub log_likelihood: f64,
    pub n_effective: usize,
    pub converged: bool,
    pub iterations: usize,
    pub include_constant: bool,
}

impl ArimaFit {
    /// Estimated parameter count: coefficients, the constant when
    /// estimated, and `sigma2`.
    pub fn parameter_count(&self) -> usize {
        self.order.p + self.order.q + usize::from(self.include_constant) + 1
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub include_constant: bool,
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            include_constant: true,
            max_iterations: 2000,
        }
    }
}

/// True iff `1 - c_1 z - c_2 z^2` has every root strictly outside the unit
/// circle. Uses the closed-form stability triangle for degree <= 2.
pub fn check_roots(coeffs: &[f64]) -> Result<bool> {
    match *coeffs {
        [] => Ok(true),
        [c1] => Ok(c1.abs() < 1.0),
        [c1, c2] => Ok(c2.abs() < 1.0 && c2 + c1 < 1.0 && c2 - c1 < 1.0),
        _ => Err(Error::Order(format!(
            "root check supports degree <= 2, got {}",
            coeffs.len()
        ))),
    }
}

/// Maps partial autocorrelations in (-1, 1) to the coefficients of a
/// polynomial `1 - c_1 z - ... - c_k z^k` with roots outside the unit circle.
pub fn partials_to_coefficients(partials: &[f64]) -> Vec<f64> {
    let mut coeffs: Vec<f64> = Vec::with_capacity(partials.len());
    for (k, &r) in partials.iter().enumerate() {
        let prev = coeffs.clone();
        for j in 0..k {
            coeffs[j] = prev[j] - r * prev[k - 1 - j];
        }
        coeffs.push(r);
    }
    coeffs
}

/// CSS innovations for `w` under `params`.
///
/// `a_t` is computed for `t = p+1..n` with presample innovations set to zero;
/// the first `p` observations only condition the AR terms.
pub fn css_residuals(params: &ArimaParams, w: &TimeSeries) -> Result<ResidualSeries> {
    let (p, q) = (params.phi.len(), params.theta.len());
    if w.len() <= p + q {
        return Err(Error::Length {
            needed: p + q,
            got: w.len(),
        });
    }
    Ok(ResidualSeries {
        values: innovations(params, w.values()),
        conditioning_dropped: p,
    })
}

fn innovations(params: &ArimaParams, w: &[f64]) -> Vec<f64> {
    let p = params.phi.len();
    let mut a = vec![0.0; w.len()];
    for t in p..w.len() {
        let mut value = w[t] - params.constant;
        for (i, phi) in params.phi.iter().enumerate() {
            value -= phi * w[t - 1 - i];
        }
        for (j, theta) in params.theta.iter().enumerate() {
            if t > j {
                value += theta * a[t - 1 - j];
            }
        }
        a[t] = value;
    }
    a.drain(..p);
    a
}

/// Gaussian log-likelihood of `residuals` at innovation variance `sigma2`.
pub fn gaussian_log_likelihood(residuals: &[f64], sigma2: f64) -> f64 {
    let m = residuals.len() as f64;
    let sse: f64 = residuals.iter().map(|a| a * a).sum();
    -0.5 * m * (2.0 * PI * sigma2).ln() - sse / (2.0 * sigma2)
}

/// Conditional log-likelihood with `sigma2` at its maximizer `SSE / m`:
/// `-(m/2) (ln(2 pi SSE/m) + 1)`.
pub fn log_likelihood(params: &ArimaParams, w: &TimeSeries) -> Result<f64> {
    let residuals = css_residuals(params, w)?;
    concentrated_log_likelihood(&residuals.values)
}

pub(crate) fn concentrated_log_likelihood(residuals: &[f64]) -> Result<f64> {
    let m = residuals.len() as f64;
    let sse: f64 = residuals.iter().map(|a| a * a).sum();
    if !(sse > 0.0) {
        return Err(Error::Degenerate("residual sum of squares is zero"));
    }
    Ok(-0.5 * m * ((2.0 * PI * sse / m).ln() + 1.0))
}

/// Fits `order` to `series` with a constant term and default limits.
pub fn fit(series: &TimeSeries, order: ArimaOrder) -> Result<ArimaFit> {
    fit_with(series, order, &FitOptions::default())
}

/// Maximizes the CSS Gaussian likelihood over `(phi, theta, c)`.
///
/// Coefficient vectors are searched through their partial autocorrelations
/// (`tanh` of free coordinates), so every candidate is stationary and
/// invertible. The constant is searched as the process mean
/// `mu = mean(w) + sd(w) * v` with `c = mu (1 - sum(phi))`. `sigma2` is
/// concentrated out.
pub fn fit_with(series: &TimeSeries, order: ArimaOrder, options: &FitOptions) -> Result<ArimaFit> {
    order.check_ceiling()?;
    if series.len() < order.min_observations() {
        return Err(Error::Length {
            needed: order.min_observations() - 1,
            got: series.len(),
        });
    }
    let w = series::difference(series, order.d)?;
    let values = w.values();
    let mean_w = series::mean(values);
    let sd_w = (values.iter().map(|v| (v - mean_w).powi(2)).sum::<f64>() / values.len() as f64).sqrt();
    let (p, q) = (order.p, order.q);
    let m = values.len() - p;

    let decode = |x: &[f64]| -> ArimaParams {
        let to_partial = |u: &f64| u.clamp(-PARTIAL_BOUND, PARTIAL_BOUND).tanh();
        let phi = partials_to_coefficients(&x[..p].iter().map(to_partial).collect::<Vec<_>>());
        let theta = partials_to_coefficients(&x[p..p + q].iter().map(to_partial).collect::<Vec<_>>());
        let constant = if options.include_constant {
            let mu = mean_w + sd_w * x[p + q];
            mu * (1.0 - phi.iter().sum::<f64>())
        } else {
            0.0
        };
        ArimaParams::new(phi, theta, constant, 1.0)
    };
    let sse = |params: &ArimaParams| -> f64 { innovations(params, values).iter().map(|a| a * a).sum() };

    let dim = p + q + usize::from(options.include_constant);
    let start = vec![0.0; dim];
    let sse_start = sse(&decode(&start));
    if !(sse_start > 0.0) {
        return Err(Error::Degenerate("series is fitted exactly by its mean"));
    }

    let (params, iterations, converged) = if p + q == 0 {
        // No coefficients: the CSS estimate of the constant is the mean.
        let constant = if options.include_constant { mean_w } else { 0.0 };
        (ArimaParams::new(vec![], vec![], constant, 1.0), 0, true)
    } else {
        let objective = |x: &[f64]| 0.5 * m as f64 * (sse(&decode(x)) / sse_start).ln();
        let steps = vec![0.3; dim];
        let result = nelder_mead(
            objective,
            &start,
            &steps,
            &SimplexOptions {
                max_iterations: options.max_iterations,
                ..SimplexOptions::default()
            },
        );
        (decode(&result.x), result.iterations, result.converged)
    };

    let residuals = css_residuals(&params, &w)?;
    let sse_final = residuals.sum_of_squares();
    if !(sse_final > 0.0) {
        return Err(Error::Degenerate("residual sum of squares is zero"));
    }
    let sigma2 = sse_final / m as f64;
    let log_likelihood = concentrated_log_likelihood(&residuals.values)?;
    Ok(ArimaFit {
        order,
        params: ArimaParams { sigma2, ..params },
        residuals,
        log_likelihood,
        n_effective: m,
        converged: converged && log_likelihood.is_finite(),
        iterations,
        include_constant: options.include_constant,
    })
}

/// Draws `n` observations of the ARIMA process.
///
/// Innovations come from [`SplitMix64`] seeded with `seed`. The differenced
/// process starts at its mean with zero presample innovations, runs
/// [`BURN_IN`] extra steps that are discarded, and is then cumulatively summed
/// `d` times (starting from zero). Labels start at 1.
pub fn simulate(params: &ArimaParams, order: ArimaOrder, n: usize, seed: u64) -> Result<TimeSeries> {
    order.check_ceiling()?;
    params.check_order(&order)?;
    params.validate()?;
    if n == 0 {
        return Err(Error::Domain("simulation length must be positive".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let sd = params.sigma2.sqrt();
    let total = BURN_IN + n;
    let (p, q) = (order.p, order.q);
    let mu = params.process_mean();

    let mut w: Vec<f64> = vec![mu; p];
    let mut a: Vec<f64> = vec![0.0; q];
    for _ in 0..total {
        let innovation = sd * rng.next_normal();
        let mut value = params.constant + innovation;
        for (i, phi) in params.phi.iter().enumerate() {
            value += phi * w[w.len() - 1 - i];
        }
        for (j, theta) in params.theta.iter().enumerate() {
            value -= theta * a[a.len() - 1 - j];
        }
        w.push(value);
        a.push(innovation);
    }
    let mut values: Vec<f64> = w.split_off(p + BURN_IN);
    for _ in 0..order.d {
        let mut acc = 0.0;
        for v in values.iter_mut() {
            acc += *v;
            *v = acc;
        }
    }
    Ok(TimeSeries::new(values, 1))
}
