//! Residual portmanteau testing, information criteria and automatic order
//! selection.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arima::{self, ArimaFit, ArimaOrder, FitOptions, ResidualSeries};
use crate::error::{Error, Result};
use crate::series::{self, TimeSeries};
use crate::special::chi_square_sf;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LjungBoxReport {
    pub q_statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub lags_used: usize,
}

/// Ljung-Box portmanteau test on the first `lags` residual autocorrelations.
/// Degrees of freedom are `lags - fitted_param_count`.
pub fn ljung_box(residuals: &ResidualSeries, lags: usize, fitted_param_count: usize) -> Result<LjungBoxReport> {
    if lags <= fitted_param_count {
        return Err(Error::Dof {
            lags,
            fitted: fitted_param_count,
        });
    }
    let values = &residuals.values;
    let n = values.len();
    if n <= lags {
        return Err(Error::Length { needed: lags, got: n });
    }
    let rho = series::acf_values(values, lags)?;
    let nf = n as f64;
    let q_statistic = nf
        * (nf + 2.0)
        * (1..=lags)
            .map(|k| rho[k] * rho[k] / (nf - k as f64))
            .sum::<f64>();
    let dof = lags - fitted_param_count;
    let p_value = chi_square_sf(q_statistic, dof)?.clamp(0.0, 1.0);
    Ok(LjungBoxReport {
        q_statistic,
        dof,
        p_value,
        lags_used: lags,
    })
}

/// Lag count for residual diagnostics: `min(10, n/2)`, raised to
/// `fitted + 1` so at least one degree of freedom remains. `None` when the
/// residual series is too short for that.
pub fn default_ljung_box_lags(n_residuals: usize, fitted_param_count: usize) -> Option<usize> {
    let lags = (n_residuals / 2).min(10).max(fitted_param_count + 1);
    (lags < n_residuals).then_some(lags)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InformationCriteria {
    pub aic: f64,
    pub bic: f64,
}

impl InformationCriteria {
    /// AIC and BIC for log-likelihood `ll` with `k` estimated parameters and
    /// `n` effective observations.
    pub fn from_parts(ll: f64, k: usize, n: f64) -> Self {
        Self {
            aic: -2.0 * ll + 2.0 * k as f64,
            bic: -2.0 * ll + k as f64 * n.ln(),
        }
    }
}

pub fn information_criteria(fit: &ArimaFit) -> Result<InformationCriteria> {
    if !fit.converged {
        return Err(Error::NotConverged);
    }
    Ok(InformationCriteria::from_parts(
        fit.log_likelihood,
        fit.parameter_count(),
        fit.n_effective as f64,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CandidateStatus {
    Fitted,
    NotConverged,
    /// Too few observations for this order.
    Skipped { needed: usize },
    /// The fit raised an error (e.g. a degenerate differenced series).
    Failed { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub order: ArimaOrder,
    #[serde(flatten)]
    pub status: CandidateStatus,
    pub converged: bool,
    pub parameter_count: usize,
    pub log_likelihood: Option<f64>,
    pub aic: Option<f64>,
    pub bic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRanking {
    /// Every grid point in `(p, d, q)` lexicographic order.
    pub candidates: Vec<Candidate>,
    pub winner: ArimaOrder,
}

#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    pub include_constant: bool,
    /// Fit candidates on the rayon pool. Output is identical either way.
    pub parallel: bool,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            include_constant: true,
            parallel: true,
        }
    }
}

/// Fits every order up to `max_order` and picks the converged candidate
/// with the lowest BIC.
pub fn grid_search(series: &TimeSeries, max_order: ArimaOrder, options: &GridOptions) -> Result<ModelRanking> {
    max_order.check_ceiling()?;
    let orders: Vec<ArimaOrder> = (0..=max_order.p)
        .flat_map(|p| (0..=max_order.d).flat_map(move |d| (0..=max_order.q).map(move |q| ArimaOrder { p, d, q })))
        .collect();
    let fit_options = FitOptions {
        include_constant: options.include_constant,
        ..FitOptions::default()
    };
    let evaluate = |order: &ArimaOrder| evaluate_candidate(series, *order, &fit_options);
    let candidates: Vec<Candidate> = if options.parallel {
        orders.par_iter().map(evaluate).collect()
    } else {
        orders.iter().map(evaluate).collect()
    };
    let winner = select_winner(&candidates).ok_or(Error::NoModel)?;
    Ok(ModelRanking { candidates, winner })
}

fn evaluate_candidate(series: &TimeSeries, order: ArimaOrder, options: &FitOptions) -> Candidate {
    let mut candidate = Candidate {
        order,
        status: CandidateStatus::Fitted,
        converged: false,
        parameter_count: order.p + order.q + usize::from(options.include_constant) + 1,
        log_likelihood: None,
        aic: None,
        bic: None,
    };
    if series.len() < order.min_observations() {
        candidate.status = CandidateStatus::Skipped {
            needed: order.min_observations(),
        };
        return candidate;
    }
    match arima::fit_with(series, order, options) {
        Ok(fit) => {
            candidate.log_likelihood = Some(fit.log_likelihood);
            match information_criteria(&fit) {
                Ok(ic) => {
                    candidate.converged = true;
                    candidate.aic = Some(ic.aic);
                    candidate.bic = Some(ic.bic);
                }
                Err(_) => candidate.status = CandidateStatus::NotConverged,
            }
        }
        Err(e) => candidate.status = CandidateStatus::Failed { reason: e.to_string() },
    }
    candidate
}

/// Lowest BIC among converged candidates; ties go to fewer parameters, then
/// lower q, then lower p, then lower d.
pub fn select_winner(candidates: &[Candidate]) -> Option<ArimaOrder> {
    candidates
        .iter()
        .filter(|c| c.converged)
        .filter_map(|c| c.bic.map(|bic| (bic, c)))
        .min_by(|(bic_a, a), (bic_b, b)| {
            bic_a
                .total_cmp(bic_b)
                .then_with(|| a.parameter_count.cmp(&b.parameter_count))
                .then_with(|| a.order.q.cmp(&b.order.q))
                .then_with(|| a.order.p.cmp(&b.order.p))
                .then_with(|| a.order.d.cmp(&b.order.d))
                .then(Ordering::Equal)
        })
        .map(|(_, c)| c.order)
}
