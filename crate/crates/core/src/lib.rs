//! ARIMA (Box-Jenkins) forecasting of annual epidemic case counts.
//!
//! The pipeline mirrors the classical workflow: aggregate surveillance rows
//! into a national [`TimeSeries`](series::TimeSeries), inspect correlograms,
//! difference towards stationarity, fit ARIMA(p,d,q) by conditional sum of
//! squares, check residuals, and forecast with prediction intervals.

pub mod arima;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod forecast;
pub mod ingest;
pub mod optim;
pub mod rng;
pub mod series;
pub mod special;

pub use arima::{ArimaFit, ArimaOrder, ArimaParams, FitOptions, ResidualSeries};
pub use error::{Error, Result};
pub use forecast::ForecastResult;
pub use series::{Correlogram, TimeSeries};
