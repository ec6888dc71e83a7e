use thiserror::Error;

/// Errors produced by the analysis engine and the ingest layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series too short: need more than {needed} observations, got {got}")]
    Length { needed: usize, got: usize },

    #[error("expected {expected} integration anchors, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("max lag {max_lag} must be positive and below the series length {n}")]
    Lag { max_lag: usize, n: usize },

    #[error("numerical breakdown: {0}")]
    Numerical(String),

    #[error("order {0} exceeds the engine ceiling of 2")]
    Order(String),

    #[error("parameters violate the stationarity/invertibility root conditions")]
    Stability,

    #[error("Ljung-Box needs more lags ({lags}) than fitted parameters ({fitted})")]
    Dof { lags: usize, fitted: usize },

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("model fit did not converge")]
    NotConverged,

    #[error("no candidate model converged")]
    NoModel,

    #[error("forecast horizon must be at least 1")]
    Horizon,

    #[error("input is not valid UTF-8")]
    Encoding,

    #[error("bad header: expected `region,year,cases,deaths`, found `{0}`")]
    Header(String),

    #[error("line {line}: {reason}")]
    Row { line: usize, reason: String },

    #[error("duplicate record for region `{region}` in {year}")]
    Duplicate { region: String, year: i32 },

    #[error("missing years in series: {0:?}")]
    Gap(Vec<i32>),

    #[error("empty input")]
    Empty,
}

pub type Result<T> = std::result::Result<T, Error>;
