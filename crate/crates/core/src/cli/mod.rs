//! `measlescast` command-line front end.
//!
//! Machine-readable output goes to the path given by `--out-json`,
//! `--out-svg` or `--out-csv` (`-` means stdout); human messages go to
//! stderr. Exit codes are part of the public interface, see [`ExitStatus`].

mod report;
mod svg;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::arima::{self, ArimaOrder, ArimaParams, FitOptions};
use crate::diagnostics::{self, GridOptions};
use crate::error::Error;
use crate::forecast::{self, DEFAULT_HORIZON, DEFAULT_LEVEL};
use crate::ingest::{self, Dataset, SurveillanceRecord};
use crate::series::{self, TimeSeries};

pub use report::{to_json, CorrelogramReport, HistorySummary, Provenance, RunReport, SelectReport};
pub use svg::render_svg;

/// Environment variable that forces the `select` grid search to run serially.
pub const NO_PARALLEL_ENV: &str = "MEASLESCAST_NO_PARALLEL";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    Data = 2,
    Degenerate = 3,
    NotConverged = 4,
    OrderCeiling = 5,
    NoModel = 6,
    Stability = 7,
}

impl From<&Error> for ExitStatus {
    fn from(err: &Error) -> Self {
        match err {
            Error::Degenerate(_) | Error::Numerical(_) => Self::Degenerate,
            Error::NotConverged => Self::NotConverged,
            Error::Order(_) => Self::OrderCeiling,
            Error::NoModel => Self::NoModel,
            Error::Stability => Self::Stability,
            _ => Self::Data,
        }
    }
}

/// A `p,d,q` triple as typed on the command line; the ceiling is checked
/// later so it maps to its own exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderArg(pub ArimaOrder);

impl FromStr for OrderArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [p, d, q] = parts[..] else {
            return Err(format!("expected `p,d,q`, got `{s}`"));
        };
        let num = |x: &str| x.parse::<usize>().map_err(|_| format!("`{x}` is not a non-negative integer"));
        Ok(Self(ArimaOrder {
            p: num(p)?,
            d: num(d)?,
            q: num(q)?,
        }))
    }
}

impl std::fmt::Display for OrderArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{}", self.0.p, self.0.d, self.0.q)
    }
}

fn parse_horizon(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(h) if h >= 1 => Ok(h),
        _ => Err(format!("horizon must be a positive integer, got `{s}`")),
    }
}

fn parse_level(s: &str) -> Result<f64, String> {
    let level: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if level > 0.0 && level < 1.0 {
        Ok(level)
    } else {
        Err(format!("level must lie strictly between 0 and 1, got {s}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "measlescast", version, about = "ARIMA trend analysis and forecasting of annual case counts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample ACF and PACF correlograms of the national annual series.
    Acf(AcfArgs),
    /// Fit an ARIMA model, check residuals and forecast.
    Forecast(ForecastArgs),
    /// Grid-search ARIMA orders and rank them by BIC.
    Select(SelectArgs),
    /// Write a synthetic single-region CSV from given parameters.
    Simulate(SimulateArgs),
    /// Re-serialize a surveillance CSV in canonical form.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct AcfArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Highest lag; defaults to min(n-1, 10*log10(n)).
    #[arg(long)]
    pub max_lag: Option<usize>,
    #[arg(long, default_value = "-")]
    pub out_json: PathBuf,
}

#[derive(Debug, Args)]
pub struct ForecastArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "1,0,1")]
    pub order: OrderArg,
    #[arg(long, default_value_t = DEFAULT_HORIZON, value_parser = parse_horizon)]
    pub horizon: usize,
    #[arg(long, default_value_t = DEFAULT_LEVEL, value_parser = parse_level)]
    pub level: f64,
    /// Fit without an intercept.
    #[arg(long)]
    pub no_constant: bool,
    #[arg(long, default_value = "-")]
    pub out_json: PathBuf,
    #[arg(long)]
    pub out_svg: Option<PathBuf>,
    #[arg(long, default_value = "Annual cases and forecast")]
    pub title: String,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "2,2,2")]
    pub max_order: OrderArg,
    #[arg(long)]
    pub no_constant: bool,
    #[arg(long, default_value = "-")]
    pub out_json: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// AR coefficients, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phi: Vec<f64>,
    /// MA coefficients (subtractive convention), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    /// Differencing order applied by cumulative summation.
    #[arg(long, default_value_t = 0)]
    pub d: usize,
    /// Intercept of the differenced process.
    #[arg(long, default_value_t = 1000.0, allow_hyphen_values = true)]
    pub constant: f64,
    #[arg(long, default_value_t = 100.0)]
    pub sigma2: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 2000)]
    pub start_year: i32,
    #[arg(long, default_value = "Simulated")]
    pub region: String,
    #[arg(long, default_value = "-")]
    pub out_csv: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "-")]
    pub out_csv: PathBuf,
}

/// Failure of a subcommand: the exit status plus a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub status: ExitStatus,
    pub message: String,
}

impl Failure {
    fn new(status: ExitStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Self::new(ExitStatus::from(&err), err.to_string())
    }
}

type CmdResult = Result<ExitStatus, Failure>;

/// Entry point used by the binary: parses `std::env::args` and returns the
/// process exit code.
pub fn main() -> i32 {
    run(std::env::args_os())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitStatus::Success as i32,
                _ => ExitStatus::Usage as i32,
            };
        }
    };
    let outcome = match &cli.command {
        Command::Acf(args) => cmd_acf(args),
        Command::Forecast(args) => cmd_forecast(args),
        Command::Select(args) => cmd_select(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Export(args) => cmd_export(args),
    };
    match outcome {
        Ok(status) => status as i32,
        Err(failure) => {
            eprintln!("measlescast: {}", failure.message);
            failure.status as i32
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::new(ExitStatus::Data, format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let result = if path == Path::new("-") {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(bytes).and_then(|_| stdout.flush())
    } else {
        fs::write(path, bytes)
    };
    result.map_err(|e| Failure::new(ExitStatus::Data, format!("cannot write {}: {e}", path.display())))
}

fn json_bytes<T: serde::Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    to_json(value).map_err(|e| Failure::new(ExitStatus::Data, format!("cannot serialize report: {e}")))
}

/// Reads, parses and aggregates an input file, printing region warnings to
/// stderr.
fn load_series(path: &Path) -> Result<(Vec<u8>, Dataset, TimeSeries, Vec<String>), Failure> {
    let bytes = read_input(path)?;
    let mut dataset = ingest::parse_csv(&bytes)?;
    dataset.source_note = path.display().to_string();
    let series = ingest::aggregate_annual(&dataset)?;
    let warnings: Vec<String> = ingest::validate_regions(&dataset)
        .iter()
        .map(ToString::to_string)
        .collect();
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    Ok((bytes, dataset, series, warnings))
}

fn history_summary(series: &TimeSeries) -> HistorySummary {
    HistorySummary {
        start_label: series.start_label(),
        values: series.values().to_vec(),
    }
}

pub fn cmd_acf(args: &AcfArgs) -> CmdResult {
    let (bytes, _, series, warnings) = load_series(&args.input)?;
    let max_lag = args.max_lag.unwrap_or_else(|| series::default_max_lag(series.len()));
    let acf = series::sample_acf(&series, max_lag)?;
    let pacf = series::sample_pacf(&series, max_lag)?;
    let mut command = format!("measlescast acf --input {}", args.input.display());
    if let Some(lag) = args.max_lag {
        command.push_str(&format!(" --max-lag {lag}"));
    }
    let report = CorrelogramReport {
        provenance: Provenance::new(command, &bytes),
        history: history_summary(&series),
        max_lag,
        acf,
        pacf,
        warnings,
    };
    write_output(&args.out_json, &json_bytes(&report)?)?;
    Ok(ExitStatus::Success)
}

pub fn cmd_forecast(args: &ForecastArgs) -> CmdResult {
    let order = args.order.0;
    order.check_ceiling()?;
    let (bytes, _, series, warnings) = load_series(&args.input)?;
    let options = FitOptions {
        include_constant: !args.no_constant,
        ..FitOptions::default()
    };
    let fit = arima::fit_with(&series, order, &options)?;

    let mut command = format!(
        "measlescast forecast --input {} --order {} --horizon {} --level {}",
        args.input.display(),
        args.order,
        args.horizon,
        args.level
    );
    if args.no_constant {
        command.push_str(" --no-constant");
    }
    let trend = if series.len() >= 2 {
        series::trend_summary(&series)?
    } else {
        Vec::new()
    };

    let mut report = RunReport {
        provenance: Provenance::new(command, &bytes),
        order,
        include_constant: fit.include_constant,
        converged: fit.converged,
        iterations: fit.iterations,
        params_summary: fit.params.clone(),
        log_likelihood: fit.log_likelihood,
        n_effective: fit.n_effective,
        diagnostics: None,
        diagnostics_note: None,
        criteria: None,
        history: history_summary(&series),
        trend,
        forecast: None,
        warnings,
    };

    if !fit.converged {
        report.diagnostics_note = Some("fit did not converge".into());
        write_output(&args.out_json, &json_bytes(&report)?)?;
        return Err(Failure::new(
            ExitStatus::NotConverged,
            format!("ARIMA{order} fit did not converge after {} iterations", fit.iterations),
        ));
    }

    let fitted = order.p + order.q;
    match diagnostics::default_ljung_box_lags(fit.residuals.values.len(), fitted) {
        Some(lags) => match diagnostics::ljung_box(&fit.residuals, lags, fitted) {
            Ok(lb) => report.diagnostics = Some(lb),
            Err(e) => report.diagnostics_note = Some(format!("Ljung-Box not computed: {e}")),
        },
        None => {
            report.diagnostics_note = Some(format!(
                "Ljung-Box not computed: {} residuals leave no degree of freedom after {fitted} coefficients",
                fit.residuals.values.len()
            ))
        }
    }
    report.criteria = Some(diagnostics::information_criteria(&fit)?);

    let fc = forecast::forecast(&fit, &series, args.horizon, args.level)?;
    if let Some(svg_path) = &args.out_svg {
        let svg = render_svg(&series, Some(&fc), &args.title)?;
        write_output(svg_path, svg.as_bytes())?;
    }
    report.forecast = Some(fc);
    write_output(&args.out_json, &json_bytes(&report)?)?;
    Ok(ExitStatus::Success)
}

pub fn cmd_select(args: &SelectArgs) -> CmdResult {
    let max_order = args.max_order.0;
    max_order.check_ceiling()?;
    let (bytes, _, series, warnings) = load_series(&args.input)?;
    let parallel = std::env::var(NO_PARALLEL_ENV).map_or(true, |v| v != "1");
    let options = GridOptions {
        include_constant: !args.no_constant,
        parallel,
    };
    let ranking = diagnostics::grid_search(&series, max_order, &options)?;
    let mut command = format!(
        "measlescast select --input {} --max-order {}",
        args.input.display(),
        args.max_order
    );
    if args.no_constant {
        command.push_str(" --no-constant");
    }
    let report = SelectReport {
        provenance: Provenance::new(command, &bytes),
        max_order,
        include_constant: options.include_constant,
        ranking,
        warnings,
    };
    write_output(&args.out_json, &json_bytes(&report)?)?;
    Ok(ExitStatus::Success)
}

pub fn cmd_simulate(args: &SimulateArgs) -> CmdResult {
    let order = ArimaOrder {
        p: args.phi.len(),
        d: args.d,
        q: args.theta.len(),
    };
    order.check_ceiling()?;
    let params = ArimaParams::new(args.phi.clone(), args.theta.clone(), args.constant, args.sigma2);
    let series = arima::simulate(&params, order, args.n, args.seed)?;
    let mut records = Vec::with_capacity(series.len());
    for (i, value) in series.values().iter().enumerate() {
        let cases = value.round();
        if cases < 0.0 {
            return Err(Failure::new(
                ExitStatus::Data,
                format!("simulated value {value:.3} at step {} is negative; raise --constant", i + 1),
            ));
        }
        records.push(SurveillanceRecord {
            region: args.region.clone(),
            year: args.start_year + i as i32,
            cases: cases as u64,
            deaths: 0,
        });
    }
    let dataset = Dataset {
        records,
        source_note: "simulated".into(),
    };
    let csv = ingest::to_csv(&dataset);
    // Region and year validation live in the parser; run it so an invalid
    // --region or --start-year fails here instead of on re-ingest.
    ingest::parse_csv(csv.as_bytes())?;
    write_output(&args.out_csv, csv.as_bytes())?;
    Ok(ExitStatus::Success)
}

pub fn cmd_export(args: &ExportArgs) -> CmdResult {
    let bytes = read_input(&args.input)?;
    let dataset = ingest::parse_csv(&bytes)?;
    write_output(&args.out_csv, ingest::to_csv(&dataset).as_bytes())?;
    Ok(ExitStatus::Success)
}
