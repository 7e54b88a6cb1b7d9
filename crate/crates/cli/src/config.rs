//! Run configuration: command-line flags merged over an optional flat
//! `key=value` config file, with every domain constraint re-validated at
//! parse time.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use paygfund::FundParams;

/// Keys accepted in a config file and their flag twins.
const FILE_KEYS: [&str; 12] = [
    "mu", "sigma", "alpha", "b", "p", "t", "c0", "deficit", "horizon", "samples", "seed", "format",
];

#[derive(Debug)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration for `{}`: {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn bad(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { key: key.to_string(), message: message.into() }
}

/// Debt-repayment strategy analytics for a mixed PAYG / funded pension
/// scheme.
#[derive(Debug, Parser)]
#[command(name = "paygfund", version, about, disable_help_subcommand = true)]
pub struct Cli {
    /// Flat key=value config file; flags override file values
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Annual log-drift of the fund
    #[arg(long, global = true)]
    pub mu: Option<f64>,

    /// Annual log-volatility of the fund
    #[arg(long, global = true)]
    pub sigma: Option<f64>,

    /// Investment multiplier (also the liquidity cap for optimize/compare)
    #[arg(long, global = true)]
    pub alpha: Option<f64>,

    /// Return barrier
    #[arg(long, global = true)]
    pub b: Option<f64>,

    /// Required repayment probability
    #[arg(long, global = true)]
    pub p: Option<f64>,

    /// Horizon in years for the continuous model and comparisons
    #[arg(long, global = true)]
    pub t: Option<f64>,

    /// Mean-variance weight
    #[arg(long, global = true)]
    pub lambda: Option<f64>,

    /// Baseline contribution C_0
    #[arg(long, global = true)]
    pub c0: Option<f64>,

    /// Annual deficit C_j - C_0
    #[arg(long, global = true)]
    pub deficit: Option<f64>,

    /// Credit horizon T in years
    #[arg(long, global = true)]
    pub horizon: Option<u32>,

    /// Monte Carlo realisations
    #[arg(long, global = true)]
    pub samples: Option<u64>,

    /// Master seed for the random streams
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker thread cap (0 = library default); never changes results
    #[arg(long, global = true)]
    pub streams: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Write output here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Deficit in euro per year; adds euro-denominated rows to `optimize`
    #[arg(long = "deficit-euro", global = true)]
    pub deficit_euro: Option<f64>,

    /// Run the reference-table regression against fixtures in this directory
    #[arg(long, global = true)]
    pub fixtures: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<CommandArg>,
}

#[derive(Debug, Clone, Subcommand, PartialEq, Eq)]
pub enum CommandArg {
    /// Payback-first analytics for one year
    VariantA,
    /// Payback above a certain return, one year
    Barrier,
    /// Multi-year granted credit, Monte Carlo
    VariantB,
    /// Continuous withdrawal functionals at a fixed barrier
    Continuous,
    /// Lump-sum vs continuous vs direct payment at a horizon
    Compare,
    /// Constrained barrier optimisation
    Optimize,
    /// Reproduce a reference table (1-10)
    Table { id: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Option<CommandArg>,
    pub fund: FundParams,
    pub alpha: f64,
    pub b: f64,
    pub p: f64,
    pub t: f64,
    pub lambda: f64,
    pub c0: f64,
    pub deficit: f64,
    pub horizon: u32,
    pub samples: u64,
    pub seed: u64,
    pub streams: usize,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub deficit_euro: Option<f64>,
    pub fixtures: Option<PathBuf>,
}

#[derive(Debug, Default, Clone)]
struct FileValues {
    mu: Option<f64>,
    sigma: Option<f64>,
    alpha: Option<f64>,
    b: Option<f64>,
    p: Option<f64>,
    t: Option<f64>,
    c0: Option<f64>,
    deficit: Option<f64>,
    horizon: Option<u32>,
    samples: Option<u64>,
    seed: Option<u64>,
    format: Option<OutputFormat>,
}

fn parse_number<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    raw.trim().parse::<T>().map_err(|e| bad(key, format!("cannot parse `{raw}`: {e}")))
}

fn parse_file(path: &Path) -> Result<FileValues, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| bad("config", format!("cannot read {}: {e}", path.display())))?;
    let mut values = FileValues::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(bad("config", format!("line {}: expected key=value, got `{line}`", lineno + 1)));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "mu" => values.mu = Some(parse_number(key, value)?),
            "sigma" => values.sigma = Some(parse_number(key, value)?),
            "alpha" => values.alpha = Some(parse_number(key, value)?),
            "b" => values.b = Some(parse_number(key, value)?),
            "p" => values.p = Some(parse_number(key, value)?),
            "t" => values.t = Some(parse_number(key, value)?),
            "c0" => values.c0 = Some(parse_number(key, value)?),
            "deficit" => values.deficit = Some(parse_number(key, value)?),
            "horizon" => values.horizon = Some(parse_number(key, value)?),
            "samples" => values.samples = Some(parse_number(key, value)?),
            "seed" => values.seed = Some(parse_number(key, value)?),
            "format" => {
                values.format = Some(match value {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    other => return Err(bad(key, format!("expected csv or json, got `{other}`"))),
                })
            }
            unknown => {
                return Err(bad(
                    unknown,
                    format!("unknown key (accepted: {})", FILE_KEYS.join(", ")),
                ))
            }
        }
    }
    Ok(values)
}

/// Merge defaults, file values and flags (flags win), then validate.
pub fn resolve(cli: Cli) -> Result<RunConfig, ConfigError> {
    let file = match &cli.config {
        Some(path) => parse_file(path)?,
        None => FileValues::default(),
    };

    let mu = cli.mu.or(file.mu).unwrap_or(0.04);
    let sigma = cli.sigma.or(file.sigma).unwrap_or(0.2);
    let alpha = cli.alpha.or(file.alpha).unwrap_or(1.0);
    let b = cli.b.or(file.b).unwrap_or(0.0);
    let p = cli.p.or(file.p).unwrap_or(0.5);
    let t = cli.t.or(file.t).unwrap_or(1.0);
    let lambda = cli.lambda.unwrap_or(0.85);
    let c0 = cli.c0.or(file.c0).unwrap_or(1.0);
    let deficit = cli.deficit.or(file.deficit).unwrap_or(0.1);
    let horizon = cli.horizon.or(file.horizon).unwrap_or(10);
    let samples = cli.samples.or(file.samples).unwrap_or(10_000);
    let seed = cli.seed.or(file.seed).unwrap_or(42);
    let streams = cli.streams.unwrap_or(0);
    let format = cli.format.or(file.format).unwrap_or(OutputFormat::Csv);

    if !mu.is_finite() {
        return Err(bad("mu", format!("must be finite, got {mu}")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(bad("sigma", format!("must be strictly positive, got {sigma}")));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(bad("alpha", format!("must be strictly positive, got {alpha}")));
    }
    if !(b.is_finite() && b >= -1.0) {
        return Err(bad("b", format!("must satisfy b >= -1, got {b}")));
    }
    if !(p.is_finite() && p > 0.0 && p < 1.0) {
        return Err(bad("p", format!("must lie in (0, 1), got {p}")));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(bad("t", format!("must be strictly positive, got {t}")));
    }
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(bad("lambda", format!("must be nonnegative, got {lambda}")));
    }
    if !(c0.is_finite() && c0 > 0.0) {
        return Err(bad("c0", format!("must be strictly positive, got {c0}")));
    }
    if !(deficit.is_finite() && deficit > 0.0) {
        return Err(bad("deficit", format!("must be strictly positive, got {deficit}")));
    }
    if horizon == 0 {
        return Err(bad("horizon", "must be at least one year"));
    }
    if samples == 0 {
        return Err(bad("samples", "must be at least one realisation"));
    }
    if let Some(e) = cli.deficit_euro {
        if !(e.is_finite() && e > 0.0) {
            return Err(bad("deficit-euro", format!("must be strictly positive, got {e}")));
        }
    }
    if let Some(CommandArg::Table { id }) = cli.command {
        if !(1..=10).contains(&id) {
            return Err(bad("table", format!("table id must be 1..=10, got {id}")));
        }
    }

    let fund = FundParams::new(mu, sigma).map_err(|e| bad("mu/sigma", e.to_string()))?;
    Ok(RunConfig {
        command: cli.command,
        fund,
        alpha,
        b,
        p,
        t,
        lambda,
        c0,
        deficit,
        horizon,
        samples,
        seed,
        streams,
        format,
        output: cli.output,
        deficit_euro: cli.deficit_euro,
        fixtures: cli.fixtures,
    })
}
