//! Command-line grammar and the validated run configuration.

use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fcq_core::{BoundOptions, ExpansionForm, MaxModulusForm, PrecisionContext};

pub const DEFAULT_BITS: u32 = 512;
pub const BITS_ENV: &str = "FCQ_BITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum B1Form {
    /// `√(a₁ − 1)` inside the maximum modulus (reproduces the published table).
    #[default]
    Conservative,
    /// `√(a₂ − 1)`, the exact axis value of `|K|`.
    Sharp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum B2Form {
    #[default]
    Standard,
    /// Half of the standard form, consistent with the true expansion coefficients.
    Halved,
}

/// One `(n, s, ω)` case of the test integrand `e^{ωz²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowSpec {
    pub n: usize,
    pub s: usize,
    pub omega: f64,
}

impl RowSpec {
    pub fn new(n: usize, s: usize, omega: f64) -> Self {
        Self { n, s, omega }
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        if self.n == 0 || self.s == 0 {
            return Err(UsageError(format!(
                "n and s must be positive (got n={}, s={})",
                self.n, self.s
            )));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(UsageError(format!(
                "omega must be a positive real (got {})",
                self.omega
            )));
        }
        Ok(())
    }
}

impl fmt::Display for RowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.n, self.s, self.omega)
    }
}

impl FromStr for RowSpec {
    type Err = UsageError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let [n, s, w] = parts.as_slice() else {
            return Err(UsageError(format!("row `{text}` is not of the form n,s,omega")));
        };
        let bad = |what: &str| UsageError(format!("row `{text}`: cannot parse {what}"));
        let row = RowSpec {
            n: n.parse().map_err(|_| bad("n"))?,
            s: s.parse().map_err(|_| bad("s"))?,
            omega: w.parse().map_err(|_| bad("omega"))?,
        };
        row.validate()?;
        Ok(row)
    }
}

/// Parses `n,s,w[;n,s,w...]`.
pub fn parse_rows(text: &str) -> Result<Vec<RowSpec>, UsageError> {
    let rows = text
        .split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(RowSpec::from_str)
        .collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Err(UsageError("empty row filter".into()));
    }
    Ok(rows)
}

/// Invalid command-line input; exits with status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Parser)]
#[command(
    name = "fcq",
    version,
    about = "Error bounds for multiple-node Fourier-Chebyshev quadrature"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Working precision in bits
    #[arg(long, global = true, env = BITS_ENV, default_value_t = DEFAULT_BITS,
          value_parser = clap::value_parser!(u32).range(PrecisionContext::MIN_BITS as i64..))]
    pub bits: u32,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Maximum-modulus bound variant
    #[arg(long, global = true, value_enum, default_value_t = B1Form::Conservative)]
    pub b1_form: B1Form,

    /// Expansion bound variant
    #[arg(long, global = true, value_enum, default_value_t = B2Form::Standard)]
    pub b2_form: B2Form,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Bounds, actual error and integral for one case
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        omega: f64,
    },
    /// Reproduce the published table (all 36 rows unless filtered)
    Table {
        /// Row filter `n,s,w[;n,s,w...]`
        #[arg(long)]
        rows: Option<String>,
    },
    /// Run the identity and invariant suites
    Verify,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Bounds(RowSpec),
    Table { rows: Option<Vec<RowSpec>> },
    Verify,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub bits: u32,
    pub format: Format,
    pub options: BoundOptions,
}

impl RunConfig {
    pub fn context(&self) -> PrecisionContext {
        PrecisionContext::new(self.bits).expect("bits validated at parse time")
    }
}

impl TryFrom<Cli> for RunConfig {
    type Error = UsageError;

    fn try_from(cli: Cli) -> Result<Self, Self::Error> {
        let command = match cli.command {
            CliCommand::Bounds { n, s, omega } => {
                let row = RowSpec::new(n, s, omega);
                row.validate()?;
                Command::Bounds(row)
            }
            CliCommand::Table { rows } => Command::Table {
                rows: rows.as_deref().map(parse_rows).transpose()?,
            },
            CliCommand::Verify => Command::Verify,
        };
        let options = BoundOptions {
            max_modulus_form: match cli.common.b1_form {
                B1Form::Conservative => MaxModulusForm::Conservative,
                B1Form::Sharp => MaxModulusForm::Sharp,
            },
            expansion_form: match cli.common.b2_form {
                B2Form::Standard => ExpansionForm::Standard,
                B2Form::Halved => ExpansionForm::Halved,
            },
            ..BoundOptions::default()
        };
        Ok(RunConfig {
            command,
            bits: cli.common.bits,
            format: cli.common.format,
            options,
        })
    }
}
