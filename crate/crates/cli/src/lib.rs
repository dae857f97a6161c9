//! Command-line front end: argument parsing, dataset assembly and the
//! verification suites behind `saddle verify`.

pub mod checks;
pub mod commands;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use saddle_core::report::{Format, DEFAULT_PRECISION, MAX_PRECISION, MIN_PRECISION};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "SADDLE_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "saddle", version, about = "Loop expansions of auxiliary-field integrals")]
pub struct Cli {
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Without --output, write to <DIR>/<command>.<ext>.
    #[arg(long, global = true, env = OUTPUT_DIR_ENV)]
    pub output_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Significant digits for floating-point cells.
    #[arg(
        long,
        global = true,
        default_value_t = DEFAULT_PRECISION,
        value_parser = parse_precision,
    )]
    pub precision: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Tsv,
    RationalText,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Tsv => Format::Tsv,
            OutputFormat::RationalText => Format::RationalText,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

fn parse_precision(s: &str) -> Result<usize, String> {
    let p: usize = s.parse().map_err(|_| format!("'{s}' is not an integer"))?;
    if (MIN_PRECISION..=MAX_PRECISION).contains(&p) {
        Ok(p)
    } else {
        Err(format!("precision must lie in {MIN_PRECISION}..={MAX_PRECISION}"))
    }
}

/// Largest `L` tabulated without `--force`.
pub const TTABLE_BUDGET: u32 = 14;

fn default_lambda_grid() -> Vec<f64> {
    vec![1e-3, 1e-2, 1e-1, 1.0, 10.0]
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients T(L,k|2L−k) for L ≤ Lmax.
    Ttable {
        #[arg(long = "Lmax", visible_alias = "lmax", default_value_t = TTABLE_BUDGET)]
        l_max: u32,
        /// Divide by (2(L+k)−1)!!.
        #[arg(long)]
        normalized: bool,
        /// Allow Lmax above the default budget.
        #[arg(long)]
        force: bool,
    },
    /// Coefficients of the Stirling series.
    Stirling {
        #[arg(long, default_value_t = 14)]
        order: usize,
    },
    /// Tree and loop approximations of Γ(N).
    GammaTable {
        #[arg(long = "N-list", visible_alias = "n-list", value_delimiter = ',', default_values_t = [1.0, 2.0, 5.0, 10.0])]
        n_list: Vec<f64>,
        #[arg(long, default_value_t = 15)]
        loops: usize,
    },
    /// Approximations of the fermion partition function against the exact value.
    FermionTable {
        #[arg(long, value_enum, default_value_t = MethodArg::I)]
        method: MethodArg,
        #[arg(long, default_value_t = 1.0)]
        omega0: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long = "N", visible_alias = "n", default_value_t = 2)]
        n: u32,
        #[arg(long, value_delimiter = ',', default_values_t = default_lambda_grid())]
        lambda_grid: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        loops: usize,
    },
    /// The model without linear prefactor, N = 3 by default.
    KsTable {
        #[arg(long = "N", visible_alias = "n", default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Couplings in the model's own normalisation; the default is
        /// √(3/2) times the standard grid.
        #[arg(long, value_delimiter = ',')]
        lambda_ks_grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = 3)]
        loops: usize,
    },
    /// Ratio of the (L+1)-loop Γ(N) approximation to Γ(N) for L ≤ Lmax.
    Fig1 {
        #[arg(long = "N-list", visible_alias = "n-list", value_delimiter = ',', default_values_t = [1.0, 2.0, 5.0, 10.0])]
        n_list: Vec<f64>,
        #[arg(long = "Lmax", visible_alias = "lmax", default_value_t = 14)]
        l_max: usize,
    },
    /// Three-loop contribution of the third saddle branch against λ.
    Fig2 {
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.05, 0.1])]
        omega0_list: Vec<f64>,
        /// Defaults to λ = 0.01, 0.02, …, 1.
        #[arg(long, value_delimiter = ',')]
        lambda_grid: Option<Vec<f64>>,
        #[arg(long = "N", visible_alias = "n", default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
    },
    /// Exact and numerical self-checks; all suites run when none is selected.
    Verify {
        /// Coefficient identities for 1 ≤ L ≤ Lmax.
        #[arg(long = "identities", visible_alias = "appendix-b")]
        identities: bool,
        /// The two expansion methods against each other.
        #[arg(long)]
        method_equivalence: bool,
        /// Closed forms against quadrature.
        #[arg(long)]
        oracle: bool,
        #[arg(long = "Lmax", visible_alias = "lmax", default_value_t = 10)]
        l_max: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ttable { .. } => "ttable",
            Command::Stirling { .. } => "stirling",
            Command::GammaTable { .. } => "gamma-table",
            Command::FermionTable { .. } => "fermion-table",
            Command::KsTable { .. } => "ks-table",
            Command::Fig1 { .. } => "fig1",
            Command::Fig2 { .. } => "fig2",
            Command::Verify { .. } => "verify",
        }
    }
}

/// How a run ended, mapped onto the exit status by the binary.
#[derive(Debug)]
pub enum RunError {
    /// Exit 2.
    Usage(String),
    /// Exit 1; the rendered report has already been written.
    Verification(Vec<String>),
    /// Exit 1.
    Runtime(anyhow::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Usage(_) => 2,
            RunError::Verification(_) | RunError::Runtime(_) => 1,
        }
    }
}

impl From<anyhow::Error> for RunError {
    fn from(e: anyhow::Error) -> Self {
        RunError::Runtime(e)
    }
}

/// Where the rendered output goes.
pub fn output_target(cli: &Cli) -> Option<PathBuf> {
    let ext = Format::from(cli.format).extension();
    cli.output
        .clone()
        .or_else(|| cli.output_dir.as_ref().map(|d| d.join(format!("{}.{ext}", cli.command.name()))))
}

/// Build the dataset, write it and report verification failures.
pub fn run(cli: &Cli) -> Result<(), RunError> {
    let outcome = commands::execute(&cli.command)?;
    let text = outcome.table.render(cli.format.into(), cli.precision);
    match output_target(cli) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .map_err(|e| anyhow::anyhow!("cannot create {}: {e}", parent.display()))?;
            }
            std::fs::write(&path, text).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| anyhow::anyhow!("cannot write to stdout: {e}"))?;
        }
    }
    if outcome.failures.is_empty() {
        Ok(())
    } else {
        Err(RunError::Verification(outcome.failures))
    }
}
