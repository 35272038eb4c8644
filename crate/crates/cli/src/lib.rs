//! Command-line workbench over the solver pipeline: single solves,
//! bundled benchmark table reproduction, and parameter scans.

pub mod commands;
pub mod record;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pslet_core::{Error, PotentialModel, ScaleConvention};

#[derive(Debug, Parser)]
#[command(
    name = "pslet",
    about = "Shifted-l expansion solver for radial Schrodinger bound states",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one state and print the full result record.
    Solve(RunSpec),
    /// Reproduce a bundled benchmark table and compare cell by cell.
    Table(TableArgs),
    /// Sweep one model parameter; one CSV row per grid point.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialArg {
    /// (q^2 + a q^-b)/2
    Spiked,
    /// -(q^2 + c^2)^(-1/2)
    Tcoulomb,
    /// q^2/2
    Ho,
    /// -1/q
    Coulomb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Half,
    Doubled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
    Csv,
}

/// One fully specified run.
#[derive(Debug, Clone, Args)]
pub struct RunSpec {
    /// Potential family.
    #[arg(long, value_enum)]
    pub potential: PotentialArg,
    /// Spike strength a (spiked only).
    #[arg(long)]
    pub a: Option<f64>,
    /// Spike exponent b (spiked only).
    #[arg(long)]
    pub b: Option<f64>,
    /// Truncation length c (tcoulomb only).
    #[arg(long)]
    pub c: Option<f64>,
    /// Angular momentum quantum number.
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    /// Radial node count (only 0 is solvable by the expansion).
    #[arg(long, default_value_t = 0)]
    pub nr: u32,
    /// Truncation order K of the reported series sum.
    #[arg(long = "order", default_value_t = 4)]
    pub order: usize,
    /// Resummation degrees as N,M; repeatable.
    #[arg(long = "pade", value_parser = parse_pade)]
    pub pade: Vec<(usize, usize)>,
    /// Energy reporting convention.
    #[arg(long, value_enum, default_value_t = ConventionArg::Half)]
    pub convention: ConventionArg,
    /// Cross-check with the direct-integration oracle.
    #[arg(long, default_value_t = false)]
    pub oracle: bool,
    /// Expansion-point solve tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
}

fn parse_pade(s: &str) -> Result<(usize, usize), String> {
    let (n, m) = s
        .split_once(',')
        .ok_or_else(|| format!("expected N,M but got {s:?}"))?;
    let n = n.trim().parse().map_err(|e| format!("bad N: {e}"))?;
    let m = m.trim().parse().map_err(|e| format!("bad M: {e}"))?;
    Ok((n, m))
}

impl RunSpec {
    /// Validate the flags against the model constraints and build it.
    pub fn build_model(&self) -> Result<PotentialModel, Error> {
        let model = match self.potential {
            PotentialArg::Spiked => {
                let a = self
                    .a
                    .ok_or_else(|| Error::Validation("--potential spiked requires --a".into()))?;
                let b = self
                    .b
                    .ok_or_else(|| Error::Validation("--potential spiked requires --b".into()))?;
                PotentialModel::spiked_ho(a, b)?
            }
            PotentialArg::Tcoulomb => {
                let c = self
                    .c
                    .ok_or_else(|| Error::Validation("--potential tcoulomb requires --c".into()))?;
                PotentialModel::truncated_coulomb(c)?
            }
            PotentialArg::Ho => PotentialModel::pure_ho(),
            PotentialArg::Coulomb => PotentialModel::pure_coulomb(),
        };
        let convention = match self.convention {
            ConventionArg::Half => ScaleConvention::HalfKinetic,
            ConventionArg::Doubled => ScaleConvention::Doubled,
        };
        Ok(model.with_convention(convention))
    }

    /// Requested resummation degrees (defaults to [3,3] and [3,4]).
    pub fn pade_pairs(&self) -> Vec<(usize, usize)> {
        if self.pade.is_empty() {
            vec![(3, 3), (3, 4)]
        } else {
            self.pade.clone()
        }
    }
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Bundled table id (1..=4).
    pub id: u8,
    /// Output format (text gives a aligned summary, csv/json the full cells).
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub base: RunSpec,
    /// Parameter to sweep.
    #[arg(long, value_enum)]
    pub sweep: SweepParam,
    /// Sweep start (with --to and --steps).
    #[arg(long)]
    pub from: Option<f64>,
    /// Sweep end, inclusive.
    #[arg(long)]
    pub to: Option<f64>,
    /// Number of grid points (>= 1).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Explicit comma-separated grid values (alternative to from/to).
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    A,
    B,
    C,
    L,
}

impl ScanArgs {
    /// The swept grid, from either explicit values or from/to/steps.
    pub fn grid(&self) -> Result<Vec<f64>, Error> {
        if let Some(values) = &self.values {
            if values.is_empty() {
                return Err(Error::Validation("--values must not be empty".into()));
            }
            return Ok(values.clone());
        }
        let (Some(from), Some(to), Some(steps)) = (self.from, self.to, self.steps) else {
            return Err(Error::Validation(
                "scan needs either --values or all of --from/--to/--steps".into(),
            ));
        };
        if steps == 0 {
            return Err(Error::Validation("--steps must be >= 1".into()));
        }
        if steps == 1 {
            return Ok(vec![from]);
        }
        Ok((0..steps)
            .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
            .collect())
    }
}

/// Process exit code for an error (2 = bad input, 3 = numerical failure).
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Validation(_)
        | Error::Domain(_)
        | Error::Capacity(_)
        | Error::UnsupportedState(_) => 2,
        _ => 3,
    }
}
