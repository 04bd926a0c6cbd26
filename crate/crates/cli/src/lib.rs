//! Command-line front end: instance files, solver dispatch, reports.

pub mod commands;
pub mod format;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use invmaxian::random::TreeShape;
use invmaxian::Objective;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "invmaxian", version, about = "Forward and inverse p-maxian problems on trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    L1,
    Chebyshev,
    HammingBottleneck,
    HammingSum,
}

impl From<ObjectiveArg> for Objective {
    fn from(arg: ObjectiveArg) -> Objective {
        match arg {
            ObjectiveArg::L1 => Objective::L1,
            ObjectiveArg::Chebyshev => Objective::Chebyshev,
            ObjectiveArg::HammingBottleneck => Objective::HammingBottleneck,
            ObjectiveArg::HammingSum => Objective::HammingSum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Recursive,
    Star,
    Caterpillar,
}

impl From<ShapeArg> for TreeShape {
    fn from(arg: ShapeArg) -> TreeShape {
        match arg {
            ShapeArg::Recursive => TreeShape::Recursive,
            ShapeArg::Star => TreeShape::Star,
            ShapeArg::Caterpillar => TreeShape::Caterpillar,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cheapest modification making the targets a p-maxian
    Solve {
        instance: PathBuf,
        /// Overrides the objective named in the file (default l1)
        #[arg(long, value_enum)]
        objective: Option<ObjectiveArg>,
        /// Solve for this target pair only
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        pair: Option<Vec<String>>,
        /// Write the l1 LP of the reported pair in CPLEX LP format
        #[arg(long, value_name = "PATH")]
        dump_lp: Option<PathBuf>,
        /// Print the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Longest path, maxian value of the targets, and whether they form a p-maxian
    Maxian {
        instance: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Verify a report against its instance
    Check { instance: PathBuf, report: PathBuf },
    /// Brute-force reference answers for small instances
    Oracle {
        instance: PathBuf,
        #[arg(long, value_enum)]
        objective: Option<ObjectiveArg>,
        /// Enumerate all p-subsets of vertices for the forward problem instead
        #[arg(long, value_name = "P")]
        maxian: Option<usize>,
    },
    /// Random instance generator; the same seed gives the same bytes
    Gen {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max_len: u64,
        #[arg(long, default_value_t = 5)]
        max_cost: u64,
        #[arg(long, default_value_t = 2)]
        max_bound: u64,
        /// Largest denominator of generated costs and bounds
        #[arg(long, default_value_t = 1)]
        max_denominator: u64,
        #[arg(long, default_value_t = 2)]
        targets: usize,
        #[arg(long, value_enum, default_value_t = ShapeArg::Recursive)]
        shape: ShapeArg,
        #[arg(long, value_enum)]
        objective: Option<ObjectiveArg>,
        /// Write here instead of stdout
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Timing of the Chebyshev and bottleneck solvers on growing random trees
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 20_000, 40_000, 80_000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}
