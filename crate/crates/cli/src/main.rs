use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ekrlab::solver::DEFAULT_NODE_BUDGET;
use ekrlab::SearchOptions;
use thiserror::Error;

mod commands;
mod files;
mod report;

use report::{Format, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ekrlab::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(ekrlab::Error::WitnessRejected(_)) => EXIT_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_TRUNCATED: u8 = 3;

/// Exact values, closed forms and constructions for families of signed
/// vectors with bounded scalar products.
///
/// Exit status: 0 success, 1 a checked property failed, 2 invalid usage,
/// 3 a search stopped at its budget before proving optimality.
#[derive(Debug, Parser)]
#[command(name = "ekrlab", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Seed for randomized commands.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SearchFlags {
    /// Worker threads; 0 uses every available core.
    #[arg(long, default_value_t = 1)]
    threads: usize,

    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,

    /// Wall-clock budget per search in milliseconds; 0 disables it.
    /// Defaults to 15 minutes.
    #[arg(long, env = "EKRLAB_BUDGET_MS")]
    time_budget_ms: Option<u64>,

    /// Force the all-positive vector on [k] (or a fixed set) into the family.
    #[arg(long)]
    anchor: bool,
}

impl SearchFlags {
    pub fn options(&self) -> SearchOptions {
        let mut opts = SearchOptions::default()
            .with_threads(self.threads)
            .with_node_budget(self.node_budget)
            .with_anchor(self.anchor);
        if let Some(ms) = self.time_budget_ms {
            opts = opts.with_time_budget((ms > 0).then(|| Duration::from_millis(ms)));
        }
        opts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Every pairwise product is at least l.
    Atleast,
    /// No pairwise product equals -l-1.
    Forbid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    /// F(n, 3, 0) for n = 3..7 against the closed form.
    WeightThree,
    /// Small cells of every exact closed form against search.
    ClosedForms,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute F(n, k, l) (or the forbidden-product variant) by exhaustive search.
    Exact {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short, allow_hyphen_values = true)]
        l: i64,
        #[arg(long, value_enum, default_value_t = Mode::Atleast)]
        mode: Mode,
        /// Write the optimal family here.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Closed-form F(n, k, l) with its justification and confidence.
    Formula {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short, allow_hyphen_values = true)]
        l: i64,
    },
    /// Build a named family, check its defining property, optionally save it.
    Construct {
        #[command(subcommand)]
        which: commands::Construction,
        /// Output file (the A side for cross pairs).
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
        /// Output file for the B side of a cross pair.
        #[arg(long, global = true)]
        out_b: Option<PathBuf>,
    },
    /// Check pairwise properties of a family file.
    Verify {
        file: PathBuf,
        /// Vectors: every product (v = w included) is at least this.
        #[arg(long, allow_hyphen_values = true)]
        min_product: Option<i64>,
        /// Vectors: no product equals this.
        #[arg(long, allow_hyphen_values = true)]
        forbid_product: Option<i64>,
        /// Sets: every two members share at least this many elements.
        #[arg(long)]
        t_intersecting: Option<usize>,
        /// Sets: every two members have union at most this large.
        #[arg(long)]
        union_at_most: Option<usize>,
        /// Sets: a second family every member of which meets every member of FILE.
        #[arg(long, requires = "s")]
        cross: Option<PathBuf>,
        /// Required cross intersection size.
        #[arg(long, short)]
        s: Option<usize>,
    },
    /// Recompute a table of exact values.
    Table {
        #[arg(value_enum)]
        name: Table,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Draw a random subfamily of L_k over [n].
    Sample {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        /// Probability of keeping each vector.
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        /// Instead keep vectors greedily, in random order, while all products stay non-negative.
        #[arg(long)]
        nonnegative: bool,
        /// Shift the sample to a fixpoint before reporting it.
        #[arg(long)]
        shift: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<(Report, u8), CliError> {
    let cmd = echo();
    match cli.command {
        Command::Exact { n, k, l, mode, witness, search } => {
            commands::exact(cmd, n, k, l, mode, witness.as_deref(), &search)
        }
        Command::Formula { n, k, l } => commands::formula(cmd, n, k, l),
        Command::Construct { which, out, out_b } => commands::construct(cmd, which, out.as_deref(), out_b.as_deref()),
        Command::Verify { file, min_product, forbid_product, t_intersecting, union_at_most, cross, s } => {
            let checks = commands::Checks { min_product, forbid_product, t_intersecting, union_at_most, cross, s };
            commands::verify(cmd, &file, &checks)
        }
        Command::Table { name, search } => commands::table(cmd, name, &search),
        Command::Sample { n, k, density, nonnegative, shift, out } => {
            commands::sample(cmd, n, k, density, nonnegative, shift, cli.seed, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok((report, code)) => {
            print!("{}", report.render(format));
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
