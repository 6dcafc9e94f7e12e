//! The `lix` command-line tool. [`run`] is the whole program; `main` only
//! forwards the process arguments and exit code.

mod commands;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand};

use render::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lix", version, about = "Liquidity index (LIX) measures from bars, books and baskets")]
struct Cli {
    /// Decimal places in numeric output.
    #[arg(long, global = true, env = "LIX_PRECISION", default_value_t = 6,
          value_parser = clap::value_parser!(u8).range(0..=17))]
    precision: u8,

    /// Output format. Defaults to json for calibrate-alpha and study, table otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Daily LIX for every bar in a file.
    Lix(LixArgs),
    /// LIX from a partial session, raw and scaled to the full day.
    LixIntraday(IntradayArgs),
    /// Instantaneous LIX from order-book snapshots.
    Lixi(LixiArgs),
    /// Execution cost implied by a LIX value.
    Cost(CostArgs),
    /// Liquidity of a weighted basket, optionally combined with an ETF.
    Basket(BasketArgs),
    /// LIX next to the Hui-Heubel and Amihud ratios.
    Compare(CompareArgs),
    /// Monte Carlo estimate of the range-scaling exponent.
    CalibrateAlpha(CalibrateArgs),
    /// Regress mean LIXI on mean LIX over a synthetic universe.
    Study(StudyArgs),
}

#[derive(Debug, Args)]
struct LixArgs {
    bars: PathBuf,
    /// Only the bar with this date (YYYY-MM-DD).
    #[arg(long, conflicts_with = "all")]
    date: Option<chrono::NaiveDate>,
    /// Every bar in the file (the default).
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Args)]
struct IntradayArgs {
    /// Shares traded since the open.
    #[arg(long)]
    volume: f64,
    /// Last traded price.
    #[arg(long)]
    price: f64,
    #[arg(long)]
    high: f64,
    #[arg(long)]
    low: f64,
    /// Seconds since the open.
    #[arg(long)]
    elapsed: f64,
    /// Session length in seconds.
    #[arg(long)]
    session: f64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
}

#[derive(Debug, Args)]
struct LixiArgs {
    snapshots: PathBuf,
    /// Daily bars used for average daily volume.
    #[arg(long)]
    adv_from: PathBuf,
    #[arg(long, default_value_t = lix_core::io::DEFAULT_ADV_WINDOW)]
    adv_window: u32,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Split LIXI into spread, depth and ADV terms (alpha 0.5 only).
    #[arg(long)]
    decompose: bool,
    /// Session length in seconds.
    #[arg(long, default_value_t = 23_400.0)]
    session: f64,
}

#[derive(Debug, Args)]
struct CostArgs {
    #[arg(long)]
    shares: f64,
    #[arg(long)]
    price: f64,
    #[arg(long)]
    lix: f64,
    /// Seconds allowed per slice.
    #[arg(long)]
    slice_t: f64,
    /// Session length in seconds.
    #[arg(long)]
    session: f64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
}

#[derive(Debug, Args)]
struct BasketArgs {
    positions: PathBuf,
    /// LIX of an ETF tracking the basket.
    #[arg(long)]
    etf_lix: Option<f64>,
    /// Reject weights that do not sum to 1 instead of rescaling them.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Args)]
struct CompareArgs {
    bars: PathBuf,
    #[arg(long)]
    shares_outstanding: f64,
    /// One row per day instead of a summary.
    #[arg(long)]
    per_day: bool,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    /// rw, gauss or t:<dof>
    #[arg(long, default_value = "rw")]
    model: String,
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Steps per simulated day. Defaults to 10000 for rw and 2000 otherwise.
    #[arg(long)]
    steps: Option<usize>,
    /// Per-step volatility. Defaults to 1 for rw and 0.001 otherwise.
    #[arg(long)]
    volatility: Option<f64>,
    /// Comma-separated fractions of the day.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct StudyArgs {
    #[arg(long, default_value_t = 50)]
    instruments: usize,
    #[arg(long, default_value_t = 21)]
    days: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Write the per-instrument points as CSV to this file.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Book snapshots per simulated day.
    #[arg(long)]
    samples: Option<usize>,
}

/// A failed command: message plus exit code.
#[derive(Debug)]
pub(crate) struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    pub(crate) fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub(crate) fn internal(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<lix_core::Error> for Failure {
    fn from(e: lix_core::Error) -> Self {
        if e.is_input_error() {
            Failure::input(e.to_string())
        } else {
            Failure::internal(e.to_string())
        }
    }
}

/// Output settings shared by every command.
pub(crate) struct Ctx<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
    pub precision: usize,
    pub format: Option<Format>,
    /// Worker pool sized by `LIX_THREADS`.
    pub pool: &'a rayon::ThreadPool,
}

impl Ctx<'_> {
    pub(crate) fn warn(&mut self, msg: impl std::fmt::Display) {
        let _ = writeln!(self.err, "warning: {msg}");
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let text = e.render().to_string();
                    let _ = write!(err, "{text}");
                    if !text.contains("Usage:") {
                        let _ = writeln!(err, "\n{}", Cli::command().render_usage());
                    }
                    EXIT_INPUT
                }
            };
        }
    };

    let threads = match std::env::var("LIX_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) => n,
            Err(_) => {
                let _ = writeln!(err, "error: LIX_THREADS must be a non-negative integer, got `{v}`");
                return EXIT_INPUT;
            }
        },
        Err(_) => 0,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return EXIT_INTERNAL;
        }
    };

    let mut ctx = Ctx {
        out,
        err,
        precision: cli.precision as usize,
        format: cli.format,
        pool: &pool,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(ctx.err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, ctx: &mut Ctx<'_>) -> Result<(), Failure> {
    match command {
        Command::Lix(a) => commands::lix(ctx, a),
        Command::LixIntraday(a) => commands::lix_intraday(ctx, a),
        Command::Lixi(a) => commands::lixi(ctx, a),
        Command::Cost(a) => commands::cost(ctx, a),
        Command::Basket(a) => commands::basket(ctx, a),
        Command::Compare(a) => commands::compare(ctx, a),
        Command::CalibrateAlpha(a) => commands::calibrate_alpha(ctx, a),
        Command::Study(a) => commands::study(ctx, a),
    }
}
