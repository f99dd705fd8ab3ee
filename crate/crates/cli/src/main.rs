use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symkl::QuadParams;
use symkl_cli::commands::{self, default_points, parse_complex};
use symkl_cli::output::{failure_json, Failure};
use symkl_cli::{Cache, CliResult, Format, Report};

#[derive(Parser)]
#[command(name = "symkl", version, about = "Symmetric-power Kloosterman moments, Euler factors and L-functions")]
struct Cli {
    #[arg(long, value_enum, default_value_t = OutFormat::Table, global = true)]
    format: OutFormat,
    /// Shorthand for `--format json`.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Shorthand for `--format csv`.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// m_2^k(p^n) for n = 1..=N.
    Moments {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Certified Euler factors M_k(p;T) for every prime p <= pmax, cached.
    Euler {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        pmax: u64,
        /// Cache directory; defaults to $XDG_CACHE_HOME/symkl or ~/.cache/symkl.
        #[arg(long, env = "SYMKL_CACHE_DIR")]
        cache_dir: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
        /// Recompute and overwrite existing entries.
        #[arg(long)]
        refresh: bool,
    },
    /// Conductor, gamma factor, sign, dimensions, Hodge numbers and polygon.
    Invariants {
        #[arg(long)]
        k: u32,
    },
    /// De Rham cohomology basis, kernel generator and filtration jumps.
    Derham {
        #[arg(long)]
        k: u32,
        /// Degree bound of the truncation (default 2k + 6).
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Functional-equation defect of the completed L-function.
    FeCheck {
        #[arg(long)]
        k: u32,
        /// Evaluation points such as `3.7` or `3.2+0.9i`; defaults to three points near the centre.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Vec<String>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Runs the invariant suite at desk-scale budgets.
    Selfcheck,
}

#[derive(Args)]
struct QuadArgs {
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Truncation constant: N = ceil(A sqrt(C) (1 + |Im s|)).
    #[arg(long)]
    truncation: Option<f64>,
}

impl QuadArgs {
    fn params(&self) -> QuadParams {
        let mut q = QuadParams::default();
        if let Some(v) = self.step {
            q.step = v;
        }
        if let Some(v) = self.alpha {
            q.alpha = v;
        }
        if let Some(v) = self.beta {
            q.beta = v;
        }
        if let Some(v) = self.margin {
            q.margin = v;
        }
        if let Some(v) = self.t_max {
            q.t_max = v;
        }
        if let Some(v) = self.truncation {
            q.a = v;
        }
        q
    }
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Moments { .. } => "moments",
        Command::Euler { .. } => "euler",
        Command::Invariants { .. } => "invariants",
        Command::Derham { .. } => "derham",
        Command::FeCheck { .. } => "fe-check",
        Command::Selfcheck => "selfcheck",
    }
}

fn run(cmd: &Command) -> CliResult<Report> {
    match cmd {
        Command::Moments { k, p, n } => commands::cmd_moments(*k, *p, *n),
        Command::Euler {
            k,
            pmax,
            cache_dir,
            no_cache,
            refresh,
        } => {
            let cache = (!no_cache).then(|| Cache::new(cache_dir.clone().unwrap_or_else(Cache::default_dir)));
            commands::cmd_euler(*k, *pmax, cache.as_ref(), *refresh)
        }
        Command::Invariants { k } => commands::cmd_invariants(*k),
        Command::Derham { k, bound } => commands::cmd_derham(*k, *bound),
        Command::FeCheck { k, points, quad } => {
            let points = if points.is_empty() {
                default_points(*k)
            } else {
                points.iter().map(|s| parse_complex(s)).collect::<CliResult<_>>()?
            };
            commands::cmd_fe_check(*k, &points, &quad.params())
        }
        Command::Selfcheck => Ok(commands::cmd_selfcheck()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match (cli.json, cli.csv, cli.format) {
        (true, _, _) | (_, _, OutFormat::Json) => Format::Json,
        (_, true, _) | (_, _, OutFormat::Csv) => Format::Csv,
        _ => Format::Table,
    };
    let command = name(&cli.command);
    match run(&cli.command) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.render(format).as_bytes());
            if report.ok() {
                ExitCode::SUCCESS
            } else {
                eprintln!("{}", failure_json(command, &report.failures));
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            let failure = Failure::from_error(&e);
            eprintln!("{}", failure_json(command, &[failure]));
            if format == Format::Table {
                eprintln!("error: {e}");
            }
            ExitCode::FAILURE
        }
    }
}
