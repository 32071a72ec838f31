use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use numreparam_cli::{parse_interval, run_job, JobConfig, Mode};

/// Detect approximate improperness of a rational plane curve and compute an
/// ε-proper reparametrization with closeness bounds.
#[derive(Debug, Parser)]
#[command(name = "numreparam", version)]
struct Args {
    /// Curve file: {"x": {"num": [...], "den": [...]}, "y": {...}}
    input: PathBuf,

    /// Tolerance ε.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,

    /// Interval d1:d2 for the error bound, plot and CSV.
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    interval: Option<(f64, f64)>,

    /// Seed for the specialization points.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Number of specializations (default grows with the index).
    #[arg(long)]
    samples: Option<usize>,

    /// Run the exact rational algorithm instead of the numeric one.
    #[arg(long)]
    exact: bool,

    /// Report path; stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,

    /// SVG plot of P and Q(R) over the interval.
    #[arg(long)]
    plot: Option<PathBuf>,

    /// CSV of the plotted samples.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = JobConfig {
        input: args.input,
        eps: args.eps,
        interval: args.interval,
        seed: args.seed,
        n_samples: args.samples,
        report: args.report,
        plot: args.plot,
        csv: args.csv,
        mode: if args.exact { Mode::Exact } else { Mode::Numeric },
    };
    match run_job(&cfg) {
        Ok(code) => {
            if code != 0 {
                eprintln!("numreparam: job failed with status {code}, see the report");
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("numreparam: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
