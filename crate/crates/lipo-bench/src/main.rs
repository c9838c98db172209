//! `bench` — stopping-time benchmark harness.
//!
//! Runs one or more optimization algorithms against a benchmark problem (or
//! a CSV-backed regression objective), collects the number of evaluations
//! each run needs to reach normalized target values, and emits the
//! aggregated report as CSV or JSON.
//!
//! Exit codes: 0 on success, 1 on configuration errors, 2 on runtime errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lipo::protocol::{emit_report, run_protocol, write_report, ProtocolConfig, ReportFormat};
use lipo::{AlgorithmSpec, Error, PROBLEM_NAMES};

#[derive(Parser, Debug)]
#[command(
    name = "bench",
    about = "Benchmark Lipschitz optimization strategies with stopping-time statistics",
    after_help = "Algorithms: prs | lipo:K | adalipo[:p[,alpha]] \
                  (adalipo defaults: p = 0.1, alpha = 0.01/d).\n\
                  Problems: a registry name (see --list-problems) or csv:PATH \
                  for kernel ridge regression CV tuning on a local dataset."
)]
struct Cli {
    /// Problem name from the registry, or csv:PATH.
    #[arg(long, required_unless_present = "list_problems")]
    problem: Option<String>,

    /// Algorithm spec; repeat for several (e.g. --algo prs --algo adalipo).
    #[arg(long = "algo", required_unless_present = "list_problems")]
    algorithms: Vec<String>,

    /// Independent runs per algorithm.
    #[arg(long, default_value_t = 100)]
    runs: usize,

    /// Function evaluations per run.
    #[arg(long, default_value_t = 1000)]
    budget: usize,

    /// Comma-separated target levels in (0,1).
    #[arg(long, default_value = "0.90,0.95,0.99")]
    targets: String,

    /// Monte Carlo samples for the domain average.
    #[arg(long = "mc-samples", default_value_t = 1_000_000)]
    mc_samples: usize,

    /// Base seed; run k of every algorithm uses seed + k.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Worker threads for the runs (does not change the results).
    #[arg(long, default_value_t = 1)]
    jobs: usize,

    /// Candidate rejection cap per exploitation step.
    #[arg(long = "max-rejects", default_value_t = 100_000)]
    max_rejects: u64,

    /// Report format.
    #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
    format: String,

    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Print the registry problem names and exit.
    #[arg(long, default_value_t = false)]
    list_problems: bool,
}

fn parse_config(cli: &Cli) -> Result<ProtocolConfig, String> {
    let problem = cli.problem.clone().expect("clap enforces presence");
    let algorithms = cli
        .algorithms
        .iter()
        .map(|s| s.parse::<AlgorithmSpec>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let targets = cli
        .targets
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid target `{t}`"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let format = match cli.format.as_str() {
        "csv" => ReportFormat::Csv,
        "json" => ReportFormat::Json,
        other => return Err(format!("unknown format `{other}`")),
    };
    Ok(ProtocolConfig {
        runs: cli.runs,
        budget: cli.budget,
        targets,
        mc_samples: cli.mc_samples,
        base_seed: cli.seed,
        max_rejects: cli.max_rejects,
        jobs: cli.jobs,
        output_path: cli.out.clone(),
        output_format: format,
        ..ProtocolConfig::new(problem, algorithms)
    })
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path with status 0
            if e.use_stderr() {
                let _ = e.print();
                return ExitCode::from(1);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };

    if cli.list_problems {
        for name in PROBLEM_NAMES {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }

    let config = match parse_config(&cli) {
        Ok(config) => config,
        Err(msg) => {
            eprintln!("bench: {msg}");
            return ExitCode::from(1);
        }
    };

    let reports = match run_protocol(&config) {
        Ok(reports) => reports,
        Err(e @ (Error::InvalidParameter(_)
        | Error::UnknownObjective(_)
        | Error::InvalidAlgorithmSpec { .. })) => {
            eprintln!("bench: {e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            eprintln!("bench: {e}");
            return ExitCode::from(2);
        }
    };

    let outcome = match &config.output_path {
        Some(path) => emit_report(&reports, config.output_format, path),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_report(&reports, config.output_format, &mut lock)
                .and_then(|()| lock.flush().map_err(lipo::Error::from))
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bench: {e}");
            ExitCode::from(2)
        }
    }
}
