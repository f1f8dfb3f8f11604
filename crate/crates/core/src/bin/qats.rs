use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use qats::output::{metadata_path, OutputBundle};
use qats::selftest::{run_selftest, CDF_TOLERANCE, KS_THRESHOLD};
use qats::{run_experiment_with, ExperimentConfig, PolicyKind, RunOptions};

/// Thompson sampling vs QoS-aware Thompson sampling on Bernoulli bandits.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the policy comparison and write results.
    Run(RunArgs),
    /// Check the Beta CDF against its oracle and the sampler's PIT uniformity.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Ts,
    Qats,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, default_value_t = 4)]
    arms: usize,
    #[arg(long = "p-min", default_value_t = 0.0, value_parser = unit_interval)]
    p_min: f64,
    #[arg(long = "p-max", default_value_t = 0.2, value_parser = unit_interval)]
    p_max: f64,
    /// QoS threshold; an arm violates when its success probability is <= q.
    #[arg(long, default_value_t = 0.1, value_parser = unit_interval)]
    q: f64,
    #[arg(long, default_value_t = 1000)]
    horizon: usize,
    #[arg(long, default_value_t = 350)]
    runs: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value = "both")]
    policy: PolicyArg,
    /// Share bandit instances and random streams between policies.
    #[arg(long, value_enum, default_value = "off")]
    paired: Toggle,
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    /// Optional JSONL file with one record per step per run.
    #[arg(long)]
    traces: Option<PathBuf>,
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn threads_from_env() -> anyhow::Result<usize> {
    match std::env::var("QATS_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .with_context(|| format!("QATS_THREADS must be a non-negative integer, got `{v}`")),
        _ => Ok(0),
    }
}

fn run(args: RunArgs) -> anyhow::Result<()> {
    if args.p_min > args.p_max {
        bail!(
            "--p-min ({}) must not exceed --p-max ({})",
            args.p_min,
            args.p_max
        );
    }
    for (flag, value) in [
        ("--arms", args.arms),
        ("--horizon", args.horizon),
        ("--runs", args.runs),
    ] {
        if value == 0 {
            bail!("{flag} must be at least 1");
        }
    }
    let config = ExperimentConfig {
        n_arms: args.arms,
        p_min: args.p_min,
        p_max: args.p_max,
        q: args.q,
        horizon: args.horizon,
        n_runs: args.runs,
        master_seed: args.seed,
        policies: match args.policy {
            PolicyArg::Ts => vec![PolicyKind::Ts],
            PolicyArg::Qats => vec![PolicyKind::Qats],
            PolicyArg::Both => PolicyKind::ALL.to_vec(),
        },
        paired_streams: matches!(args.paired, Toggle::On),
    };
    config.validate()?;
    let options = RunOptions {
        threads: threads_from_env()?,
        keep_traces: args.traces.is_some(),
    };

    let started = Instant::now();
    let output = run_experiment_with(&config, &options)?;
    let bundle = OutputBundle {
        config: &config,
        series: &output.series,
        traces: options.keep_traces.then_some(output.traces.as_slice()),
        wall_clock: started.elapsed(),
    };
    bundle
        .write(&args.out, args.traces.as_deref())
        .with_context(|| format!("writing results to {}", args.out.display()))?;

    for s in &output.series {
        let last = s.last();
        eprintln!(
            "{:>4}: confidence {:.4}, cumulative violation risk {:.2} at step {}",
            s.policy, last.mean_qos_confidence, last.cum_violation_risk, last.step
        );
    }
    eprintln!(
        "wrote {} rows to {} (metadata: {})",
        bundle.results_rows(),
        args.out.display(),
        metadata_path(&args.out).display()
    );
    Ok(())
}

fn selftest() -> bool {
    let report = run_selftest();
    let (x, a, b) = report.cdf.worst;
    println!(
        "cdf vs oracle: max error {:.3e} at x={x}, a={a}, b={b} (tolerance {CDF_TOLERANCE:e}, faults {}) {}",
        report.cdf.max_error,
        report.cdf.faults,
        verdict(report.cdf.passed())
    );
    for pit in &report.pit {
        println!(
            "pit Beta({}, {}): KS {:.5} (threshold {KS_THRESHOLD}) {}",
            pit.params.0,
            pit.params.1,
            pit.ks,
            verdict(pit.passed())
        );
    }
    report.passed()
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => match run(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::FAILURE
            }
        },
        Command::Selftest => {
            if selftest() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
