use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kdv5::experiments::{
    compute_calibration, emit, error_exit_code, parse_calibrate, parse_config, parse_sweep, run_scenario,
    write_atomic, Scenario, Status,
};
use kdv5::{Error, Result};

/// Scenario runner for the fifth-order KdV experiments.
#[derive(Parser)]
#[command(name = "kdv5", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write series.csv and summary.json.
    Run {
        scenario: Scenario,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every config listed in a sweep file in parallel.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Recompute fitted constants and regression locks.
    Calibrate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(scenario: Scenario, config: PathBuf, seed: Option<u64>, out: Option<PathBuf>) -> Result<i32> {
    let mut cfg = parse_config(&config)?;
    if cfg.scenario != scenario {
        return Err(Error::Parse {
            line: None,
            message: format!("config is for scenario `{}`, not `{}`", cfg.scenario.name(), scenario.name()),
        });
    }
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if out.is_some() {
        cfg.out = out;
    }
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out").join(scenario.name()));
    let output = run_scenario(&cfg)?;
    emit(&output, &dir)?;
    for check in &output.report.checks {
        let mark = if check.passed { "ok  " } else { "FAIL" };
        println!("{mark} {:<40} {:e} (margin {:e})", check.name, check.value, check.margin);
    }
    if let Some(msg) = &output.message {
        eprintln!("solver failure: {msg}");
    }
    println!("{} -> {}", scenario.name(), dir.display());
    Ok(output.status.exit_code())
}

fn sweep(config: PathBuf) -> Result<i32> {
    let sweep = parse_sweep(&config)?;
    let results = kdv5::experiments::run_sweep(&sweep);
    let mut code = 0;
    for r in &results {
        match &r.error {
            Some(e) => println!("{} exit {} ({e})", r.config.display(), r.exit_code),
            None => println!("{} exit {} -> {}", r.config.display(), r.exit_code, r.out.display()),
        }
        code = code.max(r.exit_code);
    }
    Ok(code)
}

fn calibrate(config: PathBuf) -> Result<i32> {
    let cfg = parse_calibrate(&config)?;
    let calibration = compute_calibration(&cfg)?;
    let output = if cfg.output.is_relative() {
        config.parent().unwrap_or(std::path::Path::new("")).join(&cfg.output)
    } else {
        cfg.output.clone()
    };
    if let Some(dir) = output.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_atomic(&output, &calibration.to_json()?)?;
    println!("wrote {}", output.display());
    let holdouts = [
        ("apriori k=1", calibration.apriori_k1.holdout_passed),
        ("apriori k=2", calibration.apriori_k2.holdout_passed),
        ("free weighted bound", calibration.free_weighted.holdout_passed),
    ]
    .into_iter()
    .chain(calibration.persistence.iter().map(|p| ("persistence envelope", p.holdout_passed)));
    let mut status = Status::Pass;
    for (name, passed) in holdouts {
        if !passed {
            println!("FAIL holdout: {name}");
            status = Status::Fail;
        }
    }
    Ok(status.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are config errors; help and version are not errors
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Run { scenario, config, seed, out } => run(scenario, config, seed, out),
        Command::Sweep { config } => sweep(config),
        Command::Calibrate { config } => calibrate(config),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
