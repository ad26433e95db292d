use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::config::{parse_config, SweepConfig};
use super::output::emit;
use super::scenarios::run_scenario;
use super::error_exit_code;
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub config: PathBuf,
    pub out: PathBuf,
    pub exit_code: i32,
    /// Error text when the run stopped before writing a summary.
    pub error: Option<String>,
}

fn run_one(path: &Path, out: PathBuf) -> Result<i32> {
    let mut cfg = parse_config(path)?;
    cfg.out = Some(out.clone());
    let output = run_scenario(&cfg)?;
    emit(&output, &out)?;
    Ok(output.status.exit_code())
}

/// Runs every config of the sweep on a pool of worker threads. Results are
/// returned in the order of `sweep.configs`.
pub fn run_sweep(sweep: &SweepConfig) -> Vec<SweepResult> {
    let workers = sweep
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .clamp(1, sweep.configs.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<SweepResult>>> = Mutex::new(vec![None; sweep.configs.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = sweep.configs.get(i) else { break };
                let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| i.to_string());
                let out = sweep.out.join(stem);
                let result = match run_one(path, out.clone()) {
                    Ok(code) => SweepResult { config: path.clone(), out, exit_code: code, error: None },
                    Err(e) => SweepResult {
                        config: path.clone(),
                        out,
                        exit_code: error_exit_code(&e),
                        error: Some(e.to_string()),
                    },
                };
                results.lock().expect("no worker panics while holding the lock")[i] = Some(result);
            });
        }
    });
    results.into_inner().expect("workers finished").into_iter().map(|r| r.expect("every config ran")).collect()
}
