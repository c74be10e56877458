//! Command implementations behind the `frobmon` binary.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails,
//! 2 for unreadable or rejected input.

pub mod fuzz;
pub mod instance;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use frobmon::weil::{count_points_bounded, EllipticCurveSpec, WeilError, DEFAULT_PRIME_BOUND};
use frobmon::BuildError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fuzz::{generate, FuzzBounds};
pub use instance::{parse_instance, InstanceFile};
pub use report::{evaluate, Report};

/// Overrides the point-counting prime bound.
pub const PRIME_BOUND_VAR: &str = "FROBMON_PRIME_BOUND";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }
}

/// Text for stdout plus whether every check passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_MATH
        }
    }
}

pub fn prime_bound(var: Option<&str>) -> Result<u64, CliError> {
    match var {
        None => Ok(DEFAULT_PRIME_BOUND),
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{PRIME_BOUND_VAR}: expected a positive integer, got {s:?}"))),
    }
}

pub fn prime_bound_from_env() -> Result<u64, CliError> {
    prime_bound(std::env::var(PRIME_BOUND_VAR).ok().as_deref())
}

pub fn build_report(text: &str, prime_bound: u64, timing: bool) -> Result<Report, CliError> {
    evaluate(&parse_instance(text)?, prime_bound, timing)
}

pub fn cmd_build(path: &Path, out: Option<&Path>, timing: bool, prime_bound: u64) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let report = build_report(&text, prime_bound, timing)?;
    let json = report.to_json();
    let output = match out {
        Some(out) => {
            fs::write(out, &json).map_err(|e| CliError::io(out, e))?;
            String::new()
        }
        None => json,
    };
    Ok(Outcome {
        output,
        passed: report.checks.all_pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub p: u64,
    pub a4: String,
    pub a6: String,
    pub points: String,
    pub trace: String,
    pub within_hasse_bound: bool,
}

pub fn cmd_count(p: u64, a4: i64, a6: i64, prime_bound: u64) -> Result<Outcome, CliError> {
    let e = EllipticCurveSpec::new(p, a4, a6)?;
    let c = count_points_bounded(&e, prime_bound)?;
    let passed = frobmon::weil::within_hasse_bound(c.trace, p);
    let report = CountReport {
        p,
        a4: a4.to_string(),
        a6: a6.to_string(),
        points: c.points.to_string(),
        trace: c.trace.to_string(),
        within_hasse_bound: passed,
    };
    let mut output = serde_json::to_string_pretty(&report).expect("count serializes");
    output.push('\n');
    Ok(Outcome { output, passed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzFailure {
    pub index: usize,
    pub reason: String,
    pub dumped: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub count: usize,
    pub passed: usize,
    pub failures: Vec<FuzzFailure>,
}

fn failure_reason(r: &Report) -> String {
    let c = &r.checks;
    [
        (!c.relations.pass, "relations"),
        (!c.thm31, "thm31"),
        (c.agreement == Some(false), "agreement"),
        (!c.polygons.pass, "polygons"),
    ]
    .iter()
    .filter(|(failed, _)| *failed)
    .map(|(_, name)| *name)
    .collect::<Vec<_>>()
    .join(", ")
}

/// Runs every check on `count` seeded instances. Failing instances are
/// written to `dump_dir` as `fuzz-<seed>-<index>.json`.
pub fn cmd_fuzz(
    seed: u64,
    count: usize,
    bounds: FuzzBounds,
    prime_bound: u64,
    dump_dir: &Path,
) -> Result<Outcome, CliError> {
    let instances = generate(seed, count, bounds)?;
    let mut summary = FuzzSummary {
        seed,
        count,
        passed: 0,
        failures: Vec::new(),
    };
    for (index, inst) in instances.iter().enumerate() {
        let reason = match evaluate(inst, prime_bound, false) {
            Ok(r) if r.checks.all_pass => {
                summary.passed += 1;
                continue;
            }
            Ok(r) => failure_reason(&r),
            Err(e) => e.to_string(),
        };
        let path = dump_dir.join(format!("fuzz-{seed}-{index}.json"));
        let json = serde_json::to_string_pretty(inst).expect("instance serializes");
        fs::write(&path, json).map_err(|e| CliError::io(&path, e))?;
        summary.failures.push(FuzzFailure {
            index,
            reason,
            dumped: path.display().to_string(),
        });
    }
    let mut output = serde_json::to_string_pretty(&summary).expect("summary serializes");
    output.push('\n');
    Ok(Outcome {
        output,
        passed: summary.failures.is_empty(),
    })
}
