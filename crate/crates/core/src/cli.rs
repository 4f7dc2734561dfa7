//! `run` and `check` commands.
//!
//! Both take their output streams as arguments and return a process exit
//! code, so tests can drive them without spawning a process.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};

use crate::config::{load_run_config, ConfigError, RunConfig};
use crate::network::assumption_report;
use crate::results::{kl_table, summary, write_results, write_summary};
use crate::sim::{ensemble, Scenario};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// Bad command line (reported by the argument parser).
    pub const USAGE: i32 = 2;
    /// Malformed config file or unknown key.
    pub const PARSE: i32 = 3;
    /// Well-formed input describing an invalid scenario.
    pub const VALIDATION: i32 = 4;
    pub const IO: i32 = 5;
}

pub const DEFAULT_RESULTS: &str = "results.csv";

/// Flag values that replace fields of the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOverrides {
    pub seed: Option<u64>,
    pub horizon: Option<u64>,
    pub runs: Option<usize>,
    /// Results table path. The summary goes next to it.
    pub out: Option<PathBuf>,
    /// Name of a `[regimes]` entry to use as the default evidence.
    pub regime: Option<String>,
    pub linear_beliefs: bool,
}

/// `results.csv` → `results.summary.json`
pub fn summary_path_for(results: &Path) -> PathBuf {
    results.with_extension("summary.json")
}

fn config_exit_code(e: &ConfigError) -> i32 {
    match e {
        ConfigError::Parse { .. } | ConfigError::UnknownKey { .. } => exit::PARSE,
        ConfigError::InvalidValue { .. } => exit::VALIDATION,
        ConfigError::Io { .. } => exit::IO,
    }
}

fn load(config: &Path, regime: Option<&str>, err: &mut dyn Write) -> Result<RunConfig, i32> {
    load_run_config(config, regime).map_err(|e| {
        let _ = writeln!(err, "error: {}: {e}", config.display());
        config_exit_code(&e)
    })
}

fn warn_identifiability(scenario: &Scenario, err: &mut dyn Write) {
    let report = scenario.identifiability();
    if !report.identifiable {
        let names: Vec<_> = report
            .intersection
            .iter()
            .map(|&k| scenario.hypothesis_names[k].as_str())
            .collect();
        let msg = format!(
            "assumption 2 (global identifiability) fails: hypotheses {names:?} are indistinguishable from the truth at every agent; beliefs still converge, but targets include them"
        );
        warn!("{msg}");
        let _ = writeln!(err, "warning: {msg}");
    }
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> Result<(), String>,
) -> Result<(), String> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    }
    let file = File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
    let mut w = BufWriter::new(file);
    f(&mut w).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    w.flush()
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// Simulate the ensemble described by `config` and write the results table
/// and summary.
pub fn cmd_run(
    config: &Path,
    overrides: &RunOverrides,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let rc = match load(config, overrides.regime.as_deref(), err) {
        Ok(rc) => rc,
        Err(code) => return code,
    };
    let mut scenario = rc.scenario;
    if let Some(seed) = overrides.seed {
        scenario.seed = seed;
    }
    if let Some(h) = overrides.horizon {
        scenario.horizon = h;
    }
    if let Some(r) = overrides.runs {
        scenario.runs = r;
    }
    if let Err(e) = scenario.validate() {
        let _ = writeln!(err, "error: {}: {e}", config.display());
        return exit::VALIDATION;
    }
    warn_identifiability(&scenario, err);

    let (results_path, summary_path) = match (&overrides.out, &rc.output.results) {
        (Some(p), _) => (p.clone(), summary_path_for(p)),
        (None, Some(p)) => (
            p.clone(),
            rc.output
                .summary
                .clone()
                .unwrap_or_else(|| summary_path_for(p)),
        ),
        (None, None) => {
            let p = PathBuf::from(DEFAULT_RESULTS);
            let s = rc
                .output
                .summary
                .clone()
                .unwrap_or_else(|| summary_path_for(&p));
            (p, s)
        }
    };

    info!(
        "running {} run(s), {} agents, horizon {}, seed {}",
        scenario.runs,
        scenario.agents(),
        scenario.horizon,
        scenario.seed
    );
    let ens = match ensemble(&scenario) {
        Ok(e) => e,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", config.display());
            return exit::VALIDATION;
        }
    };

    let linear = overrides.linear_beliefs || rc.linear_beliefs;
    let written = write_file(&results_path, |w| {
        write_results(w, &ens.runs, linear).map_err(|e| e.to_string())
    })
    .and_then(|()| {
        write_file(&summary_path, |w| {
            write_summary(w, &summary(&scenario, &ens)).map_err(|e| e.to_string())
        })
    });
    if let Err(msg) = written {
        let _ = writeln!(err, "error: {msg}");
        return exit::IO;
    }

    let records = scenario.runs
        * scenario.checkpoints().len()
        * scenario.agents()
        * scenario.hypothesis_count();
    let _ = writeln!(out, "wrote {records} records to {}", results_path.display());
    let _ = writeln!(out, "wrote summary to {}", summary_path.display());
    exit::SUCCESS
}

fn verdict_line(label: &str, r: &Result<(), String>) -> String {
    match r {
        Ok(()) => format!("{label}: pass"),
        // Drop the assumption label repeated at the front of the error text.
        Err(m) => format!(
            "{label}: FAIL, {}",
            m.split_once(": ").map_or(m.as_str(), |(_, d)| d)
        ),
    }
}

/// Report the network and identifiability checks and the per-agent KL table.
///
/// Exits with [`exit::VALIDATION`] when the network fails any check.
/// Failed identifiability is reported but does not change the exit code.
pub fn cmd_check(config: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let rc = match load(config, None, err) {
        Ok(rc) => rc,
        Err(code) => return code,
    };
    let s = &rc.scenario;
    let report = match assumption_report(&s.network.matrix()) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", config.display());
            return exit::VALIDATION;
        }
    };
    let ident = s.identifiability();
    let names = &s.hypothesis_names;
    let set_names = |set: &std::collections::BTreeSet<usize>| -> String {
        let v: Vec<_> = set.iter().map(|&k| names[k].as_str()).collect();
        format!("{{{}}}", v.join(", "))
    };

    let mut lines = vec![
        format!("agents: {}, hypotheses: {}", s.agents(), names.join(", ")),
        verdict_line(
            "assumption 1a (doubly stochastic)",
            &report.doubly_stochastic,
        ),
        verdict_line(
            "assumption 1b (positive self-weights)",
            &report.positive_diagonal,
        ),
        verdict_line("assumption 1c (connected graph)", &report.connected),
        if ident.identifiable {
            "assumption 2 (global identifiability): pass".to_string()
        } else {
            format!(
                "assumption 2 (global identifiability): FAIL, indistinguishable at every agent: {}",
                set_names(&ident.intersection)
            )
        },
        format!(
            "agent\ttruth_mu\ttruth_lambda\tindistinguishable\t{}",
            names
                .iter()
                .map(|n| format!("kl_{n}"))
                .collect::<Vec<_>>()
                .join("\t")
        ),
    ];
    for (i, kl) in kl_table(s).iter().enumerate() {
        let kls: Vec<String> = kl.iter().map(|v| v.to_string()).collect();
        lines.push(format!(
            "{i}\t{}\t{}\t{}\t{}",
            s.truth[i].mu(),
            s.truth[i].lambda(),
            set_names(&ident.per_agent[i]),
            kls.join("\t")
        ));
    }
    for l in lines {
        if writeln!(out, "{l}").is_err() {
            return exit::IO;
        }
    }
    if report.all_pass() {
        exit::SUCCESS
    } else {
        exit::VALIDATION
    }
}
