//! Result files.
//!
//! **Table** (CSV, one record per run × checkpoint × agent × hypothesis):
//!
//! ```text
//! run,t,agent,hypothesis,log_belief[,belief]
//! 0,1,0,0,0.0123...
//! ```
//!
//! `agent` and `hypothesis` are zero-based indices; the summary maps
//! hypothesis indices to names. Floats are written in shortest round-trip
//! form, so parsing a field gives back the exact `f64`. The optional `belief`
//! column holds `exp(log_belief)` and is left empty where that overflows.
//!
//! **Summary** (JSON): scenario scalars, hypothesis names, network and
//! identifiability checks, the per-agent KL table, the ensemble mean gap to
//! the centralized target, and per run the targets, final log-beliefs and
//! verdicts. Non-finite numbers are written as the strings `"inf"`, `"-inf"`
//! and `"nan"`.

use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::model::kl_gaussian;
use crate::network::{assumption_report, IdentifiabilityReport};
use crate::sim::{Ensemble, RunResult, Scenario};

pub const RESULTS_HEADER: [&str; 5] = ["run", "t", "agent", "hypothesis", "log_belief"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub run: usize,
    pub t: u64,
    pub agent: usize,
    pub hypothesis: usize,
    pub log_belief: f64,
    #[serde(default)]
    pub belief: Option<f64>,
}

/// Records in file order: run, then checkpoint, then agent, then hypothesis.
pub fn records(runs: &[RunResult]) -> impl Iterator<Item = ResultRecord> + '_ {
    runs.iter().flat_map(|r| {
        (0..r.checkpoints.len()).flat_map(move |k| {
            (0..r.agents).flat_map(move |i| {
                (0..r.hypotheses).map(move |h| {
                    let lb = r.log_belief(k, i, h);
                    ResultRecord {
                        run: r.run,
                        t: r.checkpoints[k],
                        agent: i,
                        hypothesis: h,
                        log_belief: lb,
                        belief: Some(lb.exp()).filter(|b| b.is_finite()),
                    }
                })
            })
        })
    })
}

pub fn write_results<W: Write>(
    out: W,
    runs: &[RunResult],
    linear_beliefs: bool,
) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    if linear_beliefs {
        w.write_record(RESULTS_HEADER.iter().chain(&["belief"]))?;
    } else {
        w.write_record(RESULTS_HEADER)?;
    }
    for rec in records(runs) {
        if linear_beliefs {
            w.serialize((
                rec.run,
                rec.t,
                rec.agent,
                rec.hypothesis,
                rec.log_belief,
                rec.belief,
            ))?;
        } else {
            w.serialize((rec.run, rec.t, rec.agent, rec.hypothesis, rec.log_belief))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_results<R: Read>(input: R) -> Result<Vec<ResultRecord>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn nums(xs: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(xs.into_iter().map(num).collect())
}

fn check(r: &Result<(), String>) -> Value {
    match r {
        Ok(()) => json!({ "pass": true }),
        Err(msg) => json!({ "pass": false, "message": msg }),
    }
}

fn identifiability_json(scenario: &Scenario, report: &IdentifiabilityReport) -> Value {
    let names = |set: &std::collections::BTreeSet<usize>| -> Vec<&str> {
        set.iter()
            .map(|&k| scenario.hypothesis_names[k].as_str())
            .collect()
    };
    json!({
        "pass": report.identifiable,
        "per_agent": report.per_agent.iter().map(&names).collect::<Vec<_>>(),
        "intersection": names(&report.intersection),
    })
}

/// `KL(truth_i ‖ hypothesis)` for every agent and hypothesis.
pub fn kl_table(scenario: &Scenario) -> Vec<Vec<f64>> {
    scenario
        .truth
        .iter()
        .zip(&scenario.hypotheses)
        .map(|(t, hs)| hs.iter().map(|h| kl_gaussian(t, h)).collect())
        .collect()
}

/// Summary document for a finished ensemble.
pub fn summary(scenario: &Scenario, ensemble: &Ensemble) -> Value {
    let network = match assumption_report(&scenario.network.matrix()) {
        Ok(r) => json!({
            "doubly_stochastic": check(&r.doubly_stochastic),
            "positive_diagonal": check(&r.positive_diagonal),
            "connected": check(&r.connected),
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let names = &scenario.hypothesis_names;
    let gap: serde_json::Map<String, Value> = names
        .iter()
        .zip(&ensemble.diagnostics.mean_abs_log_gap)
        .map(|(n, g)| (n.clone(), nums(g.iter().copied())))
        .collect();
    let runs: Vec<Value> = ensemble
        .runs
        .iter()
        .map(|r| {
            let fin = r.final_beliefs();
            json!({
                "run": r.run,
                "centralized_target": nums(r.centralized_target.iter().copied()),
                "final_log_beliefs": (0..r.agents).map(|i| nums(fin.row(i).iter().copied())).collect::<Vec<_>>(),
                "verdicts": r.verdicts,
            })
        })
        .collect();
    json!({
        "agents": scenario.agents(),
        "hypotheses": names,
        "horizon": scenario.horizon,
        "seed": scenario.seed,
        "runs": scenario.runs,
        "upsilon": num(scenario.upsilon),
        "fixed_evidence": scenario.fixed_evidence,
        "network": network,
        "identifiability": identifiability_json(scenario, &scenario.identifiability()),
        "kl": kl_table(scenario).into_iter().map(nums).collect::<Vec<_>>(),
        "checkpoints": ensemble.diagnostics.checkpoints,
        "mean_abs_log_gap": gap,
        "results": runs,
    })
}

pub fn write_summary<W: Write>(mut out: W, summary: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, summary)?;
    out.write_all(b"\n")?;
    out.flush()
}
