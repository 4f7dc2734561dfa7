//! Scenario construction, seeded data generation, simulation runs and
//! Monte Carlo ensembles.
//!
//! # Random streams
//!
//! Every random draw comes from a ChaCha8 generator seeded with the scenario
//! seed. Independent substreams are selected with ChaCha's 64-bit stream id:
//!
//! ```text
//! stream = purpose << 56 | run << 24 | agent
//! ```
//!
//! where `purpose` is 1 for prior evidence and 2 for measurements. A run
//! therefore never shares draws with another run or agent, and results do not
//! depend on the order in which runs execute. With `fixed_evidence` the
//! evidence stream always uses run 0, so every run sees the same training data
//! and only the measurements change.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::ScenarioError;
use crate::model::{
    ignorance_log_predictive, log_asymptotic_ulr, EvidenceSummary, GaussGammaParams,
    GaussianParams, ObservationStream, SampleSummary, UncertainModel,
};
use crate::network::{
    check_global_identifiability, directed_cycle, validate_network, BeliefMatrix,
    IdentifiabilityReport, Network,
};

pub const DEFAULT_UPSILON: f64 = 10.0;
pub const DEFAULT_HORIZON: u64 = 10_000;
pub const DEFAULT_CHECKPOINTS_PER_DECADE: u32 = 20;
pub const MAX_CHECKPOINTS_PER_DECADE: u32 = 100;

const EVIDENCE_PURPOSE: u64 = 1;
const OBSERVATION_PURPOSE: u64 = 2;

/// Generator for one (purpose, run, agent) substream.
pub fn substream(seed: u64, purpose: u64, run: usize, agent: usize) -> ChaCha8Rng {
    debug_assert!(run < 1 << 32 && agent < 1 << 24);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(purpose << 56 | (run as u64) << 24 | agent as u64);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NetworkSpec {
    /// Directed cycle with self-loops.
    Cycle { agents: usize, self_weight: f64 },
    /// Explicit row-major weight matrix.
    Matrix(Vec<Vec<f64>>),
}

impl NetworkSpec {
    pub fn agents(&self) -> usize {
        match self {
            NetworkSpec::Cycle { agents, .. } => *agents,
            NetworkSpec::Matrix(w) => w.len(),
        }
    }

    pub fn build(&self) -> Result<Network, crate::error::NetworkError> {
        match self {
            NetworkSpec::Cycle {
                agents,
                self_weight,
            } => directed_cycle(*agents, *self_weight),
            NetworkSpec::Matrix(w) => validate_network(w),
        }
    }

    /// The weight matrix, whether or not it is valid.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        match self {
            NetworkSpec::Cycle {
                agents,
                self_weight,
            } => {
                let m = *agents;
                let mut w = vec![vec![0.0; m]; m];
                for (i, row) in w.iter_mut().enumerate() {
                    row[i] += self_weight;
                    row[(i + m - 1) % m] += 1.0 - self_weight;
                }
                w
            }
            NetworkSpec::Matrix(w) => w.clone(),
        }
    }
}

/// How much training data an agent holds for a hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvidenceRegime {
    Count(u64),
    /// Count drawn uniformly from `lo..=hi` for each agent and hypothesis.
    Range {
        lo: u64,
        hi: u64,
    },
    Dogmatic,
}

impl EvidenceRegime {
    pub const LOW: EvidenceRegime = EvidenceRegime::Range { lo: 0, hi: 100 };
    pub const HIGH: EvidenceRegime = EvidenceRegime::Range {
        lo: 1_000,
        hi: 10_000,
    };
}

/// Everything needed to reproduce a study.
///
/// Per-agent tables are indexed `[agent][hypothesis]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub network: NetworkSpec,
    pub hypothesis_names: Vec<String>,
    pub hypotheses: Vec<Vec<GaussianParams>>,
    pub truth: Vec<GaussianParams>,
    pub evidence: Vec<Vec<EvidenceRegime>>,
    pub prior: GaussGammaParams,
    pub horizon: u64,
    pub seed: u64,
    pub runs: usize,
    pub upsilon: f64,
    /// Draw the training data once and reuse it in every run.
    pub fixed_evidence: bool,
    pub checkpoints_per_decade: u32,
}

impl Scenario {
    /// Every agent shares one truth and one hypothesis table.
    pub fn homogeneous(
        network: NetworkSpec,
        truth: GaussianParams,
        hypotheses: &[(&str, GaussianParams, EvidenceRegime)],
    ) -> Self {
        let m = network.agents();
        Scenario {
            network,
            hypothesis_names: hypotheses.iter().map(|(n, _, _)| n.to_string()).collect(),
            hypotheses: vec![hypotheses.iter().map(|(_, p, _)| *p).collect(); m],
            truth: vec![truth; m],
            evidence: vec![hypotheses.iter().map(|(_, _, r)| *r).collect(); m],
            prior: GaussGammaParams::NONINFORMATIVE,
            horizon: DEFAULT_HORIZON,
            seed: 0,
            runs: 1,
            upsilon: DEFAULT_UPSILON,
            fixed_evidence: false,
            checkpoints_per_decade: DEFAULT_CHECKPOINTS_PER_DECADE,
        }
    }

    /// Two hypotheses on a directed cycle with 0.5 self-weights. Measurements
    /// come from `N(0, 2)`; `theta1` matches it and `theta2` has precision 0.4.
    pub fn two_hypothesis_cycle(agents: usize, regime: EvidenceRegime) -> Self {
        let truth = GaussianParams::new(0.0, 0.5).expect("valid constant");
        let alt = GaussianParams::new(0.0, 0.4).expect("valid constant");
        Scenario::homogeneous(
            NetworkSpec::Cycle {
                agents,
                self_weight: 0.5,
            },
            truth,
            &[("theta1", truth, regime), ("theta2", alt, regime)],
        )
    }

    pub fn agents(&self) -> usize {
        self.network.agents()
    }

    pub fn hypothesis_count(&self) -> usize {
        self.hypothesis_names.len()
    }

    /// Check everything except the identifiability of the truth, and build the
    /// network.
    pub fn validate(&self) -> Result<Network, ScenarioError> {
        let invalid = |msg: String| Err(ScenarioError::Invalid(msg));
        let net = self.network.build()?;
        let m = net.agents();
        let h = self.hypothesis_count();
        if h == 0 {
            return invalid("at least one hypothesis is required".into());
        }
        if self.truth.len() != m {
            return invalid(format!(
                "truth has {} entries for {m} agents",
                self.truth.len()
            ));
        }
        for (name, table) in [
            ("hypotheses", self.hypotheses.len()),
            ("evidence", self.evidence.len()),
        ] {
            if table != m {
                return invalid(format!("{name} table has {table} rows for {m} agents"));
            }
        }
        for i in 0..m {
            if self.hypotheses[i].len() != h || self.evidence[i].len() != h {
                return invalid(format!("agent {i} does not list all {h} hypotheses"));
            }
            for (k, r) in self.evidence[i].iter().enumerate() {
                if let EvidenceRegime::Range { lo, hi } = r {
                    if lo > hi {
                        return invalid(format!(
                            "agent {i} hypothesis {k}: evidence range [{lo}, {hi}] has lo > hi"
                        ));
                    }
                }
            }
        }
        if self.horizon < 1 {
            return invalid("horizon must be at least 1".into());
        }
        if self.runs < 1 {
            return invalid("runs must be at least 1".into());
        }
        if !(self.upsilon.is_finite() && self.upsilon > 1.0) {
            return invalid(format!(
                "upsilon must be a finite number > 1, got {}",
                self.upsilon
            ));
        }
        if !(1..=MAX_CHECKPOINTS_PER_DECADE).contains(&self.checkpoints_per_decade) {
            return invalid(format!(
                "checkpoints_per_decade must be in 1..={MAX_CHECKPOINTS_PER_DECADE}"
            ));
        }
        Ok(net)
    }

    pub fn identifiability(&self) -> IdentifiabilityReport {
        let agents: Vec<_> = self
            .truth
            .iter()
            .zip(&self.hypotheses)
            .map(|(t, h)| (*t, h.clone()))
            .collect();
        check_global_identifiability(&agents)
    }

    pub fn checkpoints(&self) -> Vec<u64> {
        checkpoint_grid(self.horizon, self.checkpoints_per_decade)
    }
}

/// Geometric time grid `round(10^(k/per_decade))` up to and including
/// `horizon`.
pub fn checkpoint_grid(horizon: u64, per_decade: u32) -> Vec<u64> {
    let per_decade = per_decade.clamp(1, MAX_CHECKPOINTS_PER_DECADE);
    let mut grid: Vec<u64> = Vec::new();
    for k in 0.. {
        let t = 10f64.powf(k as f64 / per_decade as f64).round() as u64;
        if t > horizon {
            break;
        }
        if grid.last() != Some(&t) {
            grid.push(t);
        }
    }
    if grid.last() != Some(&horizon) {
        grid.push(horizon);
    }
    grid
}

/// Draw every agent's training data for one run.
pub fn generate_evidence(scenario: &Scenario, run: usize) -> Vec<Vec<EvidenceSummary>> {
    let stream_run = if scenario.fixed_evidence { 0 } else { run };
    (0..scenario.agents())
        .map(|i| {
            let mut rng = substream(scenario.seed, EVIDENCE_PURPOSE, stream_run, i);
            scenario.evidence[i]
                .iter()
                .zip(&scenario.hypotheses[i])
                .map(|(regime, params)| {
                    let count = match *regime {
                        EvidenceRegime::Dogmatic => return EvidenceSummary::Dogmatic(*params),
                        EvidenceRegime::Count(r) => r,
                        EvidenceRegime::Range { lo, hi } => rng.gen_range(lo..=hi),
                    };
                    let dist = normal(params);
                    let mut stats = ObservationStream::new();
                    for _ in 0..count {
                        stats.push(dist.sample(&mut rng));
                    }
                    EvidenceSummary::Samples(SampleSummary::from(&stats))
                })
                .collect()
        })
        .collect()
}

fn normal(p: &GaussianParams) -> Normal<f64> {
    Normal::new(p.mu(), p.std_dev()).expect("validated parameters")
}

/// Outcome of the uncertain likelihood ratio test for one belief.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
    Unsure,
}

/// Accept when the belief is at least `υ`, reject below `1/υ`.
///
/// # Panics
///
/// If `upsilon <= 1`.
pub fn verdict(log_belief: f64, upsilon: f64) -> Verdict {
    assert!(upsilon > 1.0, "threshold must exceed 1, got {upsilon}");
    let cut = upsilon.ln();
    if log_belief >= cut {
        Verdict::Accept
    } else if log_belief < -cut {
        Verdict::Reject
    } else {
        Verdict::Unsure
    }
}

/// One simulated run, sampled on the checkpoint grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub run: usize,
    pub agents: usize,
    pub hypotheses: usize,
    pub checkpoints: Vec<u64>,
    /// `[checkpoint][agent][hypothesis]`, flattened.
    pub log_beliefs: Vec<f64>,
    /// Each agent's own `ln Λ(t)` (sum of its log updates), same layout.
    pub log_ulr: Vec<f64>,
    /// `(1/m) Σ_j ln Λ̃_jθ` per hypothesis.
    pub centralized_target: Vec<f64>,
    pub evidence: Vec<Vec<EvidenceSummary>>,
    /// At the final checkpoint, `[agent][hypothesis]`.
    pub verdicts: Vec<Vec<Verdict>>,
}

impl RunResult {
    fn offset(&self, k: usize, agent: usize, hypothesis: usize) -> usize {
        (k * self.agents + agent) * self.hypotheses + hypothesis
    }

    pub fn checkpoint_index(&self, t: u64) -> Option<usize> {
        self.checkpoints.binary_search(&t).ok()
    }

    pub fn log_belief(&self, k: usize, agent: usize, hypothesis: usize) -> f64 {
        self.log_beliefs[self.offset(k, agent, hypothesis)]
    }

    pub fn beliefs_at(&self, k: usize) -> BeliefMatrix {
        let rows: Vec<Vec<f64>> = (0..self.agents)
            .map(|i| {
                (0..self.hypotheses)
                    .map(|h| self.log_belief(k, i, h))
                    .collect()
            })
            .collect();
        BeliefMatrix::from_rows(&rows, self.checkpoints[k]).expect("rectangular")
    }

    pub fn final_beliefs(&self) -> BeliefMatrix {
        self.beliefs_at(self.checkpoints.len() - 1)
    }

    pub fn agent_log_ulr(&self, k: usize, agent: usize, hypothesis: usize) -> f64 {
        self.log_ulr[self.offset(k, agent, hypothesis)]
    }

    /// `(1/m) Σ_i |ln μ_i(θ) − target(θ)|` at every checkpoint.
    pub fn abs_log_gap(&self, hypothesis: usize) -> Vec<f64> {
        let target = self.centralized_target[hypothesis];
        (0..self.checkpoints.len())
            .map(|k| {
                (0..self.agents)
                    .map(|i| (self.log_belief(k, i, hypothesis) - target).abs())
                    .sum::<f64>()
                    / self.agents as f64
            })
            .collect()
    }

    /// Network-average log-belief at every checkpoint.
    pub fn mean_log_belief(&self, hypothesis: usize) -> Vec<f64> {
        (0..self.checkpoints.len())
            .map(|k| {
                (0..self.agents)
                    .map(|i| self.log_belief(k, i, hypothesis))
                    .sum::<f64>()
                    / self.agents as f64
            })
            .collect()
    }
}

/// Simulate one run of the scenario.
pub fn run_simulation(scenario: &Scenario, run: usize) -> Result<RunResult, ScenarioError> {
    let net = scenario.validate()?;
    Ok(simulate(scenario, &net, run))
}

fn simulate(scenario: &Scenario, net: &Network, run: usize) -> RunResult {
    let m = net.agents();
    let h = scenario.hypothesis_count();
    let prior = &scenario.prior;
    let evidence = generate_evidence(scenario, run);
    let models: Vec<Vec<UncertainModel>> = evidence
        .iter()
        .map(|row| {
            row.iter()
                .map(|ev| UncertainModel::new(prior, ev))
                .collect()
        })
        .collect();
    let informed: Vec<bool> = models
        .iter()
        .map(|row| row.iter().any(|md| !matches!(md, UncertainModel::Ignorant)))
        .collect();
    let mut rngs: Vec<ChaCha8Rng> = (0..m)
        .map(|i| substream(scenario.seed, OBSERVATION_PURPOSE, run, i))
        .collect();
    let signals: Vec<Normal<f64>> = scenario.truth.iter().map(normal).collect();

    let checkpoints = scenario.checkpoints();
    let mut log_beliefs = Vec::with_capacity(checkpoints.len() * m * h);
    let mut log_ulr = Vec::with_capacity(checkpoints.len() * m * h);

    let mut beliefs = BeliefMatrix::new(m, h);
    let mut scratch = Vec::with_capacity(m * h);
    let mut streams = vec![ObservationStream::new(); m];
    let mut accumulated = vec![0.0; m * h];
    let mut log_ell = vec![0.0; m * h];
    let mut next_checkpoint = checkpoints.iter().peekable();

    for t in 1..=scenario.horizon {
        for i in 0..m {
            let x = signals[i].sample(&mut rngs[i]);
            let stream = &mut streams[i];
            if informed[i] {
                let baseline = ignorance_log_predictive(prior, stream, x);
                for (k, model) in models[i].iter().enumerate() {
                    let v = model.log_ell_with_baseline(stream, x, baseline);
                    log_ell[i * h + k] = v;
                    accumulated[i * h + k] += v;
                }
            }
            stream.push(x);
        }
        beliefs.advance(net, &log_ell, &mut scratch);
        if next_checkpoint.peek() == Some(&&t) {
            next_checkpoint.next();
            log_beliefs.extend_from_slice(beliefs.as_slice());
            log_ulr.extend_from_slice(&accumulated);
        }
    }

    let centralized_target = (0..h)
        .map(|k| {
            (0..m)
                .map(|j| log_asymptotic_ulr(prior, &evidence[j][k], &scenario.truth[j]))
                .sum::<f64>()
                / m as f64
        })
        .collect();
    let verdicts = (0..m)
        .map(|i| {
            beliefs
                .row(i)
                .iter()
                .map(|&b| verdict(b, scenario.upsilon))
                .collect()
        })
        .collect();

    RunResult {
        run,
        agents: m,
        hypotheses: h,
        checkpoints,
        log_beliefs,
        log_ulr,
        centralized_target,
        evidence,
        verdicts,
    }
}

/// Ensemble average of the distance to the centralized solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleDiagnostics {
    pub checkpoints: Vec<u64>,
    /// `[hypothesis][checkpoint]`: `(1/(m·runs)) Σ |ln μ_it(θ) − target(θ)|`.
    /// Infinite for dogmatic evidence, whose target diverges.
    pub mean_abs_log_gap: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ensemble {
    pub runs: Vec<RunResult>,
    pub diagnostics: EnsembleDiagnostics,
}

/// Run every Monte Carlo replicate (in parallel) and aggregate.
///
/// Results are ordered by run index, so the output does not depend on thread
/// scheduling.
pub fn ensemble(scenario: &Scenario) -> Result<Ensemble, ScenarioError> {
    let net = scenario.validate()?;
    let runs: Vec<RunResult> = (0..scenario.runs)
        .into_par_iter()
        .map(|r| simulate(scenario, &net, r))
        .collect();
    let diagnostics = diagnostics(&runs, scenario.checkpoints());
    Ok(Ensemble { runs, diagnostics })
}

pub fn diagnostics(runs: &[RunResult], checkpoints: Vec<u64>) -> EnsembleDiagnostics {
    let h = runs.first().map_or(0, |r| r.hypotheses);
    let mean_abs_log_gap = (0..h)
        .map(|k| {
            let mut total = vec![0.0; checkpoints.len()];
            for r in runs {
                for (acc, g) in total.iter_mut().zip(r.abs_log_gap(k)) {
                    *acc += g;
                }
            }
            total.iter().map(|v| v / runs.len() as f64).collect()
        })
        .collect();
    EnsembleDiagnostics {
        checkpoints,
        mean_abs_log_gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(mu: f64, lambda: f64) -> GaussianParams {
        GaussianParams::new(mu, lambda).unwrap()
    }

    #[test]
    fn verdict_examples() {
        assert_eq!(verdict(0.0, 10.0), Verdict::Unsure);
        assert_eq!(verdict(5.0, 10.0), Verdict::Accept);
        assert_eq!(verdict(-2.31, 10.0), Verdict::Reject);
        assert_eq!(verdict(10f64.ln(), 10.0), Verdict::Accept);
        assert_eq!(verdict(-(10f64.ln()), 10.0), Verdict::Unsure);
    }

    #[test]
    #[should_panic]
    fn verdict_rejects_small_threshold() {
        verdict(0.0, 1.0);
    }

    #[test]
    fn grid_is_geometric_and_ends_at_horizon() {
        let grid = checkpoint_grid(10_000, 20);
        assert_eq!(grid.first(), Some(&1));
        assert_eq!(grid.last(), Some(&10_000));
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        for t in [1, 10, 100, 1000, 10_000] {
            assert!(grid.contains(&t), "{t}");
        }
        assert_eq!(checkpoint_grid(7, 1), vec![1, 7]);
        assert_eq!(checkpoint_grid(1, 20), vec![1]);
        assert!(checkpoint_grid(1_000_000, 100).len() <= 601);
    }

    #[test]
    fn evidence_regimes() {
        let mut s = Scenario::homogeneous(
            NetworkSpec::Cycle {
                agents: 3,
                self_weight: 0.5,
            },
            g(0.0, 0.5),
            &[
                ("none", g(0.0, 0.5), EvidenceRegime::Count(0)),
                ("dog", g(0.0, 0.4), EvidenceRegime::Dogmatic),
                ("low", g(1.0, 2.0), EvidenceRegime::LOW),
            ],
        );
        s.seed = 99;
        let ev = generate_evidence(&s, 0);
        for row in &ev {
            assert_eq!(row[0], EvidenceSummary::EMPTY);
            assert_eq!(row[1], EvidenceSummary::Dogmatic(g(0.0, 0.4)));
            match row[2] {
                EvidenceSummary::Samples(sm) => assert!(sm.count() <= 100),
                _ => panic!("expected samples"),
            }
        }
        assert_eq!(ev, generate_evidence(&s, 0));
        assert_ne!(ev, generate_evidence(&s, 1));
        s.fixed_evidence = true;
        assert_eq!(generate_evidence(&s, 0), generate_evidence(&s, 5));
    }

    #[test]
    fn no_evidence_means_no_movement() {
        let s = Scenario::homogeneous(
            NetworkSpec::Matrix(vec![vec![1.0]]),
            g(0.0, 0.5),
            &[("only", g(0.0, 0.5), EvidenceRegime::Count(0))],
        );
        let r = run_simulation(&s, 0).unwrap();
        assert!(r.log_beliefs.iter().all(|&v| v == 0.0));
        assert_eq!(r.centralized_target, vec![0.0]);
        assert_eq!(r.verdicts, vec![vec![Verdict::Unsure]]);
    }

    #[test]
    fn single_agent_belief_is_its_own_ulr() {
        let mut s = Scenario::homogeneous(
            NetworkSpec::Matrix(vec![vec![1.0]]),
            g(0.0, 0.5),
            &[("a", g(0.0, 0.5), EvidenceRegime::Count(20))],
        );
        s.horizon = 500;
        s.seed = 4;
        let r = run_simulation(&s, 0).unwrap();
        for k in 0..r.checkpoints.len() {
            assert!((r.log_belief(k, 0, 0) - r.agent_log_ulr(k, 0, 0)).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_scenarios_are_rejected() {
        let mut s = Scenario::two_hypothesis_cycle(3, EvidenceRegime::LOW);
        s.evidence[1][0] = EvidenceRegime::Range { lo: 100, hi: 0 };
        assert!(matches!(
            run_simulation(&s, 0),
            Err(ScenarioError::Invalid(_))
        ));

        let mut s = Scenario::two_hypothesis_cycle(3, EvidenceRegime::LOW);
        s.upsilon = 1.0;
        assert!(s.validate().is_err());

        let mut s = Scenario::two_hypothesis_cycle(3, EvidenceRegime::LOW);
        s.network = NetworkSpec::Matrix(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(matches!(s.validate(), Err(ScenarioError::Network(_))));
    }

    #[test]
    fn ensemble_of_one_is_the_run() {
        let mut s = Scenario::two_hypothesis_cycle(4, EvidenceRegime::LOW);
        s.horizon = 300;
        s.seed = 17;
        let e = ensemble(&s).unwrap();
        assert_eq!(e.runs.len(), 1);
        for k in 0..2 {
            assert_eq!(e.diagnostics.mean_abs_log_gap[k], e.runs[0].abs_log_gap(k));
        }
        assert_eq!(e.runs[0], run_simulation(&s, 0).unwrap());
    }
}
