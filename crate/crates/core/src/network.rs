//! Communication graph and the synchronous geometric-averaging belief update.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Axis, NetworkError};
use crate::model::GaussianParams;

/// Absolute tolerance on every row and column sum.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// A validated weight matrix: doubly stochastic, positive self-weights,
/// strongly connected.
///
/// Row `i` holds the weights agent `i` places on the beliefs it receives.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    m: usize,
    weights: Vec<f64>,
    // Sparse rows: (neighbor, weight) for every positive entry.
    rows: Vec<Vec<(usize, f64)>>,
}

/// Per-condition outcome of the graph checks, used for reporting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub doubly_stochastic: Result<(), String>,
    pub positive_diagonal: Result<(), String>,
    pub connected: Result<(), String>,
}

impl AssumptionReport {
    pub fn all_pass(&self) -> bool {
        self.doubly_stochastic.is_ok() && self.positive_diagonal.is_ok() && self.connected.is_ok()
    }
}

fn check_shape(w: &[Vec<f64>]) -> Result<usize, NetworkError> {
    let m = w.len();
    if m == 0 {
        return Err(NetworkError::Empty);
    }
    for (row, r) in w.iter().enumerate() {
        if r.len() != m {
            return Err(NetworkError::NotSquare {
                row,
                len: r.len(),
                expected: m,
            });
        }
        for (col, &value) in r.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(NetworkError::InvalidWeight { row, col, value });
            }
        }
    }
    Ok(m)
}

fn check_doubly_stochastic(w: &[Vec<f64>]) -> Result<(), NetworkError> {
    let m = w.len();
    for (index, r) in w.iter().enumerate() {
        let sum: f64 = r.iter().sum();
        if (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(NetworkError::NotDoublyStochastic {
                axis: Axis::Row,
                index,
                sum,
            });
        }
    }
    for index in 0..m {
        let sum: f64 = w.iter().map(|r| r[index]).sum();
        if (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(NetworkError::NotDoublyStochastic {
                axis: Axis::Column,
                index,
                sum,
            });
        }
    }
    Ok(())
}

fn check_diagonal(w: &[Vec<f64>]) -> Result<(), NetworkError> {
    match (0..w.len()).find(|&i| w[i][i] <= 0.0) {
        Some(index) => Err(NetworkError::ZeroDiagonal { index }),
        None => Ok(()),
    }
}

fn reachable(m: usize, edge: impl Fn(usize, usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; m];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for (j, s) in seen.iter_mut().enumerate() {
            if !*s && edge(i, j) {
                *s = true;
                queue.push_back(j);
            }
        }
    }
    seen
}

fn check_connected(w: &[Vec<f64>]) -> Result<(), NetworkError> {
    let m = w.len();
    let forward = reachable(m, |i, j| w[i][j] > 0.0);
    let backward = reachable(m, |i, j| w[j][i] > 0.0);
    match (0..m).find(|&i| !forward[i] || !backward[i]) {
        Some(unreachable) => Err(NetworkError::Disconnected { unreachable }),
        None => Ok(()),
    }
}

/// Run every graph check independently so a report can list all failures.
pub fn assumption_report(w: &[Vec<f64>]) -> Result<AssumptionReport, NetworkError> {
    check_shape(w)?;
    let text = |r: Result<(), NetworkError>| r.map_err(|e| e.to_string());
    Ok(AssumptionReport {
        doubly_stochastic: text(check_doubly_stochastic(w)),
        positive_diagonal: text(check_diagonal(w)),
        connected: text(check_connected(w)),
    })
}

/// Validate a square weight matrix.
pub fn validate_network(w: &[Vec<f64>]) -> Result<Network, NetworkError> {
    let m = check_shape(w)?;
    check_doubly_stochastic(w)?;
    check_diagonal(w)?;
    check_connected(w)?;
    let rows = w
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, &v)| v > 0.0)
                .map(|(j, &v)| (j, v))
                .collect()
        })
        .collect();
    Ok(Network {
        m,
        weights: w.iter().flatten().copied().collect(),
        rows,
    })
}

/// Directed cycle with self-loops: agent `i` listens to itself and to agent
/// `i - 1 (mod m)`.
pub fn directed_cycle(m: usize, self_weight: f64) -> Result<Network, NetworkError> {
    if m < 2 {
        return Err(NetworkError::DimensionMismatch {
            what: "cycle length",
            expected: 2,
            got: m,
        });
    }
    if !(self_weight > 0.0 && self_weight < 1.0) {
        return Err(NetworkError::InvalidWeight {
            row: 0,
            col: 0,
            value: self_weight,
        });
    }
    let mut w = vec![vec![0.0; m]; m];
    for (i, row) in w.iter_mut().enumerate() {
        row[i] = self_weight;
        row[(i + m - 1) % m] = 1.0 - self_weight;
    }
    validate_network(&w)
}

impl Network {
    pub fn agents(&self) -> usize {
        self.m
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.m + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.weights.chunks(self.m).map(<[f64]>::to_vec).collect()
    }

    /// Positive entries of row `i` as `(neighbor, weight)`.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

/// Agent × hypothesis log-beliefs at one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefMatrix {
    agents: usize,
    hypotheses: usize,
    log_beliefs: Vec<f64>,
    t: u64,
}

impl BeliefMatrix {
    /// All beliefs equal to one at `t = 0`.
    pub fn new(agents: usize, hypotheses: usize) -> Self {
        Self {
            agents,
            hypotheses,
            log_beliefs: vec![0.0; agents * hypotheses],
            t: 0,
        }
    }

    pub fn from_rows(rows: &[Vec<f64>], t: u64) -> Result<Self, NetworkError> {
        let hypotheses = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != hypotheses) {
            return Err(NetworkError::DimensionMismatch {
                what: "belief row",
                expected: hypotheses,
                got: bad.len(),
            });
        }
        Ok(Self {
            agents: rows.len(),
            hypotheses,
            log_beliefs: rows.iter().flatten().copied().collect(),
            t,
        })
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn hypotheses(&self) -> usize {
        self.hypotheses
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn get(&self, agent: usize, hypothesis: usize) -> f64 {
        self.log_beliefs[agent * self.hypotheses + hypothesis]
    }

    pub fn row(&self, agent: usize) -> &[f64] {
        let h = self.hypotheses;
        &self.log_beliefs[agent * h..(agent + 1) * h]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.log_beliefs
    }

    /// Log-beliefs of every agent for one hypothesis.
    pub fn column(&self, hypothesis: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.agents).map(move |i| self.get(i, hypothesis))
    }

    /// `max_i − min_i` of the log-beliefs for one hypothesis.
    pub fn spread(&self, hypothesis: usize) -> f64 {
        let (lo, hi) = self
            .column(hypothesis)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        hi - lo
    }

    pub fn column_sum(&self, hypothesis: usize) -> f64 {
        self.column(hypothesis).sum()
    }
}

/// One synchronous round: every agent takes the weighted geometric average of
/// its neighbors' step-`t` beliefs and multiplies in its own update.
///
/// `log_ell` is agent-major, `agents × hypotheses`.
pub fn belief_step(
    net: &Network,
    beliefs: &BeliefMatrix,
    log_ell: &[f64],
) -> Result<BeliefMatrix, NetworkError> {
    if beliefs.agents != net.m {
        return Err(NetworkError::DimensionMismatch {
            what: "belief agents",
            expected: net.m,
            got: beliefs.agents,
        });
    }
    let h = beliefs.hypotheses;
    if log_ell.len() != net.m * h {
        return Err(NetworkError::DimensionMismatch {
            what: "log update",
            expected: net.m * h,
            got: log_ell.len(),
        });
    }
    let mut next = vec![0.0; net.m * h];
    belief_step_into(net, &beliefs.log_beliefs, log_ell, h, &mut next);
    Ok(BeliefMatrix {
        agents: net.m,
        hypotheses: h,
        log_beliefs: next,
        t: beliefs.t + 1,
    })
}

/// Buffer-reusing form of [`belief_step`]; dimensions are trusted.
pub(crate) fn belief_step_into(
    net: &Network,
    current: &[f64],
    log_ell: &[f64],
    h: usize,
    next: &mut [f64],
) {
    for i in 0..net.m {
        let out = &mut next[i * h..(i + 1) * h];
        out.copy_from_slice(&log_ell[i * h..(i + 1) * h]);
        for &(j, w) in &net.rows[i] {
            let src = &current[j * h..(j + 1) * h];
            for (o, s) in out.iter_mut().zip(src) {
                *o += w * s;
            }
        }
    }
}

impl BeliefMatrix {
    pub(crate) fn advance(&mut self, net: &Network, log_ell: &[f64], scratch: &mut Vec<f64>) {
        scratch.resize(self.log_beliefs.len(), 0.0);
        belief_step_into(net, &self.log_beliefs, log_ell, self.hypotheses, scratch);
        std::mem::swap(&mut self.log_beliefs, scratch);
        self.t += 1;
    }
}

/// Hypotheses whose configured signal distribution for this agent is exactly
/// the agent's ground truth, i.e. the ones the agent cannot tell apart from it.
pub fn indistinguishable_set(
    truth: &GaussianParams,
    hypotheses: &[GaussianParams],
) -> BTreeSet<usize> {
    hypotheses
        .iter()
        .enumerate()
        .filter(|(_, h)| *h == truth)
        .map(|(k, _)| k)
        .collect()
}

/// Per-agent indistinguishable sets and their network-wide intersection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentifiabilityReport {
    pub identifiable: bool,
    pub per_agent: Vec<BTreeSet<usize>>,
    pub intersection: BTreeSet<usize>,
}

/// The network can single out the truth when the intersection of every
/// agent's indistinguishable set has exactly one element.
///
/// `agents[i]` is `(truth, per-hypothesis parameters)` for agent `i`.
pub fn check_global_identifiability(
    agents: &[(GaussianParams, Vec<GaussianParams>)],
) -> IdentifiabilityReport {
    let per_agent: Vec<BTreeSet<usize>> = agents
        .iter()
        .map(|(truth, hyps)| indistinguishable_set(truth, hyps))
        .collect();
    let intersection = per_agent
        .iter()
        .skip(1)
        .fold(per_agent.first().cloned().unwrap_or_default(), |acc, s| {
            acc.intersection(s).copied().collect()
        });
    IdentifiabilityReport {
        identifiable: intersection.len() == 1,
        per_agent,
        intersection,
    }
}
