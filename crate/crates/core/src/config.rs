//! Scenario files.
//!
//! A scenario is written in TOML. Unknown keys are rejected, and every error
//! carries the key path it refers to. Defaults: `prior = (0, 1, 1, 1)`,
//! `upsilon = 10`, `runs = 1`, `seed = 0`, `horizon = 10000`,
//! `checkpoints_per_decade = 20`, `fixed_evidence = false`,
//! `linear_beliefs = false`, cycle `self_weight = 0.5`. TOML integers are
//! signed, so seeds in a file are limited to `0..=i64::MAX`.
//!
//! ```toml
//! seed = 42
//! horizon = 10000
//! runs = 50
//! regime = "low"               # default evidence for hypotheses below
//!
//! [network]
//! kind = "cycle"               # or kind = "matrix" with weights = [[..], ..]
//! agents = 30
//! self_weight = 0.5
//!
//! [truth]
//! mu = 0.0
//! lambda = 0.5
//!
//! [regimes]
//! low = { range = [0, 100] }
//! infinite = { dogmatic = true }
//!
//! [[hypotheses]]
//! name = "theta1"
//! mu = 0.0
//! lambda = 0.5
//!
//! [[hypotheses]]
//! name = "theta2"
//! mu = 0.0
//! lambda = 0.4
//! evidence = { count = 25 }    # or { range = [lo, hi] }, { dogmatic = true },
//!                              # { regime = "name" }
//!
//! [[agents]]                   # optional per-agent overrides
//! index = 3
//! truth = { mu = 0.0, lambda = 0.4 }
//! hypotheses.theta2 = { lambda = 0.5 }
//!
//! [output]
//! results = "results.csv"
//! summary = "summary.json"
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{GaussGammaParams, GaussianParams};
use crate::sim::{
    EvidenceRegime, NetworkSpec, Scenario, DEFAULT_CHECKPOINTS_PER_DECADE, DEFAULT_HORIZON,
    DEFAULT_UPSILON, MAX_CHECKPOINTS_PER_DECADE,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("unknown key at {location}: {message}")]
    UnknownKey { location: String, message: String },
    #[error("invalid value at `{path}`: {message}")]
    InvalidValue { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_evidence: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints_per_decade: Option<u32>,
    /// Add a linear-scale `belief` column to the results table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear_beliefs: Option<bool>,
    /// Name of the entry in `regimes` used by hypotheses without `evidence`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<PriorConfig>,
    pub network: NetworkConfig,
    pub truth: GaussianConfig,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub regimes: BTreeMap<String, EvidenceConfig>,
    pub hypotheses: Vec<HypothesisConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub agents: Vec<AgentOverride>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorConfig {
    #[serde(default = "zero")]
    pub mu: f64,
    #[serde(default = "one")]
    pub kappa: f64,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default = "one")]
    pub beta: f64,
}

fn zero() -> f64 {
    0.0
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NetworkConfig {
    Cycle {
        agents: usize,
        #[serde(default = "half")]
        self_weight: f64,
    },
    Matrix {
        weights: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianConfig {
    pub mu: f64,
    pub lambda: f64,
}

/// Exactly one of the fields must be set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[u64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dogmatic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisConfig {
    pub name: String,
    pub mu: f64,
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentOverride {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<GaussianConfig>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub hypotheses: BTreeMap<String, HypothesisOverride>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceConfig>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub results: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<PathBuf>,
}

/// A parsed scenario plus the output settings that travel with it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub output: OutputConfig,
    pub linear_beliefs: bool,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, col)
}

impl ConfigFile {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        if text.trim().is_empty() {
            return Err(ConfigError::Parse {
                location: "line 1".into(),
                message: "configuration is empty".into(),
            });
        }
        let de = toml::Deserializer::new(text);
        serde_path_to_error::deserialize(de).map_err(|err| {
            let path = err.path().to_string();
            let inner = err.into_inner();
            let message = inner.message().to_string();
            let mut location = if path == "." {
                String::new()
            } else {
                format!("`{path}`")
            };
            if let Some(span) = inner.span() {
                let (line, col) = line_col(text, span.start);
                if !location.is_empty() {
                    location.push_str(", ");
                }
                location.push_str(&format!("line {line} column {col}"));
            }
            if message.starts_with("unknown field") {
                ConfigError::UnknownKey { location, message }
            } else if message.starts_with("unknown variant") {
                ConfigError::InvalidValue { path, message }
            } else {
                ConfigError::Parse { location, message }
            }
        })
    }

    /// Fails only for integers TOML cannot hold, i.e. a seed above `i64::MAX`.
    pub fn to_toml_string(&self) -> Result<String, ConfigError> {
        toml::to_string(self).map_err(|e| invalid("seed", e.to_string()))
    }

    /// Resolve defaults, broadcasts and overrides into a scenario.
    pub fn to_scenario(&self) -> Result<Scenario, ConfigError> {
        let horizon = self.horizon.unwrap_or(DEFAULT_HORIZON);
        if horizon < 1 {
            return Err(invalid("horizon", "must be at least 1"));
        }
        let runs = self.runs.unwrap_or(1);
        if runs < 1 {
            return Err(invalid("runs", "must be at least 1"));
        }
        let upsilon = self.upsilon.unwrap_or(DEFAULT_UPSILON);
        if !(upsilon.is_finite() && upsilon > 1.0) {
            return Err(invalid(
                "upsilon",
                format!("must be a finite number > 1, got {upsilon}"),
            ));
        }
        let per_decade = self
            .checkpoints_per_decade
            .unwrap_or(DEFAULT_CHECKPOINTS_PER_DECADE);
        if !(1..=MAX_CHECKPOINTS_PER_DECADE).contains(&per_decade) {
            return Err(invalid(
                "checkpoints_per_decade",
                format!("must be in 1..={MAX_CHECKPOINTS_PER_DECADE}, got {per_decade}"),
            ));
        }

        let prior = match &self.prior {
            None => GaussGammaParams::NONINFORMATIVE,
            Some(p) => GaussGammaParams::new(p.mu, p.kappa, p.alpha, p.beta)
                .map_err(|e| invalid("prior", e.to_string()))?,
        };

        let network = match &self.network {
            NetworkConfig::Cycle {
                agents,
                self_weight,
            } => {
                if *agents < 2 {
                    return Err(invalid("network.agents", "a cycle needs at least 2 agents"));
                }
                if !(*self_weight > 0.0 && *self_weight < 1.0) {
                    return Err(invalid(
                        "network.self_weight",
                        "must lie strictly between 0 and 1",
                    ));
                }
                NetworkSpec::Cycle {
                    agents: *agents,
                    self_weight: *self_weight,
                }
            }
            NetworkConfig::Matrix { weights } => {
                let m = weights.len();
                if m == 0 {
                    return Err(invalid("network.weights", "matrix is empty"));
                }
                if let Some(i) = weights.iter().position(|r| r.len() != m) {
                    return Err(invalid(
                        format!("network.weights[{i}]"),
                        format!("has {} entries, expected {m}", weights[i].len()),
                    ));
                }
                NetworkSpec::Matrix(weights.clone())
            }
        };
        let m = network.agents();

        let truth = gaussian(&self.truth, "truth")?;

        for (name, ev) in &self.regimes {
            if ev.regime.is_some() {
                return Err(invalid(
                    format!("regimes.{name}.regime"),
                    "regimes cannot refer to other regimes",
                ));
            }
            self.resolve_evidence(ev, &format!("regimes.{name}"))?;
        }
        let default_regime = match &self.regime {
            None => None,
            Some(name) => Some(
                self.regimes
                    .get(name)
                    .ok_or_else(|| invalid("regime", format!("no entry `{name}` in [regimes]")))
                    .and_then(|ev| self.resolve_evidence(ev, &format!("regimes.{name}")))?,
            ),
        };

        if self.hypotheses.is_empty() {
            return Err(invalid("hypotheses", "at least one hypothesis is required"));
        }
        let mut names = BTreeSet::new();
        let mut base_params = Vec::new();
        let mut base_evidence = Vec::new();
        for (k, h) in self.hypotheses.iter().enumerate() {
            let path = format!("hypotheses[{k}]");
            if !names.insert(h.name.as_str()) {
                return Err(invalid(
                    format!("{path}.name"),
                    format!("duplicate name `{}`", h.name),
                ));
            }
            base_params.push(
                GaussianParams::new(h.mu, h.lambda).map_err(|e| invalid(&path, e.to_string()))?,
            );
            let ev = match &h.evidence {
                Some(ev) => self.resolve_evidence(ev, &format!("{path}.evidence"))?,
                None => default_regime.ok_or_else(|| {
                    invalid(
                        format!("{path}.evidence"),
                        "missing, and no default `regime` is set",
                    )
                })?,
            };
            base_evidence.push(ev);
        }

        let mut hypotheses = vec![base_params; m];
        let mut evidence = vec![base_evidence; m];
        let mut truths = vec![truth; m];
        let mut seen = BTreeSet::new();
        for (n, o) in self.agents.iter().enumerate() {
            let path = format!("agents[{n}]");
            if o.index >= m {
                return Err(invalid(
                    format!("{path}.index"),
                    format!("{} is out of range for {m} agents", o.index),
                ));
            }
            if !seen.insert(o.index) {
                return Err(invalid(
                    format!("{path}.index"),
                    format!("agent {} overridden twice", o.index),
                ));
            }
            if let Some(t) = &o.truth {
                truths[o.index] = gaussian(t, &format!("{path}.truth"))?;
            }
            for (name, ho) in &o.hypotheses {
                let hpath = format!("{path}.hypotheses.{name}");
                let k = self
                    .hypotheses
                    .iter()
                    .position(|h| &h.name == name)
                    .ok_or_else(|| invalid(&hpath, format!("no hypothesis named `{name}`")))?;
                let cur = hypotheses[o.index][k];
                hypotheses[o.index][k] = GaussianParams::new(
                    ho.mu.unwrap_or(cur.mu()),
                    ho.lambda.unwrap_or(cur.lambda()),
                )
                .map_err(|e| invalid(&hpath, e.to_string()))?;
                if let Some(ev) = &ho.evidence {
                    evidence[o.index][k] =
                        self.resolve_evidence(ev, &format!("{hpath}.evidence"))?;
                }
            }
        }

        Ok(Scenario {
            network,
            hypothesis_names: self.hypotheses.iter().map(|h| h.name.clone()).collect(),
            hypotheses,
            truth: truths,
            evidence,
            prior,
            horizon,
            seed: self.seed.unwrap_or(0),
            runs,
            upsilon,
            fixed_evidence: self.fixed_evidence.unwrap_or(false),
            checkpoints_per_decade: per_decade,
        })
    }

    fn resolve_evidence(
        &self,
        ev: &EvidenceConfig,
        path: &str,
    ) -> Result<EvidenceRegime, ConfigError> {
        let set = [
            ev.count.is_some(),
            ev.range.is_some(),
            ev.dogmatic.is_some(),
            ev.regime.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if set != 1 {
            return Err(invalid(
                path,
                "set exactly one of `count`, `range`, `dogmatic`, `regime`",
            ));
        }
        if let Some(c) = ev.count {
            return Ok(EvidenceRegime::Count(c));
        }
        if let Some([lo, hi]) = ev.range {
            if lo > hi {
                return Err(invalid(
                    format!("{path}.range"),
                    format!("lower bound {lo} exceeds upper bound {hi}"),
                ));
            }
            return Ok(EvidenceRegime::Range { lo, hi });
        }
        if let Some(d) = ev.dogmatic {
            if !d {
                return Err(invalid(
                    format!("{path}.dogmatic"),
                    "only `true` is meaningful",
                ));
            }
            return Ok(EvidenceRegime::Dogmatic);
        }
        let name = ev.regime.as_deref().unwrap_or_default();
        match self.regimes.get(name) {
            Some(inner) if inner.regime.is_none() => {
                self.resolve_evidence(inner, &format!("regimes.{name}"))
            }
            Some(_) => Err(invalid(
                format!("regimes.{name}.regime"),
                "regimes cannot refer to other regimes",
            )),
            None => Err(invalid(
                format!("{path}.regime"),
                format!("no entry `{name}` in [regimes]"),
            )),
        }
    }

    /// Fully explicit config for `scenario`: per-agent entries appear only
    /// where an agent differs from agent 0.
    pub fn from_scenario(scenario: &Scenario, output: Option<OutputConfig>) -> Self {
        let network = match &scenario.network {
            NetworkSpec::Cycle {
                agents,
                self_weight,
            } => NetworkConfig::Cycle {
                agents: *agents,
                self_weight: *self_weight,
            },
            NetworkSpec::Matrix(w) => NetworkConfig::Matrix { weights: w.clone() },
        };
        let p = &scenario.prior;
        let hypotheses = scenario
            .hypothesis_names
            .iter()
            .enumerate()
            .map(|(k, name)| HypothesisConfig {
                name: name.clone(),
                mu: scenario.hypotheses[0][k].mu(),
                lambda: scenario.hypotheses[0][k].lambda(),
                evidence: Some(evidence_config(scenario.evidence[0][k])),
            })
            .collect();
        let mut agents = Vec::new();
        for i in 1..scenario.agents() {
            let mut o = AgentOverride {
                index: i,
                truth: None,
                hypotheses: BTreeMap::new(),
            };
            if scenario.truth[i] != scenario.truth[0] {
                o.truth = Some(gaussian_config(&scenario.truth[i]));
            }
            for (k, name) in scenario.hypothesis_names.iter().enumerate() {
                let (hp, h0) = (scenario.hypotheses[i][k], scenario.hypotheses[0][k]);
                let (ep, e0) = (scenario.evidence[i][k], scenario.evidence[0][k]);
                if hp != h0 || ep != e0 {
                    o.hypotheses.insert(
                        name.clone(),
                        HypothesisOverride {
                            mu: Some(hp.mu()),
                            lambda: Some(hp.lambda()),
                            evidence: Some(evidence_config(ep)),
                        },
                    );
                }
            }
            if o.truth.is_some() || !o.hypotheses.is_empty() {
                agents.push(o);
            }
        }
        ConfigFile {
            seed: Some(scenario.seed),
            horizon: Some(scenario.horizon),
            runs: Some(scenario.runs),
            upsilon: Some(scenario.upsilon),
            fixed_evidence: Some(scenario.fixed_evidence),
            checkpoints_per_decade: Some(scenario.checkpoints_per_decade),
            linear_beliefs: None,
            regime: None,
            prior: Some(PriorConfig {
                mu: p.mu(),
                kappa: p.kappa(),
                alpha: p.alpha(),
                beta: p.beta(),
            }),
            network,
            truth: gaussian_config(&scenario.truth[0]),
            regimes: BTreeMap::new(),
            hypotheses,
            agents,
            output,
        }
    }
}

fn gaussian(g: &GaussianConfig, path: &str) -> Result<GaussianParams, ConfigError> {
    GaussianParams::new(g.mu, g.lambda).map_err(|e| invalid(path, e.to_string()))
}

fn gaussian_config(g: &GaussianParams) -> GaussianConfig {
    GaussianConfig {
        mu: g.mu(),
        lambda: g.lambda(),
    }
}

fn evidence_config(r: EvidenceRegime) -> EvidenceConfig {
    let mut ev = EvidenceConfig::default();
    match r {
        EvidenceRegime::Count(c) => ev.count = Some(c),
        EvidenceRegime::Range { lo, hi } => ev.range = Some([lo, hi]),
        EvidenceRegime::Dogmatic => ev.dogmatic = Some(true),
    }
    ev
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parse and resolve a scenario file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<Scenario, ConfigError> {
    ConfigFile::from_toml_str(&read(path.as_ref())?)?.to_scenario()
}

/// Parse a scenario file, optionally selecting a named evidence regime.
pub fn load_run_config(
    path: impl AsRef<Path>,
    regime: Option<&str>,
) -> Result<RunConfig, ConfigError> {
    let mut file = ConfigFile::from_toml_str(&read(path.as_ref())?)?;
    if let Some(r) = regime {
        file.regime = Some(r.to_string());
    }
    Ok(RunConfig {
        scenario: file.to_scenario()?,
        output: file.output.clone().unwrap_or_default(),
        linear_beliefs: file.linear_beliefs.unwrap_or(false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
seed = 7
horizon = 100

[network]
kind = "cycle"
agents = 3

[truth]
mu = 0.0
lambda = 0.5

[[hypotheses]]
name = "a"
mu = 0.0
lambda = 0.5
evidence = { count = 10 }
"#;

    fn parse(text: &str) -> Result<Scenario, ConfigError> {
        ConfigFile::from_toml_str(text)?.to_scenario()
    }

    #[test]
    fn minimal_config_uses_defaults() {
        let s = parse(SMALL).unwrap();
        assert_eq!(s.agents(), 3);
        assert_eq!(s.prior, GaussGammaParams::NONINFORMATIVE);
        assert_eq!(s.upsilon, 10.0);
        assert_eq!(s.runs, 1);
        assert_eq!(s.evidence, vec![vec![EvidenceRegime::Count(10)]; 3]);
        assert_eq!(
            s.network,
            NetworkSpec::Cycle {
                agents: 3,
                self_weight: 0.5
            }
        );
    }

    #[test]
    fn empty_file_is_a_parse_error() {
        assert!(matches!(parse(""), Err(ConfigError::Parse { .. })));
        assert!(matches!(parse("  \n"), Err(ConfigError::Parse { .. })));
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = parse("seed = \n").unwrap_err();
        match err {
            ConfigError::Parse { location, .. } => {
                assert!(location.contains("line 1"), "{location}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected_with_path() {
        let text = SMALL.replace("horizon = 100", "horizon = 100\nhorizn = 5");
        assert!(matches!(parse(&text), Err(ConfigError::UnknownKey { .. })));

        let text = SMALL.replace(
            "lambda = 0.5\nevidence",
            "lamda = 0.5\nlambda = 0.5\nevidence",
        );
        match parse(&text).unwrap_err() {
            ConfigError::UnknownKey { location, .. } => {
                assert!(location.contains("hypotheses[0]"), "{location}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reversed_range_is_invalid() {
        let text = SMALL.replace("{ count = 10 }", "{ range = [100, 0] }");
        match parse(&text).unwrap_err() {
            ConfigError::InvalidValue { path, .. } => {
                assert_eq!(path, "hypotheses[0].evidence.range")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn evidence_needs_exactly_one_form() {
        let text = SMALL.replace("{ count = 10 }", "{ count = 10, dogmatic = true }");
        assert!(matches!(
            parse(&text),
            Err(ConfigError::InvalidValue { .. })
        ));
        let text = SMALL.replace("evidence = { count = 10 }", "");
        assert!(matches!(
            parse(&text),
            Err(ConfigError::InvalidValue { .. })
        ));
    }

    #[test]
    fn named_regimes_and_overrides() {
        let text = r#"
regime = "low"

[network]
kind = "matrix"
weights = [[0.5, 0.5], [0.5, 0.5]]

[truth]
mu = 0.0
lambda = 0.5

[regimes]
low = { range = [0, 100] }
inf = { dogmatic = true }

[[hypotheses]]
name = "t1"
mu = 0.0
lambda = 0.5

[[hypotheses]]
name = "t2"
mu = 0.0
lambda = 0.4
evidence = { regime = "inf" }

[[agents]]
index = 1
truth = { mu = 1.0, lambda = 0.5 }
hypotheses.t2 = { lambda = 0.5, evidence = { count = 3 } }
"#;
        let s = parse(text).unwrap();
        assert_eq!(
            s.evidence[0],
            vec![EvidenceRegime::LOW, EvidenceRegime::Dogmatic]
        );
        assert_eq!(
            s.evidence[1],
            vec![EvidenceRegime::LOW, EvidenceRegime::Count(3)]
        );
        assert_eq!(s.truth[1].mu(), 1.0);
        assert_eq!(s.hypotheses[1][1].lambda(), 0.5);
        assert_eq!(s.hypotheses[0][1].lambda(), 0.4);

        let bad = text.replace("index = 1", "index = 2");
        assert!(matches!(parse(&bad), Err(ConfigError::InvalidValue { .. })));
        let bad = text.replace("hypotheses.t2", "hypotheses.t9");
        assert!(matches!(parse(&bad), Err(ConfigError::InvalidValue { .. })));
        let bad = text.replace("regime = \"low\"", "regime = \"medium\"");
        assert!(matches!(parse(&bad), Err(ConfigError::InvalidValue { .. })));
    }

    #[test]
    fn scalar_validation() {
        for (from, to) in [
            ("horizon = 100", "horizon = 0"),
            ("horizon = 100", "horizon = 100\nupsilon = 0.5"),
            ("horizon = 100", "horizon = 100\nruns = 0"),
            ("agents = 3", "agents = 1"),
            ("lambda = 0.5\n\n[[", "lambda = -0.5\n\n[["),
        ] {
            let text = SMALL.replacen(from, to, 1);
            assert!(
                matches!(parse(&text), Err(ConfigError::InvalidValue { .. })),
                "{to}"
            );
        }
    }

    #[test]
    fn scenario_round_trip() {
        let mut s = Scenario::two_hypothesis_cycle(4, EvidenceRegime::HIGH);
        s.truth[2] = GaussianParams::new(0.1, 0.3).unwrap();
        s.evidence[3][1] = EvidenceRegime::Dogmatic;
        s.prior = GaussGammaParams::new(0.5, 2.0, 1.5, 0.25).unwrap();
        s.seed = 123_456_789;
        s.upsilon = 3.7;
        let file = ConfigFile::from_scenario(&s, None);
        let text = file.to_toml_string().unwrap();
        let back = ConfigFile::from_toml_str(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_scenario().unwrap(), s);
    }

    #[test]
    fn seeds_beyond_toml_integers_are_reported() {
        let mut s = Scenario::two_hypothesis_cycle(2, EvidenceRegime::Count(1));
        s.seed = u64::MAX;
        assert!(ConfigFile::from_scenario(&s, None)
            .to_toml_string()
            .is_err());
    }
}
