//! Gaussian uncertain likelihood models.
//!
//! An agent trains a Gaussian-gamma posterior over the unknown mean and
//! precision of each hypothesis from a finite batch of evidence. During
//! testing it scores its measurement stream by the ratio of two posterior
//! predictives: one conditioned on the evidence, one conditioned on nothing
//! (the model of complete ignorance). Everything here is evaluated in the log
//! domain from sufficient statistics.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::special::{ln_gamma_half_ratio, ln_gamma_unchecked, LN_2PI};

fn check_positive(param: &'static str, value: f64) -> Result<(), ModelError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            param,
            value,
            requirement: "finite and > 0",
        })
    }
}

fn check_finite(param: &'static str, value: f64) -> Result<(), ModelError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            param,
            value,
            requirement: "finite",
        })
    }
}

/// Parameters `(μ, κ, α, β)` of a Gaussian-gamma distribution over the mean
/// and precision of a Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussGammaParams {
    mu: f64,
    kappa: f64,
    alpha: f64,
    beta: f64,
}

impl GaussGammaParams {
    /// The default noninformative prior `(0, 1, 1, 1)`.
    pub const NONINFORMATIVE: GaussGammaParams = GaussGammaParams {
        mu: 0.0,
        kappa: 1.0,
        alpha: 1.0,
        beta: 1.0,
    };

    pub fn new(mu: f64, kappa: f64, alpha: f64, beta: f64) -> Result<Self, ModelError> {
        check_finite("mu", mu)?;
        check_positive("kappa", kappa)?;
        check_positive("alpha", alpha)?;
        check_positive("beta", beta)?;
        Ok(Self {
            mu,
            kappa,
            alpha,
            beta,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Conjugate update with `n` samples of mean `mean` and sum of squared
    /// deviations `m2`.
    pub fn updated(&self, n: u64, mean: f64, m2: f64) -> GaussGammaParams {
        if n == 0 {
            return *self;
        }
        let n = n as f64;
        let kappa = self.kappa + n;
        let diff = mean - self.mu;
        GaussGammaParams {
            mu: (self.kappa * self.mu + n * mean) / kappa,
            kappa,
            alpha: self.alpha + 0.5 * n,
            beta: self.beta + 0.5 * m2 + 0.5 * self.kappa * n * diff * diff / kappa,
        }
    }

    /// Log marginal likelihood of `n` samples (mean `mean`, sum of squared
    /// deviations `m2`) with the Gaussian parameters integrated out.
    pub fn log_marginal(&self, n: u64, mean: f64, m2: f64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let post = self.updated(n, mean, m2);
        ln_gamma_unchecked(post.alpha) - ln_gamma_unchecked(self.alpha)
            + self.alpha * self.beta.ln()
            - post.alpha * post.beta.ln()
            + 0.5 * (self.kappa.ln() - post.kappa.ln())
            - 0.5 * n as f64 * LN_2PI
    }

    /// Log density of one new point under the posterior predictive, a
    /// Student-t with `2α` degrees of freedom.
    pub fn log_point_predictive(&self, x: f64) -> f64 {
        let d = x - self.mu;
        let k1 = self.kappa + 1.0;
        let u = self.kappa * d * d / (2.0 * self.beta * k1);
        ln_gamma_half_ratio(self.alpha)
            - 0.5 * (LN_2PI + self.beta.ln() + k1.ln() - self.kappa.ln())
            - (self.alpha + 0.5) * u.ln_1p()
    }
}

impl Default for GaussGammaParams {
    fn default() -> Self {
        Self::NONINFORMATIVE
    }
}

/// Mean and precision of a univariate Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    mu: f64,
    lambda: f64,
}

impl GaussianParams {
    pub fn new(mu: f64, lambda: f64) -> Result<Self, ModelError> {
        check_finite("mu", mu)?;
        check_positive("lambda", lambda)?;
        Ok(Self { mu, lambda })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Precision, `1/σ²`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn variance(&self) -> f64 {
        1.0 / self.lambda
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn log_density(&self, x: f64) -> f64 {
        let d = x - self.mu;
        0.5 * (self.lambda.ln() - LN_2PI) - 0.5 * self.lambda * d * d
    }

    /// Joint log density of `n` i.i.d. points summarized by their mean and
    /// sum of squared deviations.
    pub fn log_likelihood(&self, n: u64, mean: f64, m2: f64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let n = n as f64;
        let d = mean - self.mu;
        0.5 * n * (self.lambda.ln() - LN_2PI) - 0.5 * self.lambda * (m2 + n * d * d)
    }
}

/// Sufficient statistics of a finite batch of training samples.
///
/// `var` is the population variance (mean of squared deviations). An empty
/// batch has `mean = var = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    count: u64,
    mean: f64,
    var: f64,
}

impl SampleSummary {
    pub const EMPTY: SampleSummary = SampleSummary {
        count: 0,
        mean: 0.0,
        var: 0.0,
    };

    pub fn new(count: u64, mean: f64, var: f64) -> Result<Self, ModelError> {
        check_finite("mean", mean)?;
        if !(var.is_finite() && var >= 0.0) {
            return Err(ModelError::InvalidParameter {
                param: "var",
                value: var,
                requirement: "finite and >= 0",
            });
        }
        if count == 0 && (mean != 0.0 || var != 0.0) {
            return Err(ModelError::InvalidParameter {
                param: "mean/var",
                value: if mean != 0.0 { mean } else { var },
                requirement: "zero when the sample count is zero",
            });
        }
        Ok(Self { count, mean, var })
    }

    /// Two-pass reduction of raw samples.
    pub fn from_samples(samples: &[f64]) -> Self {
        if samples.is_empty() {
            return Self::EMPTY;
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        Self {
            count: samples.len() as u64,
            mean,
            var,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn var(&self) -> f64 {
        self.var
    }

    /// Sum of squared deviations, `R·s²`.
    pub fn m2(&self) -> f64 {
        self.count as f64 * self.var
    }
}

impl From<&ObservationStream> for SampleSummary {
    fn from(obs: &ObservationStream) -> Self {
        if obs.count == 0 {
            return Self::EMPTY;
        }
        Self {
            count: obs.count,
            mean: obs.mean,
            var: obs.m2 / obs.count as f64,
        }
    }
}

/// Prior evidence an agent holds for one hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceSummary {
    /// Finitely many training samples.
    Samples(SampleSummary),
    /// Unbounded evidence: the hypothesis parameters are known exactly.
    Dogmatic(GaussianParams),
}

impl EvidenceSummary {
    pub const EMPTY: EvidenceSummary = EvidenceSummary::Samples(SampleSummary::EMPTY);

    /// A finite summary whose moments equal the hypothesis parameters exactly.
    /// With a large `count` this approximates [`EvidenceSummary::Dogmatic`]
    /// through the finite-evidence formulas.
    pub fn large_sample_surrogate(params: GaussianParams, count: u64) -> Self {
        EvidenceSummary::Samples(SampleSummary {
            count,
            mean: params.mu(),
            var: if count == 0 { 0.0 } else { params.variance() },
        })
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, EvidenceSummary::Samples(s) if s.count == 0)
    }

    pub fn is_dogmatic(&self) -> bool {
        matches!(self, EvidenceSummary::Dogmatic(_))
    }
}

/// Running statistics of an agent's private measurement stream.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ObservationStream {
    count: u64,
    mean: f64,
    m2: f64,
}

impl ObservationStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        let mut s = Self::new();
        for &x in xs {
            s.push(x);
        }
        s
    }

    /// Welford's one-pass update.
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    #[must_use]
    pub fn pushed(mut self, x: f64) -> Self {
        self.push(x);
        self
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sum of squared deviations from the running mean.
    pub fn m2(&self) -> f64 {
        self.m2
    }
}

/// `push_observation`: the stream after appending `x`.
pub fn push_observation(obs: ObservationStream, x: f64) -> ObservationStream {
    obs.pushed(x)
}

/// Posterior Gaussian-gamma parameters after conditioning `prior` on finite
/// evidence.
pub fn posterior_params(prior: &GaussGammaParams, ev: &SampleSummary) -> GaussGammaParams {
    prior.updated(ev.count, ev.mean, ev.m2())
}

/// `ln P̂(r)`: log probability of the evidence batch under `prior`.
pub fn log_prior_predictive(prior: &GaussGammaParams, ev: &SampleSummary) -> f64 {
    prior.log_marginal(ev.count, ev.mean, ev.m2())
}

/// `ln P̂(Ω₁:t | ·)`: log predictive of the measurement sequence under an
/// already-conditioned Gaussian-gamma.
pub fn log_predictive(posterior_from: &GaussGammaParams, obs: &ObservationStream) -> f64 {
    posterior_from.log_marginal(obs.count, obs.mean, obs.m2)
}

/// How one (agent, hypothesis) pair scores measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UncertainModel {
    /// No evidence: identical to the model of complete ignorance.
    Ignorant,
    /// Gaussian-gamma posterior after finite evidence.
    Posterior(GaussGammaParams),
    /// Exact Gaussian likelihood (unbounded evidence).
    Exact(GaussianParams),
}

impl UncertainModel {
    pub fn new(prior: &GaussGammaParams, ev: &EvidenceSummary) -> Self {
        match ev {
            EvidenceSummary::Samples(s) if s.count == 0 => UncertainModel::Ignorant,
            EvidenceSummary::Samples(s) => UncertainModel::Posterior(posterior_params(prior, s)),
            EvidenceSummary::Dogmatic(p) => UncertainModel::Exact(*p),
        }
    }

    /// Log uncertain likelihood ratio of the whole stream.
    pub fn log_ulr(&self, prior: &GaussGammaParams, obs: &ObservationStream) -> f64 {
        if obs.count == 0 {
            return 0.0;
        }
        let numerator = match self {
            UncertainModel::Ignorant => return 0.0,
            UncertainModel::Posterior(post) => log_predictive(post, obs),
            UncertainModel::Exact(p) => p.log_likelihood(obs.count, obs.mean, obs.m2),
        };
        numerator - log_predictive(prior, obs)
    }

    /// One-step log update given the baseline term
    /// `ln P̂(x | Ω₁:t, no evidence)` already evaluated by the caller.
    #[inline]
    pub fn log_ell_with_baseline(
        &self,
        obs_before: &ObservationStream,
        x: f64,
        baseline: f64,
    ) -> f64 {
        match self {
            UncertainModel::Ignorant => 0.0,
            UncertainModel::Posterior(post) => {
                post.updated(obs_before.count, obs_before.mean, obs_before.m2)
                    .log_point_predictive(x)
                    - baseline
            }
            UncertainModel::Exact(p) => p.log_density(x) - baseline,
        }
    }

    pub fn log_ell_step(
        &self,
        prior: &GaussGammaParams,
        obs_before: &ObservationStream,
        x: f64,
    ) -> f64 {
        if let UncertainModel::Ignorant = self {
            return 0.0;
        }
        let baseline = ignorance_log_predictive(prior, obs_before, x);
        self.log_ell_with_baseline(obs_before, x, baseline)
    }
}

/// `ln P̂(x | Ω₁:t)` under the model of complete ignorance.
#[inline]
pub fn ignorance_log_predictive(prior: &GaussGammaParams, obs: &ObservationStream, x: f64) -> f64 {
    prior
        .updated(obs.count, obs.mean, obs.m2)
        .log_point_predictive(x)
}

/// `ln Λ(t)`: log uncertain likelihood ratio of the measurement stream.
///
/// For dogmatic evidence the numerator is the exact Gaussian likelihood.
pub fn log_ulr(prior: &GaussGammaParams, ev: &EvidenceSummary, obs: &ObservationStream) -> f64 {
    UncertainModel::new(prior, ev).log_ulr(prior, obs)
}

/// `ln ℓ(x)`: the change in `ln Λ` when `x` is appended to `obs_before`.
pub fn log_ell_step(
    prior: &GaussGammaParams,
    ev: &EvidenceSummary,
    obs_before: &ObservationStream,
    x: f64,
) -> f64 {
    UncertainModel::new(prior, ev).log_ell_step(prior, obs_before, x)
}

/// `ln Λ̃`: limit of `ln Λ(t)` as the stream grows, for measurements drawn
/// from `truth`.
///
/// Dogmatic evidence diverges: `+∞` when its parameters equal `truth`
/// exactly and `−∞` otherwise.
pub fn log_asymptotic_ulr(
    prior: &GaussGammaParams,
    ev: &EvidenceSummary,
    truth: &GaussianParams,
) -> f64 {
    match ev {
        EvidenceSummary::Samples(s) if s.count == 0 => 0.0,
        EvidenceSummary::Samples(s) => {
            truth.log_likelihood(s.count, s.mean, s.m2()) - log_prior_predictive(prior, s)
        }
        EvidenceSummary::Dogmatic(p) if p == truth => f64::INFINITY,
        EvidenceSummary::Dogmatic(_) => f64::NEG_INFINITY,
    }
}

/// `D_KL(N(p) ‖ N(q))`.
pub fn kl_gaussian(p: &GaussianParams, q: &GaussianParams) -> f64 {
    let d = p.mu - q.mu;
    let ratio = q.lambda / p.lambda;
    0.5 * (-ratio.ln() + ratio + q.lambda * d * d - 1.0)
}
