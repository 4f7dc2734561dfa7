//! With unbounded evidence for a wrong hypothesis, the log update is the
//! ordinary log-likelihood ratio against the ignorance model, and its mean
//! approaches minus the KL divergence from the truth.
//!
//! `cargo run --release --example dogmatic_slope`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use social_learning::model::{
    kl_gaussian, EvidenceSummary, GaussGammaParams, GaussianParams, ObservationStream,
    UncertainModel,
};
use social_learning::sim::{run_simulation, EvidenceRegime, Scenario};

fn main() {
    let prior = GaussGammaParams::NONINFORMATIVE;
    let truth = GaussianParams::new(0.0, 0.5).unwrap();
    let wrong = GaussianParams::new(0.0, 0.4).unwrap();
    let kl = kl_gaussian(&truth, &wrong);
    println!("KL(truth || wrong) = {kl:.10}");

    let model = UncertainModel::new(&prior, &EvidenceSummary::Dogmatic(wrong));
    let dist = Normal::new(0.0, truth.std_dev()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut obs = ObservationStream::new();
    let steps = 100_000;
    let mut total = 0.0;
    for _ in 0..steps {
        let x = dist.sample(&mut rng);
        total += model.log_ell_step(&prior, &obs, x);
        obs.push(x);
    }
    println!(
        "single agent: mean log update over {steps} steps = {:.6}",
        total / steps as f64
    );

    for m in [10, 30] {
        let mut s = Scenario::two_hypothesis_cycle(m, EvidenceRegime::Dogmatic);
        s.seed = 5;
        let r = run_simulation(&s, 0).unwrap();
        let fin = r.final_beliefs();
        let mean = fin.column(1).sum::<f64>() / m as f64;
        println!(
            "m = {m}: ln mu(theta2) / t at t = {} is {:.6}",
            fin.t(),
            mean / fin.t() as f64
        );
    }
}
