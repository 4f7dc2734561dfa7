//! Score a measurement stream against a hypothesis learned from a handful of
//! training samples, and watch the log uncertain likelihood ratio settle on
//! its asymptotic value.
//!
//! `cargo run --release --example uncertain_ratio`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use social_learning::model::{
    log_asymptotic_ulr, log_ell_step, log_ulr, EvidenceSummary, GaussGammaParams, GaussianParams,
    ObservationStream, SampleSummary,
};

fn main() {
    let prior = GaussGammaParams::NONINFORMATIVE;
    let truth = GaussianParams::new(0.0, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let dist = Normal::new(truth.mu(), truth.std_dev()).unwrap();

    let training: Vec<f64> = (0..50).map(|_| dist.sample(&mut rng)).collect();
    let ev = EvidenceSummary::Samples(SampleSummary::from_samples(&training));
    let target = log_asymptotic_ulr(&prior, &ev, &truth);
    println!("50 training samples, asymptotic ln ratio = {target:.6}");

    let mut obs = ObservationStream::new();
    let mut running = 0.0;
    let mut next_report = 1;
    println!(
        "{:>8} {:>14} {:>14} {:>12}",
        "t", "ln ratio", "sum of steps", "gap"
    );
    for t in 1..=100_000u64 {
        let x = dist.sample(&mut rng);
        running += log_ell_step(&prior, &ev, &obs, x);
        obs.push(x);
        if t == next_report {
            let direct = log_ulr(&prior, &ev, &obs);
            println!(
                "{t:>8} {direct:>14.6} {running:>14.6} {:>12.2e}",
                (direct - target).abs()
            );
            next_report *= 10;
        }
    }

    // Training data that disagrees with the measurements drives the ratio down.
    let wrong = GaussianParams::new(1.0, 0.5).unwrap();
    let ev_wrong = EvidenceSummary::large_sample_surrogate(wrong, 50);
    println!(
        "evidence centred at 1.0: ln ratio after {} measurements = {:.3}",
        obs.count(),
        log_ulr(&prior, &ev_wrong, &obs)
    );
}
