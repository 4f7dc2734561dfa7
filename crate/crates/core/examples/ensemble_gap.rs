//! Monte Carlo ensembles on cycles of different sizes: the mean absolute gap
//! between each agent's log-belief and the centralized target shrinks over
//! time, and larger networks mix more slowly.
//!
//! `cargo run --release --example ensemble_gap [-- RUNS]`

use social_learning::sim::{ensemble, EvidenceRegime, Scenario};

fn main() {
    let runs: usize = std::env::args()
        .nth(1)
        .map_or(20, |s| s.parse().expect("runs"));
    let report_at = [10, 100, 1000, 10_000];
    println!("mean |ln mu(theta1) - target|, low evidence, {runs} runs");
    println!(
        "{:>4} {}",
        "m",
        report_at
            .map(|t| format!("{:>12}", format!("t={t}")))
            .join("")
    );
    for m in [10, 20, 30] {
        let mut s = Scenario::two_hypothesis_cycle(m, EvidenceRegime::LOW);
        s.runs = runs;
        s.seed = 99;
        let e = ensemble(&s).unwrap();
        let d = &e.diagnostics;
        let cols: Vec<String> = report_at
            .iter()
            .map(|t| {
                let k = d.checkpoints.binary_search(t).unwrap();
                format!("{:>12.5}", d.mean_abs_log_gap[0][k])
            })
            .collect();
        println!("{m:>4} {}", cols.join(""));
    }
}
