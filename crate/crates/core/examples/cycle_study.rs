//! The 30-agent directed-cycle study under low, high and unbounded prior
//! evidence: final beliefs, the centralized target they approach, and the
//! accept/reject verdicts.
//!
//! `cargo run --release --example cycle_study [-- HORIZON]`

use social_learning::sim::{run_simulation, EvidenceRegime, Scenario, Verdict};

fn main() {
    let horizon: u64 = std::env::args()
        .nth(1)
        .map_or(10_000, |s| s.parse().expect("horizon"));
    for (label, regime) in [
        ("low [0, 100]", EvidenceRegime::LOW),
        ("high [1000, 10000]", EvidenceRegime::HIGH),
        ("dogmatic", EvidenceRegime::Dogmatic),
    ] {
        let mut s = Scenario::two_hypothesis_cycle(30, regime);
        s.horizon = horizon;
        s.seed = 2024;
        let r = run_simulation(&s, 0).unwrap();
        let fin = r.final_beliefs();
        println!("== evidence {label}, t = {}", fin.t());
        for (h, name) in s.hypothesis_names.iter().enumerate() {
            let mean = fin.column(h).sum::<f64>() / fin.agents() as f64;
            let accepted = r
                .verdicts
                .iter()
                .filter(|v| v[h] == Verdict::Accept)
                .count();
            let rejected = r
                .verdicts
                .iter()
                .filter(|v| v[h] == Verdict::Reject)
                .count();
            println!(
                "  {name}: mean ln mu {mean:>10.4}  target {:>10.4}  spread {:.2e}  accept {accepted}  reject {rejected}",
                r.centralized_target[h],
                fin.spread(h)
            );
        }
    }
}
