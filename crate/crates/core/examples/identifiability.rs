//! Agents that individually cannot separate two hypotheses can still learn
//! together when someone in the network can tell them apart.
//!
//! `cargo run --release --example identifiability`

use social_learning::model::{kl_gaussian, GaussianParams};
use social_learning::network::check_global_identifiability;

fn main() {
    let g = |mu, lambda| GaussianParams::new(mu, lambda).unwrap();
    let truth = g(0.0, 0.5);
    // Agent 0 sees only the precision, agent 1 only the mean.
    let agents = vec![
        (truth, vec![g(0.0, 0.5), g(1.0, 0.5), g(0.0, 0.4)]),
        (g(0.0, 1.0), vec![g(0.0, 1.0), g(0.0, 1.0), g(0.5, 1.0)]),
    ];
    for (i, (t, hs)) in agents.iter().enumerate() {
        let kl: Vec<String> = hs
            .iter()
            .map(|h| format!("{:.4}", kl_gaussian(t, h)))
            .collect();
        println!("agent {i}: KL to each hypothesis = [{}]", kl.join(", "));
    }
    let report = check_global_identifiability(&agents);
    println!("per-agent indistinguishable sets: {:?}", report.per_agent);
    println!(
        "intersection {:?}, identifiable: {}",
        report.intersection, report.identifiable
    );
}
