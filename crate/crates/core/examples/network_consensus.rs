//! Validate a weight matrix and run the log-linear belief update by hand.
//!
//! Shows that the network-wide sum of log-beliefs is exactly the sum of the
//! agents' own log updates when the weights are doubly stochastic.
//!
//! `cargo run --release --example network_consensus`

use social_learning::network::{assumption_report, belief_step, validate_network, BeliefMatrix};

fn main() {
    let weights = vec![
        vec![0.6, 0.4, 0.0, 0.0],
        vec![0.0, 0.5, 0.5, 0.0],
        vec![0.0, 0.1, 0.5, 0.4],
        vec![0.4, 0.0, 0.0, 0.6],
    ];
    let net = validate_network(&weights).expect("valid network");
    println!(
        "{} agents, {} weighted edges",
        net.agents(),
        net.edge_count()
    );

    // Agent 0 alone sees evidence against hypothesis 1.
    let log_ell = [0.0, -0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let mut beliefs = BeliefMatrix::new(4, 2);
    for _ in 0..200 {
        beliefs = belief_step(&net, &beliefs, &log_ell).unwrap();
    }
    println!("after {} rounds:", beliefs.t());
    for i in 0..4 {
        println!("  agent {i}: ln mu = {:?}", beliefs.row(i));
    }
    println!(
        "column sum {:.6} vs accumulated updates {:.6}; spread {:.2e}",
        beliefs.column_sum(1),
        -0.3 * 200.0,
        beliefs.spread(1)
    );

    let broken = vec![
        vec![0.5, 0.5, 0.0],
        vec![0.5, 0.5, 0.0],
        vec![0.0, 0.0, 1.0],
    ];
    let report = assumption_report(&broken).unwrap();
    println!("block-diagonal matrix:");
    println!("  doubly stochastic: {:?}", report.doubly_stochastic);
    println!("  positive diagonal: {:?}", report.positive_diagonal);
    println!("  connected:         {:?}", report.connected);
}
