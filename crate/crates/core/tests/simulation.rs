use social_learning::model::{log_asymptotic_ulr, EvidenceSummary, GaussGammaParams};
use social_learning::sim::{
    ensemble, generate_evidence, run_simulation, EvidenceRegime, NetworkSpec, Scenario, Verdict,
};

fn cycle(m: usize, regime: EvidenceRegime, horizon: u64, seed: u64) -> Scenario {
    let mut s = Scenario::two_hypothesis_cycle(m, regime);
    s.horizon = horizon;
    s.seed = seed;
    s
}

#[test]
fn runs_are_reproducible_and_independent_of_execution_order() {
    let mut s = cycle(5, EvidenceRegime::LOW, 300, 17);
    s.runs = 4;
    let a = ensemble(&s).unwrap();
    let b = ensemble(&s).unwrap();
    assert_eq!(a, b);
    assert_eq!(run_simulation(&s, 3).unwrap(), a.runs[3]);
    assert_ne!(a.runs[0].log_beliefs, a.runs[1].log_beliefs);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let c = pool.install(|| ensemble(&s).unwrap());
    assert_eq!(a, c);
}

#[test]
fn fixed_evidence_shares_training_data_across_runs() {
    let mut s = cycle(3, EvidenceRegime::Count(20), 50, 1);
    s.fixed_evidence = true;
    assert_eq!(generate_evidence(&s, 0), generate_evidence(&s, 5));
    s.fixed_evidence = false;
    assert_ne!(generate_evidence(&s, 0), generate_evidence(&s, 5));
}

#[test]
fn network_sum_of_log_beliefs_equals_sum_of_private_ratios() {
    for regime in [
        EvidenceRegime::LOW,
        EvidenceRegime::HIGH,
        EvidenceRegime::Dogmatic,
    ] {
        let r = run_simulation(&cycle(8, regime, 2000, 4), 0).unwrap();
        for k in 0..r.checkpoints.len() {
            let b = r.beliefs_at(k);
            for h in 0..2 {
                let private: f64 = (0..8).map(|i| r.agent_log_ulr(k, i, h)).sum();
                assert!(
                    (b.column_sum(h) - private).abs() < 1e-8,
                    "t = {}",
                    r.checkpoints[k]
                );
            }
        }
    }
}

#[test]
fn centralized_target_is_mean_of_asymptotic_ratios() {
    let s = cycle(6, EvidenceRegime::Count(30), 10, 2);
    let r = run_simulation(&s, 0).unwrap();
    for h in 0..2 {
        let mean = (0..6)
            .map(|i| {
                log_asymptotic_ulr(
                    &GaussGammaParams::NONINFORMATIVE,
                    &r.evidence[i][h],
                    &s.truth[i],
                )
            })
            .sum::<f64>()
            / 6.0;
        assert!((r.centralized_target[h] - mean).abs() < 1e-12);
    }
}

#[test]
fn zero_evidence_keeps_beliefs_at_one() {
    let r = run_simulation(&cycle(4, EvidenceRegime::Count(0), 500, 3), 0).unwrap();
    assert!(r.log_beliefs.iter().all(|&b| b == 0.0));
    assert!(r.verdicts.iter().flatten().all(|&v| v == Verdict::Unsure));
}

#[test]
fn beliefs_approach_target_and_agree() {
    let r = run_simulation(&cycle(10, EvidenceRegime::LOW, 10_000, 8), 0).unwrap();
    for h in 0..2 {
        let gap = r.abs_log_gap(h);
        assert!(gap.last().unwrap() < &gap[r.checkpoint_index(100).unwrap()]);
        assert!(r.final_beliefs().spread(h) < 0.1);
    }
}

#[test]
fn dogmatic_wrong_hypothesis_is_rejected() {
    let r = run_simulation(&cycle(10, EvidenceRegime::Dogmatic, 10_000, 6), 0).unwrap();
    assert!(r
        .verdicts
        .iter()
        .all(|v| v[0] == Verdict::Accept && v[1] == Verdict::Reject));
    assert_eq!(r.centralized_target, vec![f64::INFINITY, f64::NEG_INFINITY]);
    assert!(r
        .evidence
        .iter()
        .flatten()
        .all(EvidenceSummary::is_dogmatic));
}

/// Convergence speed barely depends on network size: the ensemble gap curves
/// of a 10- and a 30-agent cycle stay within a factor two of each other.
#[test]
fn gap_curves_of_small_and_large_cycles_are_comparable() {
    let gaps: Vec<_> = [10, 30]
        .iter()
        .map(|&m| {
            let mut s = cycle(m, EvidenceRegime::LOW, 10_000, 31);
            s.runs = 50;
            ensemble(&s).unwrap().diagnostics
        })
        .collect();
    for h in 0..2 {
        for (k, &t) in gaps[0].checkpoints.iter().enumerate() {
            let ratio = gaps[0].mean_abs_log_gap[h][k] / gaps[1].mean_abs_log_gap[h][k];
            assert!((0.5..=2.0).contains(&ratio), "t = {t}: ratio {ratio}");
        }
    }
}

#[test]
fn invalid_scenarios_are_rejected() {
    let mut s = cycle(3, EvidenceRegime::LOW, 10, 0);
    s.network = NetworkSpec::Matrix(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    assert!(run_simulation(&s, 0).is_err());
    let mut s = cycle(3, EvidenceRegime::LOW, 10, 0);
    s.evidence[1][0] = EvidenceRegime::Range { lo: 5, hi: 1 };
    assert!(run_simulation(&s, 0).is_err());
    let mut s = cycle(3, EvidenceRegime::LOW, 10, 0);
    s.upsilon = 1.0;
    assert!(run_simulation(&s, 0).is_err());
}
