use effcap_core::effcap::{effective_capacity_at, QosSpec};
use effcap_core::link_model::LinkConfig;
use effcap_core::wideband::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn subset_enumeration(success: &[f64]) -> Vec<f64> {
    let n = success.len();
    let mut dist = vec![0.0; n + 1];
    for mask in 0u32..(1 << n) {
        let prob: f64 = (0..n)
            .map(|k| {
                if mask >> k & 1 == 1 {
                    success[k]
                } else {
                    1.0 - success[k]
                }
            })
            .product();
        dist[mask.count_ones() as usize] += prob;
    }
    dist
}

fn heterogeneous(rng: &mut ChaCha8Rng, n: usize) -> WidebandConfig {
    let bc = 10f64.powf(rng.random_range(3.5..6.0));
    let power = 10f64.powf(rng.random_range(2.0..6.0));
    let link = LinkConfig::new(2e-3, bc * n as f64, 1.0, power, 1.0).unwrap();
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    WidebandConfig::new(
        link,
        n,
        (0..n).map(|_| rng.random_range(0.2..3.0)).collect(),
        weights.iter().map(|w| power * w / total).collect(),
        (0..n).map(|_| rng.random_range(0.05..0.95)).collect(),
    )
    .unwrap()
}

#[test]
fn dynamic_program_matches_subset_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..50 {
        let n = 1 + case % 12;
        let wcfg = heterogeneous(&mut rng, n);
        let bc = wcfg.coherence_bandwidth_hz();
        let rate = bc * rng.random_range(0.05..3.0);
        let on = subchannel_on_probabilities(&wcfg, rate).unwrap();
        let dp = transition_probabilities(&wcfg, rate).unwrap();
        let brute = subset_enumeration(&on);
        assert_eq!(dp.len(), n + 1);
        for (a, b) in dp.iter().zip(&brute) {
            assert!((a - b).abs() < 1e-12, "case {case}: {a} vs {b}");
        }
        assert!((dp.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn iid_probabilities_are_binomial() {
    for n in 1..=20 {
        for p in [0.0, 0.03, 0.5, 0.9, 1.0] {
            let dp = poisson_binomial(&vec![p; n]);
            let exact = binomial_probabilities(n, p);
            for (a, b) in dp.iter().zip(&exact) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn single_subchannel_has_two_states() {
    let link = LinkConfig::from_snr(2e-3, 1e5, 1.0, 0.3).unwrap();
    let wcfg = WidebandConfig::uniform(link, 1, 0.4).unwrap();
    let p_on = subchannel_on_probabilities(&wcfg, 2e4).unwrap()[0];
    let probs = transition_probabilities(&wcfg, 2e4).unwrap();
    assert_eq!(probs, vec![1.0 - p_on, p_on]);
}

#[test]
fn state_sum_matches_single_subchannel_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for case in 0..100 {
        let n = rng.random_range(1..=64);
        let bc = 10f64.powf(rng.random_range(3.5..6.5));
        let snr = 10f64.powf(rng.random_range(-3.0..1.5));
        let theta = 10f64.powf(rng.random_range(-4.0..0.0));
        let rho = rng.random_range(0.05..0.95);
        let link = LinkConfig::from_snr(2e-3, bc * n as f64, 1.0, snr).unwrap();
        let wcfg = WidebandConfig::uniform(link, n, rho).unwrap();
        let sub = wcfg.subchannel_link(0).unwrap();
        let rate = bc * rng.random_range(0.05..4.0);
        let qos = QosSpec::new(theta).unwrap();
        let multi = effective_capacity_wideband(&wcfg, &qos, rate).unwrap();
        let single = effective_capacity_at(&sub, &qos, rate, rho).unwrap();
        assert!(
            (multi - single).abs() <= 1e-10 * single.abs(),
            "case {case}: {multi} vs {single}"
        );
    }
}

#[test]
fn two_subchannels_factor() {
    let link = LinkConfig::from_snr(2e-3, 2e5, 1.0, 0.5).unwrap();
    let wcfg = WidebandConfig::uniform(link, 2, 0.3).unwrap();
    let qos = QosSpec::new(0.02).unwrap();
    let rate = 8e4;
    let p_on = subchannel_on_probabilities(&wcfg, rate).unwrap()[0];
    let theta_t = 0.02 * 2e-3;
    let identity = -((1.0 - p_on + p_on * (-theta_t * rate).exp()).powi(2)).ln() / (theta_t * 2.0 * 1e5);
    let got = effective_capacity_wideband(&wcfg, &qos, rate).unwrap();
    assert!((got - identity).abs() < 1e-12 * identity);
}

#[test]
fn capacity_vanishes_at_huge_rates() {
    let link = LinkConfig::from_snr(2e-3, 4e5, 1.0, 0.1).unwrap();
    let wcfg = WidebandConfig::uniform(link, 4, 0.5).unwrap();
    let qos = QosSpec::new(0.01).unwrap();
    assert!(effective_capacity_wideband(&wcfg, &qos, 1e9).unwrap() < 1e-12);
}
