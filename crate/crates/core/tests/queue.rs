use effcap_core::effcap::{spectral_efficiency, QosSpec};
use effcap_core::link_model::LinkConfig;
use effcap_core::queue_sim::*;

fn cfg() -> LinkConfig {
    LinkConfig::from_snr(2e-3, 1e5, 1.0, 3.0).unwrap()
}

#[test]
fn on_frequency_is_binomially_concentrated() {
    let qos = QosSpec::new(0.01).unwrap();
    let p = spectral_efficiency(&cfg(), &qos).unwrap().on_probability;
    let n = 1_000_000u64;
    for seed in [1, 2, 3] {
        let ons = on_off_trace(&cfg(), &qos, n, seed)
            .unwrap()
            .iter()
            .filter(|&&b| b)
            .count();
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((ons as f64 / n as f64 - p).abs() <= 3.0 * sigma);
    }
}

#[test]
fn certain_channel_is_always_on() {
    assert!(OnOffChannel::new(1.0, 9).take(10_000).all(|b| b));
}

#[test]
fn traces_are_reproducible() {
    let qos = QosSpec::new(0.01).unwrap();
    let a = on_off_trace(&cfg(), &qos, 50_000, 77).unwrap();
    assert_eq!(a, on_off_trace(&cfg(), &qos, 50_000, 77).unwrap());
    assert_ne!(a, on_off_trace(&cfg(), &qos, 50_000, 78).unwrap());
}

#[test]
fn lighter_load_decays_faster() {
    let theta = 0.01;
    let spec = SimSpec {
        cfg: cfg(),
        qos: QosSpec::new(theta).unwrap(),
        frames: 2_000_000,
        seed: 3,
        arrival_margin: 0.5,
    };
    let est = simulate_queue(&spec).unwrap();
    assert!(est.theta_hat > theta);
    assert_eq!(est, simulate_queue(&spec).unwrap());
}
