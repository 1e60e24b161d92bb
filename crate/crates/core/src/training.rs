//! Optimal split of the frame energy between the pilot and the data symbols.
//!
//! The split that maximizes the effective SNR also maximizes the effective
//! capacity for every QoS exponent and every fixed rate, so it is computed
//! once per link configuration.

use crate::dd::Dd;
use crate::link_model::{effective_snr, nominal_snr, LinkConfig};
use crate::solve::golden_section_max_by;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingSolution {
    pub rho_opt: f64,
    pub eta: f64,
    pub snr_eff_opt: f64,
}

/// `eta = (g TB snr + TB - 1) / (g TB (TB - 2) snr)`.
pub fn eta(cfg: &LinkConfig) -> f64 {
    let tb = cfg.symbols_per_frame();
    let gts = cfg.fading_variance() * tb * nominal_snr(cfg);
    (gts + tb - 1.0) / (gts * (tb - 2.0))
}

/// Closed-form optimal training fraction `sqrt(eta (eta + 1)) - eta`.
pub fn rho_opt_closed_form(cfg: &LinkConfig) -> TrainingSolution {
    let eta = eta(cfg);
    // sqrt(eta(eta+1)) - eta, rationalized to avoid cancellation and overflow at large eta
    let rho_opt = if eta.is_finite() {
        1.0 / ((1.0 + eta.recip()).sqrt() + 1.0)
    } else {
        0.5
    };
    let snr_eff_opt = effective_snr(cfg, rho_opt)
        .expect("closed-form training fraction lies in (0, 1)")
        .effective_snr;
    TrainingSolution {
        rho_opt,
        eta,
        snr_eff_opt,
    }
}

/// The `(phi, psi)` pair with `snr_eff_opt = phi snr^2 / (psi snr + TB - 1)`.
pub fn snr_eff_opt_coefficients(cfg: &LinkConfig) -> (f64, f64) {
    let rho = rho_opt_closed_form(cfg).rho_opt;
    let g = cfg.fading_variance();
    let tb = cfg.symbols_per_frame();
    let phi = rho * (1.0 - rho) * g * g * tb * tb;
    let psi = (1.0 + (tb - 2.0) * rho) * g * tb;
    (phi, psi)
}

fn snr_eff_dd(rho: f64, gts: Dd, tb: Dd) -> Dd {
    let one = Dd::from(1.0);
    let r = Dd::from(rho);
    r * (one - r) * gts * gts / (r * gts * (tb - Dd::from(2.0)) + gts + tb - one)
}

/// Numeric maximizer of the effective SNR over the training fraction: a
/// 64-point scan of `[0, 1]` followed by golden-section refinement to 1e-10.
///
/// Comparisons are carried out in double-double precision; in plain f64 the
/// flat top of the objective limits the attainable accuracy to roughly 1e-8.
pub fn rho_opt_numeric(cfg: &LinkConfig) -> f64 {
    let tb = Dd::from(cfg.frame_duration_s()) * Dd::from(cfg.bandwidth_hz());
    let snr = Dd::from(cfg.avg_power_w()) / (Dd::from(cfg.noise_psd()) * Dd::from(cfg.bandwidth_hz()));
    let gts = Dd::from(cfg.fading_variance()) * tb * snr;
    let f = |rho: f64| snr_eff_dd(rho, gts, tb);

    const SCAN: usize = 64;
    let step = 1.0 / (SCAN - 1) as f64;
    let mut best = 1;
    let mut best_val = f(step);
    for i in 2..SCAN - 1 {
        let v = f(step * i as f64);
        if v.gt(best_val) {
            best_val = v;
            best = i;
        }
    }
    let lo = step * (best - 1) as f64;
    let hi = step * (best + 1) as f64;
    golden_section_max_by(|a, b| f(a).gt(f(b)), lo, hi, 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(b: f64, snr: f64) -> LinkConfig {
        LinkConfig::from_snr(2e-3, b, 1.0, snr).unwrap()
    }

    #[test]
    fn low_snr_limit_is_half() {
        let s = rho_opt_closed_form(&cfg(1e7, 1e-8));
        assert!((s.rho_opt - 0.5).abs() < 1e-3, "{}", s.rho_opt);
    }

    #[test]
    fn high_snr_limit_with_tb_2e4() {
        let s = rho_opt_closed_form(&cfg(1e7, 1e6));
        assert!((s.rho_opt - 0.007).abs() < 5e-4, "{}", s.rho_opt);
        let s = rho_opt_closed_form(&cfg(1e7, 1e8));
        let limit = 1.0 / (2e4 - 2.0);
        assert!((s.eta - limit).abs() / limit < 1e-4);
    }

    #[test]
    fn closed_form_satisfies_quadratic_identity() {
        for snr in [1e-3, 0.1, 10.0] {
            let s = rho_opt_closed_form(&cfg(1e5, snr));
            let direct = (s.eta * (s.eta + 1.0)).sqrt() - s.eta;
            assert!((s.rho_opt - direct).abs() < 1e-12);
            assert!(s.rho_opt > 0.0 && s.rho_opt < 1.0);
        }
    }

    #[test]
    fn coefficient_form_matches() {
        let c = cfg(1e5, 0.3);
        let (phi, psi) = snr_eff_opt_coefficients(&c);
        let snr = nominal_snr(&c);
        let via = phi * snr * snr / (psi * snr + c.symbols_per_frame() - 1.0);
        let s = rho_opt_closed_form(&c);
        assert!((via - s.snr_eff_opt).abs() / s.snr_eff_opt < 1e-12);
    }

    #[test]
    fn numeric_maximizer_matches_and_avoids_endpoints() {
        for snr in [1e-6, 1e-2, 1.0, 1e3] {
            let c = cfg(1e5, snr);
            let num = rho_opt_numeric(&c);
            let cf = rho_opt_closed_form(&c).rho_opt;
            assert!((num - cf).abs() < 1e-9, "snr {snr}: {num} vs {cf}");
            assert!(num > 0.0 && num < 1.0);
        }
    }

    #[test]
    fn decreasing_in_snr() {
        let mut prev = 1.0;
        for k in 0..60 {
            let snr = 10f64.powf(-6.0 + 0.15 * k as f64);
            let r = rho_opt_closed_form(&cfg(1e7, snr)).rho_opt;
            assert!(r <= prev);
            prev = r;
        }
    }
}
