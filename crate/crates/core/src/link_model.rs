//! Physical-layer configuration of a pilot-assisted block-fading link and the
//! closed-form maps from configuration to estimate statistics, effective SNR
//! and outage threshold.
//!
//! Units are SI throughout: seconds, Hz, watts, W/Hz; rates are bits/second.
//! The number of symbols per frame `T*B` is treated as a real number.

use std::f64::consts::LN_2;

use crate::error::{domain, Result};

/// Frame duration, bandwidth, noise density, power budget and fading variance
/// of a single flat block-fading link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    frame_duration_s: f64,
    bandwidth_hz: f64,
    noise_psd: f64,
    avg_power_w: f64,
    fading_variance: f64,
}

impl LinkConfig {
    /// Validates and builds a configuration. Every field must be finite and
    /// strictly positive, and a frame must hold more than two symbols.
    pub fn new(
        frame_duration_s: f64,
        bandwidth_hz: f64,
        noise_psd: f64,
        avg_power_w: f64,
        fading_variance: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("frame_duration_s", frame_duration_s),
            ("bandwidth_hz", bandwidth_hz),
            ("noise_psd", noise_psd),
            ("avg_power_w", avg_power_w),
            ("fading_variance", fading_variance),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return domain(format!("{name} must be finite and positive, got {v}"));
            }
        }
        let tb = frame_duration_s * bandwidth_hz;
        if tb <= 2.0 {
            return domain(format!("frame must carry more than 2 symbols, T*B = {tb}"));
        }
        Ok(LinkConfig {
            frame_duration_s,
            bandwidth_hz,
            noise_psd,
            avg_power_w,
            fading_variance,
        })
    }

    /// Configuration with unit noise density whose nominal SNR equals `snr`.
    pub fn from_snr(frame_duration_s: f64, bandwidth_hz: f64, fading_variance: f64, snr: f64) -> Result<Self> {
        LinkConfig::new(frame_duration_s, bandwidth_hz, 1.0, snr * bandwidth_hz, fading_variance)
    }

    /// Same link with the power budget rescaled so the nominal SNR is `snr`.
    pub fn with_snr(&self, snr: f64) -> Result<Self> {
        LinkConfig::new(
            self.frame_duration_s,
            self.bandwidth_hz,
            self.noise_psd,
            snr * self.noise_psd * self.bandwidth_hz,
            self.fading_variance,
        )
    }

    pub fn with_bandwidth(&self, bandwidth_hz: f64) -> Result<Self> {
        LinkConfig::new(
            self.frame_duration_s,
            bandwidth_hz,
            self.noise_psd,
            self.avg_power_w,
            self.fading_variance,
        )
    }

    pub fn frame_duration_s(&self) -> f64 {
        self.frame_duration_s
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    pub fn noise_psd(&self) -> f64 {
        self.noise_psd
    }

    pub fn avg_power_w(&self) -> f64 {
        self.avg_power_w
    }

    pub fn fading_variance(&self) -> f64 {
        self.fading_variance
    }

    /// Symbols per frame, `T*B`.
    pub fn symbols_per_frame(&self) -> f64 {
        self.frame_duration_s * self.bandwidth_hz
    }
}

/// `P / (N0 * B)`.
pub fn nominal_snr(cfg: &LinkConfig) -> f64 {
    cfg.avg_power_w / (cfg.noise_psd * cfg.bandwidth_hz)
}

/// Split of the per-frame energy between the single pilot and the `TB - 1`
/// data symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySplit {
    pub rho: f64,
    pub pilot_energy_j: f64,
    pub data_symbol_energy_j: f64,
}

impl EnergySplit {
    pub fn new(cfg: &LinkConfig, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        let frame_energy = cfg.avg_power_w * cfg.frame_duration_s;
        Ok(EnergySplit {
            rho,
            pilot_energy_j: rho * frame_energy,
            data_symbol_energy_j: (1.0 - rho) * frame_energy / (cfg.symbols_per_frame() - 1.0),
        })
    }
}

/// MMSE estimate statistics and the resulting effective SNR.
///
/// The channel gain decomposes as `h = h_hat + h_err` with `h_hat = sqrt(estimate_variance) * w`,
/// `w ~ CN(0, 1)`, so the ON probability at threshold `alpha` is `exp(-alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateStats {
    pub estimate_variance: f64,
    pub error_variance: f64,
    pub effective_snr: f64,
}

impl EstimateStats {
    /// Evaluates the statistics from explicit pilot and data energies:
    /// `snr_eff = Es * var_hat / (var_err * Es + N0)`.
    pub fn from_energies(cfg: &LinkConfig, split: &EnergySplit) -> Self {
        let g = cfg.fading_variance;
        let n0 = cfg.noise_psd;
        let et = split.pilot_energy_j;
        let es = split.data_symbol_energy_j;
        let denom = g * et + n0;
        let estimate_variance = g * g * et / denom;
        let error_variance = g * n0 / denom;
        EstimateStats {
            estimate_variance,
            error_variance,
            effective_snr: es * estimate_variance / (error_variance * es + n0),
        }
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return domain(format!("training fraction must lie in [0, 1], got {rho}"));
    }
    Ok(())
}

/// Estimate statistics at training fraction `rho`, with the effective SNR in
/// its nominal-SNR form
/// `rho (1-rho) g^2 (TB)^2 snr^2 / (rho g TB (TB-2) snr + g TB snr + TB - 1)`.
pub fn effective_snr(cfg: &LinkConfig, rho: f64) -> Result<EstimateStats> {
    check_rho(rho)?;
    let g = cfg.fading_variance;
    let tb = cfg.symbols_per_frame();
    let snr = nominal_snr(cfg);
    let gts = g * tb * snr;

    let et = rho * cfg.avg_power_w * cfg.frame_duration_s;
    let denom = g * et + cfg.noise_psd;
    let effective_snr = rho * (1.0 - rho) * gts * gts / (rho * gts * (tb - 2.0) + gts + tb - 1.0);
    Ok(EstimateStats {
        estimate_variance: g * g * et / denom,
        error_variance: g * cfg.noise_psd / denom,
        effective_snr,
    })
}

/// Outage threshold `alpha = (2^{rT/(TB-1)} - 1) / snr_eff`: the channel is ON
/// when the standardized fading power exceeds `alpha`.
pub fn outage_threshold(cfg: &LinkConfig, rate_bps: f64, snr_eff: f64) -> Result<f64> {
    if !(rate_bps >= 0.0) || rate_bps.is_infinite() {
        return domain(format!("rate must be finite and nonnegative, got {rate_bps}"));
    }
    if rate_bps == 0.0 {
        return Ok(0.0);
    }
    if !(snr_eff > 0.0) {
        return domain(format!(
            "effective SNR {snr_eff} cannot support positive rate {rate_bps}"
        ));
    }
    Ok(rate_exponent(cfg, rate_bps).exp_m1() / snr_eff)
}

/// `ln2 * rT / (TB - 1)`, the exponent of the required SNR.
pub(crate) fn rate_exponent(cfg: &LinkConfig, rate_bps: f64) -> f64 {
    LN_2 * rate_bps * cfg.frame_duration_s / (cfg.symbols_per_frame() - 1.0)
}

/// `P{|w|^2 > alpha} = exp(-alpha)` for a unit-mean exponential.
pub fn on_probability(alpha: f64) -> f64 {
    (-alpha).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> LinkConfig {
        LinkConfig::from_snr(2e-3, 1e5, 1.0, 0.1).unwrap()
    }

    #[test]
    fn nominal_snr_examples() {
        let c = LinkConfig::new(1.0, 3.0, 1.0, 3.0, 1.0).unwrap();
        assert_eq!(nominal_snr(&c), 1.0);
        // P/(N N0) = 1e4 with B_c = 1e5 gives SNR = 0.1 per subchannel
        let c = LinkConfig::new(2e-3, 1e5, 1.0, 1e4, 1.0).unwrap();
        assert!((nominal_snr(&c) - 0.1).abs() < 1e-15);
        let d = c.with_bandwidth(2e5).unwrap();
        assert!((nominal_snr(&d) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn rejects_short_frames_and_bad_fields() {
        assert!(LinkConfig::new(1.0, 2.0, 1.0, 1.0, 1.0).is_err());
        assert!(LinkConfig::new(1.0, 2.5, 1.0, 1.0, 1.0).is_ok());
        assert!(LinkConfig::new(1.0, 10.0, 0.0, 1.0, 1.0).is_err());
        assert!(LinkConfig::new(1.0, 10.0, 1.0, f64::NAN, 1.0).is_err());
        assert!(LinkConfig::new(1.0, 10.0, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn endpoints_give_zero_effective_snr() {
        let c = cfg();
        assert_eq!(effective_snr(&c, 0.0).unwrap().effective_snr, 0.0);
        assert_eq!(effective_snr(&c, 1.0).unwrap().effective_snr, 0.0);
        assert!(effective_snr(&c, 1.1).is_err());
        assert!(effective_snr(&c, -0.1).is_err());
    }

    #[test]
    fn energy_and_snr_forms_agree() {
        let c = cfg();
        let split = EnergySplit::new(&c, 0.3).unwrap();
        let oracle = EstimateStats::from_energies(&c, &split);
        let got = effective_snr(&c, 0.3).unwrap();
        let rel = (got.effective_snr - oracle.effective_snr).abs() / oracle.effective_snr;
        assert!(rel < 1e-12, "rel = {rel}");
        assert!((got.estimate_variance - oracle.estimate_variance).abs() < 1e-15);
    }

    #[test]
    fn energy_split_invariants() {
        let c = cfg();
        let s = EnergySplit::new(&c, 0.25).unwrap();
        let e = c.avg_power_w() * c.frame_duration_s();
        assert!((s.pilot_energy_j - 0.25 * e).abs() < 1e-12 * e);
        assert!((s.data_symbol_energy_j - 0.75 * e / 199.0).abs() < 1e-12 * e);
    }

    #[test]
    fn outage_threshold_examples() {
        let c = cfg();
        assert_eq!(outage_threshold(&c, 0.0, 0.5).unwrap(), 0.0);
        // rT / (TB - 1) = 1
        let r = (c.symbols_per_frame() - 1.0) / c.frame_duration_s();
        assert!((outage_threshold(&c, r, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(outage_threshold(&c, 1.0, 0.0).is_err());
        assert!(outage_threshold(&c, -1.0, 1.0).is_err());
        assert!((on_probability(0.7) - (-0.7f64).exp()).abs() < 1e-16);
        assert_eq!(on_probability(0.0), 1.0);
    }
}
