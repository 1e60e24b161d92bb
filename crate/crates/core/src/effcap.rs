//! Normalized effective capacity of the single flat-fading ON-OFF link, the
//! optimal fixed rate, and the resulting bit energy.
//!
//! In every frame the link either delivers `rT` bits (ON, probability
//! `exp(-alpha)`) or nothing (OFF). For QoS exponent `theta > 0` the normalized
//! effective capacity is
//!
//! ```text
//! R_E = -1/(theta T B) * ln(1 - exp(-alpha) (1 - exp(-theta r T)))   [bits/s/Hz]
//! ```
//!
//! and for `theta = 0` it degenerates to the average delivered rate
//! `(r / B) exp(-alpha)`, which is handled by a separate code path.

use std::f64::consts::LN_2;

use crate::error::{domain, Error, Result};
use crate::link_model::{effective_snr, nominal_snr, on_probability, outage_threshold, rate_exponent, LinkConfig};
use crate::solve::{bracket_increasing, brent_root, golden_section_max};
use crate::training::rho_opt_closed_form;

const BRACKET_STEPS: usize = 200;
const BRENT_ITERS: usize = 200;

/// QoS exponent `theta` (1/bits): the decay rate of the stationary queue-length tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosSpec {
    theta: f64,
}

impl QosSpec {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta.is_finite() && theta >= 0.0) {
            return domain(format!("QoS exponent must be finite and nonnegative, got {theta}"));
        }
        Ok(QosSpec { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `theta == 0`: no buffer constraint, effective capacity is the mean rate.
    pub fn is_unconstrained(&self) -> bool {
        self.theta == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffCapResult {
    pub rate_opt_bps: f64,
    pub alpha_opt: f64,
    pub rho_used: f64,
    /// Normalized effective capacity in bits/s/Hz.
    pub spectral_efficiency: f64,
    pub on_probability: f64,
}

fn positive_theta(qos: &QosSpec) -> Result<f64> {
    if qos.theta > 0.0 {
        Ok(qos.theta)
    } else {
        domain("this form requires theta > 0; use the theta = 0 operation")
    }
}

fn objective(cfg: &LinkConfig, theta: f64, rate_bps: f64, snr_eff: f64) -> f64 {
    if rate_bps == 0.0 || snr_eff == 0.0 {
        return 0.0;
    }
    let alpha = rate_exponent(cfg, rate_bps).exp_m1() / snr_eff;
    let theta_tr = theta * cfg.frame_duration_s() * rate_bps;
    let p_on = on_probability(alpha);
    let shortfall = p_on * -(-theta_tr).exp_m1();
    let log_arg = if shortfall < 0.5 {
        (-shortfall).ln_1p()
    } else {
        // 1 - shortfall as a sum of positive terms
        (-(-alpha).exp_m1() + p_on * (-theta_tr).exp()).ln()
    };
    -log_arg / (theta * cfg.symbols_per_frame())
}

/// Normalized effective capacity at a given rate and training fraction (`theta > 0`).
pub fn effective_capacity_at(cfg: &LinkConfig, qos: &QosSpec, rate_bps: f64, rho: f64) -> Result<f64> {
    let theta = positive_theta(qos)?;
    if !(rate_bps >= 0.0 && rate_bps.is_finite()) {
        return domain(format!("rate must be finite and nonnegative, got {rate_bps}"));
    }
    let snr_eff = effective_snr(cfg, rho)?.effective_snr;
    Ok(objective(cfg, theta, rate_bps, snr_eff))
}

/// Derivative (up to the positive factor `exp(-alpha)`) of the effective
/// capacity's log-argument with respect to the rate:
///
/// ```text
/// 2^{Tr/(TB-1)} T ln2 / ((TB-1) snr_eff) * (1 - e^{-theta T r}) - theta T e^{-theta T r}
/// ```
///
/// Strictly increasing in `r`, equal to `-theta T` at `r = 0`; its root is the optimal rate.
pub fn rate_condition_residual(cfg: &LinkConfig, qos: &QosSpec, rate_bps: f64, snr_eff: f64) -> f64 {
    let t = cfg.frame_duration_s();
    let theta_t = qos.theta * t;
    let growth = rate_exponent(cfg, rate_bps).exp() * t * LN_2 / ((cfg.symbols_per_frame() - 1.0) * snr_eff);
    let served = -(-theta_t * rate_bps).exp_m1();
    let decay = (-theta_t * rate_bps).exp();
    if served == 0.0 {
        return -theta_t * decay;
    }
    growth * served - theta_t * decay
}

fn usable_snr_eff(cfg: &LinkConfig, rho: f64) -> Result<f64> {
    let snr_eff = effective_snr(cfg, rho)?.effective_snr;
    if !(snr_eff > 0.0) {
        return domain(format!(
            "effective SNR is zero at rho = {rho}; no positive rate is supported"
        ));
    }
    Ok(snr_eff)
}

// Both optimality conditions have their root near `snr_eff (TB-1) / (T ln2)`
// when that is small; starting there keeps tiny effective SNRs within reach.
fn bracket_start(cfg: &LinkConfig, snr_eff: f64) -> f64 {
    let linear = snr_eff * (cfg.symbols_per_frame() - 1.0) / (cfg.frame_duration_s() * LN_2);
    linear.min(cfg.bandwidth_hz())
}

fn solve_increasing<F: FnMut(f64) -> f64>(mut f: F, start: f64) -> Result<f64> {
    let (lo, hi) = bracket_increasing(&mut f, start, BRACKET_STEPS)?;
    brent_root(f, lo, hi, 0.0, BRENT_ITERS)
}

/// Optimal fixed rate for `theta > 0` at training fraction `rho`, from the
/// root of [`rate_condition_residual`].
pub fn optimal_rate(cfg: &LinkConfig, qos: &QosSpec, rho: f64) -> Result<EffCapResult> {
    let theta = positive_theta(qos)?;
    let snr_eff = usable_snr_eff(cfg, rho)?;
    let rate = solve_increasing(
        |r| rate_condition_residual(cfg, qos, r, snr_eff),
        bracket_start(cfg, snr_eff),
    )?;
    let alpha = outage_threshold(cfg, rate, snr_eff)?;
    Ok(EffCapResult {
        rate_opt_bps: rate,
        alpha_opt: alpha,
        rho_used: rho,
        spectral_efficiency: objective(cfg, theta, rate, snr_eff),
        on_probability: on_probability(alpha),
    })
}

/// Rate maximizing the mean delivered rate `r exp(-alpha(r))` at a given
/// effective SNR, and its outage threshold.
///
/// The stationarity condition `r * dalpha/dr = 1` has an increasing left-hand
/// side, so the maximizer is its unique root.
pub fn mean_rate_optimum(cfg: &LinkConfig, snr_eff: f64) -> Result<(f64, f64)> {
    if !(snr_eff > 0.0) {
        return domain(format!("effective SNR must be positive, got {snr_eff}"));
    }
    let c = LN_2 * cfg.frame_duration_s() / (cfg.symbols_per_frame() - 1.0);
    let rate = solve_increasing(|r| r * c * (c * r).exp() / snr_eff - 1.0, bracket_start(cfg, snr_eff))?;
    Ok((rate, outage_threshold(cfg, rate, snr_eff)?))
}

/// Unconstrained (`theta = 0`) effective capacity: `max_r (r/B) exp(-alpha(r))`.
pub fn effective_capacity_theta0(cfg: &LinkConfig, rho: f64) -> Result<EffCapResult> {
    let snr_eff = usable_snr_eff(cfg, rho)?;
    let (rate, alpha) = mean_rate_optimum(cfg, snr_eff)?;
    let p_on = on_probability(alpha);
    Ok(EffCapResult {
        rate_opt_bps: rate,
        alpha_opt: alpha,
        rho_used: rho,
        spectral_efficiency: rate * p_on / cfg.bandwidth_hz(),
        on_probability: p_on,
    })
}

/// Joint optimum over rate and training fraction: the closed-form training
/// fraction composed with the optimal rate for `qos`.
pub fn spectral_efficiency(cfg: &LinkConfig, qos: &QosSpec) -> Result<EffCapResult> {
    let training = rho_opt_closed_form(cfg);
    let rho = training.rho_opt;
    if training.snr_eff_opt == 0.0 {
        // effective SNR underflowed: only the zero rate is supported
        return Ok(EffCapResult {
            rate_opt_bps: 0.0,
            alpha_opt: 0.0,
            rho_used: rho,
            spectral_efficiency: 0.0,
            on_probability: 1.0,
        });
    }
    if qos.is_unconstrained() {
        effective_capacity_theta0(cfg, rho)
    } else {
        optimal_rate(cfg, qos, rho)
    }
}

/// `E_b/N0 = snr / R_E` (linear scale).
pub fn bit_energy(cfg: &LinkConfig, qos: &QosSpec) -> Result<f64> {
    let se = spectral_efficiency(cfg, qos)?.spectral_efficiency;
    if !(se > 0.0) {
        return Err(Error::InfiniteBitEnergy);
    }
    Ok(nominal_snr(cfg) / se)
}

pub fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Bit energy at zero spectral efficiency and wideband slope from the first
/// and second derivatives of spectral efficiency in SNR at zero:
/// `(1 / R'(0), -2 R'(0)^2 ln2 / R''(0))`.
pub fn tradeoff_from_derivatives(first: f64, second: f64) -> (f64, f64) {
    (1.0 / first, -2.0 * first * first * LN_2 / second)
}

/// Locates the minimum bit energy over SNR.
///
/// `snr_grid` must be ascending, positive and hold at least 16 points; the best
/// grid point is refined by golden-section search in log-SNR. Returns
/// `(snr_at_min, ebn0_min_db)`. The minimizer landing on a grid endpoint is an
/// error: the grid does not bracket the minimum.
pub fn min_bit_energy_numeric(cfg: &LinkConfig, qos: &QosSpec, snr_grid: &[f64]) -> Result<(f64, f64)> {
    if snr_grid.len() < 16 {
        return domain(format!("SNR grid needs at least 16 points, got {}", snr_grid.len()));
    }
    if snr_grid.iter().any(|&s| !(s > 0.0 && s.is_finite())) || snr_grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("SNR grid must be positive and strictly ascending");
    }
    let ebn0_db = |snr: f64| -> Result<f64> { Ok(to_db(bit_energy(&cfg.with_snr(snr)?, qos)?)) };

    let mut best = (0, f64::INFINITY);
    for (i, &snr) in snr_grid.iter().enumerate() {
        let v = ebn0_db(snr)?;
        if v < best.1 {
            best = (i, v);
        }
    }
    let (i, _) = best;
    if i == 0 || i == snr_grid.len() - 1 {
        return Err(Error::GridEndpoint {
            index: i,
            snr: snr_grid[i],
        });
    }
    let lo = snr_grid[i - 1].ln();
    let hi = snr_grid[i + 1].ln();
    // objective is evaluated inside the bracket only, where it is finite
    let (x, neg) = golden_section_max(|x| -ebn0_db(x.exp()).unwrap_or(f64::INFINITY), lo, hi, 1e-7);
    Ok((x.exp(), -neg))
}
