//! Wideband channel split into `N` noninteracting flat-fading subchannels of
//! coherence bandwidth `B_c = B / N`, each carrying a fixed rate `r`.
//!
//! In any frame the number of ON subchannels follows a Poisson-binomial law,
//! so the service process has `N + 1` levels `{0, rT, ..., NrT}`. With i.i.d.
//! subchannels and uniform power and training, the effective capacity reduces
//! to the single-link expression evaluated on one subchannel. When `N` stays
//! bounded as `B_c` grows, the bit energy converges to a closed-form minimum.

use std::f64::consts::{E, LN_2};
use std::fmt;
use std::str::FromStr;

use crate::effcap::{spectral_efficiency, to_db, tradeoff_from_derivatives, EffCapResult, QosSpec};
use crate::error::{domain, Error, Result};
use crate::link_model::{effective_snr, on_probability, outage_threshold, LinkConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct WidebandConfig {
    link: LinkConfig,
    num_subchannels: usize,
    per_subchannel_variances: Vec<f64>,
    per_subchannel_powers: Vec<f64>,
    per_subchannel_rho: Vec<f64>,
}

impl WidebandConfig {
    /// `link` describes the whole band: its bandwidth is `N * B_c` and its
    /// power is the total budget shared by the subchannels.
    pub fn new(
        link: LinkConfig,
        num_subchannels: usize,
        per_subchannel_variances: Vec<f64>,
        per_subchannel_powers: Vec<f64>,
        per_subchannel_rho: Vec<f64>,
    ) -> Result<Self> {
        let n = num_subchannels;
        if n == 0 {
            return domain("at least one subchannel is required");
        }
        if per_subchannel_variances.len() != n || per_subchannel_powers.len() != n || per_subchannel_rho.len() != n {
            return domain(format!("per-subchannel vectors must all have length {n}"));
        }
        if per_subchannel_variances.iter().any(|&g| !(g > 0.0 && g.is_finite())) {
            return domain("subchannel fading variances must be finite and positive");
        }
        if per_subchannel_powers.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
            return domain("subchannel powers must be finite and nonnegative");
        }
        if per_subchannel_rho.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return domain("subchannel training fractions must lie in [0, 1]");
        }
        let total: f64 = per_subchannel_powers.iter().sum();
        if total > link.avg_power_w() * (1.0 + 1e-12) {
            return domain(format!(
                "subchannel powers sum to {total}, above the budget {}",
                link.avg_power_w()
            ));
        }
        let bc = link.bandwidth_hz() / n as f64;
        if bc * link.frame_duration_s() <= 2.0 {
            return domain(format!(
                "each subchannel needs more than 2 symbols per frame, T*B_c = {}",
                bc * link.frame_duration_s()
            ));
        }
        Ok(WidebandConfig {
            link,
            num_subchannels: n,
            per_subchannel_variances,
            per_subchannel_powers,
            per_subchannel_rho,
        })
    }

    /// i.i.d. subchannels with the link's fading variance, power split evenly,
    /// and a common training fraction.
    pub fn uniform(link: LinkConfig, num_subchannels: usize, rho: f64) -> Result<Self> {
        let n = num_subchannels.max(1);
        WidebandConfig::new(
            link,
            num_subchannels,
            vec![link.fading_variance(); n],
            vec![link.avg_power_w() / n as f64; n],
            vec![rho; n],
        )
    }

    pub fn link(&self) -> &LinkConfig {
        &self.link
    }

    pub fn num_subchannels(&self) -> usize {
        self.num_subchannels
    }

    pub fn coherence_bandwidth_hz(&self) -> f64 {
        self.link.bandwidth_hz() / self.num_subchannels as f64
    }

    pub fn per_subchannel_variances(&self) -> &[f64] {
        &self.per_subchannel_variances
    }

    pub fn per_subchannel_powers(&self) -> &[f64] {
        &self.per_subchannel_powers
    }

    pub fn per_subchannel_rho(&self) -> &[f64] {
        &self.per_subchannel_rho
    }

    /// Flat link seen by subchannel `k`, or `None` when it carries no power.
    pub fn subchannel_link(&self, k: usize) -> Option<LinkConfig> {
        let p = self.per_subchannel_powers[k];
        if p == 0.0 {
            return None;
        }
        LinkConfig::new(
            self.link.frame_duration_s(),
            self.coherence_bandwidth_hz(),
            self.link.noise_psd(),
            p,
            self.per_subchannel_variances[k],
        )
        .ok()
    }

    fn is_iid_uniform(&self) -> bool {
        fn all_equal(v: &[f64]) -> bool {
            v.iter().all(|&x| (x - v[0]).abs() <= 1e-12 * v[0].abs())
        }
        all_equal(&self.per_subchannel_variances)
            && all_equal(&self.per_subchannel_powers)
            && all_equal(&self.per_subchannel_rho)
    }
}

/// Outage threshold of every subchannel at fixed rate `rate_bps`; infinite
/// for subchannels that cannot carry any positive rate.
fn subchannel_thresholds(wcfg: &WidebandConfig, rate_bps: f64) -> Result<Vec<f64>> {
    (0..wcfg.num_subchannels)
        .map(|k| {
            if rate_bps == 0.0 {
                return Ok(0.0);
            }
            let Some(sub) = wcfg.subchannel_link(k) else {
                return Ok(f64::INFINITY);
            };
            let snr_eff = effective_snr(&sub, wcfg.per_subchannel_rho[k])?.effective_snr;
            if snr_eff == 0.0 {
                return Ok(f64::INFINITY);
            }
            outage_threshold(&sub, rate_bps, snr_eff)
        })
        .collect()
}

/// ON probability of every subchannel at fixed rate `rate_bps`.
pub fn subchannel_on_probabilities(wcfg: &WidebandConfig, rate_bps: f64) -> Result<Vec<f64>> {
    Ok(subchannel_thresholds(wcfg, rate_bps)?
        .into_iter()
        .map(on_probability)
        .collect())
}

/// Distribution of the number of successes among independent Bernoulli trials.
pub fn poisson_binomial(success: &[f64]) -> Vec<f64> {
    let failure: Vec<f64> = success.iter().map(|p| 1.0 - p).collect();
    poisson_binomial_split(success, &failure)
}

// Failure probabilities passed separately so they keep full relative precision near zero.
fn poisson_binomial_split(success: &[f64], failure: &[f64]) -> Vec<f64> {
    let mut dist = vec![0.0; success.len() + 1];
    dist[0] = 1.0;
    for (i, (&p, &q)) in success.iter().zip(failure).enumerate() {
        for j in (1..=i + 1).rev() {
            dist[j] = dist[j] * q + dist[j - 1] * p;
        }
        dist[0] *= q;
    }
    dist
}

/// `C(n, j) p^j (1-p)^{n-j}` for `j = 0..=n`.
pub fn binomial_probabilities(n: usize, p: f64) -> Vec<f64> {
    let mut coeff = 1.0;
    (0..=n)
        .map(|j| {
            if j > 0 {
                coeff *= (n - j + 1) as f64 / j as f64;
            }
            coeff * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32)
        })
        .collect()
}

/// State probabilities `p_1..p_{N+1}`; entry `j` is the probability that
/// exactly `j` subchannels are ON. They do not depend on the previous state.
pub fn transition_probabilities(wcfg: &WidebandConfig, rate_bps: f64) -> Result<Vec<f64>> {
    if !(rate_bps >= 0.0 && rate_bps.is_finite()) {
        return domain(format!("rate must be finite and nonnegative, got {rate_bps}"));
    }
    let alphas = subchannel_thresholds(wcfg, rate_bps)?;
    let on: Vec<f64> = alphas.iter().map(|&a| on_probability(a)).collect();
    let off: Vec<f64> = alphas.iter().map(|&a| -(-a).exp_m1()).collect();
    Ok(poisson_binomial_split(&on, &off))
}

/// Effective capacity of the `N + 1`-state service process, normalized by
/// the total bandwidth `N * B_c`.
pub fn effective_capacity_wideband(wcfg: &WidebandConfig, qos: &QosSpec, rate_bps: f64) -> Result<f64> {
    let theta = qos.theta();
    if !(theta > 0.0) {
        return domain("wideband effective capacity requires theta > 0");
    }
    let probs = transition_probabilities(wcfg, rate_bps)?;
    let per_level = theta * rate_bps * wcfg.link.frame_duration_s();
    // sum_j p_j e^{-theta j r T} - 1, accumulated without forming the near-unity sum
    let shortfall: f64 = probs
        .iter()
        .enumerate()
        .map(|(j, &p)| p * (-per_level * j as f64).exp_m1())
        .sum();
    let log_arg = if shortfall > -0.5 {
        shortfall.ln_1p()
    } else {
        probs
            .iter()
            .enumerate()
            .map(|(j, &p)| p * (-per_level * j as f64).exp())
            .sum::<f64>()
            .ln()
    };
    Ok(-log_arg / (theta * wcfg.link.symbols_per_frame()))
}

/// Joint optimum for i.i.d. subchannels with uniform power and training,
/// computed on one subchannel of bandwidth `B_c` and power `P / N`.
pub fn optimize_wideband_iid(wcfg: &WidebandConfig, qos: &QosSpec) -> Result<EffCapResult> {
    if !wcfg.is_iid_uniform() {
        return domain("closed reduction needs identical variances, powers and training fractions");
    }
    let sub = wcfg
        .subchannel_link(0)
        .ok_or_else(|| Error::Domain("subchannels carry no power".into()))?;
    spectral_efficiency(&sub, qos)
}

/// Closed-form wideband limits for a bounded number of subchannels as the
/// coherence bandwidth grows, with the intermediate constants of the
/// small-`1/B_c` expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidebandAsymptotics {
    /// Limiting effective-SNR slope: `snr_eff_opt = phi z + omega z^2 + o(z^2)`, `z = 1/B_c`.
    pub phi: f64,
    pub omega: f64,
    pub delta: f64,
    pub alpha_star: f64,
    pub r_star: f64,
    pub xi: f64,
    /// Minimum bit energy, linear scale.
    pub ebn0_min: f64,
    pub wideband_slope: f64,
    pub rho_star: f64,
    /// Derivative of the optimal training fraction in `1/B_c` at zero.
    pub rho_dot: f64,
}

impl WidebandAsymptotics {
    pub fn ebn0_min_db(&self) -> f64 {
        to_db(self.ebn0_min)
    }
}

struct ExpansionTerms {
    a: f64, // N N0 / (gamma P T)
    rho_star: f64,
    rho_dot: f64,
    phi: f64,
    omega: f64,
}

fn expansion_terms(t: f64, x: f64, gamma: f64) -> ExpansionTerms {
    let a = 1.0 / (gamma * x * t);
    let gap = (1.0 + a).sqrt() - a.sqrt();
    let rho_star = (a * (1.0 + a)).sqrt() - a;
    let rho_dot = (1.0 + 1.0 / a).sqrt() * gap * gap / (2.0 * t);
    let phi = gamma * x * gap * gap;
    let omega = -(gamma * x / t) * gap * gap * ((1.0 + 1.0 / a).sqrt() - 2.0);
    ExpansionTerms {
        a,
        rho_star,
        rho_dot,
        phi,
        omega,
    }
}

/// The unsimplified expressions for `phi` and `omega` in terms of
/// `rho_star` and `rho_dot`.
pub fn expansion_constants_unsimplified(t: f64, power_over_nn0: f64, gamma: f64) -> (f64, f64) {
    let ExpansionTerms {
        rho_star: rs,
        rho_dot: rd,
        ..
    } = expansion_terms(t, power_over_nn0, gamma);
    let gx = gamma * power_over_nn0;
    let d = 1.0 + rs * gx * t;
    let scale = gx * gx * t / d;
    let phi = rs * (1.0 - rs) * scale;
    let omega = scale * (rd * (1.0 - 2.0 * rs) - ((1.0 - 2.0 * rs) * gx + rd * gx * t - 1.0 / t) / d * rs * (1.0 - rs));
    (phi, omega)
}

/// Minimum bit energy and wideband slope for sparse multipath with a bounded
/// number `n` of subchannels. `power_over_nn0` is `P / (N N0)`.
///
/// `theta = 0` uses the analytic limits `alpha* = 1`,
/// `E_b/N0_min = (P/NN0) e ln2 / phi` and `S0 = phi / (e (K + phi/2))`.
pub fn asymptotics_sparse_bounded(
    theta: f64,
    t: f64,
    n: usize,
    power_over_nn0: f64,
    gamma: f64,
) -> Result<WidebandAsymptotics> {
    if !(theta >= 0.0 && theta.is_finite()) {
        return domain(format!("theta must be finite and nonnegative, got {theta}"));
    }
    for (name, v) in [("T", t), ("P/NN0", power_over_nn0), ("gamma", gamma)] {
        if !(v > 0.0 && v.is_finite()) {
            return domain(format!("{name} must be finite and positive, got {v}"));
        }
    }
    if n == 0 {
        return domain("number of subchannels must be positive");
    }
    let x = power_over_nn0;
    let terms = expansion_terms(t, x, gamma);
    let phi = terms.phi;
    // (1/T)(sqrt(1 + gamma P T / NN0) - 1), equal to 1/T - omega/phi
    let k = ((1.0 + 1.0 / terms.a).sqrt() - 1.0) / t;

    let (alpha_star, xi, ebn0_min, wideband_slope, delta) = if theta == 0.0 {
        let alpha = 1.0;
        let slope = phi / (E * (k + phi * alpha / 2.0));
        (alpha, 1.0, x * E * LN_2 / phi, slope, 0.0)
    } else {
        let u = theta * t * phi / LN_2;
        let alpha = u.ln_1p() / u;
        let one_minus_xi = (-alpha).exp() * -(-u * alpha).exp_m1();
        let xi = 1.0 - one_minus_xi;
        let ln_xi = (-one_minus_xi).ln_1p();
        let delta = theta * t * x / LN_2;
        let ebn0 = -delta * LN_2 / ln_xi;
        let slope = xi * ln_xi * ln_xi * LN_2 / (theta * t * alpha * one_minus_xi * (k + phi * alpha / 2.0));
        (alpha, xi, ebn0, slope, delta)
    };

    Ok(WidebandAsymptotics {
        phi,
        omega: terms.omega,
        delta,
        alpha_star,
        r_star: phi * alpha_star / LN_2,
        xi,
        ebn0_min,
        wideband_slope,
        rho_star: terms.rho_star,
        rho_dot: terms.rho_dot,
    })
}

/// Residual of the limiting rate-optimality condition
/// `(ln2/phi)(1 - e^{-theta T phi alpha*/ln2}) - theta T e^{-theta T r*}`.
pub fn limiting_optimality_residual(asym: &WidebandAsymptotics, theta: f64, t: f64) -> f64 {
    let u = theta * t * asym.phi * asym.alpha_star / LN_2;
    (LN_2 / asym.phi) * -(-u).exp_m1() - theta * t * (-theta * t * asym.r_star).exp()
}

/// One point of a wideband bit-energy curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidebandPoint {
    pub bandwidth_hz: f64,
    pub num_subchannels: usize,
    pub coherence_bandwidth_hz: f64,
    pub snr: f64,
    pub spectral_efficiency: f64,
    pub ebn0_db: f64,
}

/// Evaluates the i.i.d. optimum for `n` subchannels of bandwidth `bc`, each
/// with `P / (N N0) = power_over_nn0` and unit noise density.
pub fn wideband_point(
    qos: &QosSpec,
    t: f64,
    n: usize,
    bc: f64,
    power_over_nn0: f64,
    gamma: f64,
) -> Result<WidebandPoint> {
    let link = LinkConfig::new(t, n as f64 * bc, 1.0, power_over_nn0 * n as f64, gamma)?;
    let wcfg = WidebandConfig::uniform(link, n, 0.5)?;
    let se = optimize_wideband_iid(&wcfg, qos)?.spectral_efficiency;
    let snr = power_over_nn0 / bc;
    let ebn0_db = if se > 0.0 { to_db(snr / se) } else { f64::INFINITY };
    Ok(WidebandPoint {
        bandwidth_hz: n as f64 * bc,
        num_subchannels: n,
        coherence_bandwidth_hz: bc,
        snr,
        spectral_efficiency: se,
        ebn0_db,
    })
}

/// Numeric estimate of the wideband limits along a coherence-bandwidth grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericAsymptote {
    pub ebn0_min_db: f64,
    pub wideband_slope: f64,
    /// Max minus min of the bit energy (dB) over the last decade of the grid.
    pub last_decade_spread_db: f64,
    /// False when the last-decade spread exceeds 0.05 dB.
    pub converged: bool,
    pub curve: Vec<WidebandPoint>,
}

/// Largest-minus-earliest bit energy change over the final decade of an
/// ascending bandwidth curve, together with its max-min spread.
pub fn last_decade_change_db(curve: &[WidebandPoint]) -> (f64, f64) {
    let Some(last) = curve.last() else {
        return (0.0, 0.0);
    };
    let floor = last.bandwidth_hz / 10.0 * (1.0 - 1e-12);
    let tail: Vec<f64> = curve
        .iter()
        .filter(|p| p.bandwidth_hz >= floor)
        .map(|p| p.ebn0_db)
        .collect();
    let max = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    (last.ebn0_db - tail[0], max - min)
}

/// Estimates the minimum bit energy and wideband slope by evaluating the
/// i.i.d. optimum along `bc_grid` (ascending, spanning at least 3 decades).
///
/// With `z = 1/B_c`, `R(z)/z` is linear to first order; the two smallest-`z`
/// points give `R'(0)` and `R''(0)`, from which the bit energy at zero
/// spectral efficiency and the slope follow.
pub fn asymptotics_numeric_check(
    theta: f64,
    t: f64,
    n: usize,
    power_over_nn0: f64,
    gamma: f64,
    bc_grid: &[f64],
) -> Result<NumericAsymptote> {
    if bc_grid.len() < 2 || bc_grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("coherence-bandwidth grid must be strictly ascending with at least 2 points");
    }
    if bc_grid[bc_grid.len() - 1] / bc_grid[0] < 1e3 * (1.0 - 1e-12) {
        return domain("coherence-bandwidth grid must span at least 3 decades");
    }
    let qos = QosSpec::new(theta)?;
    let curve = bc_grid
        .iter()
        .map(|&bc| wideband_point(&qos, t, n, bc, power_over_nn0, gamma))
        .collect::<Result<Vec<_>>>()?;

    let m = curve.len();
    let (z1, g1) = (
        1.0 / curve[m - 1].coherence_bandwidth_hz,
        curve[m - 1].spectral_efficiency * curve[m - 1].coherence_bandwidth_hz,
    );
    let (z2, g2) = (
        1.0 / curve[m - 2].coherence_bandwidth_hz,
        curve[m - 2].spectral_efficiency * curve[m - 2].coherence_bandwidth_hz,
    );
    let half_second = (g2 - g1) / (z2 - z1);
    let first = g1 - half_second * z1;
    // derivatives in SNR = (P/NN0) z
    let (ebn0, slope) = tradeoff_from_derivatives(
        first / power_over_nn0,
        2.0 * half_second / (power_over_nn0 * power_over_nn0),
    );
    let (_, spread) = last_decade_change_db(&curve);
    Ok(NumericAsymptote {
        ebn0_min_db: to_db(ebn0),
        wideband_slope: slope,
        last_decade_spread_db: spread,
        converged: spread <= 0.05,
        curve,
    })
}

/// How the number of resolvable paths (hence subchannels) scales with bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthLaw {
    Bounded,
    Linear,
    Sublinear { exponent: f64 },
}

impl GrowthLaw {
    pub fn exponent(&self) -> f64 {
        match *self {
            GrowthLaw::Bounded => 0.0,
            GrowthLaw::Linear => 1.0,
            GrowthLaw::Sublinear { exponent } => exponent,
        }
    }

    /// `N(B) = round(n_ref (B / b_ref)^exponent)`, at least one.
    pub fn subchannels(&self, n_ref: usize, b_ref: f64, bandwidth_hz: f64) -> usize {
        let n = n_ref as f64 * (bandwidth_hz / b_ref).powf(self.exponent());
        (n.round() as usize).max(1)
    }
}

impl fmt::Display for GrowthLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthLaw::Bounded => write!(f, "bounded"),
            GrowthLaw::Linear => write!(f, "linear"),
            GrowthLaw::Sublinear { exponent } => write!(f, "sublinear:{exponent}"),
        }
    }
}

impl FromStr for GrowthLaw {
    type Err = Error;

    /// Accepts `bounded`, `linear` and `sublinear:<exponent>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let law = match s {
            "bounded" => GrowthLaw::Bounded,
            "linear" => GrowthLaw::Linear,
            _ => match s.strip_prefix("sublinear:") {
                Some(e) => GrowthLaw::Sublinear {
                    exponent: e
                        .trim()
                        .parse()
                        .map_err(|_| Error::Domain(format!("bad growth exponent in '{s}'")))?,
                },
                None => return domain(format!("unknown growth law '{s}'")),
            },
        };
        classify_scenario(law)?;
        Ok(law)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Paths grow linearly with bandwidth; bit energy diverges.
    Rich,
    /// Bounded number of paths; bit energy converges to a finite minimum.
    SparseBounded,
    /// Paths grow sublinearly; bit energy diverges.
    SparseUnbounded,
}

impl Scenario {
    pub fn has_finite_minimum(&self) -> bool {
        matches!(self, Scenario::SparseBounded)
    }
}

pub fn classify_scenario(law: GrowthLaw) -> Result<Scenario> {
    match law {
        GrowthLaw::Bounded => Ok(Scenario::SparseBounded),
        GrowthLaw::Linear => Ok(Scenario::Rich),
        GrowthLaw::Sublinear { exponent } if exponent > 0.0 && exponent < 1.0 => Ok(Scenario::SparseUnbounded),
        GrowthLaw::Sublinear { exponent } => domain(format!("sublinear exponent must lie in (0, 1), got {exponent}")),
    }
}

/// Bit-energy curve along a total-bandwidth grid with `N` following `law`.
/// The total power satisfies `P / N0 = power_over_n0`.
#[allow(clippy::too_many_arguments)]
pub fn bit_energy_along_growth(
    law: GrowthLaw,
    qos: &QosSpec,
    t: f64,
    gamma: f64,
    power_over_n0: f64,
    n_ref: usize,
    b_ref: f64,
    bandwidth_grid: &[f64],
) -> Result<Vec<WidebandPoint>> {
    classify_scenario(law)?;
    bandwidth_grid
        .iter()
        .map(|&b| {
            let n = law.subchannels(n_ref, b_ref, b);
            wideband_point(qos, t, n, b / n as f64, power_over_n0 / n as f64, gamma)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link(b: f64, p: f64) -> LinkConfig {
        LinkConfig::new(2e-3, b, 1.0, p, 1.0).unwrap()
    }

    #[test]
    fn single_subchannel_is_two_state() {
        let w = WidebandConfig::uniform(link(1e5, 1e4), 1, 0.3).unwrap();
        let r = 500.0;
        let p = transition_probabilities(&w, r).unwrap();
        let sub = w.subchannel_link(0).unwrap();
        let snr_eff = effective_snr(&sub, 0.3).unwrap().effective_snr;
        let p_on = (-outage_threshold(&sub, r, snr_eff).unwrap()).exp();
        assert!((p[1] - p_on).abs() < 1e-15);
        assert!((p[0] - (1.0 - p_on)).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        let l = link(1e5, 1.0);
        assert!(WidebandConfig::new(l, 2, vec![1.0; 2], vec![0.6, 0.6], vec![0.5; 2]).is_err());
        assert!(WidebandConfig::new(l, 2, vec![1.0; 3], vec![0.5; 2], vec![0.5; 2]).is_err());
        assert!(WidebandConfig::new(l, 0, vec![], vec![], vec![]).is_err());
        // T * B_c = 2e-3 * 1e3 = 2
        assert!(WidebandConfig::uniform(link(1e5, 1.0), 100, 0.5).is_err());
        let w = WidebandConfig::new(l, 2, vec![1.0, 2.0], vec![0.5, 0.0], vec![0.5, 0.5]).unwrap();
        assert_eq!(subchannel_on_probabilities(&w, 10.0).unwrap()[1], 0.0);
    }

    #[test]
    fn binomial_matches_dp() {
        let p = 0.37;
        let dp = poisson_binomial(&[p; 20]);
        let bin = binomial_probabilities(20, p);
        for (a, b) in dp.iter().zip(&bin) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rate_to_infinity_gives_zero() {
        let w = WidebandConfig::uniform(link(4e5, 1e4), 4, 0.4).unwrap();
        let q = QosSpec::new(0.01).unwrap();
        let r = effective_capacity_wideband(&w, &q, 1e9).unwrap();
        assert!(r.abs() < 1e-12);
        assert!(effective_capacity_wideband(&w, &QosSpec::new(0.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn non_iid_is_rejected_by_reduction() {
        let l = link(2e5, 2.0);
        let w = WidebandConfig::new(l, 2, vec![1.0, 2.0], vec![1.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert!(optimize_wideband_iid(&w, &QosSpec::new(0.1).unwrap()).is_err());
    }

    #[test]
    fn theta_zero_limit_constants() {
        let a = asymptotics_sparse_bounded(0.0, 2e-3, 1, 1e4, 1.0).unwrap();
        assert_eq!(a.alpha_star, 1.0);
        assert!((a.ebn0_min_db() - 4.6776).abs() < 5e-3);
        let small = asymptotics_sparse_bounded(1e-9, 2e-3, 1, 1e4, 1.0).unwrap();
        assert!((small.alpha_star - 1.0).abs() < 1e-5);
        assert!((small.ebn0_min_db() - a.ebn0_min_db()).abs() < 1e-4);
        assert!((small.wideband_slope - a.wideband_slope).abs() < 1e-4);
    }

    #[test]
    fn simplified_forms_match_unsimplified() {
        for x in [1e2, 1e4, 1e6] {
            let a = asymptotics_sparse_bounded(0.01, 2e-3, 1, x, 1.0).unwrap();
            let (phi, omega) = expansion_constants_unsimplified(2e-3, x, 1.0);
            assert!((phi - a.phi).abs() / a.phi < 1e-10);
            assert!((omega - a.omega).abs() / a.omega.abs() < 1e-8, "{omega} vs {}", a.omega);
            let k = ((1.0 + 2e-3 * x).sqrt() - 1.0) / 2e-3;
            assert!((k - (1.0 / 2e-3 - a.omega / a.phi)).abs() / k < 1e-10);
        }
    }

    #[test]
    fn rho_dot_matches_closed_form_derivative() {
        use crate::training::rho_opt_closed_form;
        let x = 1e4;
        let a = asymptotics_sparse_bounded(0.01, 2e-3, 1, x, 1.0).unwrap();
        let rho = |z: f64| rho_opt_closed_form(&LinkConfig::from_snr(2e-3, 1.0 / z, 1.0, x * z).unwrap()).rho_opt;
        let h = 1e-9;
        let deriv = (rho(2.0 * h) - rho(h)) / h;
        assert!((deriv - a.rho_dot).abs() / a.rho_dot < 1e-3, "{deriv} vs {}", a.rho_dot);
    }

    #[test]
    fn growth_law_parsing_and_classification() {
        assert_eq!("bounded".parse::<GrowthLaw>().unwrap(), GrowthLaw::Bounded);
        assert_eq!(classify_scenario("linear".parse().unwrap()).unwrap(), Scenario::Rich);
        let s = "sublinear:0.5".parse::<GrowthLaw>().unwrap();
        assert_eq!(classify_scenario(s).unwrap(), Scenario::SparseUnbounded);
        assert!("sublinear:1.5".parse::<GrowthLaw>().is_err());
        assert!("quadratic".parse::<GrowthLaw>().is_err());
        assert!(Scenario::SparseBounded.has_finite_minimum());
        assert!(!Scenario::Rich.has_finite_minimum());
        assert_eq!(GrowthLaw::Sublinear { exponent: 0.5 }.subchannels(1, 1e6, 1e8), 10);
        assert_eq!(GrowthLaw::Bounded.subchannels(3, 1e6, 1e8), 3);
    }
}
