//! Monte Carlo check of the queueing interpretation of effective capacity.
//!
//! A buffer is fed a constant number of bits per frame and drained by the
//! ON-OFF channel operating at the optimal fixed rate. Frames are independent
//! under block fading, so the service sequence is i.i.d. Bernoulli. The tail
//! of the stationary queue length should decay as `exp(-theta q)` when the
//! arrival rate equals the effective capacity at `theta`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::effcap::{spectral_efficiency, EffCapResult, QosSpec};
use crate::error::{domain, Error, Result};
use crate::link_model::LinkConfig;

/// Identifier of the pseudo-random generator, recorded in reports.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Queue lengths above this many bits abort the run.
pub const QUEUE_LIMIT_BITS: f64 = 1e15;

/// Minimum run length accepted for tail estimation.
pub const MIN_TAIL_FRAMES: u64 = 1_000_000;

const MIN_EXCEEDANCES: usize = 50;
const FIT_LEVELS: usize = 32;
const BOOTSTRAP_BLOCKS: usize = 500;
const BOOTSTRAP_RESAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSpec {
    pub cfg: LinkConfig,
    pub qos: QosSpec,
    pub frames: u64,
    pub seed: u64,
    /// Fraction of the effective-capacity arrival rate actually offered, in (0, 1].
    pub arrival_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    /// Fitted decay rate of `P(Q >= q)`, 1/bits.
    pub theta_hat: f64,
    pub fit_range_bits: (f64, f64),
    /// Half-width of the 95% block-bootstrap percentile interval.
    pub ci_halfwidth: f64,
    pub ci: (f64, f64),
    /// Number of frames with `Q >= q_lo`.
    pub samples_in_tail: usize,
}

/// Per-frame arrival and service of the simulated buffer, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueModel {
    pub arrival_bits: f64,
    pub service_bits: f64,
    pub on_probability: f64,
}

impl QueueModel {
    /// Arrivals at `arrival_margin * R_E * T * B` bits per frame; service
    /// `r_opt * T` bits with probability `exp(-alpha_opt)`.
    pub fn from_spec(spec: &SimSpec) -> Result<(Self, EffCapResult)> {
        if !(spec.arrival_margin > 0.0 && spec.arrival_margin <= 1.0) {
            return domain(format!(
                "arrival margin must lie in (0, 1], got {}",
                spec.arrival_margin
            ));
        }
        let opt = spectral_efficiency(&spec.cfg, &spec.qos)?;
        if !(opt.spectral_efficiency > 0.0) {
            return domain("effective capacity is zero; nothing can be offered");
        }
        let model = QueueModel {
            arrival_bits: spec.arrival_margin * opt.spectral_efficiency * spec.cfg.symbols_per_frame(),
            service_bits: opt.rate_opt_bps * spec.cfg.frame_duration_s(),
            on_probability: opt.on_probability,
        };
        Ok((model, opt))
    }

    pub fn check_stationary(&self) -> Result<()> {
        let mean_service = self.on_probability * self.service_bits;
        if self.arrival_bits >= mean_service {
            return Err(Error::Degenerate(format!(
                "arrivals {} bits/frame reach the mean service {mean_service} bits/frame",
                self.arrival_bits
            )));
        }
        Ok(())
    }

    /// Lindley recursion `Q_{n+1} = max(Q_n + a - s_n, 0)` from an empty
    /// buffer, where `s_n` is the service of frame `n` (zero when OFF).
    pub fn lindley_path<I: IntoIterator<Item = bool>>(&self, trace: I) -> Result<Vec<f64>> {
        let mut q = 0.0f64;
        let mut path = Vec::new();
        for (frame, on) in trace.into_iter().enumerate() {
            let served = if on { self.service_bits } else { 0.0 };
            q = (q + self.arrival_bits - served).max(0.0);
            if q > QUEUE_LIMIT_BITS {
                return Err(Error::QueueOverflow {
                    frame: frame as u64,
                    limit: QUEUE_LIMIT_BITS,
                });
            }
            path.push(q);
        }
        Ok(path)
    }
}

/// i.i.d. ON/OFF frame states drawn from a seeded generator.
pub struct OnOffChannel {
    rng: ChaCha8Rng,
    on_probability: f64,
}

impl OnOffChannel {
    pub fn new(on_probability: f64, seed: u64) -> Self {
        OnOffChannel {
            rng: ChaCha8Rng::seed_from_u64(seed),
            on_probability,
        }
    }
}

impl Iterator for OnOffChannel {
    type Item = bool;

    fn next(&mut self) -> Option<bool> {
        Some(self.rng.random::<f64>() < self.on_probability)
    }
}

/// ON/OFF states of `frames` consecutive frames at the optimal rate for `qos`.
pub fn on_off_trace(cfg: &LinkConfig, qos: &QosSpec, frames: u64, seed: u64) -> Result<Vec<bool>> {
    let opt = spectral_efficiency(cfg, qos)?;
    Ok(OnOffChannel::new(opt.on_probability, seed)
        .take(frames as usize)
        .collect())
}

/// Simulates the buffer and fits the exponential decay of its length tail.
pub fn simulate_queue(spec: &SimSpec) -> Result<TailEstimate> {
    if spec.frames < MIN_TAIL_FRAMES {
        return domain(format!(
            "tail estimation needs at least {MIN_TAIL_FRAMES} frames, got {}",
            spec.frames
        ));
    }
    let (model, _) = QueueModel::from_spec(spec)?;
    model.check_stationary()?;
    let trace = OnOffChannel::new(model.on_probability, spec.seed).take(spec.frames as usize);
    let path = model.lindley_path(trace)?;
    estimate_tail(&path, spec.seed)
}

/// Least-squares fit of `ln P(Q >= q)` against `q` over `[q_lo, q_hi]`, where
/// `q_lo` is the smallest observed value above the 90th percentile and `q_hi`
/// the largest value with at least 50 exceedances. The confidence interval
/// comes from resampling contiguous blocks of the path.
pub fn estimate_tail(path: &[f64], seed: u64) -> Result<TailEstimate> {
    let n = path.len();
    if n == 0 || path.iter().all(|&q| q == 0.0) {
        return Err(Error::Degenerate("queue is identically empty".into()));
    }
    let mut sorted = path.to_vec();
    sorted.sort_by(f64::total_cmp);
    let p90 = sorted[(n * 9) / 10];
    let lo_idx = sorted.partition_point(|&q| q <= p90);
    let samples_in_tail = n - lo_idx;
    if samples_in_tail < MIN_EXCEEDANCES {
        return Err(Error::InsufficientTail(format!(
            "{samples_in_tail} samples above the 90th percentile, need {MIN_EXCEEDANCES}"
        )));
    }
    let q_lo = sorted[lo_idx];
    let q_hi = sorted[n - MIN_EXCEEDANCES];
    if q_hi <= q_lo {
        return Err(Error::InsufficientTail(format!(
            "fit range is empty: q_lo = {q_lo}, q_hi = {q_hi}"
        )));
    }

    let step = (q_hi - q_lo) / (FIT_LEVELS - 1) as f64;
    let levels: Vec<f64> = (0..FIT_LEVELS).map(|k| q_lo + step * k as f64).collect();

    let blocks = BOOTSTRAP_BLOCKS.min(n);
    let block_len = n.div_ceil(blocks);
    let mut block_counts = Vec::with_capacity(blocks);
    let mut block_sizes = Vec::with_capacity(blocks);
    for chunk in path.chunks(block_len) {
        // hist[m]: values with exactly m levels at or below them
        let mut hist = vec![0u64; FIT_LEVELS + 1];
        for &q in chunk {
            hist[levels.partition_point(|&l| l <= q)] += 1;
        }
        let mut counts = vec![0u64; FIT_LEVELS];
        let mut acc = 0;
        for k in (0..FIT_LEVELS).rev() {
            acc += hist[k + 1];
            counts[k] = acc;
        }
        block_counts.push(counts);
        block_sizes.push(chunk.len() as u64);
    }

    let total: Vec<u64> = (0..FIT_LEVELS)
        .map(|k| block_counts.iter().map(|c| c[k]).sum())
        .collect();
    let theta_hat = fit_decay(&levels, &total, n as u64)
        .ok_or_else(|| Error::InsufficientTail("too few populated fit levels".into()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let nb = block_counts.len();
    let mut replicates = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let mut sums = vec![0u64; FIT_LEVELS];
    for _ in 0..BOOTSTRAP_RESAMPLES {
        sums.iter_mut().for_each(|s| *s = 0);
        let mut frames = 0;
        for _ in 0..nb {
            let b = rng.random_range(0..nb);
            frames += block_sizes[b];
            for (s, c) in sums.iter_mut().zip(&block_counts[b]) {
                *s += c;
            }
        }
        if let Some(t) = fit_decay(&levels, &sums, frames) {
            replicates.push(t);
        }
    }
    replicates.sort_by(f64::total_cmp);
    let (ci_lo, ci_hi) = if replicates.is_empty() {
        (theta_hat, theta_hat)
    } else {
        let at = |p: f64| replicates[((replicates.len() - 1) as f64 * p).round() as usize];
        (at(0.025), at(0.975))
    };

    Ok(TailEstimate {
        theta_hat,
        fit_range_bits: (q_lo, q_hi),
        ci_halfwidth: 0.5 * (ci_hi - ci_lo),
        ci: (ci_lo, ci_hi),
        samples_in_tail,
    })
}

/// Negative least-squares slope of `ln(count / frames)` on the level, using
/// levels with a nonzero count. `None` with fewer than 3 such levels.
fn fit_decay(levels: &[f64], counts: &[u64], frames: u64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = levels
        .iter()
        .zip(counts)
        .filter(|(_, &c)| c > 0)
        .map(|(&q, &c)| (q, (c as f64 / frames as f64).ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(-sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lindley_hand_computed_path() {
        let m = QueueModel {
            arrival_bits: 3.0,
            service_bits: 5.0,
            on_probability: 0.5,
        };
        let trace = [false, false, true, false, true, true, true, false, false, true];
        let path = m.lindley_path(trace).unwrap();
        assert_eq!(path, vec![3.0, 6.0, 4.0, 7.0, 5.0, 3.0, 1.0, 4.0, 7.0, 5.0]);
    }

    #[test]
    fn overflow_is_reported() {
        let m = QueueModel {
            arrival_bits: 1e14,
            service_bits: 0.0,
            on_probability: 0.0,
        };
        let err = m.lindley_path(std::iter::repeat_n(false, 20)).unwrap_err();
        assert!(matches!(err, Error::QueueOverflow { frame: 10, .. }));
    }

    #[test]
    fn empty_queue_is_degenerate() {
        let m = QueueModel {
            arrival_bits: 0.0,
            service_bits: 5.0,
            on_probability: 0.5,
        };
        let path = m.lindley_path(OnOffChannel::new(0.5, 1).take(1000)).unwrap();
        assert!(path.iter().all(|&q| q == 0.0));
        assert!(matches!(estimate_tail(&path, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn overload_is_degenerate() {
        let m = QueueModel {
            arrival_bits: 3.0,
            service_bits: 5.0,
            on_probability: 0.5,
        };
        assert!(matches!(m.check_stationary(), Err(Error::Degenerate(_))));
    }

    #[test]
    fn channel_is_deterministic_per_seed() {
        let a: Vec<bool> = OnOffChannel::new(0.3, 42).take(1000).collect();
        let b: Vec<bool> = OnOffChannel::new(0.3, 42).take(1000).collect();
        let c: Vec<bool> = OnOffChannel::new(0.3, 43).take(1000).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(OnOffChannel::new(1.0, 7).take(1000).all(|on| on));
    }

    #[test]
    fn geometric_tail_is_recovered() {
        // i.i.d. exponential samples with rate 0.2 have log-ccdf slope -0.2
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let path: Vec<f64> = (0..200_000).map(|_| -(1.0 - rng.random::<f64>()).ln() / 0.2).collect();
        let est = estimate_tail(&path, 9).unwrap();
        assert!((est.theta_hat - 0.2).abs() < 0.01, "{est:?}");
        assert!(est.ci.0 <= est.theta_hat && est.theta_hat <= est.ci.1);
    }

    #[test]
    fn short_runs_are_rejected() {
        let spec = SimSpec {
            cfg: LinkConfig::from_snr(2e-3, 1e5, 1.0, 1.0).unwrap(),
            qos: QosSpec::new(0.01).unwrap(),
            frames: 1000,
            seed: 1,
            arrival_margin: 1.0,
        };
        assert!(simulate_queue(&spec).is_err());
        let bad = SimSpec {
            arrival_margin: 1.5,
            frames: MIN_TAIL_FRAMES,
            ..spec
        };
        assert!(simulate_queue(&bad).is_err());
    }
}
