//! Sweep jobs: argument resolution, grid evaluation and table assembly.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use rayon::prelude::*;

use effcap_core::effcap::{bit_energy, min_bit_energy_numeric, spectral_efficiency, to_db, QosSpec};
use effcap_core::queue_sim::{simulate_queue, QueueModel, SimSpec, RNG_ALGORITHM};
use effcap_core::training::rho_opt_closed_form;
use effcap_core::wideband::{asymptotics_sparse_bounded, bit_energy_along_growth, GrowthLaw};
use effcap_core::{Error, LinkConfig};

use crate::config::{RealList, Settings};
use crate::csv::{Cell, Table};
use crate::error::{invalid, CliResult};

pub const SEED_ENV: &str = "EFFCAP_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Log,
    Lin,
}

impl std::str::FromStr for Spacing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Spacing as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// `key = value` settings file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output CSV path [default: <job>.csv]
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads [default: available parallelism]
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Axis {
    /// Lower end of the swept axis
    #[arg(long)]
    pub min: Option<f64>,
    /// Upper end of the swept axis
    #[arg(long)]
    pub max: Option<f64>,
    /// Number of grid points (at least 2)
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub spacing: Option<Spacing>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Physical {
    /// Frame duration T in seconds
    #[arg(long)]
    pub frame_duration: Option<f64>,
    /// Fading power E|h|^2
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Job {
    /// Optimal training fraction against SNR
    RhoVsSnr {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        axis: Axis,
        #[command(flatten)]
        phys: Physical,
        /// Bandwidth(s) in Hz, comma-separated
        #[arg(long)]
        bandwidth: Option<RealList>,
    },
    /// Spectral efficiency against bit energy, one curve per theta and bandwidth
    SeVsEbn0 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        axis: Axis,
        #[command(flatten)]
        phys: Physical,
        #[arg(long)]
        bandwidth: Option<RealList>,
        /// QoS exponent(s) in 1/bit, comma-separated
        #[arg(long)]
        theta: Option<RealList>,
    },
    /// Bit energy against SNR, one curve per theta and bandwidth
    Ebn0VsSnr {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        axis: Axis,
        #[command(flatten)]
        phys: Physical,
        #[arg(long)]
        bandwidth: Option<RealList>,
        #[arg(long)]
        theta: Option<RealList>,
    },
    /// Minimum bit energy against bandwidth
    Ebn0minVsBandwidth {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        axis: Axis,
        #[command(flatten)]
        phys: Physical,
        #[arg(long)]
        theta: Option<RealList>,
        /// Smallest SNR of the search grid
        #[arg(long)]
        snr_min: Option<f64>,
        /// Largest SNR of the search grid
        #[arg(long)]
        snr_max: Option<f64>,
        /// Points of the logarithmic search grid
        #[arg(long)]
        snr_points: Option<usize>,
    },
    /// Wideband spectral efficiency against bit energy along a bandwidth axis
    WidebandSeVsEbn0 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        axis: Axis,
        #[command(flatten)]
        phys: Physical,
        #[arg(long)]
        theta: Option<RealList>,
        /// Subchannel growth: bounded, linear or sublinear:<exponent>
        #[arg(long)]
        growth: Option<GrowthLaw>,
        /// Subchannel count at the reference bandwidth
        #[arg(long)]
        n_ref: Option<usize>,
        /// Reference bandwidth in Hz
        #[arg(long)]
        b_ref: Option<f64>,
        /// P/(N N0) at the reference subchannel count
        #[arg(long)]
        power_over_nn0: Option<f64>,
    },
    /// Closed-form wideband minimum bit energy and slope per theta
    AsymptoticsTable {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        phys: Physical,
        #[arg(long)]
        theta: Option<RealList>,
        #[arg(long)]
        num_subchannels: Option<usize>,
        #[arg(long)]
        power_over_nn0: Option<f64>,
    },
    /// Simulated queue-tail decay against the target theta
    QueueValidate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        phys: Physical,
        #[arg(long)]
        bandwidth: Option<f64>,
        #[arg(long)]
        snr: Option<f64>,
        #[arg(long)]
        theta: Option<RealList>,
        /// Simulated frames per theta
        #[arg(long)]
        frames: Option<u64>,
        /// Offered fraction of the effective capacity, in (0, 1]
        #[arg(long)]
        margin: Option<f64>,
        /// Base seed [default: $EFFCAP_SEED, else 0]
        #[arg(long)]
        seed: Option<u64>,
    },
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::RhoVsSnr { .. } => "rho-vs-snr",
            Job::SeVsEbn0 { .. } => "se-vs-ebn0",
            Job::Ebn0VsSnr { .. } => "ebn0-vs-snr",
            Job::Ebn0minVsBandwidth { .. } => "ebn0min-vs-bandwidth",
            Job::WidebandSeVsEbn0 { .. } => "wideband-se-vs-ebn0",
            Job::AsymptoticsTable { .. } => "asymptotics-table",
            Job::QueueValidate { .. } => "queue-validate",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Job::RhoVsSnr { common, .. }
            | Job::SeVsEbn0 { common, .. }
            | Job::Ebn0VsSnr { common, .. }
            | Job::Ebn0minVsBandwidth { common, .. }
            | Job::WidebandSeVsEbn0 { common, .. }
            | Job::AsymptoticsTable { common, .. }
            | Job::QueueValidate { common, .. } => common,
        }
    }
}

/// Result of a job: the table, its seed (for stochastic jobs), the resolved
/// output path and human-readable summary lines.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub seed: Option<u64>,
    pub output: PathBuf,
    pub summary: Vec<String>,
}

impl Outcome {
    pub fn csv(&self, job: &str) -> CliResult<String> {
        self.table.render(job, self.seed)
    }
}

pub fn grid(min: f64, max: f64, points: usize, spacing: Spacing) -> CliResult<Vec<f64>> {
    if points < 2 {
        return invalid(format!("grid needs at least 2 points, got {points}"));
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return invalid(format!("grid bounds must be finite with min < max, got [{min}, {max}]"));
    }
    let last = (points - 1) as f64;
    Ok(match spacing {
        Spacing::Log => {
            if min <= 0.0 {
                return invalid(format!("logarithmic grid needs positive bounds, got min = {min}"));
            }
            let ratio = max / min;
            (0..points).map(|k| min * ratio.powf(k as f64 / last)).collect()
        }
        Spacing::Lin => (0..points).map(|k| min + (max - min) * k as f64 / last).collect(),
    })
}

fn resolve_axis(s: &mut Settings, axis: &Axis, defaults: (f64, f64, usize)) -> CliResult<Vec<f64>> {
    let min = s.pick("min", axis.min, Some(defaults.0))?;
    let max = s.pick("max", axis.max, Some(defaults.1))?;
    let points = s.pick("points", axis.points, Some(defaults.2))?;
    let spacing = s.pick("spacing", axis.spacing, Some(Spacing::Log))?;
    grid(min, max, points, spacing)
}

fn resolve_phys(s: &mut Settings, phys: &Physical) -> CliResult<(f64, f64)> {
    Ok((
        s.pick("frame-duration", phys.frame_duration, Some(2e-3))?,
        s.pick("gamma", phys.gamma, Some(1.0))?,
    ))
}

fn qos_list(thetas: &[f64]) -> CliResult<Vec<QosSpec>> {
    Ok(thetas.iter().map(|&t| QosSpec::new(t)).collect::<Result<_, _>>()?)
}

/// Evaluates `f` over `items` on the pool; rows stay in input order and the
/// first failing item (in input order) decides the error.
fn par_rows<T, R, F>(pool: &rayon::ThreadPool, items: &[T], f: F) -> CliResult<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> CliResult<R> + Sync + Send,
{
    let results: Vec<CliResult<R>> = pool.install(|| items.par_iter().map(&f).collect());
    results.into_iter().collect()
}

fn ebn0_db(cfg: &LinkConfig, qos: &QosSpec) -> CliResult<f64> {
    match bit_energy(cfg, qos) {
        Ok(eb) => Ok(to_db(eb)),
        Err(Error::InfiniteBitEnergy) => Ok(f64::INFINITY),
        Err(e) => Err(e.into()),
    }
}

pub fn run(job: &Job) -> CliResult<Outcome> {
    let common = job.common();
    let mut s = Settings::load(common.config.as_deref())?;
    let output = s.pick(
        "output",
        common.output.clone(),
        Some(PathBuf::from(format!("{}.csv", job.name()))),
    )?;
    let threads = s.pick_optional::<usize>("jobs", common.jobs)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return invalid("--jobs must be at least 1");
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| crate::error::CliError::Invalid(format!("cannot start worker pool: {e}")))?;

    let (table, seed, summary) = match job {
        Job::RhoVsSnr {
            axis, phys, bandwidth, ..
        } => {
            let (t, gamma) = resolve_phys(&mut s, phys)?;
            let bws = s.pick("bandwidth", bandwidth.clone(), Some(RealList(vec![1e7])))?.0;
            let snrs = resolve_axis(&mut s, axis, (1e-8, 1e6, 141))?;
            s.finish()?;
            rho_vs_snr(&pool, t, gamma, &bws, &snrs)?
        }
        Job::SeVsEbn0 {
            axis,
            phys,
            bandwidth,
            theta,
            ..
        }
        | Job::Ebn0VsSnr {
            axis,
            phys,
            bandwidth,
            theta,
            ..
        } => {
            let (t, gamma) = resolve_phys(&mut s, phys)?;
            let bws = s.pick("bandwidth", bandwidth.clone(), Some(RealList(vec![1e5])))?.0;
            let thetas = s.pick("theta", theta.clone(), Some(RealList(vec![0.01])))?.0;
            let snrs = resolve_axis(&mut s, axis, (1e-6, 10.0, 141))?;
            s.finish()?;
            let snr_first = matches!(job, Job::Ebn0VsSnr { .. });
            snr_sweep(&pool, t, gamma, &bws, &thetas, &snrs, snr_first)?
        }
        Job::Ebn0minVsBandwidth {
            axis,
            phys,
            theta,
            snr_min,
            snr_max,
            snr_points,
            ..
        } => {
            let (t, gamma) = resolve_phys(&mut s, phys)?;
            let thetas = s.pick("theta", theta.clone(), Some(RealList(vec![0.01])))?.0;
            let snr_grid = grid(
                s.pick("snr-min", *snr_min, Some(1e-6))?,
                s.pick("snr-max", *snr_max, Some(10.0))?,
                s.pick("snr-points", *snr_points, Some(141))?,
                Spacing::Log,
            )?;
            let bws = resolve_axis(&mut s, axis, (1e4, 1e7, 31))?;
            s.finish()?;
            ebn0min_vs_bandwidth(&pool, t, gamma, &thetas, &bws, &snr_grid)?
        }
        Job::WidebandSeVsEbn0 {
            axis,
            phys,
            theta,
            growth,
            n_ref,
            b_ref,
            power_over_nn0,
            ..
        } => {
            let (t, gamma) = resolve_phys(&mut s, phys)?;
            let thetas = s
                .pick("theta", theta.clone(), Some(RealList(vec![0.0, 0.001, 0.01, 0.1, 1.0])))?
                .0;
            let law = s.pick("growth", *growth, Some(GrowthLaw::Bounded))?;
            let n_ref = s.pick("n-ref", *n_ref, Some(1))?;
            let b_ref = s.pick("b-ref", *b_ref, Some(1e7))?;
            let x = s.pick("power-over-nn0", *power_over_nn0, Some(1e4))?;
            let bws = resolve_axis(&mut s, axis, (1e4, 1e10, 61))?;
            s.finish()?;
            if n_ref == 0 {
                return invalid("n-ref must be at least 1");
            }
            wideband_sweep(&pool, t, gamma, &thetas, law, n_ref, b_ref, x, &bws)?
        }
        Job::AsymptoticsTable {
            phys,
            theta,
            num_subchannels,
            power_over_nn0,
            ..
        } => {
            let (t, gamma) = resolve_phys(&mut s, phys)?;
            let thetas = s
                .pick("theta", theta.clone(), Some(RealList(vec![0.0, 0.001, 0.01, 0.1, 1.0])))?
                .0;
            let n = s.pick("num-subchannels", *num_subchannels, Some(1))?;
            let x = s.pick("power-over-nn0", *power_over_nn0, Some(1e4))?;
            s.finish()?;
            asymptotics_table(t, gamma, &thetas, n, x)?
        }
        Job::QueueValidate {
            phys,
            bandwidth,
            snr,
            theta,
            frames,
            margin,
            seed,
            ..
        } => {
            let (t, gamma) = resolve_phys(&mut s, phys)?;
            let b = s.pick("bandwidth", *bandwidth, Some(1e5))?;
            let snr = s.pick("snr", *snr, Some(3.0))?;
            let thetas = s
                .pick("theta", theta.clone(), Some(RealList(vec![0.005, 0.01, 0.05])))?
                .0;
            let frames = s.pick("frames", *frames, Some(10_000_000))?;
            let margin = s.pick("margin", *margin, Some(1.0))?;
            let seed = match s.pick_optional("seed", *seed)? {
                Some(v) => v,
                None => env_seed()?,
            };
            s.finish()?;
            let cfg = LinkConfig::from_snr(t, b, gamma, snr)?;
            queue_validate(&pool, cfg, &thetas, frames, margin, seed)?
        }
    };
    Ok(Outcome {
        table,
        seed,
        output,
        summary,
    })
}

fn env_seed() -> CliResult<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| crate::error::CliError::Invalid(format!("{SEED_ENV}={v:?}: {e}"))),
        Err(_) => Ok(0),
    }
}

type Built = (Table, Option<u64>, Vec<String>);

fn rho_vs_snr(pool: &rayon::ThreadPool, t: f64, gamma: f64, bws: &[f64], snrs: &[f64]) -> CliResult<Built> {
    let items: Vec<(f64, f64)> = bws.iter().flat_map(|&b| snrs.iter().map(move |&x| (b, x))).collect();
    let rows = par_rows(pool, &items, |&(b, snr)| {
        let cfg = LinkConfig::from_snr(t, b, gamma, snr)?;
        let sol = rho_opt_closed_form(&cfg);
        Ok(vec![
            Cell::from(b),
            snr.into(),
            to_db(snr).into(),
            sol.rho_opt.into(),
            sol.eta.into(),
            sol.snr_eff_opt.into(),
        ])
    })?;
    let mut table = Table::new(vec!["bandwidth_hz", "snr", "snr_db", "rho_opt", "eta", "snr_eff_opt"]);
    let mut summary = Vec::new();
    for (i, &b) in bws.iter().enumerate() {
        let block = &rows[i * snrs.len()..(i + 1) * snrs.len()];
        let rho = |r: &Vec<Cell>| match r[3] {
            Cell::Real(x) => x,
            _ => unreachable!(),
        };
        summary.push(format!(
            "bandwidth {b} Hz: rho_opt {} at snr {} .. {} at snr {}",
            rho(&block[0]),
            snrs[0],
            rho(&block[block.len() - 1]),
            snrs[snrs.len() - 1]
        ));
    }
    rows.into_iter().for_each(|r| table.push(r));
    Ok((table, None, summary))
}

fn snr_sweep(
    pool: &rayon::ThreadPool,
    t: f64,
    gamma: f64,
    bws: &[f64],
    thetas: &[f64],
    snrs: &[f64],
    snr_first: bool,
) -> CliResult<Built> {
    let qos = qos_list(thetas)?;
    let mut items = Vec::new();
    for (qi, _) in qos.iter().enumerate() {
        for &b in bws {
            for &snr in snrs {
                items.push((qi, b, snr));
            }
        }
    }
    let points = par_rows(pool, &items, |&(qi, b, snr)| {
        let cfg = LinkConfig::from_snr(t, b, gamma, snr)?;
        let res = spectral_efficiency(&cfg, &qos[qi])?;
        Ok((res, ebn0_db(&cfg, &qos[qi])?))
    })?;

    let mut table = if snr_first {
        Table::new(vec![
            "theta",
            "bandwidth_hz",
            "snr",
            "snr_db",
            "ebn0_db",
            "spectral_efficiency",
            "rate_opt_bps",
            "alpha_opt",
            "rho_opt",
        ])
    } else {
        Table::new(vec![
            "theta",
            "bandwidth_hz",
            "ebn0_db",
            "spectral_efficiency",
            "snr",
            "snr_db",
            "rate_opt_bps",
            "alpha_opt",
            "rho_opt",
        ])
    };
    let mut summary = Vec::new();
    for (chunk_items, chunk_points) in items.chunks(snrs.len()).zip(points.chunks(snrs.len())) {
        let (qi, b, _) = chunk_items[0];
        let best = chunk_points
            .iter()
            .zip(chunk_items)
            .min_by(|a, b| a.0 .1.total_cmp(&b.0 .1))
            .expect("nonempty grid");
        summary.push(format!(
            "theta {} bandwidth {b} Hz: grid minimum Eb/N0 {:.4} dB at snr {}",
            thetas[qi], best.0 .1, best.1 .2
        ));
        for (&(qi, b, snr), (res, eb)) in chunk_items.iter().zip(chunk_points) {
            let common = [
                Cell::from(res.spectral_efficiency),
                Cell::from(snr),
                Cell::from(to_db(snr)),
            ];
            let mut row = vec![Cell::from(thetas[qi]), Cell::from(b)];
            if snr_first {
                row.extend([common[1].clone(), common[2].clone(), Cell::from(*eb), common[0].clone()]);
            } else {
                row.extend([Cell::from(*eb), common[0].clone(), common[1].clone(), common[2].clone()]);
            }
            row.extend([res.rate_opt_bps.into(), res.alpha_opt.into(), res.rho_used.into()]);
            table.push(row);
        }
    }
    Ok((table, None, summary))
}

fn ebn0min_vs_bandwidth(
    pool: &rayon::ThreadPool,
    t: f64,
    gamma: f64,
    thetas: &[f64],
    bws: &[f64],
    snr_grid: &[f64],
) -> CliResult<Built> {
    let qos = qos_list(thetas)?;
    let items: Vec<(usize, f64)> = (0..qos.len())
        .flat_map(|qi| bws.iter().map(move |&b| (qi, b)))
        .collect();
    let rows = par_rows(pool, &items, |&(qi, b)| {
        let cfg = LinkConfig::from_snr(t, b, gamma, snr_grid[0])?;
        let (snr_min, eb_min) = min_bit_energy_numeric(&cfg, &qos[qi], snr_grid)?;
        Ok((snr_min, eb_min))
    })?;
    let mut table = Table::new(vec![
        "theta",
        "bandwidth_hz",
        "snr_at_min",
        "snr_at_min_db",
        "ebn0_min_db",
    ]);
    let mut summary = Vec::new();
    for (&(qi, b), &(snr_min, eb_min)) in items.iter().zip(&rows) {
        table.push(vec![
            thetas[qi].into(),
            b.into(),
            snr_min.into(),
            to_db(snr_min).into(),
            eb_min.into(),
        ]);
    }
    for (qi, &theta) in thetas.iter().enumerate() {
        let block = &rows[qi * bws.len()..(qi + 1) * bws.len()];
        let (k, best) = block
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .expect("nonempty grid");
        summary.push(format!(
            "theta {theta}: lowest Eb/N0_min {:.4} dB at bandwidth {} Hz (snr {})",
            best.1, bws[k], best.0
        ));
    }
    Ok((table, None, summary))
}

#[allow(clippy::too_many_arguments)]
fn wideband_sweep(
    pool: &rayon::ThreadPool,
    t: f64,
    gamma: f64,
    thetas: &[f64],
    law: GrowthLaw,
    n_ref: usize,
    b_ref: f64,
    power_over_nn0: f64,
    bws: &[f64],
) -> CliResult<Built> {
    let qos = qos_list(thetas)?;
    let power_over_n0 = power_over_nn0 * n_ref as f64;
    let items: Vec<(usize, f64)> = (0..qos.len())
        .flat_map(|qi| bws.iter().map(move |&b| (qi, b)))
        .collect();
    let points = par_rows(pool, &items, |&(qi, b)| {
        let mut curve = bit_energy_along_growth(law, &qos[qi], t, gamma, power_over_n0, n_ref, b_ref, &[b])?;
        Ok(curve.pop().expect("one point per bandwidth"))
    })?;
    let mut table = Table::new(vec![
        "theta",
        "bandwidth_hz",
        "num_subchannels",
        "coherence_bandwidth_hz",
        "snr",
        "spectral_efficiency",
        "ebn0_db",
    ]);
    for (&(qi, _), p) in items.iter().zip(&points) {
        table.push(vec![
            thetas[qi].into(),
            p.bandwidth_hz.into(),
            p.num_subchannels.into(),
            p.coherence_bandwidth_hz.into(),
            p.snr.into(),
            p.spectral_efficiency.into(),
            p.ebn0_db.into(),
        ]);
    }
    let summary = thetas
        .iter()
        .enumerate()
        .map(|(qi, &theta)| {
            let block = &points[qi * bws.len()..(qi + 1) * bws.len()];
            let best = block
                .iter()
                .min_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db))
                .expect("nonempty grid");
            format!(
                "theta {theta} ({law}): grid minimum Eb/N0 {:.4} dB at bandwidth {} Hz, last point {:.4} dB",
                best.ebn0_db,
                best.bandwidth_hz,
                block[block.len() - 1].ebn0_db
            )
        })
        .collect();
    Ok((table, None, summary))
}

fn asymptotics_table(t: f64, gamma: f64, thetas: &[f64], n: usize, x: f64) -> CliResult<Built> {
    let mut table = Table::new(vec![
        "theta",
        "ebn0_min_db",
        "wideband_slope",
        "alpha_star",
        "xi",
        "phi",
        "omega",
        "delta",
        "rho_star",
    ]);
    let mut summary = Vec::new();
    for &theta in thetas {
        let a = asymptotics_sparse_bounded(theta, t, n, x, gamma)?;
        summary.push(format!(
            "theta {theta}: Eb/N0_min {:.4} dB, S0 {:.4}",
            a.ebn0_min_db(),
            a.wideband_slope
        ));
        table.push(vec![
            theta.into(),
            a.ebn0_min_db().into(),
            a.wideband_slope.into(),
            a.alpha_star.into(),
            a.xi.into(),
            a.phi.into(),
            a.omega.into(),
            a.delta.into(),
            a.rho_star.into(),
        ]);
    }
    Ok((table, None, summary))
}

fn queue_validate(
    pool: &rayon::ThreadPool,
    cfg: LinkConfig,
    thetas: &[f64],
    frames: u64,
    margin: f64,
    seed: u64,
) -> CliResult<Built> {
    let qos = qos_list(thetas)?;
    // one derived seed per theta so that rows do not share a channel realization
    let specs: Vec<SimSpec> = qos
        .iter()
        .enumerate()
        .map(|(i, &q)| SimSpec {
            cfg,
            qos: q,
            frames,
            seed: seed.wrapping_add(i as u64),
            arrival_margin: margin,
        })
        .collect();
    let results = par_rows(pool, &specs, |spec| {
        let (model, _) = QueueModel::from_spec(spec)?;
        Ok((model, simulate_queue(spec)?))
    })?;
    let mut table = Table::new(vec![
        "theta",
        "seed",
        "rng",
        "frames",
        "arrival_margin",
        "arrival_bits",
        "service_bits",
        "on_probability",
        "theta_hat",
        "theta_ratio",
        "ci_lo",
        "ci_hi",
        "ci_covers_theta",
        "q_lo_bits",
        "q_hi_bits",
        "samples_in_tail",
    ]);
    let mut summary = Vec::new();
    for (spec, (model, est)) in specs.iter().zip(&results) {
        let theta = spec.qos.theta();
        let covers = est.ci.0 <= theta && theta <= est.ci.1;
        summary.push(format!(
            "theta {theta}: theta_hat {:.6} (ratio {:.4}), 95% CI [{:.6}, {:.6}]{}",
            est.theta_hat,
            est.theta_hat / theta,
            est.ci.0,
            est.ci.1,
            if covers { "" } else { " does not cover theta" }
        ));
        table.push(vec![
            theta.into(),
            spec.seed.into(),
            RNG_ALGORITHM.into(),
            frames.into(),
            margin.into(),
            model.arrival_bits.into(),
            model.service_bits.into(),
            model.on_probability.into(),
            est.theta_hat.into(),
            (est.theta_hat / theta).into(),
            est.ci.0.into(),
            est.ci.1.into(),
            covers.into(),
            est.fit_range_bits.0.into(),
            est.fit_range_bits.1.into(),
            est.samples_in_tail.into(),
        ]);
    }
    Ok((table, Some(seed), summary))
}
