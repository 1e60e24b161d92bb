//! WebAssembly bindings for the demo page. Curves are returned as flat
//! `Float64Array`s of interleaved `(x, y)` pairs.

use effcap_core::effcap::{bit_energy, spectral_efficiency, to_db, QosSpec};
use effcap_core::training::rho_opt_closed_form;
use effcap_core::wideband::asymptotics_sparse_bounded;
use effcap_core::{Error, LinkConfig};
use wasm_bindgen::prelude::*;

const FRAME_S: f64 = 2e-3;
const MAX_POINTS: usize = 2000;

fn db_grid(lo_db: f64, hi_db: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must lie in 2..={MAX_POINTS}"));
    }
    if !(lo_db.is_finite() && hi_db.is_finite() && lo_db < hi_db) {
        return Err("SNR range must be finite and increasing".into());
    }
    Ok((0..points)
        .map(|k| lo_db + (hi_db - lo_db) * k as f64 / (points - 1) as f64)
        .collect())
}

/// `(snr_db, rho_opt)` pairs.
pub fn rho_curve(bandwidth_hz: f64, snr_db_min: f64, snr_db_max: f64, points: usize) -> Result<Vec<f64>, String> {
    let mut out = Vec::with_capacity(2 * points);
    for snr_db in db_grid(snr_db_min, snr_db_max, points)? {
        let cfg =
            LinkConfig::from_snr(FRAME_S, bandwidth_hz, 1.0, 10f64.powf(snr_db / 10.0)).map_err(|e| e.to_string())?;
        out.extend([snr_db, rho_opt_closed_form(&cfg).rho_opt]);
    }
    Ok(out)
}

/// `(ebn0_db, spectral_efficiency)` pairs; infinite bit energy is kept as `inf`.
pub fn tradeoff_curve(
    bandwidth_hz: f64,
    theta: f64,
    snr_db_min: f64,
    snr_db_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let qos = QosSpec::new(theta).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * points);
    for snr_db in db_grid(snr_db_min, snr_db_max, points)? {
        let cfg =
            LinkConfig::from_snr(FRAME_S, bandwidth_hz, 1.0, 10f64.powf(snr_db / 10.0)).map_err(|e| e.to_string())?;
        let se = spectral_efficiency(&cfg, &qos)
            .map_err(|e| e.to_string())?
            .spectral_efficiency;
        let eb = match bit_energy(&cfg, &qos) {
            Ok(eb) => to_db(eb),
            Err(Error::InfiniteBitEnergy) => f64::INFINITY,
            Err(e) => return Err(e.to_string()),
        };
        out.extend([eb, se]);
    }
    Ok(out)
}

/// `[ebn0_min_db, wideband_slope, alpha_star, rho_star]` for a bounded
/// number of subchannels as the coherence bandwidth grows.
pub fn wideband_summary(theta: f64, power_over_nn0: f64) -> Result<Vec<f64>, String> {
    let a = asymptotics_sparse_bounded(theta, FRAME_S, 1, power_over_nn0, 1.0).map_err(|e| e.to_string())?;
    Ok(vec![a.ebn0_min_db(), a.wideband_slope, a.alpha_star, a.rho_star])
}

#[wasm_bindgen(js_name = rhoCurve)]
pub fn rho_curve_js(bandwidth_hz: f64, snr_db_min: f64, snr_db_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    rho_curve(bandwidth_hz, snr_db_min, snr_db_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = tradeoffCurve)]
pub fn tradeoff_curve_js(
    bandwidth_hz: f64,
    theta: f64,
    snr_db_min: f64,
    snr_db_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    tradeoff_curve(bandwidth_hz, theta, snr_db_min, snr_db_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = widebandSummary)]
pub fn wideband_summary_js(theta: f64, power_over_nn0: f64) -> Result<Vec<f64>, JsError> {
    wideband_summary(theta, power_over_nn0).map_err(|e| JsError::new(&e))
}
