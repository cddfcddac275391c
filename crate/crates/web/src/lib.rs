//! WebAssembly bindings for the browser demo in `www/`. Every export takes
//! plain numbers and returns a JSON string.

use lossyphase::analytic::{fig2a_scan, Mode, QuantumNorm, ScanStrategy};
use lossyphase::gaussian::{required_squeezing_db, scheme_fpl_limit};
use lossyphase::imperfect::linspace;
use lossyphase::network::{
    network_fpl, optimize_network, single_pass_qsm, NetworkConfig, NetworkSearch, XiSearch,
};
use lossyphase::Transmissivity;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn error_json(e: impl std::fmt::Display) -> String {
    to_json(&serde_json::json!({ "error": e.to_string() }))
}

fn grid(lo: f64, hi: f64, n: usize) -> Result<Vec<Transmissivity>, lossyphase::Error> {
    linspace(lo, hi, n)
        .into_iter()
        .map(Transmissivity::new)
        .collect()
}

#[derive(Serialize)]
struct Curve {
    name: &'static str,
    eta: Vec<f64>,
    value: Vec<f64>,
}

/// Normalized precision of each strategy, one curve per strategy.
#[wasm_bindgen]
pub fn precision_curves(lo: f64, hi: f64, n: usize, single_pass_norm: bool) -> String {
    let etas = match grid(lo, hi, n) {
        Ok(g) => g,
        Err(e) => return error_json(e),
    };
    let norm = if single_pass_norm {
        QuantumNorm::DiscreteOptimum
    } else {
        QuantumNorm::ContinuousLimit
    };
    let rows = fig2a_scan(&etas, &ScanStrategy::ALL, Mode::Sm, norm);
    let curves: Vec<Curve> = ScanStrategy::ALL
        .iter()
        .map(|s| {
            let (eta, value) = rows
                .iter()
                .filter(|r| r.strategy == *s)
                .map(|r| (r.eta, r.normalized_precision))
                .unzip();
            Curve {
                name: s.name(),
                eta,
                value,
            }
        })
        .collect();
    to_json(&curves)
}

#[derive(Serialize)]
struct SqueezingCurve {
    eta: Vec<f64>,
    squeezing_db: Vec<Option<f64>>,
    /// Bright-probe `F′` at the chosen squeezing, relative to the
    /// single-pass bound.
    probe_ratio: Vec<f64>,
}

/// Squeezing needed to match the best classical strategy, and the
/// bright-probe performance at a fixed squeezing level.
#[wasm_bindgen]
pub fn squeezing_curve(lo: f64, hi: f64, n: usize, n_sq: f64) -> String {
    if !(n_sq >= 0.0 && n_sq.is_finite()) {
        return error_json("n_sq must be finite and >= 0");
    }
    let etas = match grid(lo, hi, n) {
        Ok(g) => g,
        Err(e) => return error_json(e),
    };
    let curve = SqueezingCurve {
        eta: etas.iter().map(|e| e.get()).collect(),
        squeezing_db: etas
            .iter()
            .map(|&e| required_squeezing_db(e).map(|s| s.squeezing_db))
            .collect(),
        probe_ratio: etas
            .iter()
            .map(|&e| scheme_fpl_limit(n_sq, e) / single_pass_qsm(e))
            .collect(),
    };
    to_json(&curve)
}

#[derive(Serialize)]
struct NetworkProfile {
    eta: f64,
    h: u32,
    h_xi: Vec<f64>,
    ratio: Vec<Option<f64>>,
    best_h: u32,
    best_h_xi: f64,
    best_ratio: f64,
}

/// `F′/Q′_SM` of an `h`-module network against `hξ`, plus the global
/// optimum over `h ≤ h_max` for the same `η`.
#[wasm_bindgen]
pub fn network_profile(eta: f64, h: u32, h_max: u32, samples: usize) -> String {
    let e = match Transmissivity::new(eta) {
        Ok(e) => e,
        Err(err) => return error_json(err),
    };
    if h == 0 {
        return error_json("h must be at least 1");
    }
    let h_xi = linspace(0.01, 6.0, samples.max(2));
    let q = single_pass_qsm(e);
    let ratio = h_xi
        .iter()
        .map(|&x| {
            NetworkConfig::new(e, h, 1.0, x / f64::from(h), 0.0)
                .and_then(|c| network_fpl(&c))
                .ok()
                .map(|f| f / q)
        })
        .collect();
    let search = NetworkSearch {
        h_max: h_max.max(1),
        xi_search: XiSearch::Global,
        ..NetworkSearch::default()
    };
    match optimize_network(e, &search) {
        Ok(best) => to_json(&NetworkProfile {
            eta,
            h,
            h_xi,
            ratio,
            best_h: best.h,
            best_h_xi: best.h_xi,
            best_ratio: best.ratio,
        }),
        Err(err) => error_json(err),
    }
}
