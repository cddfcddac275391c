//! Multi-pass strategies with preparation, round-trip and measurement
//! losses, and the search for where they open a quantum advantage beyond
//! the ideal 20% RMSE reduction.
//!
//! The quantum bound under imperfections is the single-mode bound of a
//! composite channel with total transmissivity
//! `η_tot = ηᵏ η_p η_m η_rᵏ⁻¹` and phase magnification `k`. Both
//! strategies are normalized by the photons lost at the sample only.

use serde::Serialize;

use crate::analytic::classical_kopt;
use crate::channels::Transmissivity;
use crate::{Error, Result};

/// RMSE reduction that has to be beaten for a threshold cell.
pub const IDEAL_REDUCTION_BOUND: f64 = 0.20;
/// Step of the descending round-trip scan.
const THRESHOLD_SCAN_STEP: f64 = 0.01;

/// Auxiliary transmissivities of an imperfect multi-pass setup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImperfectionBudget {
    eta_p: f64,
    eta_r: f64,
    eta_m: f64,
}

impl ImperfectionBudget {
    pub fn new(eta_p: f64, eta_r: f64, eta_m: f64) -> Result<Self> {
        for (name, v) in [("eta_p", eta_p), ("eta_r", eta_r), ("eta_m", eta_m)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(name, format!("{v} is outside (0, 1]")));
            }
        }
        Ok(ImperfectionBudget {
            eta_p,
            eta_r,
            eta_m,
        })
    }

    pub fn ideal() -> Self {
        ImperfectionBudget {
            eta_p: 1.0,
            eta_r: 1.0,
            eta_m: 1.0,
        }
    }

    pub fn eta_p(&self) -> f64 {
        self.eta_p
    }
    pub fn eta_r(&self) -> f64 {
        self.eta_r
    }
    pub fn eta_m(&self) -> f64 {
        self.eta_m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImperfectStrategy {
    Classical,
    QuantumBound,
}

/// `ηᵏ η_p η_m η_rᵏ⁻¹`.
pub fn total_transmissivity(eta: Transmissivity, b: &ImperfectionBudget, k: u32) -> f64 {
    let k = k.max(1) as i32;
    eta.get().powi(k) * b.eta_p * b.eta_m * b.eta_r.powi(k - 1)
}

/// Photons scattered at the sample over `k` passes:
/// `n_in η_p (1 - η)(1 - (ηη_r)ᵏ)/(1 - ηη_r)`.
pub fn phase_lost_photons(eta: Transmissivity, b: &ImperfectionBudget, k: u32, n_in: f64) -> f64 {
    let e = eta.get();
    let q = e * b.eta_r;
    n_in * b.eta_p * (1.0 - e) * (1.0 - q.powi(k as i32)) / (1.0 - q)
}

/// Single-mode `F′` of a `k`-pass strategy per photon lost at the sample.
pub fn imperfect_fpl(
    eta: Transmissivity,
    b: &ImperfectionBudget,
    k: u32,
    strategy: ImperfectStrategy,
) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("k", "at least one pass is required"));
    }
    let total = total_transmissivity(eta, b, k);
    if total >= 1.0 {
        return Err(Error::Degenerate(format!(
            "total transmissivity {total} >= 1"
        )));
    }
    let kf = f64::from(k);
    let lost = phase_lost_photons(eta, b, k, 1.0);
    let classical = 4.0 * kf * kf * total / lost;
    Ok(match strategy {
        ImperfectStrategy::Classical => classical,
        ImperfectStrategy::QuantumBound => classical / (1.0 - total),
    })
}

/// Largest pass count scanned by [`optimize_k`]: `10⌈k_opt⌉ + 10` with
/// `k_opt` the ideal classical optimum.
pub fn default_k_max(eta: Transmissivity) -> u32 {
    let kopt = classical_kopt(eta).ceil();
    (10.0 * kopt + 10.0).min(f64::from(u32::MAX / 2)) as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KOptimum {
    pub k: u32,
    pub fpl: f64,
}

/// Best integer pass count in `1..=k_max`; ties go to the smaller count.
/// Fails when the maximum sits on `k_max`, since the scan may then have
/// missed it.
pub fn optimize_k(
    eta: Transmissivity,
    b: &ImperfectionBudget,
    strategy: ImperfectStrategy,
) -> Result<KOptimum> {
    let k_max = default_k_max(eta);
    let mut best = KOptimum {
        k: 1,
        fpl: imperfect_fpl(eta, b, 1, strategy)?,
    };
    for k in 2..=k_max {
        let fpl = imperfect_fpl(eta, b, k, strategy)?;
        if fpl > best.fpl {
            best = KOptimum { k, fpl };
        }
    }
    if best.k == k_max {
        return Err(Error::Degenerate(format!(
            "optimal pass count reached the scan limit {k_max}"
        )));
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdvantageResult {
    pub k_cl: u32,
    pub k_q: u32,
    pub fpl_cl: f64,
    pub fpl_q: f64,
    /// `1 - √(F′_Cl/F′_Q)`.
    pub rmse_reduction: f64,
}

/// Quantum advantage with both strategies given their own optimal pass
/// count.
pub fn advantage(eta: Transmissivity, b: &ImperfectionBudget) -> Result<AdvantageResult> {
    let cl = optimize_k(eta, b, ImperfectStrategy::Classical)?;
    let q = optimize_k(eta, b, ImperfectStrategy::QuantumBound)?;
    Ok(AdvantageResult {
        k_cl: cl.k,
        k_q: q.k,
        fpl_cl: cl.fpl,
        fpl_q: q.fpl,
        rmse_reduction: 1.0 - (cl.fpl / q.fpl).sqrt(),
    })
}

fn exceeds_ideal(eta: Transmissivity, eta_r: f64, eta_pm: f64) -> Result<bool> {
    let b = ImperfectionBudget::new(1.0, eta_r, eta_pm)?;
    Ok(advantage(eta, &b)?.rmse_reduction > IDEAL_REDUCTION_BOUND)
}

/// Highest round-trip transmissivity for which the quantum strategy beats
/// a 20% RMSE reduction, at combined preparation-and-measurement
/// transmissivity `eta_pm`.
///
/// `η_r` is lowered from 1 in steps of 0.01 until the advantage first
/// exceeds 20%, then the crossing is bisected to `precision`; the returned
/// value is the side that exceeds 20%. `None` when no `η_r ∈ [0.01, 1]`
/// does.
pub fn threshold_eta_r(eta: Transmissivity, eta_pm: f64, precision: f64) -> Result<Option<f64>> {
    if !(eta_pm > 0.0 && eta_pm <= 1.0) {
        return Err(Error::invalid(
            "eta_pm",
            format!("{eta_pm} is outside (0, 1]"),
        ));
    }
    if precision.is_nan() || precision <= 0.0 {
        return Err(Error::invalid("precision", "must be positive"));
    }
    if exceeds_ideal(eta, 1.0, eta_pm)? {
        return Ok(Some(1.0));
    }
    let steps = (1.0 / THRESHOLD_SCAN_STEP).round() as u32;
    let mut above = 1.0;
    for i in 1..steps {
        let eta_r = 1.0 - THRESHOLD_SCAN_STEP * f64::from(i);
        if exceeds_ideal(eta, eta_r, eta_pm)? {
            let (mut lo, mut hi) = (eta_r, above);
            while hi - lo > precision {
                let mid = 0.5 * (lo + hi);
                if exceeds_ideal(eta, mid, eta_pm)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(Some(lo));
        }
        above = eta_r;
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceCell {
    pub eta: f64,
    pub eta_pm: f64,
    pub threshold_eta_r: Option<f64>,
}

/// [`threshold_eta_r`] on every `(η, η_pη_m)` pair, row-major in `η`.
pub fn surface_grid(
    eta_grid: &[Transmissivity],
    eta_pm_grid: &[f64],
    precision: f64,
) -> Result<Vec<SurfaceCell>> {
    let cells: Vec<(Transmissivity, f64)> = eta_grid
        .iter()
        .flat_map(|&e| eta_pm_grid.iter().map(move |&pm| (e, pm)))
        .collect();
    let eval = |&(eta, eta_pm): &(Transmissivity, f64)| -> Result<SurfaceCell> {
        Ok(SurfaceCell {
            eta: eta.get(),
            eta_pm,
            threshold_eta_r: threshold_eta_r(eta, eta_pm, precision)?,
        })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        cells.par_iter().map(eval).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        cells.iter().map(eval).collect()
    }
}

/// `n` evenly spaced values covering `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
