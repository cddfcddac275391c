//! Closed-form strategy evaluations: classical multi-pass coherent probes,
//! the loss-limited quantum bound, their optima and precision ratios.
//!
//! All values are Fisher information per mean lost photon (`F′`, rad⁻² per
//! photon). Two-mode values are a quarter of single-mode ones.

use std::fmt;

use serde::Serialize;

use crate::channels::{PassCount, Transmissivity};
use crate::specfun::constants;

/// Single-mode phase with an ideal reference beam, or two-mode
/// differential phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sm,
    Tm,
}

impl Mode {
    /// Multiplier relative to the two-mode value.
    #[inline]
    pub fn factor(self) -> f64 {
        match self {
            Mode::Sm => 4.0,
            Mode::Tm => 1.0,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sm => "sm",
            Mode::Tm => "tm",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    ClassicalMp,
    QuantumBoundMp,
    QuantumBoundLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrategyEvaluation {
    pub strategy: Strategy,
    pub mode: Mode,
    pub eta: f64,
    /// Pass count; absent for the `k → 0` limit.
    pub k: Option<f64>,
    pub fisher_per_lost: f64,
}

/// `1 - ηᵏ` without cancellation for small `k ln η`.
#[inline]
fn one_minus_pow(eta: Transmissivity, k: f64) -> f64 {
    -(k * eta.ln()).exp_m1()
}

/// Coherent-state multi-pass `F′ = ηᵏk²/(1 - ηᵏ)`. There is no amplitude
/// argument: the ratio does not depend on it.
pub fn classical_fpl(eta: Transmissivity, k: PassCount, mode: Mode) -> f64 {
    let k = k.value();
    mode.factor() * eta.pow(k) * k * k / one_minus_pow(eta, k)
}

/// Continuous pass count maximizing [`classical_fpl`]: `-(2 + W)/ln η`.
pub fn classical_kopt(eta: Transmissivity) -> f64 {
    constants().k_coeff / -eta.ln()
}

/// Best classical multi-pass strategy.
///
/// With `discrete` set, the optimum over positive integers, which sits at
/// `⌊k_opt⌋` or `⌈k_opt⌉` because `F′` is unimodal in `k`; ties go to the
/// smaller count.
pub fn classical_fpl_opt(eta: Transmissivity, mode: Mode, discrete: bool) -> StrategyEvaluation {
    let kopt = classical_kopt(eta);
    let (k, fisher_per_lost) = if discrete {
        let lo = (kopt.floor() as u32).max(1);
        let hi = (kopt.ceil() as u32).max(1);
        let eval = |k: u32| classical_fpl(eta, PassCount::discrete(k).expect("k >= 1"), mode);
        let (f_lo, f_hi) = (eval(lo), eval(hi));
        if f_hi > f_lo {
            (f64::from(hi), f_hi)
        } else {
            (f64::from(lo), f_lo)
        }
    } else {
        let ln = eta.ln();
        (kopt, mode.factor() * constants().cl_const / (ln * ln))
    };
    StrategyEvaluation {
        strategy: Strategy::ClassicalMp,
        mode,
        eta: eta.get(),
        k: Some(k),
        fisher_per_lost,
    }
}

/// Loss-limited bound on `F′` for `k` passes: `k²ηᵏ/(1 - ηᵏ)²`.
pub fn quantum_bound_fpl(eta: Transmissivity, k: PassCount, mode: Mode) -> f64 {
    classical_fpl(eta, k, mode) / one_minus_pow(eta, k.value())
}

/// Supremum of [`quantum_bound_fpl`] over continuous `k`, reached as
/// `k → 0`: `1/ln²η`.
pub fn quantum_bound_limit(eta: Transmissivity, mode: Mode) -> f64 {
    let ln = eta.ln();
    mode.factor() / (ln * ln)
}

/// Best quantum bound over integer pass counts. The bound decreases
/// monotonically in `k`, so this is the single-pass bound `η/(1 - η)²`.
pub fn quantum_bound_opt_discrete(eta: Transmissivity, mode: Mode) -> StrategyEvaluation {
    let one = PassCount::discrete(1).expect("1 is a valid pass count");
    StrategyEvaluation {
        strategy: Strategy::QuantumBoundMp,
        mode,
        eta: eta.get(),
        k: Some(1.0),
        fisher_per_lost: quantum_bound_fpl(eta, one, mode),
    }
}

/// Quantum reference against which a discrete classical strategy is
/// compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantumNorm {
    /// Continuous-`k` limit `1/ln²η`.
    #[default]
    ContinuousLimit,
    /// Best integer-`k` quantum bound, i.e. the single-pass bound.
    DiscreteOptimum,
}

impl QuantumNorm {
    pub fn value(self, eta: Transmissivity, mode: Mode) -> f64 {
        match self {
            QuantumNorm::ContinuousLimit => quantum_bound_limit(eta, mode),
            QuantumNorm::DiscreteOptimum => quantum_bound_opt_discrete(eta, mode).fisher_per_lost,
        }
    }
}

/// Ratio `Δθ_Q/Δθ_Cl = √(F′_Cl/F′_Q)` between optimal quantum and classical
/// root-mean-square errors. Independent of the mode.
pub fn advantage_ratio(eta: Transmissivity, discrete: bool, norm: QuantumNorm) -> f64 {
    let classical = classical_fpl_opt(eta, Mode::Tm, discrete).fisher_per_lost;
    (classical / norm.value(eta, Mode::Tm)).sqrt()
}

/// Curves available to [`fig2a_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStrategy {
    ClassicalMpDiscrete,
    ClassicalMpContinuous,
    QuantumBoundDiscrete,
    QuantumBoundLimit,
}

impl ScanStrategy {
    pub const ALL: [ScanStrategy; 4] = [
        ScanStrategy::ClassicalMpDiscrete,
        ScanStrategy::ClassicalMpContinuous,
        ScanStrategy::QuantumBoundDiscrete,
        ScanStrategy::QuantumBoundLimit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScanStrategy::ClassicalMpDiscrete => "classical_mp_discrete",
            ScanStrategy::ClassicalMpContinuous => "classical_mp_continuous",
            ScanStrategy::QuantumBoundDiscrete => "quantum_bound_discrete",
            ScanStrategy::QuantumBoundLimit => "quantum_bound_limit",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// One row of the normalized-precision scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub eta: f64,
    pub strategy: ScanStrategy,
    pub k: Option<f64>,
    pub fisher_per_lost: f64,
    /// `√(F′/Q′)` with `Q′` the chosen quantum reference.
    pub normalized_precision: f64,
}

/// Achievable precision of each requested strategy, normalized to a quantum
/// reference, over a grid of transmissivities. Rows are sorted by `η`, then
/// by the order of `strategies`.
pub fn fig2a_scan(
    eta_grid: &[Transmissivity],
    strategies: &[ScanStrategy],
    mode: Mode,
    norm: QuantumNorm,
) -> Vec<ScanRow> {
    let mut grid = eta_grid.to_vec();
    grid.sort_by(|a, b| a.get().total_cmp(&b.get()));
    let mut rows = Vec::with_capacity(grid.len() * strategies.len());
    for eta in grid {
        let reference = norm.value(eta, mode);
        for &strategy in strategies {
            let (k, fpl) = match strategy {
                ScanStrategy::ClassicalMpDiscrete => {
                    let e = classical_fpl_opt(eta, mode, true);
                    (e.k, e.fisher_per_lost)
                }
                ScanStrategy::ClassicalMpContinuous => {
                    let e = classical_fpl_opt(eta, mode, false);
                    (e.k, e.fisher_per_lost)
                }
                ScanStrategy::QuantumBoundDiscrete => {
                    let e = quantum_bound_opt_discrete(eta, mode);
                    (e.k, e.fisher_per_lost)
                }
                ScanStrategy::QuantumBoundLimit => (None, quantum_bound_limit(eta, mode)),
            };
            rows.push(ScanRow {
                eta: eta.get(),
                strategy,
                k,
                fisher_per_lost: fpl,
                normalized_precision: (fpl / reference).sqrt(),
            });
        }
    }
    rows
}
