//! Coherent light in an interferometer that interrogates a single-mode
//! lossy phase `h` times, mixing the sample arm with a second mode on a
//! beam splitter before each multi-pass module.
//!
//! Amplitudes `(α, β)` of `|α⟩|β⟩` map through
//! `T = [P(θ) · B(ξ)]ʰ`, `P = diag(1, e^{i(kθ+φ)} η^{k/2})`,
//! `B(ξ) = [[cos ξ/2, -sin ξ/2], [sin ξ/2, cos ξ/2]]`.
//! For input `|α⟩|0⟩` the output stays coherent, its QFI is
//! `4α²(|∂θT₁₁|² + |∂θT₂₁|²)` and the photons lost are
//! `α²(1 - |T₁₁|² - |T₂₁|²)`.

use std::f64::consts::{E, TAU};
use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::Transmissivity;
use crate::optimize::{golden_section_max, scan_then_refine, Maximum};
use crate::{Error, Result};

/// Minimum lost fraction before `F′` is declared undefined.
const MIN_LOST_FRACTION: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkConfig {
    eta: Transmissivity,
    h: u32,
    k: f64,
    xi: f64,
    phi_control: f64,
}

impl NetworkConfig {
    /// `h ≥ 1` modules of `k ≥ 0` passes, beam-splitter angle
    /// `ξ ∈ [0, 2π)` and control phase `φ`.
    pub fn new(eta: Transmissivity, h: u32, k: f64, xi: f64, phi_control: f64) -> Result<Self> {
        if h == 0 {
            return Err(Error::invalid("h", "at least one module is required"));
        }
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::invalid("k", format!("{k} must be finite and >= 0")));
        }
        if !(0.0..TAU).contains(&xi) {
            return Err(Error::invalid("xi", format!("{xi} is outside [0, 2π)")));
        }
        if !phi_control.is_finite() {
            return Err(Error::invalid("phi", "must be finite"));
        }
        Ok(NetworkConfig {
            eta,
            h,
            k,
            xi,
            phi_control,
        })
    }

    /// Configuration on the `(γ = ηᵏ, φ̃ = kθ + φ)` chart: `η = 1/e` and
    /// `k = -ln γ`, so `ln²η = 1` and `F′` equals the η-free objective
    /// `ln²γ f(φ̃, γ)`.
    pub fn reparameterized(gamma: f64, h: u32, xi: f64, varphi: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::invalid(
                "gamma",
                format!("{gamma} is outside (0, 1)"),
            ));
        }
        let eta = Transmissivity::new(1.0 / E)?;
        Self::new(eta, h, -gamma.ln(), xi, varphi)
    }

    pub fn eta(&self) -> Transmissivity {
        self.eta
    }
    pub fn h(&self) -> u32 {
        self.h
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn xi(&self) -> f64 {
        self.xi
    }
    pub fn phi_control(&self) -> f64 {
        self.phi_control
    }

    /// Transmissivity of one multi-pass module, `ηᵏ`.
    pub fn gamma(&self) -> f64 {
        self.eta.pow(self.k)
    }
}

/// A 2×2 complex matrix acting on the two mode amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix(pub [[Complex64; 2]; 2]);

impl TransferMatrix {
    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        TransferMatrix([[o, z], [z, o]])
    }

    pub fn zero() -> Self {
        TransferMatrix([[Complex64::new(0.0, 0.0); 2]; 2])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    /// Largest singular value, from the eigenvalues of `T†T`.
    pub fn largest_singular_value(&self) -> f64 {
        let m = &self.0;
        let a = m[0][0].norm_sqr() + m[1][0].norm_sqr();
        let d = m[0][1].norm_sqr() + m[1][1].norm_sqr();
        let b = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
        let half_trace = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        (half_trace + disc).sqrt()
    }

    pub fn max_abs_diff(&self, other: &TransferMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        TransferMatrix(out)
    }
}

impl Add for TransferMatrix {
    type Output = TransferMatrix;

    fn add(self, rhs: TransferMatrix) -> TransferMatrix {
        let mut out = self.0;
        for (row, rrow) in out.iter_mut().zip(rhs.0.iter()) {
            for (x, y) in row.iter_mut().zip(rrow.iter()) {
                *x += *y;
            }
        }
        TransferMatrix(out)
    }
}

/// A matrix together with its θ-derivative; multiplication applies the
/// product rule.
#[derive(Debug, Clone, Copy)]
struct Dual {
    value: TransferMatrix,
    deriv: TransferMatrix,
}

impl Mul for Dual {
    type Output = Dual;

    fn mul(self, rhs: Dual) -> Dual {
        Dual {
            value: self.value * rhs.value,
            deriv: self.deriv * rhs.value + self.value * rhs.deriv,
        }
    }
}

fn dual_pow(base: Dual, mut exp: u32) -> Dual {
    let mut acc = Dual {
        value: TransferMatrix::identity(),
        deriv: TransferMatrix::zero(),
    };
    let mut base = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = base * acc;
        }
        exp >>= 1;
        if exp > 0 {
            base = base * base;
        }
    }
    acc
}

/// One module `P(θ)·B(ξ)` and its θ-derivative.
fn module(cfg: &NetworkConfig, theta: f64) -> Dual {
    let (s, c) = (0.5 * cfg.xi).sin_cos();
    let z = Complex64::new(0.0, 0.0);
    let splitter = TransferMatrix([
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]);
    let amplitude = cfg.eta.pow(0.5 * cfg.k);
    let phase = Complex64::from_polar(amplitude, cfg.k * theta + cfg.phi_control);
    let p = TransferMatrix([[Complex64::new(1.0, 0.0), z], [z, phase]]);
    let dp = TransferMatrix([[z, z], [z, Complex64::new(0.0, cfg.k) * phase]]);
    Dual {
        value: p * splitter,
        deriv: dp * splitter,
    }
}

fn evaluate(cfg: &NetworkConfig, theta: f64) -> Dual {
    // equal factors commute with each other, so the power is order-free
    dual_pow(module(cfg, theta), cfg.h)
}

/// `T(θ)` for the configured network.
pub fn transfer_matrix(cfg: &NetworkConfig, theta: f64) -> TransferMatrix {
    evaluate(cfg, theta).value
}

/// Exact `∂T/∂θ`: the product-rule sum over the `h` factors, each term
/// differentiating one phase factor (`∂θ e^{i(kθ+φ)} = ik e^{i(kθ+φ)}`).
pub fn transfer_matrix_dtheta(cfg: &NetworkConfig, theta: f64) -> TransferMatrix {
    evaluate(cfg, theta).deriv
}

/// QFI of the output for input `|α⟩|0⟩`: `4α²(|∂T₁₁|² + |∂T₂₁|²)`.
pub fn network_qfi(cfg: &NetworkConfig, theta: f64, alpha: f64) -> f64 {
    let d = evaluate(cfg, theta).deriv;
    4.0 * alpha * alpha * (d.get(0, 0).norm_sqr() + d.get(1, 0).norm_sqr())
}

/// Mean photons lost for input `|α⟩|0⟩`: `α²(1 - |T₁₁|² - |T₂₁|²)`.
pub fn network_lost_photons(cfg: &NetworkConfig, theta: f64, alpha: f64) -> f64 {
    let t = evaluate(cfg, theta).value;
    alpha * alpha * (1.0 - t.get(0, 0).norm_sqr() - t.get(1, 0).norm_sqr())
}

/// QFI per lost photon for input `|α⟩|0⟩`, evaluated at `θ = 0` so that the
/// control phase plays the role of `φ̃ = kθ + φ`:
/// `4(|∂T₁₁|² + |∂T₂₁|²) / (1 - |T₁₁|² - |T₂₁|²)`.
pub fn network_fpl(cfg: &NetworkConfig) -> Result<f64> {
    let Dual { value, deriv } = evaluate(cfg, 0.0);
    let lost = 1.0 - value.get(0, 0).norm_sqr() - value.get(1, 0).norm_sqr();
    if lost <= MIN_LOST_FRACTION {
        return Err(Error::Degenerate(format!(
            "lost fraction {lost:e} leaves F' undefined (h = {}, xi = {}, k = {})",
            cfg.h, cfg.xi, cfg.k
        )));
    }
    Ok(4.0 * (deriv.get(0, 0).norm_sqr() + deriv.get(1, 0).norm_sqr()) / lost)
}

/// Share of the output QFI carried by the mode that holds the sample.
pub fn sample_mode_qfi_fraction(cfg: &NetworkConfig) -> f64 {
    let d = evaluate(cfg, 0.0).deriv;
    let (ref_mode, sample_mode) = (d.get(0, 0).norm_sqr(), d.get(1, 0).norm_sqr());
    sample_mode / (ref_mode + sample_mode)
}

/// Single-pass single-mode bound `4η/(1 - η)²`.
pub fn single_pass_qsm(eta: Transmissivity) -> f64 {
    let e = eta.get();
    4.0 * e / ((1.0 - e) * (1.0 - e))
}

/// How the beam-splitter angle is searched for a fixed module count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum XiSearch {
    /// Pin `ξ` to the lower end of the bracket. For `h ≥ 2` the objective
    /// is nearly flat as `ξ → 0`, and a local optimizer started there stops
    /// at the edge.
    #[default]
    LowerEdge,
    /// Scan the whole bracket and refine the best grid point.
    Global,
}

/// Search settings for [`optimize_network`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkSearch {
    pub h_max: u32,
    /// Passes per module.
    pub k: u32,
    /// Bracket for `hξ`.
    pub h_xi_min: f64,
    pub h_xi_max: f64,
    pub xi_search: XiSearch,
    /// Optimize `φ̃` as well instead of fixing it to zero.
    pub free_phi: bool,
    pub samples: usize,
    pub tol: f64,
}

impl Default for NetworkSearch {
    fn default() -> Self {
        NetworkSearch {
            h_max: 64,
            k: 1,
            h_xi_min: 0.01,
            h_xi_max: 6.0,
            xi_search: XiSearch::LowerEdge,
            free_phi: false,
            samples: 400,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkOptimum {
    pub eta: f64,
    pub h: u32,
    pub k: f64,
    pub xi: f64,
    pub h_xi: f64,
    pub varphi: f64,
    pub fpl: f64,
    /// `F′` relative to the single-pass single-mode bound `4η/(1 - η)²`.
    pub ratio: f64,
}

fn fpl_or_zero(cfg: Result<NetworkConfig>) -> f64 {
    cfg.and_then(|c| network_fpl(&c)).unwrap_or(0.0)
}

/// Best `(ξ, φ̃)` for a fixed module count.
fn optimize_fixed_h(eta: Transmissivity, h: u32, search: &NetworkSearch) -> (f64, f64, f64) {
    let hf = f64::from(h);
    let (lo, hi) = (
        search.h_xi_min / hf,
        (search.h_xi_max / hf).min(TAU - 1e-12),
    );
    let k = f64::from(search.k);
    let along_xi = |phi: f64| {
        let f = |xi: f64| fpl_or_zero(NetworkConfig::new(eta, h, k, xi, phi));
        match search.xi_search {
            XiSearch::LowerEdge => Maximum {
                x: lo,
                value: f(lo),
            },
            XiSearch::Global => scan_then_refine(f, lo, hi, search.samples, search.tol),
        }
    };
    let mut phi = 0.0;
    let mut best = along_xi(phi);
    if search.free_phi {
        let mut xi = best.x;
        for _ in 0..50 {
            let p = scan_then_refine(
                |p| fpl_or_zero(NetworkConfig::new(eta, h, k, xi, p)),
                -std::f64::consts::PI,
                std::f64::consts::PI,
                64,
                search.tol,
            );
            let x = along_xi(p.x);
            let improved = x.value > best.value * (1.0 + 1e-13);
            if x.value >= best.value {
                best = x;
                phi = p.x;
                xi = x.x;
            }
            if !improved {
                break;
            }
        }
    }
    (best.x, phi, best.value)
}

/// Heuristic search over module count and beam-splitter angle.
///
/// Each `h ∈ 1..=h_max` is optimized independently (in parallel with the
/// `parallel` feature); the best is returned, ties going to smaller `h`
/// and then smaller `ξ`.
pub fn optimize_network(eta: Transmissivity, search: &NetworkSearch) -> Result<NetworkOptimum> {
    if search.h_max == 0 {
        return Err(Error::invalid("h_max", "must be at least 1"));
    }
    if search.k == 0 {
        return Err(Error::invalid("k", "must be at least 1"));
    }
    if !(search.h_xi_min > 0.0 && search.h_xi_min < search.h_xi_max) {
        return Err(Error::invalid(
            "h_xi_min",
            "bracket must satisfy 0 < min < max",
        ));
    }
    let per_h = map_h(search.h_max, |h| (h, optimize_fixed_h(eta, h, search)));
    let mut best: Option<(u32, (f64, f64, f64))> = None;
    for (h, (xi, phi, v)) in per_h {
        let better = match best {
            None => true,
            Some((_, (bxi, _, bv))) => v > bv || (v == bv && xi < bxi),
        };
        if better {
            best = Some((h, (xi, phi, v)));
        }
    }
    let (h, (xi, varphi, fpl)) = best.expect("h_max >= 1");
    Ok(NetworkOptimum {
        eta: eta.get(),
        h,
        k: f64::from(search.k),
        xi,
        h_xi: f64::from(h) * xi,
        varphi,
        fpl,
        ratio: fpl / single_pass_qsm(eta),
    })
}

#[cfg(feature = "parallel")]
fn map_h<T: Send>(h_max: u32, f: impl Fn(u32) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (1..=h_max).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_h<T>(h_max: u32, f: impl Fn(u32) -> T) -> Vec<T> {
    (1..=h_max).map(f).collect()
}

/// Search settings for [`optimize_network_continuous`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuousSearch {
    pub h_max: u32,
    /// Bracket for the module loss exponent `u = -h ln γ`.
    pub u_range: (f64, f64),
    /// Bracket for `hξ`.
    pub h_xi_range: (f64, f64),
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for ContinuousSearch {
    fn default() -> Self {
        ContinuousSearch {
            h_max: 2048,
            u_range: (0.05, 20.0),
            h_xi_range: (0.01, 6.0),
            tol: 1e-10,
            max_sweeps: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuousOptimum {
    pub gamma: f64,
    pub h: u32,
    pub h_xi: f64,
    /// Maximized `ln²γ f(0, γ)`; `F′ = value / ln²η` for any `η`.
    pub value: f64,
    /// `value / 4`, the ratio to the continuous-`k` single-mode limit
    /// `4/ln²η`.
    pub ratio: f64,
}

/// Deterministic starting points `(u, hξ)` for the coordinate descent.
const CONTINUOUS_SEEDS: [(f64, f64); 8] = [
    (1.0, 1.0),
    (1.0, 5.0),
    (3.0, 2.5),
    (5.0, 5.0),
    (6.0, 1.0),
    (8.0, 4.0),
    (12.0, 5.5),
    (16.0, 3.0),
];

/// The η-free objective `ln²γ f(0, γ)` in the `(u, hξ)` chart.
fn continuous_objective(h: u32, u: f64, h_xi: f64) -> f64 {
    let hf = f64::from(h);
    let gamma = (-u / hf).exp();
    let xi = h_xi / hf;
    if !(gamma > 0.0 && gamma < 1.0) || !(0.0..TAU).contains(&xi) {
        return 0.0;
    }
    fpl_or_zero(NetworkConfig::reparameterized(gamma, h, xi, 0.0))
}

fn coordinate_descent(h: u32, seed: (f64, f64), search: &ContinuousSearch) -> (f64, f64, f64) {
    let (ulo, uhi) = search.u_range;
    let (xlo, xhi) = search.h_xi_range;
    let (mut u, mut x) = seed;
    let mut value = continuous_objective(h, u, x);
    // local brackets shrink with the step sizes of the previous sweep
    let (mut wu, mut wx) = (0.25 * (uhi - ulo), 0.25 * (xhi - xlo));
    for _ in 0..search.max_sweeps {
        let (u0, x0, v0) = (u, x, value);
        let mu = golden_section_max(
            |t| continuous_objective(h, t, x),
            (u - wu).max(ulo),
            (u + wu).min(uhi),
            search.tol,
        );
        if mu.value >= value {
            u = mu.x;
            value = mu.value;
        }
        let mx = golden_section_max(
            |t| continuous_objective(h, u, t),
            (x - wx).max(xlo),
            (x + wx).min(xhi),
            search.tol,
        );
        if mx.value >= value {
            x = mx.x;
            value = mx.value;
        }
        let (du, dx) = ((u - u0).abs(), (x - x0).abs());
        wu = (4.0 * du).clamp(1e3 * search.tol, 0.25 * (uhi - ulo));
        wx = (4.0 * dx).clamp(1e3 * search.tol, 0.25 * (xhi - xlo));
        if du <= search.tol * (1.0 + u.abs())
            && dx <= search.tol * (1.0 + x.abs())
            && value - v0 <= 1e-15 * value
        {
            break;
        }
    }
    (u, x, value)
}

/// Continuous-`k` campaign: maximize `ln²γ f(0, γ)` over the module
/// transmissivity `γ`, the module count `h` and `ξ`.
///
/// Every `h ∈ 1..=h_max` is searched by coordinate descent on
/// `(u = -h ln γ, hξ)` from each of eight fixed seeds.
pub fn optimize_network_continuous(search: &ContinuousSearch) -> Result<ContinuousOptimum> {
    if search.h_max == 0 {
        return Err(Error::invalid("h_max", "must be at least 1"));
    }
    let per_h = map_h(search.h_max, |h| {
        let best = CONTINUOUS_SEEDS
            .iter()
            .map(|&seed| coordinate_descent(h, seed, search))
            .fold(
                (0.0, 0.0, f64::NEG_INFINITY),
                |a, b| if b.2 > a.2 { b } else { a },
            );
        (h, best)
    });
    let (h, (u, h_xi, value)) = per_h
        .into_iter()
        .fold(None::<(u32, (f64, f64, f64))>, |acc, cur| match acc {
            Some(a) if a.1 .2 >= cur.1 .2 => Some(a),
            _ => Some(cur),
        })
        .expect("h_max >= 1");
    Ok(ContinuousOptimum {
        gamma: (-u / f64::from(h)).exp(),
        h,
        h_xi,
        value,
        ratio: value / 4.0,
    })
}
