//! Single-mode phase-squeezed coherent probes read out by homodyne
//! detection.
//!
//! Quadratures are `x₁ = (a† + a)/2`, `x₂ = i(a† - a)/2`, so the vacuum
//! covariance matrix is `I/4`. A probe is prepared as
//! `R(φ) D(α) S(r, π) |0⟩` and carries `α² + sinh²r` photons on average.

use std::f64::consts::{LN_10, PI};

use serde::Serialize;

use crate::channels::{LossyPhase, Transmissivity};
use crate::specfun::constants;
use crate::{Error, Result};

pub type Mat2 = [[f64; 2]; 2];

/// Quadrature means and covariances of a single-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianState {
    pub d: [f64; 2],
    pub gamma: Mat2,
}

impl GaussianState {
    pub fn vacuum() -> Self {
        GaussianState {
            d: [0.0; 2],
            gamma: [[0.25, 0.0], [0.0, 0.25]],
        }
    }

    pub fn det(&self) -> f64 {
        self.gamma[0][0] * self.gamma[1][1] - self.gamma[0][1] * self.gamma[1][0]
    }
}

fn rotation(angle: f64) -> Mat2 {
    let (s, c) = angle.sin_cos();
    [[c, -s], [s, c]]
}

/// Derivative of [`rotation`] with respect to its angle.
fn rotation_prime(angle: f64) -> Mat2 {
    let (s, c) = angle.sin_cos();
    [[-s, -c], [c, -s]]
}

fn mat_vec(m: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn transpose(m: &Mat2) -> Mat2 {
    [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
}

/// `A M Bᵀ`.
fn sandwich(a: &Mat2, m: &Mat2, b: &Mat2) -> Mat2 {
    mat_mul(&mat_mul(a, m), &transpose(b))
}

/// Parameters of a phase-squeezed coherent probe (squeezing phase fixed to
/// `π`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianSchemeParams {
    alpha: f64,
    r: f64,
    varphi: f64,
}

impl GaussianSchemeParams {
    pub const PHI_SQ: f64 = PI;

    pub fn new(alpha: f64, r: f64, varphi: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(
                "alpha",
                format!("{alpha} must be a finite value >= 0"),
            ));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::invalid(
                "r",
                format!("{r} must be a finite value >= 0"),
            ));
        }
        if !varphi.is_finite() {
            return Err(Error::invalid("varphi", "must be finite"));
        }
        Ok(GaussianSchemeParams { alpha, r, varphi })
    }

    /// Homodyne angle locked to `π/2 - θ`.
    pub fn locked(alpha: f64, r: f64, theta: f64) -> Result<Self> {
        Self::new(alpha, r, PI / 2.0 - theta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn varphi(&self) -> f64 {
        self.varphi
    }

    /// Photons spent on squeezing, `sinh²r`.
    pub fn n_sq(&self) -> f64 {
        self.r.sinh().powi(2)
    }

    pub fn n_total(&self) -> f64 {
        self.alpha * self.alpha + self.n_sq()
    }
}

pub fn prepare(params: &GaussianSchemeParams) -> GaussianState {
    let rot = rotation(params.varphi);
    let e2r = (2.0 * params.r).exp();
    let core = [[0.25 * e2r, 0.0], [0.0, 0.25 / e2r]];
    GaussianState {
        d: mat_vec(&rot, [params.alpha, 0.0]),
        gamma: sandwich(&rot, &core, &rot),
    }
}

/// Passage through a lossy phase: the state is rotated by `θ`, every
/// moment is damped by `η` and vacuum noise `(1 - η)/4` is mixed into the
/// diagonal.
pub fn apply_loss_phase(state: &GaussianState, lp: &LossyPhase) -> GaussianState {
    let eta = lp.eta();
    let rot = rotation(lp.theta());
    let d = mat_vec(&rot, state.d);
    let mut gamma = sandwich(&rot, &state.gamma, &rot);
    for (i, row) in gamma.iter_mut().enumerate() {
        for (j, g) in row.iter_mut().enumerate() {
            *g *= eta;
            if i == j {
                *g += 0.25 * (1.0 - eta);
            }
        }
    }
    GaussianState {
        d: [eta.sqrt() * d[0], eta.sqrt() * d[1]],
        gamma,
    }
}

/// Fisher information of a normal outcome with mean `mu` and variance `v`,
/// given their parameter derivatives: `μ̇²/V + V̇²/(2V²)`.
pub fn homodyne_fisher(mu: f64, v: f64, dmu: f64, dv: f64) -> Result<f64> {
    let _ = mu;
    if v.is_nan() || v <= 0.0 {
        return Err(Error::domain(
            "homodyne_fisher",
            format!("variance {v} must be positive"),
        ));
    }
    Ok(dmu * dmu / v + dv * dv / (2.0 * v * v))
}

/// Homodyne (`x₁`) Fisher information about `θ` after the probe crosses
/// the lossy phase, from the output moments and their exact
/// `θ`-derivatives. Valid at any homodyne angle.
pub fn moment_fisher(params: &GaussianSchemeParams, lp: &LossyPhase) -> Result<f64> {
    let input = prepare(params);
    let out = apply_loss_phase(&input, lp);
    let eta = lp.eta();
    let rot = rotation(lp.theta());
    let drot = rotation_prime(lp.theta());
    let dd = mat_vec(&drot, input.d);
    let dgamma = {
        let a = sandwich(&drot, &input.gamma, &rot);
        let b = sandwich(&rot, &input.gamma, &drot);
        eta * (a[0][0] + b[0][0])
    };
    homodyne_fisher(out.d[0], out.gamma[0][0], eta.sqrt() * dd[0], dgamma)
}

/// Homodyne Fisher information at the locked angle,
/// `4α²η / (1 + (e^{-2r} - 1)η)`.
pub fn scheme_fisher(params: &GaussianSchemeParams, eta: Transmissivity) -> f64 {
    let eta = eta.get();
    let alpha = params.alpha;
    4.0 * alpha * alpha * eta / (1.0 + (-2.0 * params.r).exp_m1() * eta)
}

/// `e^{-2r}` for `sinh²r = n_sq`, without cancellation at large `n_sq`.
fn squeeze_factor(n_sq: f64) -> f64 {
    if n_sq == 0.0 {
        return 1.0;
    }
    1.0 - 2.0 * n_sq / (n_sq + (n_sq * (n_sq + 1.0)).sqrt())
}

/// Homodyne Fisher information at the locked angle for a total photon
/// budget `n` of which `n_sq` go into squeezing.
pub fn scheme_fisher_at_budget(n_sq: f64, n: f64, eta: Transmissivity) -> f64 {
    let eta = eta.get();
    4.0 * eta * (n - n_sq) / (1.0 - eta * (1.0 - squeeze_factor(n_sq)))
}

/// Fisher information per lost photon in the bright-probe limit at fixed
/// squeezing photons `n_sq`:
/// `[(1 - η) / (2η n_sq - 2η√(n_sq(n_sq+1)) + 1)] · 4η/(1 - η)²`.
pub fn scheme_fpl_limit(n_sq: f64, eta: Transmissivity) -> f64 {
    let e = eta.get();
    let fraction = (1.0 - e) / (1.0 - e * (1.0 - squeeze_factor(n_sq)));
    fraction * 4.0 * e / ((1.0 - e) * (1.0 - e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezingRequirement {
    pub eta: f64,
    pub n_sq: f64,
    pub r: f64,
    pub squeezing_db: f64,
}

pub const SQUEEZING_NSQ_MAX: f64 = 1e8;

/// Squeezing that lets the bright Gaussian probe match the optimal
/// single-mode classical multi-pass strategy, `4·(-W(2+W))/ln²η`.
///
/// Returns `None` when the target is out of reach for `n_sq ≤ 10⁸`, which
/// happens for `η ≲ 0.095` where the classical optimum exceeds the
/// single-pass bound.
pub fn required_squeezing_db(eta: Transmissivity) -> Option<SqueezingRequirement> {
    let ln = eta.ln();
    let target = 4.0 * constants().cl_const / (ln * ln);
    let gap = |n_sq: f64| scheme_fpl_limit(n_sq, eta) - target;
    let n_sq = if gap(0.0) >= 0.0 {
        0.0
    } else {
        crate::optimize::bisect_root(gap, 0.0, SQUEEZING_NSQ_MAX, 1e-12)?
    };
    let r = n_sq.sqrt().asinh();
    Some(SqueezingRequirement {
        eta: eta.get(),
        n_sq,
        r,
        squeezing_db: 20.0 * r / LN_10,
    })
}

/// Squeezing parameter `r` for a squeezing level in dB.
pub fn db_to_r(squeezing_db: f64) -> f64 {
    squeezing_db * LN_10 / 20.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedBudgetOptimum {
    pub n_sq: f64,
    pub fisher: f64,
}

/// Optimal squeezing allocation for a total photon budget `n`, and the
/// resulting Fisher information.
pub fn optimal_nsq_fixed_n(eta: Transmissivity, n: f64) -> Result<FixedBudgetOptimum> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::invalid("n", format!("{n} must be positive")));
    }
    let e = eta.get();
    let s = (1.0 + 4.0 * (1.0 - e) * e * n).sqrt();
    let s_minus_1 = 4.0 * (1.0 - e) * e * n / (s + 1.0);
    let n_sq = s_minus_1 * s_minus_1 / (4.0 * (1.0 - e) * (s - e));
    let fisher = 4.0 * e * n * (1.0 - 2.0 * e / (s + 1.0)) / (1.0 - e);
    Ok(FixedBudgetOptimum { n_sq, fisher })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::golden_section_max;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn eta(x: f64) -> Transmissivity {
        Transmissivity::new(x).unwrap()
    }

    fn assert_mat(a: Mat2, b: Mat2, tol: f64) {
        for i in 0..2 {
            for j in 0..2 {
                assert!((a[i][j] - b[i][j]).abs() <= tol, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn prepare_examples() {
        let vac = prepare(&GaussianSchemeParams::new(0.0, 0.0, 0.0).unwrap());
        assert_eq!(vac, GaussianState::vacuum());
        let coh = prepare(&GaussianSchemeParams::new(1.0, 0.0, 0.0).unwrap());
        assert_eq!(coh.d, [1.0, 0.0]);
        assert_mat(coh.gamma, GaussianState::vacuum().gamma, 0.0);
        let sq = prepare(&GaussianSchemeParams::new(0.0, 1.0, PI / 2.0).unwrap());
        let e2 = 1f64.exp().powi(2);
        assert_mat(sq.gamma, [[0.25 / e2, 0.0], [0.0, 0.25 * e2]], 1e-15);
    }

    #[test]
    fn loss_examples() {
        let lp = LossyPhase::new(eta(0.3), 0.7);
        let out = apply_loss_phase(&GaussianState::vacuum(), &lp);
        assert_mat(out.gamma, GaussianState::vacuum().gamma, 1e-16);
        assert_eq!(out.d, [0.0, 0.0]);

        let coh = prepare(&GaussianSchemeParams::new(1.0, 0.0, 0.0).unwrap());
        let out = apply_loss_phase(&coh, &LossyPhase::new(eta(0.25), 0.0));
        assert_eq!(out.d, [0.5, 0.0]);
        assert_mat(out.gamma, GaussianState::vacuum().gamma, 1e-16);

        let sq = prepare(&GaussianSchemeParams::new(0.0, 1.0, 0.0).unwrap());
        let out = apply_loss_phase(&sq, &LossyPhase::new(eta(0.5), 0.0));
        let e2 = 1f64.exp().powi(2);
        assert_mat(
            out.gamma,
            [[(e2 * 0.5 + 0.5) / 4.0, 0.0], [0.0, (0.5 / e2 + 0.5) / 4.0]],
            1e-15,
        );
    }

    #[test]
    fn loss_matches_rotated_output_formula() {
        // Γ_out = ¼ R(φ+θ) diag(e^{2r}η + 1 - η, e^{-2r}η + 1 - η) Rᵀ(φ+θ)
        let (alpha, r, varphi, e, theta) = (1.3, 0.8, 0.4, 0.6, 0.25);
        let out = apply_loss_phase(
            &prepare(&GaussianSchemeParams::new(alpha, r, varphi).unwrap()),
            &LossyPhase::new(eta(e), theta),
        );
        let rot = rotation(varphi + theta);
        let core = [
            [0.25 * ((2.0 * r).exp() * e + 1.0 - e), 0.0],
            [0.0, 0.25 * ((-2.0 * r).exp() * e + 1.0 - e)],
        ];
        assert_mat(out.gamma, sandwich(&rot, &core, &rot), 1e-14);
        let d = mat_vec(&rot, [e.sqrt() * alpha, 0.0]);
        assert!((out.d[0] - d[0]).abs() < 1e-14 && (out.d[1] - d[1]).abs() < 1e-14);
    }

    #[test]
    fn homodyne_examples() {
        assert_eq!(homodyne_fisher(0.0, 1.0, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(homodyne_fisher(0.0, 1.0, 2.0, 0.0).unwrap(), 4.0);
        assert_relative_eq!(
            homodyne_fisher(0.0, 0.5, 1.0, 0.1).unwrap(),
            2.02,
            max_relative = 1e-15
        );
        assert!(homodyne_fisher(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(homodyne_fisher(0.0, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn scheme_examples() {
        let p = GaussianSchemeParams::locked(1.5, 0.0, 0.0).unwrap();
        assert_relative_eq!(
            scheme_fisher(&p, eta(0.4)),
            4.0 * 2.25 * 0.4,
            max_relative = 1e-15
        );
        let p = GaussianSchemeParams::locked(1.0, 0.7, 0.0).unwrap();
        assert_relative_eq!(
            scheme_fisher(&p, eta(1.0 - 1e-9)),
            4.0 * 1.4f64.exp(),
            max_relative = 1e-8
        );
        let p = GaussianSchemeParams::locked(1.0, 1.0, 0.3).unwrap();
        let v = scheme_fisher(&p, eta(0.5));
        let by_hand = 4.0 * 0.5 / (1.0 + ((-2.0_f64).exp() - 1.0) * 0.5);
        assert_relative_eq!(v, by_hand, max_relative = 1e-14);
        assert!((v - 3.5232).abs() < 1e-4, "{v}");
        let lp = LossyPhase::new(eta(0.5), 0.3);
        assert_relative_eq!(moment_fisher(&p, &lp).unwrap(), v, max_relative = 1e-12);
    }

    #[test]
    fn fpl_limit_examples() {
        for e in [0.1, 0.5, 0.9] {
            assert_relative_eq!(
                scheme_fpl_limit(0.0, eta(e)),
                4.0 * e / (1.0 - e),
                max_relative = 1e-14
            );
            let q = 4.0 * e / (1.0 - e).powi(2);
            assert_relative_eq!(scheme_fpl_limit(1e8, eta(e)), q, max_relative = 1e-3);
        }
        // n_sq = 1, η = 0.5
        let expected = 0.5 / (1.0 - 2f64.sqrt() + 1.0) * (2.0 / 0.25);
        assert_relative_eq!(
            scheme_fpl_limit(1.0, eta(0.5)),
            expected,
            max_relative = 1e-14
        );
        // as the bright-probe limit of F / lost photons
        let r = 1f64.asinh();
        let big = 1e9;
        let p = GaussianSchemeParams::locked(big, r, 0.0).unwrap();
        let fpl = scheme_fisher(&p, eta(0.5)) / (p.n_total() * 0.5);
        assert_relative_eq!(fpl, expected, max_relative = 1e-9);
    }

    /// Closed-form inversion of the bright-probe `F′` for `e^{-2r}`.
    fn inverse_oracle(e: f64, target: f64) -> f64 {
        let x = 1.0 - (1.0 - 4.0 * e / ((1.0 - e) * target)) / e;
        let r = -0.5 * x.ln();
        r.sinh().powi(2)
    }

    #[test]
    fn required_squeezing_round_trip_and_oracle() {
        let c = constants();
        let mut prev = f64::NEG_INFINITY;
        for i in 1..=9 {
            let e = i as f64 / 10.0;
            let req = required_squeezing_db(eta(e)).expect("reachable for eta >= 0.1");
            let target = 4.0 * c.cl_const / e.ln().powi(2);
            let back = scheme_fpl_limit(db_to_r(req.squeezing_db).sinh().powi(2), eta(e));
            assert!(((back - target) / target).abs() <= 1e-9);
            assert_relative_eq!(
                req.n_sq,
                inverse_oracle(e, target),
                max_relative = 1e-8,
                epsilon = 1e-12
            );
            // independent bisection on n_sq over [0, 1e6]
            let (mut lo, mut hi) = (0.0_f64, 1e6_f64);
            for _ in 0..300 {
                let mid = 0.5 * (lo + hi);
                if scheme_fpl_limit(mid, eta(e)) < target {
                    lo = mid
                } else {
                    hi = mid
                }
            }
            assert_relative_eq!(
                req.n_sq,
                0.5 * (lo + hi),
                max_relative = 1e-8,
                epsilon = 1e-12
            );
            // the curve rises with η above the crossover at γ_opt
            if e > 0.3 {
                assert!(req.squeezing_db > prev);
            }
            prev = req.squeezing_db;
        }
        let at_gamma = required_squeezing_db(eta(c.gamma_opt)).unwrap();
        assert!(at_gamma.n_sq < 1e-9);
    }

    #[test]
    fn required_squeezing_unreachable_for_small_eta() {
        assert!(required_squeezing_db(eta(0.05)).is_none());
        assert!(required_squeezing_db(eta(0.1)).is_some());
    }

    #[test]
    fn fixed_budget_examples() {
        let tiny = optimal_nsq_fixed_n(eta(0.5), 1e-6).unwrap();
        assert!(tiny.n_sq < 1e-11);
        assert_relative_eq!(tiny.fisher, 4.0 * 0.5 * 1e-6, max_relative = 1e-6);

        let opt = optimal_nsq_fixed_n(eta(0.5), 10.0).unwrap();
        let oracle = golden_section_max(
            |x| scheme_fisher_at_budget(x, 10.0, eta(0.5)),
            0.0,
            10.0,
            1e-14,
        );
        assert_relative_eq!(opt.fisher, oracle.value, max_relative = 1e-8);
        assert_relative_eq!(opt.n_sq, oracle.x, max_relative = 1e-5);
        assert_relative_eq!(
            scheme_fisher_at_budget(opt.n_sq, 10.0, eta(0.5)),
            opt.fisher,
            max_relative = 1e-12
        );

        // printed closed form for the optimum
        let (e, n) = (0.5_f64, 10.0_f64);
        let printed =
            2.0 * e * (1.0 + 2.0 * n * (1.0 - e) - (1.0 + 4.0 * n * (1.0 - e) * e).sqrt())
                / (e - 1.0).powi(2);
        assert_relative_eq!(opt.fisher, printed, max_relative = 1e-13);
        let sq = (1.0 - 4.0 * (e - 1.0) * e * n).sqrt();
        let printed_nsq = -(sq - 1.0).powi(2) / (4.0 * (e - 1.0) * (sq - e));
        assert_relative_eq!(opt.n_sq, printed_nsq, max_relative = 1e-13);
        assert!(optimal_nsq_fixed_n(eta(0.5), 0.0).is_err());
    }

    /// Simpson quadrature of `∫ (∂θ ln p)² p dx` for a normal density with
    /// θ-dependent mean and variance.
    fn quadrature_fisher(mu: f64, v: f64, dmu: f64, dv: f64) -> f64 {
        let sd = v.sqrt();
        let (a, b) = (mu - 12.0 * sd, mu + 12.0 * sd);
        let n = 4000;
        let h = (b - a) / n as f64;
        let integrand = |x: f64| {
            let z = x - mu;
            let p = (-z * z / (2.0 * v)).exp() / (2.0 * PI * v).sqrt();
            let score = dmu * z / v + dv * (z * z / (2.0 * v * v) - 1.0 / (2.0 * v));
            score * score * p
        };
        let mut s = integrand(a) + integrand(b);
        for i in 1..n {
            s += integrand(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn homodyne_matches_quadrature_example() {
        let q = quadrature_fisher(0.3, 0.5, 1.0, 0.1);
        assert_relative_eq!(
            homodyne_fisher(0.3, 0.5, 1.0, 0.1).unwrap(),
            q,
            max_relative = 1e-9
        );
    }

    proptest! {
        #[test]
        fn locked_fisher_matches_moment_pipeline(alpha in 0.01_f64..20.0, r in 0.0_f64..3.0, e in 0.01_f64..0.99, theta in -PI..PI) {
            let p = GaussianSchemeParams::locked(alpha, r, theta).unwrap();
            let lp = LossyPhase::new(eta(e), theta);
            let direct = scheme_fisher(&p, eta(e));
            let pipeline = moment_fisher(&p, &lp).unwrap();
            prop_assert!((direct - pipeline).abs() <= 1e-10 * direct);
        }

        #[test]
        fn locked_angle_is_stationary(alpha in 0.1_f64..10.0, r in 0.0_f64..2.0, e in 0.05_f64..0.95, theta in -1.0_f64..1.0) {
            let lp = LossyPhase::new(eta(e), theta);
            let at = |varphi: f64| moment_fisher(&GaussianSchemeParams::new(alpha, r, varphi).unwrap(), &lp).unwrap();
            let v0 = PI / 2.0 - theta;
            let h = 1e-5;
            let slope = (at(v0 + h) - at(v0 - h)) / (2.0 * h);
            prop_assert!(slope.abs() <= 1e-6 * at(v0));
        }

        #[test]
        fn bright_probe_never_beats_bound(n_sq in 0.0_f64..1e9, e in 0.001_f64..0.999) {
            let q = 4.0 * e / (1.0 - e).powi(2);
            prop_assert!(scheme_fpl_limit(n_sq, eta(e)) <= q * (1.0 + 1e-12));
        }

        #[test]
        fn fpl_limit_increases_with_squeezing(a in 0.0_f64..1e4, b in 0.0_f64..1e4, e in 0.01_f64..0.99) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(scheme_fpl_limit(lo, eta(e)) <= scheme_fpl_limit(hi, eta(e)));
        }

        #[test]
        fn loss_preserves_physicality(alpha in 0.0_f64..5.0, r in 0.0_f64..4.0, varphi in -PI..PI, e in 0.001_f64..0.999, theta in -PI..PI) {
            // rounding in a·b - c² grows with the squared anti-squeezed variance
            let slack = 1e-12_f64.max(1e-15 * (4.0 * r).exp());
            let s = prepare(&GaussianSchemeParams::new(alpha, r, varphi).unwrap());
            prop_assert!(s.det() >= 1.0 / 16.0 - slack);
            let out = apply_loss_phase(&s, &LossyPhase::new(eta(e), theta));
            prop_assert!(out.det() >= 1.0 / 16.0 - slack);
            prop_assert!((out.gamma[0][1] - out.gamma[1][0]).abs() <= 1e-14 * out.gamma[0][0].max(out.gamma[1][1]));
        }

        #[test]
        fn optimal_allocation_beats_coherent(e in 0.01_f64..0.99, n in 1e-3_f64..1e4) {
            let opt = optimal_nsq_fixed_n(eta(e), n).unwrap();
            prop_assert!(opt.fisher >= 4.0 * e * n * (1.0 - 1e-12));
            prop_assert!(opt.n_sq < n);
        }

        #[test]
        fn homodyne_matches_quadrature(mu in -2.0_f64..2.0, v in 0.05_f64..4.0, dmu in -3.0_f64..3.0, dv in -2.0_f64..2.0) {
            prop_assume!(dmu.abs() + dv.abs() > 1e-3);
            let exact = homodyne_fisher(mu, v, dmu, dv).unwrap();
            let q = quadrature_fisher(mu, v, dmu, dv);
            prop_assert!((exact - q).abs() <= 1e-6 * exact);
        }
    }
}
