//! Principal branch of the Lambert W function and the constants it fixes
//! for optimal classical multi-pass interrogation.

use std::f64::consts::E;
use std::sync::OnceLock;

use serde::Serialize;

use crate::{Error, Result};

/// Slack allowed below `-1/e` before an argument is rejected.
const BRANCH_SLACK: f64 = 1e-15;
const STEP_TOL: f64 = 1e-14;
const MAX_ITER: usize = 64;

/// Principal branch `W₀(x)` of the Lambert W function, the solution `w ≥ -1`
/// of `w·eʷ = x` for `x ≥ -1/e`.
///
/// Halley iteration seeded by the branch-point series close to `-1/e`,
/// `ln(1 + x)` in the mid range and the two-term logarithmic asymptote for
/// large arguments.
pub fn lambert_w0(x: f64) -> Result<f64> {
    let branch = -1.0 / E;
    if x.is_nan() || x == f64::INFINITY {
        return Err(Error::domain(
            "lambert_w0",
            format!("argument {x} is not finite"),
        ));
    }
    if x < branch - BRANCH_SLACK {
        return Err(Error::domain(
            "lambert_w0",
            format!("argument {x} is below the branch point -1/e"),
        ));
    }
    if x <= branch {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let mut w = initial_guess(x);
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.abs() <= STEP_TOL * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w.max(-1.0))
}

fn initial_guess(x: f64) -> f64 {
    if x < -0.32 {
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        x.ln_1p()
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}

/// Universal constants of optimal classical multi-pass phase estimation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetrologyConstants {
    /// `W₀(-2/e²)`.
    pub w: f64,
    /// `2 + w`; the optimal pass count is `-k_coeff / ln η`.
    pub k_coeff: f64,
    /// Optimal total transmissivity `e^{-(2 + w)}`.
    pub gamma_opt: f64,
    /// `-w(2 + w)`; the optimal classical `F′` is `cl_const / ln²η`.
    pub cl_const: f64,
    /// `√cl_const`, the best classical-to-quantum precision ratio.
    pub advantage_ratio: f64,
}

impl MetrologyConstants {
    fn compute() -> Self {
        let w = lambert_w0(-2.0 / (E * E)).expect("-2/e² lies inside the principal branch");
        let cl_const = -w * (2.0 + w);
        MetrologyConstants {
            w,
            k_coeff: 2.0 + w,
            gamma_opt: (-(2.0 + w)).exp(),
            cl_const,
            advantage_ratio: cl_const.sqrt(),
        }
    }
}

/// Constants computed once on first use.
pub fn constants() -> &'static MetrologyConstants {
    static CONSTANTS: OnceLock<MetrologyConstants> = OnceLock::new();
    CONSTANTS.get_or_init(MetrologyConstants::compute)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn residual(x: f64) -> f64 {
        let w = lambert_w0(x).unwrap();
        (w * w.exp() - x).abs() / x.abs().max(1.0)
    }

    /// Bisection on the monotone map `w ↦ w eʷ` over `[-1, hi]`.
    fn bisect_w0(x: f64) -> f64 {
        let (mut lo, mut hi) = (-1.0_f64, x.max(1.0));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() < x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(lambert_w0(E).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(lambert_w0(-1.0 / E).unwrap(), -1.0);
    }

    #[test]
    fn value_at_minus_two_over_e_squared() {
        let w = lambert_w0(-2.0 / (E * E)).unwrap();
        assert_abs_diff_eq!(w, -0.406, epsilon = 5e-4);
        assert_abs_diff_eq!(w, bisect_w0(-2.0 / (E * E)), epsilon = 1e-13);
    }

    #[test]
    fn rejects_below_branch_point() {
        assert!(matches!(lambert_w0(-0.4), Err(Error::Domain { .. })));
        assert!(lambert_w0(f64::NAN).is_err());
        // within slack
        assert_eq!(lambert_w0(-1.0 / E - 5e-16).unwrap(), -1.0);
    }

    #[test]
    fn residual_on_log_grid() {
        let branch = -1.0 / E;
        let mut xs: Vec<f64> = (0..400)
            .map(|i| branch + 1e-9 * 10f64.powf(i as f64 * 9.0 / 399.0))
            .filter(|&x| x < 0.0)
            .collect();
        xs.extend((0..400).map(|i| 10f64.powf(-12.0 + i as f64 * 18.0 / 399.0)));
        for x in xs {
            assert!(residual(x) <= 1e-12, "x = {x}, residual = {}", residual(x));
        }
    }

    #[test]
    fn constants_match_quoted_values() {
        let c = constants();
        assert_abs_diff_eq!(c.k_coeff, 1.59, epsilon = 0.005);
        assert_abs_diff_eq!(c.gamma_opt, 0.2032, epsilon = 5e-5);
        assert_abs_diff_eq!(c.cl_const, 0.648, epsilon = 5e-4);
        assert!(c.advantage_ratio > 0.804 && c.advantage_ratio < 0.806);
        assert_abs_diff_eq!(c.advantage_ratio.powi(2), c.cl_const, epsilon = 1e-15);
        assert_eq!(c.gamma_opt, (-(2.0 + c.w)).exp());
        assert!((c.w * c.w.exp() + 2.0 / (E * E)).abs() <= 1e-12);
    }

    proptest! {
        #[test]
        fn matches_bisection(x in -0.36_f64..1e6) {
            let w = lambert_w0(x).unwrap();
            prop_assert!(w >= -1.0);
            prop_assert!((w - bisect_w0(x)).abs() <= 1e-9 * (1.0 + w.abs()));
        }
    }
}
