//! The lossy phase channel, its multi-pass composition and photon
//! accounting.
//!
//! Loss and phase commute, so `k` consecutive applications of a channel with
//! transmissivity `η` and phase `θ` act as a single channel `(ηᵏ, kθ)`.

use serde::Serialize;

use crate::{Error, Result};

/// Smallest and largest accepted per-pass transmissivity. Optimal pass
/// counts diverge as `η → 1`.
pub const ETA_MIN: f64 = 1e-9;
pub const ETA_MAX: f64 = 1.0 - 1e-9;

/// Per-pass transmissivity `η`, validated to `[ETA_MIN, ETA_MAX]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Transmissivity(f64);

impl Transmissivity {
    pub fn new(eta: f64) -> Result<Self> {
        if !(ETA_MIN..=ETA_MAX).contains(&eta) {
            return Err(Error::invalid(
                "eta",
                format!("{eta} is outside [{ETA_MIN:e}, 1 - 1e-9]"),
            ));
        }
        Ok(Transmissivity(eta))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `ln η`, strictly negative.
    #[inline]
    pub fn ln(self) -> f64 {
        self.0.ln()
    }

    /// `ηᵏ`.
    #[inline]
    pub fn pow(self, k: f64) -> f64 {
        self.0.powf(k)
    }
}

/// Number of passes through the lossy phase.
///
/// Continuous counts stand in for a sample length chosen from a continuum;
/// discrete counts model an intrinsically discrete element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PassCount {
    k: f64,
    discrete: bool,
}

impl PassCount {
    pub fn continuous(k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::invalid(
                "k",
                format!("{k} is not a positive finite number"),
            ));
        }
        Ok(PassCount { k, discrete: false })
    }

    pub fn discrete(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k", "discrete pass counts start at 1"));
        }
        Ok(PassCount {
            k: f64::from(k),
            discrete: true,
        })
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.k
    }

    #[inline]
    pub fn is_discrete(self) -> bool {
        self.discrete
    }
}

/// A single application of the lossy phase channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossyPhase {
    eta: f64,
    theta: f64,
}

impl LossyPhase {
    pub fn new(eta: Transmissivity, theta: f64) -> Self {
        LossyPhase {
            eta: eta.get(),
            theta,
        }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `k`-fold application: `(ηᵏ, kθ)`.
    pub fn compose(&self, k: PassCount) -> LossyPhase {
        LossyPhase {
            eta: self.eta.powf(k.value()),
            theta: k.value() * self.theta,
        }
    }

    /// Mean photons lost at the phase over `k` passes of a probe carrying
    /// `n_in` photons: `n_in (1 - ηᵏ)`.
    pub fn lost_photons(&self, k: PassCount, n_in: f64) -> f64 {
        n_in * -(k.value() * self.eta.ln()).exp_m1()
    }

    /// Mean photons incident on the phase over `k` passes, from
    /// `lost = incident · (1 - η)`.
    pub fn incident_photons(&self, k: PassCount, n_in: f64) -> f64 {
        self.lost_photons(k, n_in) / (1.0 - self.eta)
    }
}

/// Total photons incident on the phase when a probe of `n_in` photons makes
/// `n_passes` passes, losing a fraction `1 - η` each time.
pub fn classical_incident_photons(eta: Transmissivity, n_passes: u32, n_in: f64) -> Result<f64> {
    if n_passes == 0 {
        return Err(Error::invalid("n_passes", "at least one pass is required"));
    }
    let eta = eta.get();
    Ok(n_in * (1.0 - eta.powi(n_passes as i32)) / (1.0 - eta))
}

/// Incident-photon budget of a single pass of an `n`-photon N00N state versus
/// an `n`-pass classical probe carrying one photon on average; both reach
/// the same QFI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoonComparison {
    pub noon_incident: f64,
    pub classical_incident: f64,
    pub classical_fewer: bool,
}

pub fn noon_comparison(eta: Transmissivity, n: u32) -> Result<NoonComparison> {
    let classical_incident = classical_incident_photons(eta, n, 1.0)?;
    let noon_incident = f64::from(n);
    Ok(NoonComparison {
        noon_incident,
        classical_incident,
        classical_fewer: classical_incident < noon_incident,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn eta(x: f64) -> Transmissivity {
        Transmissivity::new(x).unwrap()
    }

    #[test]
    fn transmissivity_bounds() {
        assert!(Transmissivity::new(0.0).is_err());
        assert!(Transmissivity::new(1.0).is_err());
        assert!(Transmissivity::new(f64::NAN).is_err());
        assert!(Transmissivity::new(1e-9).is_ok());
        assert!(Transmissivity::new(1.0 - 1e-9).is_ok());
    }

    #[test]
    fn pass_count_validation() {
        assert!(PassCount::discrete(0).is_err());
        assert!(PassCount::continuous(0.0).is_err());
        assert!(PassCount::continuous(-1.0).is_err());
        assert!(PassCount::discrete(3).unwrap().is_discrete());
    }

    #[test]
    fn compose_examples() {
        let lp = LossyPhase::new(eta(0.5), 0.1);
        assert_eq!(lp.compose(PassCount::discrete(1).unwrap()), lp);
        let two = lp.compose(PassCount::discrete(2).unwrap());
        assert_relative_eq!(two.eta(), 0.25);
        assert_relative_eq!(two.theta(), 0.2);

        let lp = LossyPhase::new(eta(0.9), 1.0);
        let c = lp.compose(PassCount::continuous(6.58).unwrap());
        assert_relative_eq!(c.theta(), 6.58);
        // bracketed by the integer powers from repeated multiplication
        let mut p6 = 1.0;
        for _ in 0..6 {
            p6 *= 0.9;
        }
        let p7 = p6 * 0.9;
        assert!(c.eta() < p6 && c.eta() > p7);
        assert_relative_eq!(c.eta(), (6.58 * 0.9_f64.ln()).exp(), max_relative = 1e-15);
    }

    #[test]
    fn lost_photon_examples() {
        let k1 = PassCount::discrete(1).unwrap();
        let k2 = PassCount::discrete(2).unwrap();
        assert_relative_eq!(LossyPhase::new(eta(0.5), 0.0).lost_photons(k1, 2.0), 1.0);
        assert_relative_eq!(LossyPhase::new(eta(0.5), 0.0).lost_photons(k2, 1.0), 0.75);
        assert_relative_eq!(
            LossyPhase::new(eta(0.2032), 0.0).lost_photons(k1, 1.0),
            0.7968,
            max_relative = 1e-12
        );
    }

    #[test]
    fn incident_photon_examples() {
        assert_relative_eq!(classical_incident_photons(eta(0.5), 2, 1.0).unwrap(), 1.5);
        assert_relative_eq!(classical_incident_photons(eta(0.37), 1, 1.0).unwrap(), 1.0);
        let explicit: f64 = (0..10).map(|p| 0.9_f64.powi(p)).sum();
        let closed = classical_incident_photons(eta(0.9), 10, 1.0).unwrap();
        assert_relative_eq!(closed, explicit, max_relative = 1e-14);
        assert_relative_eq!(closed, 6.513, epsilon = 5e-4);
        assert!(classical_incident_photons(eta(0.9), 0, 1.0).is_err());
    }

    #[test]
    fn noon_examples() {
        let c = noon_comparison(eta(0.5), 2).unwrap();
        assert_eq!(
            (c.noon_incident, c.classical_incident, c.classical_fewer),
            (2.0, 1.5, true)
        );
        let c = noon_comparison(eta(0.99), 1).unwrap();
        assert_eq!(
            (c.noon_incident, c.classical_incident, c.classical_fewer),
            (1.0, 1.0, false)
        );
        let c = noon_comparison(eta(0.1), 5).unwrap();
        assert_relative_eq!(c.classical_incident, 1.1111, epsilon = 1e-4);
        assert!(c.classical_fewer);
    }

    proptest! {
        #[test]
        fn composition_is_multiplicative(e in 0.01_f64..0.99, a in 0.1_f64..5.0, b in 0.1_f64..5.0, th in -3.0_f64..3.0) {
            let lp = LossyPhase::new(eta(e), th);
            let ka = PassCount::continuous(a).unwrap();
            let kb = PassCount::continuous(b).unwrap();
            let nested = lp.compose(ka).compose(kb);
            let direct = lp.compose(PassCount::continuous(a * b).unwrap());
            prop_assert!((nested.eta() - direct.eta()).abs() <= 1e-12 * direct.eta());
            prop_assert!((nested.theta() - direct.theta()).abs() <= 1e-12 * (1.0 + direct.theta().abs()));
        }

        #[test]
        fn classical_probe_sees_fewer_photons(e in 1e-6_f64..0.999, n in 2_u32..200) {
            prop_assert!(classical_incident_photons(eta(e), n, 1.0).unwrap() < f64::from(n));
        }

        #[test]
        fn lost_over_incident_is_single_pass_loss(e in 0.01_f64..0.99, k in 0.1_f64..40.0) {
            let lp = LossyPhase::new(eta(e), 0.0);
            let k = PassCount::continuous(k).unwrap();
            let ratio = lp.lost_photons(k, 3.0) / lp.incident_photons(k, 3.0);
            prop_assert!((ratio - (1.0 - e)).abs() <= 1e-12);
        }
    }
}
