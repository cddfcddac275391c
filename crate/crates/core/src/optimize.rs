//! Small deterministic one-dimensional searches shared by the campaigns.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of a scalar maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section maximization of `f` on `[lo, hi]`.
///
/// Converges to a local maximum of a unimodal function; the bracket is
/// shrunk until its width is at most `tol · (1 + |lo| + |hi|)`. The best
/// interior point or endpoint seen is returned.
pub fn golden_section_max<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Maximum
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(lo <= hi);
    let (a0, b0) = (lo, hi);
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol * (1.0 + lo.abs() + hi.abs()) {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    let mid = 0.5 * (lo + hi);
    let mut best = Maximum {
        x: mid,
        value: f(mid),
    };
    for x in [a0, b0] {
        if lo - x == 0.0 || hi - x == 0.0 {
            let value = f(x);
            if value > best.value {
                best = Maximum { x, value };
            }
        }
    }
    best
}

/// Maximization over a bracket that may hold several local maxima: scan
/// `samples` evenly spaced points, then refine around the best one.
pub fn scan_then_refine<F>(mut f: F, lo: f64, hi: f64, samples: usize, tol: f64) -> Maximum
where
    F: FnMut(f64) -> f64,
{
    let samples = samples.max(3);
    let step = (hi - lo) / (samples - 1) as f64;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..samples {
        let v = f(lo + step * i as f64);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(hi);
    let refined = golden_section_max(&mut f, a, b, tol);
    if refined.value >= best_v {
        refined
    } else {
        Maximum {
            x: lo + step * best_i as f64,
            value: best_v,
        }
    }
}

/// Bisection for a root of `f` on `[lo, hi]`, given a sign change.
/// Returns `None` without one.
pub fn bisect_root<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Option<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let m = golden_section_max(|x| -(x - 1.3).powi(2), -2.0, 4.0, 1e-12);
        assert!((m.x - 1.3).abs() < 1e-6);
    }

    #[test]
    fn golden_returns_endpoint_for_monotone() {
        let m = golden_section_max(|x| x, 0.0, 1.0, 1e-12);
        assert!((m.x - 1.0).abs() < 1e-10);
        let m = golden_section_max(|x| -x, 0.0, 1.0, 1e-12);
        assert!(m.x.abs() < 1e-10);
    }

    #[test]
    fn scan_picks_global_of_two_peaks() {
        let f =
            |x: f64| (-(x - 0.5).powi(2) * 50.0).exp() + 2.0 * (-(x - 3.0).powi(2) * 50.0).exp();
        let m = scan_then_refine(f, 0.0, 4.0, 200, 1e-12);
        assert!((m.x - 3.0).abs() < 1e-6);
    }

    #[test]
    fn bisection_root() {
        let r = bisect_root(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect_root(|x| x * x + 1.0, 0.0, 2.0, 1e-12).is_none());
    }
}
