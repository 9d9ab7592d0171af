//! Small numeric helpers: geometric grids, concave maximization, stable
//! log-domain summation.

use crate::error::{Error, Result};

/// Natural log of the factorial, `log(j!)`.
pub fn log_factorial(j: usize) -> f64 {
    libm::lgamma(j as f64 + 1.0)
}

/// Geometric grid of `points` values spanning `[lo, hi]`, both positive.
pub fn geomspace(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi > lo) {
        return Err(Error::DegenerateGrid(format!(
            "geometric grid needs 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    if points < 2 {
        return Err(Error::DegenerateGrid("need at least 2 points".into()));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (points - 1) as f64;
    Ok((0..points).map(|i| (a + step * i as f64).exp()).collect())
}

/// Strictly increasing integer sample of `[lo, hi]`, geometric spacing where
/// possible. Always contains both endpoints.
pub fn int_geomspace(lo: usize, hi: usize, points: usize) -> Vec<usize> {
    assert!(lo >= 1 && hi >= lo);
    let mut out = Vec::with_capacity(points);
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let steps = points.max(2) - 1;
    let mut last = 0usize;
    for i in 0..=steps {
        let v = (a + (b - a) * i as f64 / steps as f64).exp().round() as usize;
        let v = v.clamp(lo, hi);
        if v > last {
            out.push(v);
            last = v;
        }
    }
    if *out.last().unwrap() != hi {
        out.push(hi);
    }
    out
}

/// log(sum(exp(terms))) with the shift-by-max trick.
pub fn logsumexp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + terms.iter().map(|&t| (t - m).exp()).sum::<f64>().ln()
}

/// Where a maximizer landed relative to its search interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgmaxSite {
    Interior,
    LowerEdge,
    UpperEdge,
}

pub struct MaxResult {
    pub arg: f64,
    pub value: f64,
    pub site: ArgmaxSite,
}

/// Golden-section maximization of a unimodal (concave) function on `[lo, hi]`.
///
/// Runs a fixed iteration budget so results are bit-deterministic, then
/// reports whether the argmax hugs an endpoint. Callers must only rely on the
/// value when the objective really is unimodal.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> MaxResult {
    debug_assert!(hi >= lo);
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..220 {
        if b - a <= 1e-13 * (1.0 + hi.abs()) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let arg = 0.5 * (a + b);
    let value = f(arg).max(fc).max(fd);
    let width = (hi - lo).max(1e-300);
    let site = if (arg - lo) / width < 1e-6 {
        ArgmaxSite::LowerEdge
    } else if (hi - arg) / width < 1e-6 {
        ArgmaxSite::UpperEdge
    } else {
        ArgmaxSite::Interior
    };
    MaxResult { arg, value, site }
}

/// Formats a double with 17 significant digits, the interchange format used
/// by every JSON emitter in this workspace.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    if !x.is_finite() {
        // Reports encode non-finite states structurally; this is a guard.
        return "null".into();
    }
    format!("{:.16e}", x)
}

/// Least-squares line fit `y = intercept + slope * x`.
pub fn line_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return (sy / n, 0.0);
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    (intercept, slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_matches_direct_product() {
        let direct: f64 = (1..=10u64).map(|k| (k as f64).ln()).sum();
        assert!((log_factorial(10) - direct).abs() < 1e-10);
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
    }

    #[test]
    fn geomspace_endpoints_and_monotonicity() {
        let g = geomspace(1.0, 1e6, 64).unwrap();
        assert_eq!(g.len(), 64);
        assert!((g[0] - 1.0).abs() < 1e-12);
        assert!((g[63] - 1e6).abs() < 1e-6);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(geomspace(2.0, 2.0, 16).is_err());
    }

    #[test]
    fn golden_finds_quadratic_peak() {
        let r = golden_max(|x| -(x - 3.25) * (x - 3.25), 0.0, 10.0);
        assert!((r.arg - 3.25).abs() < 1e-9);
        assert!(r.value.abs() < 1e-18);
        assert_eq!(r.site, ArgmaxSite::Interior);
    }

    #[test]
    fn golden_flags_boundary() {
        let r = golden_max(|x| x, 0.0, 1.0);
        assert_eq!(r.site, ArgmaxSite::UpperEdge);
    }

    #[test]
    fn logsumexp_survives_large_terms() {
        let v = logsumexp(&[1000.0, 1000.0]);
        assert!((v - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(logsumexp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn fmt17_is_fixed_width_sci() {
        assert_eq!(fmt17(1.0), "1.0000000000000000e0");
        assert_eq!(fmt17(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn line_fit_recovers_line() {
        let pts: Vec<(f64, f64)> = (1..10).map(|i| (i as f64, 2.0 + 3.0 * i as f64)).collect();
        let (b, m) = line_fit(&pts);
        assert!((b - 2.0).abs() < 1e-9 && (m - 3.0).abs() < 1e-9);
    }
}
