//! The weight function associated with a sequence and the reconstruction of
//! the sequence from it.
//!
//! Two independent evaluation routes are kept side by side: the counting
//! representation (exact and O(log J) per point for log-convex input) and the
//! direct supremum over tabulated indices (the oracle the counting route is
//! tested against).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::numeric::{geomspace, golden_max, ArgmaxSite};
use crate::sequence::WeightSequence;
use crate::weightfn::WeightFunction;

/// Evaluation handle for the associated function of a log-convex sequence.
///
/// Valid strictly below its quotient horizon: `omega(t)` needs every quotient
/// `mu_j <= t` tabulated, so evaluation demands `log t < log mu_(j_max)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssociatedWeight {
    log_m: Arc<Vec<f64>>,
    /// log quotients, `log_mu[0] = 0`, nondecreasing for log-convex input.
    log_mu: Arc<Vec<f64>>,
    /// Carried so the horizon can grow on demand.
    source: WeightSequence,
}

impl AssociatedWeight {
    pub fn new(seq: &WeightSequence) -> Result<Self> {
        let mut log_mu = Vec::with_capacity(seq.len());
        log_mu.push(0.0);
        for j in 1..seq.len() {
            log_mu.push(seq.log_mu(j));
        }
        if log_mu.windows(2).skip(1).any(|w| w[1] < w[0] - 1e-9) {
            return Err(Error::Precondition(
                "counting route requires nondecreasing quotients (log-convex sequence)".into(),
            ));
        }
        Ok(AssociatedWeight {
            log_m: Arc::new(seq.log_values().to_vec()),
            log_mu: Arc::new(log_mu),
            source: seq.clone(),
        })
    }

    pub fn j_max(&self) -> usize {
        self.log_m.len() - 1
    }

    pub fn source(&self) -> &WeightSequence {
        &self.source
    }

    /// Exclusive upper bound on evaluable `log t`.
    pub fn log_t_hi(&self) -> f64 {
        self.log_mu[self.log_mu.len() - 1]
    }

    /// Extend so that `log t` up to `y` (plus margin) is evaluable.
    pub fn ensure_log_t(&self, y: f64, cfg: &Config) -> Result<Self> {
        if y < self.log_t_hi() {
            return Ok(self.clone());
        }
        let mut len = self.log_m.len();
        loop {
            len = (len * 2).min(cfg.max_tabulation);
            let seq = self.source.materialize(len, cfg)?;
            let got = seq.log_mu(len - 1);
            if got > y || len == cfg.max_tabulation {
                if got <= y {
                    return Err(Error::HorizonOverflow(format!(
                        "log t = {y:.3} unreachable: quotient horizon {got:.3} at cap {len}"
                    )));
                }
                return AssociatedWeight::new(&seq);
            }
        }
    }

    /// Ensure indices up to `j` (plus slack) are tabulated; conjugate
    /// arguments up to `x` need quotients past `x`.
    pub fn ensure_index(&self, j: usize, cfg: &Config) -> Result<Self> {
        if self.j_max() >= j + 2 {
            return Ok(self.clone());
        }
        let seq = self.source.materialize(j + 4, cfg)?;
        AssociatedWeight::new(&seq)
    }

    /// Number of quotients `<= e^y` (the counting function at log scale).
    pub fn count_at(&self, y: f64) -> usize {
        self.log_mu[1..].partition_point(|&m| m <= y)
    }

    /// `omega(e^y)` by the counting representation:
    /// sum over `mu_j <= e^y` of `(y - log mu_j) = n y - log M_n`.
    pub fn eval_log(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        debug_assert!(
            y < self.log_t_hi(),
            "evaluation at log t = {y} beyond quotient horizon {}",
            self.log_t_hi()
        );
        let n = self.count_at(y);
        n as f64 * y - self.log_m[n]
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 1.0 {
            return 0.0;
        }
        self.eval_log(t.ln())
    }

    /// Independent oracle: direct sup over tabulated indices, with the argmax
    /// index so callers can detect boundary contact.
    pub fn direct_sup_log(&self, y: f64) -> (f64, usize) {
        let mut best = 0.0;
        let mut arg = 0usize;
        for j in 0..self.log_m.len() {
            let v = j as f64 * y - self.log_m[j];
            if v > best {
                best = v;
                arg = j;
            }
        }
        (best, arg)
    }
}

/// `omega_M(t)` for a tabulated sequence. Log-convex input goes through the
/// counting route (auto-extending through the generator when `t` lies beyond
/// the quotient horizon); general normalized input falls back to the direct
/// sup, which errors when its argmax touches the tabulated boundary.
pub fn omega_m_at(m: &WeightSequence, t: f64, cfg: &Config) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("t must be positive, got {t}")));
    }
    if t <= 1.0 {
        return Ok(0.0);
    }
    let y = t.ln();
    match AssociatedWeight::new(m) {
        Ok(assoc) => {
            let assoc = assoc.ensure_log_t(y, cfg)?;
            Ok(assoc.eval_log(y))
        }
        Err(_) => {
            // Not log-convex: direct sup over the tabulated range only.
            let mut best = 0.0;
            let mut arg = 0usize;
            for j in 0..m.len() {
                let v = j as f64 * y - m.log_m(j);
                if v > best {
                    best = v;
                    arg = j;
                }
            }
            if arg + 1 >= m.len() {
                return Err(Error::HorizonOverflow(format!(
                    "direct sup argmax at tabulated boundary j={arg} for t={t}"
                )));
            }
            Ok(best)
        }
    }
}

/// Materialized associated function on a geometric grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssociatedWeightTable {
    pub source: String,
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn omega_m_table(
    m: &WeightSequence,
    t_min: f64,
    t_max: f64,
    points: usize,
    cfg: &Config,
) -> Result<AssociatedWeightTable> {
    if !(t_min > 0.0) || t_max <= t_min {
        return Err(Error::DegenerateGrid(format!(
            "need 0 < t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if points < 16 {
        return Err(Error::DegenerateGrid("need at least 16 grid points".into()));
    }
    let t_grid = geomspace(t_min, t_max, points)?;
    let values = t_grid
        .iter()
        .map(|&t| omega_m_at(m, t, cfg))
        .collect::<Result<Vec<f64>>>()?;
    let source = m
        .generator()
        .map(|g| g.id())
        .unwrap_or_else(|| format!("tabulated(J={})", m.len()));
    Ok(AssociatedWeightTable { source, t_grid, values })
}

/// Default table: 512 points on `[1, mu_(J-2)]`, where the maximizers of the
/// reconstruction problem for orders up to J-2 live.
pub fn omega_m_table_default(m: &WeightSequence, cfg: &Config) -> Result<AssociatedWeightTable> {
    let hi = m.log_mu(m.j_max().saturating_sub(2)).exp();
    omega_m_table(m, 1.0, hi.max(2.0), cfg.t_points, cfg)
}

/// Recover `log M_j = sup_t (j log t - omega(t))` from any evaluable weight.
///
/// Grid argmax plus golden-section refinement between the neighboring nodes;
/// an argmax on the final node is a truncation symptom and errors rather than
/// silently underestimating.
pub fn reconstruct_log_m(omega: &WeightFunction, j: usize, cfg: &Config) -> Result<f64> {
    let (lo, hi) = omega.log_t_range(cfg)?;
    if j == 0 {
        // sup of -omega, attained on the normalization plateau.
        return Ok(0.0);
    }
    let n = cfg.t_points.max(64);
    let step = (hi - lo) / (n - 1) as f64;
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0usize;
    for i in 0..n {
        let y = lo + step * i as f64;
        let v = j as f64 * y - omega.eval_log(y)?;
        if v > best {
            best = v;
            arg = i;
        }
    }
    if arg + 1 >= n {
        return Err(Error::HorizonOverflow(format!(
            "reconstruction argmax for j={j} at the grid boundary (log t = {hi:.3})"
        )));
    }
    let wlo = lo + step * arg.saturating_sub(1) as f64;
    let whi = lo + step * (arg + 1) as f64;
    let refined = golden_max(
        |y| j as f64 * y - omega.eval_log(y).unwrap_or(f64::INFINITY),
        wlo,
        whi,
    );
    Ok(refined.value.max(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::SequenceFamily as SF;

    fn cfg() -> Config {
        Config::default()
    }

    fn seq(f: SF, len: usize) -> WeightSequence {
        WeightSequence::from_family(f, len, &cfg()).unwrap()
    }

    #[test]
    fn factorial_at_e_matches_closed_form() {
        // Counting: mu_1 = 1, mu_2 = 2 are <= e, so omega(e) = 2 - log 2.
        let m = seq(SF::Gevrey { s: 1.0 }, 64);
        let v = omega_m_at(&m, std::f64::consts::E, &cfg()).unwrap();
        assert!((v - (2.0 - 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn counting_equals_direct_sup_oracle() {
        // Brute-force sup over j <= 64 agrees to 1e-12 relative.
        for fam in [SF::Gevrey { s: 1.0 }, SF::Gevrey { s: 0.5 }, SF::Qgevrey { q: 2.0 }, SF::SlowVar]
        {
            let m = seq(fam.clone(), 512);
            let assoc = AssociatedWeight::new(&m).unwrap();
            let hi = (assoc.log_t_hi() - 1e-6).min(40.0);
            for y in geomspace(0.05, hi, 48).unwrap() {
                let counting = assoc.eval_log(y);
                let (direct, arg) = assoc.direct_sup_log(y);
                assert!(arg + 1 < m.len(), "boundary argmax for {fam:?}");
                let scale = 1.0 + counting.abs();
                assert!(
                    (counting - direct).abs() / scale < 1e-10,
                    "{fam:?} y={y}: {counting} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn zero_below_one_for_normalized_input() {
        let m = seq(SF::Gevrey { s: 2.0 }, 64);
        assert_eq!(omega_m_at(&m, 1.0, &cfg()).unwrap(), 0.0);
        assert_eq!(omega_m_at(&m, 0.25, &cfg()).unwrap(), 0.0);
        assert!(omega_m_at(&m, 0.0, &cfg()).is_err());
    }

    #[test]
    fn qgevrey_at_eight_matches_finite_sup() {
        // sup_j [3j log2 - j^2 log2] = 2 log 2 at j in {1, 2}.
        let m = seq(SF::Qgevrey { q: 2.0 }, 64);
        let v = omega_m_at(&m, 8.0, &cfg()).unwrap();
        assert!((v - 2.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn generator_extends_past_tabulated_horizon() {
        let m = seq(SF::Gevrey { s: 1.0 }, 16);
        // mu_15 = 15; t = 1000 forces re-tabulation.
        let v = omega_m_at(&m, 1000.0, &cfg()).unwrap();
        let big = seq(SF::Gevrey { s: 1.0 }, 4096);
        let oracle = AssociatedWeight::new(&big).unwrap().eval(1000.0);
        assert!((v - oracle).abs() < 1e-9);
    }

    #[test]
    fn horizon_overflow_without_generator() {
        let m = WeightSequence::from_log_values(
            (0..32).map(|j| crate::numeric::log_factorial(j)).collect(),
        )
        .unwrap();
        assert!(omega_m_at(&m, 1e9, &cfg()).is_err());
    }

    #[test]
    fn table_is_monotone_and_log_convex() {
        let m = seq(SF::Gevrey { s: 1.0 }, 128);
        let tab = omega_m_table(&m, 1.0, 8f64.exp(), 64, &cfg()).unwrap();
        assert_eq!(tab.values[0], 0.0);
        assert!(tab.values.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        // Convexity in log t on the geometric grid.
        for i in 1..tab.values.len() - 1 {
            let mid = 2.0 * tab.values[i];
            assert!(tab.values[i - 1] + tab.values[i + 1] >= mid - 1e-9);
        }
        assert!(omega_m_table(&m, 2.0, 2.0, 64, &cfg()).is_err());
        assert!(omega_m_table(&m, 1.0, 10.0, 4, &cfg()).is_err());
    }

    #[test]
    fn qgevrey_table_final_value() {
        // sup_j [10 j - j^2] log2 = 25 log2 at j = 5.
        let m = seq(SF::Qgevrey { q: 2.0 }, 64);
        let tab = omega_m_table(&m, 1.0, 2f64.powi(10), 128, &cfg()).unwrap();
        let last = *tab.values.last().unwrap();
        assert!((last - 25.0 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn defining_inequality_holds_pointwise() {
        // omega(t) >= j log t - log M_j for every tabulated pair.
        let m = seq(SF::Gevrey { s: 0.5 }, 128);
        let tab = omega_m_table_default(&m, &cfg()).unwrap();
        for (&t, &w) in tab.t_grid.iter().zip(&tab.values) {
            for j in 0..m.len() {
                assert!(w >= j as f64 * t.ln() - m.log_m(j) - 1e-9);
            }
        }
    }

    #[test]
    fn anti_monotonicity() {
        // M <= N pointwise implies omega_N <= omega_M.
        let m = seq(SF::Gevrey { s: 1.0 }, 256);
        let n = seq(SF::Gevrey { s: 2.0 }, 256);
        assert!(m.le_pointwise(&n));
        for t in geomspace(1.5, 1e4, 32).unwrap() {
            let wm = omega_m_at(&m, t, &cfg()).unwrap();
            let wn = omega_m_at(&n, t, &cfg()).unwrap();
            assert!(wn <= wm + 1e-9);
        }
    }
}
