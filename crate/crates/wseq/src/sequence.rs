//! Weight sequences in the log domain, their quotient sequences, regularity
//! checks and the comparison relations.
//!
//! All arithmetic stays in logs: raw values like `(j!)^3` at j = 100 overflow
//! any fixed-width float, log values do not.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::families::{Generator, SequenceFamily};
use crate::numeric::int_geomspace;
use crate::tail::bounded_tail;
use crate::verdict::{ConditionVerdict, Verdict, Witness};

/// Log-domain tabulation of a weight sequence `M`, entry j holding
/// `log M_j`, with an optional recipe for re-tabulation at larger horizons.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightSequence {
    log_values: Arc<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<Generator>,
}

impl WeightSequence {
    /// Wrap explicit log values. Requires `log M_0 = 0` (normalization) and
    /// at least two entries.
    pub fn from_log_values(log_values: Vec<f64>) -> Result<Self> {
        if log_values.len() < 2 {
            return Err(Error::Precondition("need at least 2 entries".into()));
        }
        if log_values[0].abs() > 1e-12 {
            return Err(Error::Precondition(format!(
                "log M_0 must be 0 (normalization), got {}",
                log_values[0]
            )));
        }
        if log_values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Malformed("non-finite log value".into()));
        }
        let mut v = log_values;
        v[0] = 0.0;
        Ok(WeightSequence { log_values: Arc::new(v), generator: None })
    }

    pub fn from_generator(gen: Generator, len: usize, cfg: &Config) -> Result<Self> {
        if len < 2 {
            return Err(Error::Precondition(format!("tabulation length {len} < 2")));
        }
        if let Generator::Family(f) = &gen {
            f.validate()?;
        }
        let log_values = gen.tabulate(len, cfg)?;
        Ok(WeightSequence { log_values: Arc::new(log_values), generator: Some(gen) })
    }

    /// The spec's `make_sequence`: tabulate a registered family.
    pub fn from_family(family: SequenceFamily, len: usize, cfg: &Config) -> Result<Self> {
        Self::from_generator(Generator::Family(family), len, cfg)
    }

    pub fn len(&self) -> usize {
        self.log_values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest tabulated index.
    pub fn j_max(&self) -> usize {
        self.log_values.len() - 1
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    pub fn generator(&self) -> Option<&Generator> {
        self.generator.as_ref()
    }

    /// Attach a re-tabulation recipe to an already tabulated sequence.
    pub fn with_generator(mut self, gen: Generator) -> Self {
        self.generator = Some(gen);
        self
    }

    /// `log M_j`; the index must be tabulated.
    pub fn log_m(&self, j: usize) -> f64 {
        self.log_values[j]
    }

    /// Exact `log mu_j` when a closed form exists, tabulated difference
    /// otherwise.
    pub fn log_mu(&self, j: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        match &self.generator {
            Some(Generator::Family(f)) => f.log_mu(j),
            _ => self.log_values[j] - self.log_values[j - 1],
        }
    }

    /// `log (M_j)^{1/j}`.
    pub fn log_root(&self, j: usize) -> f64 {
        debug_assert!(j >= 1);
        self.log_values[j] / j as f64
    }

    /// Same sequence tabulated to at least `len` entries; cheap when already
    /// long enough, regenerated through the generator otherwise.
    pub fn materialize(&self, len: usize, cfg: &Config) -> Result<WeightSequence> {
        if self.len() >= len {
            return Ok(self.clone());
        }
        match &self.generator {
            Some(gen) => {
                if len > cfg.max_tabulation {
                    return Err(Error::HorizonOverflow(format!(
                        "requested tabulation {len} exceeds cap {}",
                        cfg.max_tabulation
                    )));
                }
                Self::from_generator(gen.clone(), len, cfg)
            }
            None => Err(Error::HorizonOverflow(format!(
                "index {} beyond tabulation {} and no generator",
                len - 1,
                self.j_max()
            ))),
        }
    }

    /// First index `j` with `log M_(j-1) + log M_(j+1) < 2 log M_j`, if any.
    pub fn log_convexity_violation(&self) -> Option<usize> {
        (1..self.j_max())
            .find(|&j| self.log_values[j - 1] + self.log_values[j + 1] < 2.0 * self.log_values[j] - 1e-12)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.log_values.windows(2).all(|w| w[1] >= w[0] - 1e-12)
    }

    /// Pointwise `M <= N` on the common tabulated range.
    pub fn le_pointwise(&self, other: &WeightSequence) -> bool {
        let n = self.len().min(other.len());
        (0..n).all(|j| self.log_values[j] <= other.log_values[j] + 1e-9)
    }

    pub fn quotients(&self) -> QuotientSequence {
        let mut log_mu = Vec::with_capacity(self.len());
        log_mu.push(0.0);
        for j in 1..self.len() {
            log_mu.push(self.log_mu(j));
        }
        QuotientSequence { log_mu }
    }
}

/// Quotients `mu_j = M_j / M_(j-1)` in logs, `mu_0 = 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuotientSequence {
    log_mu: Vec<f64>,
}

impl QuotientSequence {
    pub fn log_mu(&self, j: usize) -> f64 {
        self.log_mu[j]
    }

    pub fn values(&self) -> &[f64] {
        &self.log_mu
    }

    pub fn len(&self) -> usize {
        self.log_mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_mu.is_empty()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.log_mu.windows(2).all(|w| w[1] >= w[0] - 1e-12)
    }

    /// Rebuild `log M` by cumulative summation.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.log_mu.len());
        let mut acc = 0.0;
        for (j, &m) in self.log_mu.iter().enumerate() {
            if j > 0 {
                acc += m;
            }
            out.push(acc);
        }
        out
    }
}

/// Membership check for the good class: normalized, log-convex, with
/// diverging roots.
///
/// Divergence is a heuristic on a finite table: the final root must clear the
/// configured threshold, roots must be nondecreasing, and a generator-backed
/// sequence must keep growing at a doubled horizon. A table too short to
/// judge divergence yields `Inconclusive`, never `False`.
pub fn check_lc(m: &WeightSequence, cfg: &Config) -> Result<ConditionVerdict> {
    let id = "lc-membership";
    let jmax = m.j_max();

    if m.log_values()[0].abs() > 1e-12 {
        return Ok(ConditionVerdict::new(id, Verdict::False)
            .with_note("normalization fails: log M_0 != 0")
            .with_len(m.len()));
    }
    if !m.is_nondecreasing() {
        let j = (1..=jmax).find(|&j| m.log_m(j) < m.log_m(j - 1) - 1e-12).unwrap();
        return Ok(ConditionVerdict::new(id, Verdict::False)
            .with_note(format!("monotonicity fails at j={j}: log M_{j} < log M_{}", j - 1))
            .with_len(m.len()));
    }
    if let Some(j) = m.log_convexity_violation() {
        return Ok(ConditionVerdict::new(id, Verdict::False)
            .with_note(format!(
                "log-convexity fails at j={j}: log M_{} + log M_{} < 2 log M_{j}",
                j - 1,
                j + 1
            ))
            .with_len(m.len()));
    }
    if jmax + 1 < 8 {
        return Ok(ConditionVerdict::new(id, Verdict::Inconclusive)
            .with_note("table too short for the root-divergence heuristic (need J >= 8)")
            .with_len(m.len()));
    }

    // Root growth: j -> log(M_j)/j nondecreasing.
    for j in 1..jmax {
        if m.log_root(j + 1) < m.log_root(j) - 1e-12 {
            return Ok(ConditionVerdict::new(id, Verdict::False)
                .with_note(format!("root sequence decreases at j={}", j + 1))
                .with_len(m.len()));
        }
    }

    let threshold = cfg.lc_root_min.ln();
    let final_root = m.log_root(jmax);
    if final_root <= threshold {
        return Ok(ConditionVerdict::new(id, Verdict::False)
            .with_note(format!(
                "root divergence fails: log root {final_root:.6} at j={jmax} <= log({})",
                cfg.lc_root_min
            ))
            .with_len(m.len()));
    }

    // Generator-backed growth check at the doubled horizon.
    if m.generator().is_some() {
        let ext = m.materialize((2 * (jmax + 1)).min(cfg.max_tabulation), cfg)?;
        if ext.log_root(ext.j_max()) <= final_root + 1e-9 {
            return Ok(ConditionVerdict::new(id, Verdict::False)
                .with_note("root sequence stalls under horizon doubling")
                .with_len(m.len()));
        }
    }

    Ok(ConditionVerdict::new(id, Verdict::True)
        .with_witness(Witness::default().with("final_log_root", final_root))
        .with_len(m.len()))
}

fn root_gap_samples(m: &WeightSequence, n: &WeightSequence, points: usize) -> Vec<(f64, f64)> {
    let jmax = m.j_max().min(n.j_max());
    int_geomspace(1, jmax, points)
        .into_iter()
        .map(|j| (j as f64, (m.log_m(j) - n.log_m(j)) / j as f64))
        .collect()
}

/// Relation `M \preceq N`: the root-ratio sup `sup_j (M_j/N_j)^(1/j)` is
/// finite. Decided with the bounded-tail rule; the witness carries the
/// estimated sup of `(log M_j - log N_j)/j`.
pub fn preceq(m: &WeightSequence, n: &WeightSequence, cfg: &Config) -> Result<ConditionVerdict> {
    let jmax = m.j_max().min(n.j_max());
    let base = root_gap_samples(m, n, cfg.j_points.max(64));

    let ext = if m.generator().is_some() && n.generator().is_some() {
        let target = (2 * (jmax + 1)).min(cfg.max_tabulation);
        let me = m.materialize(target, cfg)?;
        let ne = n.materialize(target, cfg)?;
        Some(root_gap_samples(&me, &ne, cfg.j_points.max(64)))
    } else {
        None
    };

    let out = bounded_tail(&base, ext.as_deref(), cfg)?;
    let verdict = if out.bounded { Verdict::True } else { Verdict::False };
    Ok(ConditionVerdict::new("preceq", verdict)
        .with_witness(Witness::default().with("sup_log_root_ratio", out.sup))
        .with_tail_samples(&base)
        .with_len(jmax + 1)
        .with_note(if out.capped {
            "no generator; verdict capped at the tabulated horizon"
        } else {
            "generator-extended check applied"
        }))
}

/// `M` and `N` equivalent: `preceq` both ways.
pub fn equivalent(m: &WeightSequence, n: &WeightSequence, cfg: &Config) -> Result<ConditionVerdict> {
    let fwd = preceq(m, n, cfg)?;
    let bwd = preceq(n, m, cfg)?;
    let verdict = fwd.verdict.and(bwd.verdict);
    let mut v = ConditionVerdict::new("equivalent", verdict).with_len(fwd.grid.tabulation_len);
    for w in fwd.witnesses {
        v.witnesses.push(Witness { constants: vec![("sup_forward".into(), w.constants[0].1)], ..Default::default() });
    }
    for w in bwd.witnesses {
        v.witnesses.push(Witness { constants: vec![("sup_backward".into(), w.constants[0].1)], ..Default::default() });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::SequenceFamily as SF;

    fn cfg() -> Config {
        Config::default()
    }

    fn gevrey(s: f64, len: usize) -> WeightSequence {
        WeightSequence::from_family(SF::Gevrey { s }, len, &cfg()).unwrap()
    }

    #[test]
    fn factorial_quotients_are_log_j() {
        let m = gevrey(1.0, 64);
        let mu = m.quotients();
        for j in 1..64 {
            assert!((mu.log_mu(j) - (j as f64).ln()).abs() < 1e-12);
        }
        assert_eq!(mu.log_mu(0), 0.0);
    }

    #[test]
    fn constant_sequence_has_zero_quotients() {
        let m = WeightSequence::from_log_values(vec![0.0; 32]).unwrap();
        assert!(m.quotients().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn qgevrey_quotients_match_difference_oracle() {
        // Oracle: log mu_j = (2j-1) log 2 by direct differencing.
        let m = WeightSequence::from_family(SF::Qgevrey { q: 2.0 }, 32, &cfg()).unwrap();
        let mu = m.quotients();
        for j in 1..32 {
            let direct = m.log_m(j) - m.log_m(j - 1);
            assert!((mu.log_mu(j) - (2.0 * j as f64 - 1.0) * 2f64.ln()).abs() < 1e-10);
            assert!((mu.log_mu(j) - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn quotients_cumsum_reconstructs_log_values() {
        for s in [0.5, 1.0, 2.0] {
            let m = gevrey(s, 128);
            let rebuilt = m.quotients().cumulative();
            for j in 0..128 {
                assert!((rebuilt[j] - m.log_m(j)).abs() < 1e-9, "s={s} j={j}");
            }
        }
    }

    #[test]
    fn lc_accepts_factorials_and_rejects_constants() {
        assert_eq!(check_lc(&gevrey(1.0, 64), &cfg()).unwrap().verdict, Verdict::True);
        let constant = WeightSequence::from_log_values(vec![0.0; 64]).unwrap();
        assert_eq!(check_lc(&constant, &cfg()).unwrap().verdict, Verdict::False);
    }

    #[test]
    fn lc_rejects_geometric_sequences() {
        // 4^j: log-convex, roots constant at log 4; not a member.
        let geo = WeightSequence::from_log_values(
            (0..64).map(|j| j as f64 * 4f64.ln()).collect(),
        )
        .unwrap();
        assert_eq!(check_lc(&geo, &cfg()).unwrap().verdict, Verdict::False);
    }

    #[test]
    fn lc_names_first_convexity_violation() {
        let m = WeightSequence::from_log_values(vec![0.0, 1.0, 1.5, 2.5]).unwrap();
        let v = check_lc(&m, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::False);
        assert!(v.diagnostics.notes[0].contains("j=1"), "{:?}", v.diagnostics.notes);
    }

    #[test]
    fn lc_short_table_is_inconclusive() {
        let m = WeightSequence::from_log_values(vec![0.0, 0.5, 1.5, 3.0]).unwrap();
        assert_eq!(check_lc(&m, &cfg()).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn root_bound_by_quotient_for_lc_members() {
        // (M_j)^(1/j) <= mu_j in the log domain.
        for fam in [SF::Gevrey { s: 1.0 }, SF::Qgevrey { q: 2.0 }, SF::SlowVar] {
            let m = WeightSequence::from_family(fam, 256, &cfg()).unwrap();
            for j in 1..=m.j_max() {
                assert!(m.log_root(j) <= m.log_mu(j) + 1e-9);
            }
        }
    }

    #[test]
    fn preceq_absorbs_geometric_factors() {
        let m = gevrey(1.0, 256);
        let n = WeightSequence::from_family(
            SF::GeomShift { c: 2.0, of: Box::new(SF::Gevrey { s: 1.0 }) },
            256,
            &cfg(),
        )
        .unwrap();
        let v = preceq(&m, &n, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::True);
        // sup of (log M_j - log N_j)/j = -log 2.
        assert!((v.witnesses[0].constants[0].1 + 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn preceq_rejects_faster_growth() {
        let m = WeightSequence::from_family(SF::Qgevrey { q: 2.0 }, 256, &cfg()).unwrap();
        let n = gevrey(1.0, 256);
        assert_eq!(preceq(&m, &n, &cfg()).unwrap().verdict, Verdict::False);
    }

    #[test]
    fn preceq_is_reflexive_with_zero_witness() {
        let m = gevrey(1.0, 256);
        let v = preceq(&m, &m, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::True);
        assert!(v.witnesses[0].constants[0].1.abs() < 1e-12);
    }

    #[test]
    fn equivalence_of_shifted_sequences() {
        let m = gevrey(1.0, 256);
        let n = WeightSequence::from_family(
            SF::GeomShift { c: 4.0, of: Box::new(SF::Gevrey { s: 1.0 }) },
            256,
            &cfg(),
        )
        .unwrap();
        assert_eq!(equivalent(&m, &n, &cfg()).unwrap().verdict, Verdict::True);
        let q = WeightSequence::from_family(SF::Qgevrey { q: 2.0 }, 256, &cfg()).unwrap();
        assert_eq!(equivalent(&m, &q, &cfg()).unwrap().verdict, Verdict::False);
    }

    #[test]
    fn materialize_extends_through_generator() {
        let m = gevrey(1.0, 16);
        let big = m.materialize(512, &cfg()).unwrap();
        assert_eq!(big.len(), 512);
        assert!((big.log_m(100) - crate::numeric::log_factorial(100)).abs() < 1e-9);
        let bare = WeightSequence::from_log_values(vec![0.0, 0.1, 0.3]).unwrap();
        assert!(bare.materialize(10, &cfg()).is_err());
    }
}
