//! One-parameter families of weight sequences and their order relations.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::families::{Generator, SequenceFamily, WeightGen};
use crate::sequence::{check_lc, preceq, WeightSequence};
use crate::verdict::{ConditionVerdict, Verdict, Witness};

/// Whether a matrix stands for a family over all of `(0, inf)` (sampled at
/// the tabulated indices, extendable through its generator) or for exactly
/// the tabulated entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexDomain {
    Sampled,
    Unbounded,
}

/// Produces the sequence at any requested index for unbounded-domain
/// matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MatrixGenerator {
    /// x -> (j!)^x.
    GevreyPowers,
    /// l -> sequence with log entries `phi*_omega(l j)/l`.
    Conjugates(WeightGen),
}

impl MatrixGenerator {
    pub fn sequence_generator(&self, x: f64) -> Generator {
        match self {
            MatrixGenerator::GevreyPowers => Generator::Family(SequenceFamily::Gevrey { s: x }),
            MatrixGenerator::Conjugates(w) => Generator::Conjugate { weight: w.clone(), l: x },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightMatrix {
    /// (index, sequence) pairs, strictly increasing in the index.
    entries: Vec<(f64, WeightSequence)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<MatrixGenerator>,
    pub index_domain: IndexDomain,
    /// Whether the entries are pointwise ordered (always enforced by `new`;
    /// recorded honestly by `new_unchecked_order`).
    pub pointwise_ordered: bool,
}

impl WeightMatrix {
    pub fn new(
        entries: Vec<(f64, WeightSequence)>,
        generator: Option<MatrixGenerator>,
        index_domain: IndexDomain,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if !entries.windows(2).all(|w| w[1].0 > w[0].0) {
            return Err(Error::Precondition("matrix indices must be strictly increasing".into()));
        }
        for (x, seq) in &entries {
            if seq.log_values()[0].abs() > 1e-9 || !seq.is_nondecreasing() {
                return Err(Error::Precondition(format!(
                    "entry at x={x} is not normalized nondecreasing"
                )));
            }
        }
        for w in entries.windows(2) {
            if !w[0].1.le_pointwise(&w[1].1) {
                return Err(Error::Precondition(format!(
                    "pointwise order fails between x={} and x={}",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(WeightMatrix { entries, generator, index_domain, pointwise_ordered: true })
    }

    /// Construction that records instead of enforcing the pointwise order;
    /// used by the second-level matrix whose pair index set is not totally
    /// ordered.
    pub fn new_unchecked_order(
        entries: Vec<(f64, WeightSequence)>,
        index_domain: IndexDomain,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let ordered = entries.windows(2).all(|w| w[0].1.le_pointwise(&w[1].1));
        Ok(WeightMatrix { entries, generator: None, index_domain, pointwise_ordered: ordered })
    }

    pub fn singleton(seq: WeightSequence) -> Self {
        WeightMatrix {
            entries: vec![(1.0, seq)],
            generator: None,
            index_domain: IndexDomain::Sampled,
            pointwise_ordered: true,
        }
    }

    pub fn entries(&self) -> &[(f64, WeightSequence)] {
        &self.entries
    }

    pub fn indices(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn generator(&self) -> Option<&MatrixGenerator> {
        self.generator.as_ref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sequence at index `x`, tabulated to `len`: an existing entry when
    /// sampled, generated otherwise (unbounded domains only).
    pub fn sequence_at(&self, x: f64, len: usize, cfg: &Config) -> Result<WeightSequence> {
        if let Some((_, seq)) = self.entries.iter().find(|(xi, _)| (*xi - x).abs() < 1e-12) {
            return seq.materialize(len, cfg);
        }
        match (&self.generator, self.index_domain) {
            (Some(gen), IndexDomain::Unbounded) => {
                WeightSequence::from_generator(gen.sequence_generator(x), len, cfg)
            }
            _ => Err(Error::Precondition(format!(
                "index {x} is not sampled and the matrix index set is not extendable"
            ))),
        }
    }

    /// Witness candidates at or above `x` (existential index searches of
    /// Roumieu shape), ascending, smallest first. Unbounded matrices append
    /// generator-extended indices beyond the sample.
    pub fn candidates_above(&self, x: f64, cfg: &Config) -> Vec<f64> {
        let mut c: Vec<f64> =
            self.entries.iter().map(|e| e.0).filter(|&xi| xi >= x - 1e-12).collect();
        if self.index_domain == IndexDomain::Unbounded && self.generator.is_some() {
            for f in &cfg.witness_extension {
                c.push(x * f);
            }
        }
        c.sort_by(|a, b| a.partial_cmp(b).unwrap());
        c.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        c
    }

    /// Witness candidates at or below `x`, ascending (Beurling searches scan
    /// smaller indices first).
    pub fn candidates_below(&self, x: f64, cfg: &Config) -> Vec<f64> {
        let mut c: Vec<f64> =
            self.entries.iter().map(|e| e.0).filter(|&xi| xi <= x + 1e-12).collect();
        if self.index_domain == IndexDomain::Unbounded && self.generator.is_some() {
            for f in &cfg.witness_extension {
                c.push(x / f);
            }
        }
        c.sort_by(|a, b| a.partial_cmp(b).unwrap());
        c.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        c
    }

    /// Every entry in the good class (standard log-convexity of the matrix).
    pub fn check_sc(&self, cfg: &Config) -> Result<ConditionVerdict> {
        let mut verdict = Verdict::True;
        let mut notes = Vec::new();
        for (x, seq) in &self.entries {
            let v = check_lc(seq, cfg)?;
            verdict = verdict.and(v.verdict);
            if v.verdict != Verdict::True {
                notes.push(format!("entry x={x}: {:?}", v.diagnostics.notes));
            }
        }
        let mut out = ConditionVerdict::new("matrix-sc", verdict).with_candidates(&self.indices());
        for n in notes {
            out = out.with_note(n);
        }
        Ok(out)
    }
}

fn matrix_preceq(
    m: &WeightMatrix,
    n: &WeightMatrix,
    cfg: &Config,
    beurling: bool,
    id: &str,
) -> Result<ConditionVerdict> {
    if m.is_empty() || n.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let mut verdict = Verdict::True;
    let mut witnesses = Vec::new();
    for (x, mx) in m.entries() {
        let mut found = None;
        for (y, ny) in n.entries() {
            let rel = if beurling { preceq(ny, mx, cfg)? } else { preceq(mx, ny, cfg)? };
            if rel.verdict == Verdict::True {
                found = Some((*y, rel.witnesses[0].constants[0].1));
                break;
            }
        }
        match found {
            Some((y, sup)) => {
                witnesses.push(Witness::for_x(*x).with_y(y).with("sup_log_root_ratio", sup))
            }
            None => {
                verdict = Verdict::False;
                witnesses.push(Witness::for_x(*x));
            }
        }
    }
    Ok(ConditionVerdict {
        witnesses,
        ..ConditionVerdict::new(id, verdict).with_candidates(&n.indices())
    })
}

/// Roumieu order: every entry of `m` sits below some entry of `n` up to a
/// geometric factor.
pub fn matrix_preceq_roumieu(
    m: &WeightMatrix,
    n: &WeightMatrix,
    cfg: &Config,
) -> Result<ConditionVerdict> {
    matrix_preceq(m, n, cfg, false, "matrix-preceq-roumieu")
}

/// Beurling order: for every entry of `m` some entry of `n` sits below it.
pub fn matrix_preceq_beurling(
    m: &WeightMatrix,
    n: &WeightMatrix,
    cfg: &Config,
) -> Result<ConditionVerdict> {
    matrix_preceq(m, n, cfg, true, "matrix-preceq-beurling")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::SequenceFamily as SF;

    fn cfg() -> Config {
        Config::default()
    }

    fn gevrey_matrix(xs: &[f64], len: usize) -> WeightMatrix {
        let entries = xs
            .iter()
            .map(|&x| {
                (x, WeightSequence::from_family(SF::Gevrey { s: x }, len, &cfg()).unwrap())
            })
            .collect();
        WeightMatrix::new(entries, Some(MatrixGenerator::GevreyPowers), IndexDomain::Unbounded)
            .unwrap()
    }

    #[test]
    fn construction_enforces_pointwise_order() {
        let a = WeightSequence::from_family(SF::Gevrey { s: 2.0 }, 32, &cfg()).unwrap();
        let b = WeightSequence::from_family(SF::Gevrey { s: 1.0 }, 32, &cfg()).unwrap();
        assert!(WeightMatrix::new(
            vec![(1.0, a), (2.0, b)],
            None,
            IndexDomain::Sampled
        )
        .is_err());
    }

    #[test]
    fn reflexive_matrix_order() {
        let m = gevrey_matrix(&[1.0, 2.0, 3.0], 128);
        let r = matrix_preceq_roumieu(&m, &m, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::True);
        // Identity witness map: smallest y with M^x preceq N^y is y = x.
        for w in &r.witnesses {
            assert_eq!(w.x, w.y);
        }
        assert_eq!(matrix_preceq_beurling(&m, &m, &cfg()).unwrap().verdict, Verdict::True);
    }

    #[test]
    fn geometric_shifts_absorb_into_single_entry() {
        let shifted: Vec<(f64, WeightSequence)> = [1.0f64, 2.0, 4.0]
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let fam = SF::GeomShift { c, of: Box::new(SF::Gevrey { s: 1.0 }) };
                (i as f64 + 1.0, WeightSequence::from_family(fam, 256, &cfg()).unwrap())
            })
            .collect();
        let m = WeightMatrix::new(shifted, None, IndexDomain::Sampled).unwrap();
        let n = WeightMatrix::singleton(
            WeightSequence::from_family(SF::Gevrey { s: 1.0 }, 256, &cfg()).unwrap(),
        );
        let r = matrix_preceq_roumieu(&m, &n, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::True);
        assert!(r.witnesses.iter().all(|w| w.y == Some(1.0)));
    }

    #[test]
    fn powers_vs_qgevrey_order_is_one_sided() {
        let m = gevrey_matrix(&[1.0, 2.0], 256);
        let n = WeightMatrix::singleton(
            WeightSequence::from_family(SF::Qgevrey { q: 2.0 }, 256, &cfg()).unwrap(),
        );
        assert_eq!(matrix_preceq_roumieu(&m, &n, &cfg()).unwrap().verdict, Verdict::True);
        assert_eq!(matrix_preceq_roumieu(&n, &m, &cfg()).unwrap().verdict, Verdict::False);
    }

    #[test]
    fn candidates_extend_only_unbounded_domains() {
        let m = gevrey_matrix(&[0.5, 1.0, 2.0, 4.0], 64);
        let above = m.candidates_above(4.0, &cfg());
        assert!(above.contains(&8.0) && above.contains(&64.0));
        let below = m.candidates_below(0.5, &cfg());
        assert!(below.contains(&0.25));

        let s = WeightMatrix::singleton(
            WeightSequence::from_family(SF::Gevrey { s: 1.0 }, 64, &cfg()).unwrap(),
        );
        assert_eq!(s.candidates_above(1.0, &cfg()), vec![1.0]);
    }

    #[test]
    fn sequence_at_generates_beyond_sample() {
        let m = gevrey_matrix(&[1.0, 2.0], 64);
        let gen = m.sequence_at(8.0, 32, &cfg()).unwrap();
        assert!((gen.log_m(3) - 8.0 * 6f64.ln()).abs() < 1e-9);
        let s = WeightMatrix::singleton(
            WeightSequence::from_family(SF::Gevrey { s: 1.0 }, 64, &cfg()).unwrap(),
        );
        assert!(s.sequence_at(2.0, 32, &cfg()).is_err());
    }

    #[test]
    fn sc_check_flags_non_members() {
        let m = gevrey_matrix(&[1.0, 2.0], 64);
        assert_eq!(m.check_sc(&cfg()).unwrap().verdict, Verdict::True);
        let geo = WeightSequence::from_log_values(
            (0..64).map(|j| j as f64 * 2f64.ln()).collect(),
        )
        .unwrap();
        let bad = WeightMatrix::singleton(geo);
        assert_eq!(bad.check_sc(&cfg()).unwrap().verdict, Verdict::False);
    }
}
