//! Estimators for the four mixed growth indices and the two reciprocity
//! identities tying them together.
//!
//! Each index is an inf or sup over an unbounded parameter range; we scan the
//! documented geometric grid, convert every inner tail limit into an exponent
//! estimate, and diagnose the extreme states (exact zero, infinity) from
//! structure the finite grid can actually see: inner divergence, the
//! small-parameter intercept, and exponent collapse under horizon extension.
//! The two sides of each reciprocity run through disjoint code paths (the
//! conjugate side samples sequences, the ratio side samples functions), which
//! is what makes the cross-check meaningful.

use serde::{Deserialize, Serialize};

use crate::assoc::AssociatedWeight;
use crate::config::Config;
use crate::conjugate::{Conjugator, CONJUGATE_TAB_CAP};
use crate::error::{Error, Result};
use crate::families::Generator;
use crate::numeric::{geomspace, int_geomspace, line_fit};
use crate::sequence::WeightSequence;
use crate::tail::{tail_limit, Divergence, TailMode};
use crate::verdict::Verdict;
use crate::weightfn::WeightFunction;

pub use crate::tail::{tail_limit as tail_limit_op, TailEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexKind {
    BetaL,
    AlphaOmega1,
    AlphaMg,
    BetaOmega6,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", content = "value", rename_all = "lowercase")]
pub enum IndexState {
    Finite(f64),
    Zero,
    Infinite,
}

impl IndexState {
    pub fn is_finite_positive(&self) -> bool {
        matches!(self, IndexState::Finite(v) if *v > 0.0)
    }

    pub fn reciprocal(&self) -> IndexState {
        match self {
            IndexState::Zero => IndexState::Infinite,
            IndexState::Infinite => IndexState::Zero,
            IndexState::Finite(v) => IndexState::Finite(1.0 / v),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexEstimate {
    pub kind: IndexKind,
    pub state: IndexState,
    /// [lo, hi] spanned by the two tail windows and the two horizons.
    pub bracket: [f64; 2],
    /// Optimizing grid parameter (q or K).
    pub witness: Option<f64>,
    /// Exponent estimate per grid parameter at the base horizon.
    pub per_param: Vec<(f64, f64)>,
    /// Same at the extended horizon, when one was reachable.
    pub per_param_ext: Vec<(f64, f64)>,
    pub notes: Vec<String>,
}

impl IndexEstimate {
    fn new(kind: IndexKind) -> Self {
        IndexEstimate {
            kind,
            state: IndexState::Zero,
            bracket: [0.0, 0.0],
            witness: None,
            per_param: Vec::new(),
            per_param_ext: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn value_for_report(&self) -> Option<f64> {
        match self.state {
            IndexState::Finite(v) => Some(v),
            _ => None,
        }
    }
}

/// Inner tail outcome on the exponent scale.
#[derive(Debug, Clone, Copy)]
enum Inner {
    Diverged,
    Collapsed,
    Value { estimate: f64, lo: f64, hi: f64 },
}

fn seq_cap(s: &WeightSequence, cfg: &Config) -> usize {
    match s.generator() {
        Some(Generator::Family(_)) => cfg.max_tabulation,
        Some(Generator::Conjugate { .. }) => CONJUGATE_TAB_CAP,
        None => s.len(),
    }
}

/// Conjugate-side sampler: tail statistics of
/// `phi*_num(q j)/(q j) - phi*_den(j)/j` for every q on the grid, computed at
/// one horizon.
struct ConjSide {
    num: Conjugator,
    den: Conjugator,
}

impl ConjSide {
    fn build(m_num: &WeightSequence, m_den: &WeightSequence, max_q: f64, j_hi: usize, cfg: &Config) -> Result<ConjSide> {
        let need = ((max_q * j_hi as f64).ceil() as usize + 16).min(seq_cap(m_num, cfg));
        let num_seq = m_num.materialize(need, cfg)?;
        let den_seq = m_den.materialize((j_hi + 16).min(seq_cap(m_den, cfg)), cfg)?;
        Ok(ConjSide {
            num: Conjugator::from_sequence(&num_seq, num_seq.j_max().saturating_sub(8) as f64, cfg)?,
            den: Conjugator::from_sequence(&den_seq, den_seq.j_max().saturating_sub(8) as f64, cfg)?,
        })
    }

    fn gap_tail(&self, q: f64, j_hi: usize, mode: TailMode, cfg: &Config) -> Result<Inner> {
        let samples = int_geomspace(8, j_hi, cfg.j_points)
            .into_iter()
            .map(|j| {
                let jq = q * j as f64;
                let num = self.num.phi_star(jq)? / jq;
                let den = self.den.phi_star(j as f64)? / j as f64;
                Ok((j as f64, num - den))
            })
            .collect::<Result<Vec<_>>>()?;
        let t = tail_limit(&samples, mode, cfg)?;
        Ok(match t.divergence {
            Some(Divergence::PlusInfinity) => Inner::Diverged,
            Some(Divergence::MinusInfinity) => Inner::Collapsed,
            None => Inner::Value { estimate: t.estimate, lo: t.bracket[0], hi: t.bracket[1] },
        })
    }
}

/// Ratio-side sampler: tail statistics of `top(K t) / bot(t)` past the
/// positivity threshold of the denominator.
struct RatioSide {
    top: WeightFunction,
    bot: WeightFunction,
    lo: f64,
    hi: f64,
}

impl RatioSide {
    fn build(top: &WeightFunction, bot: &WeightFunction, cfg: &Config) -> Result<RatioSide> {
        let lo = bot.positivity_log_t(cfg)?.max(top.positivity_log_t(cfg)?);
        let hi = top.log_t_range(cfg)?.1.min(bot.log_t_range(cfg)?.1);
        if hi <= lo + 0.5 {
            return Err(Error::PositivityUnreachable(
                "no usable range past the positivity threshold".into(),
            ));
        }
        Ok(RatioSide { top: top.clone(), bot: bot.clone(), lo, hi })
    }

    fn extended(&self, cfg: &Config) -> Option<RatioSide> {
        let target = self.lo + (self.hi - self.lo) * cfg.horizon_ext_factor;
        let (top, ok_t) = self.top.extend_log_t(target + 5.0, cfg);
        let (bot, ok_b) = self.bot.extend_log_t(target, cfg);
        if ok_t && ok_b {
            Some(RatioSide { top, bot, lo: self.lo, hi: target })
        } else {
            None
        }
    }

    fn ratio_tail(&self, ln_k: f64, mode: TailMode, cfg: &Config) -> Result<Inner> {
        let hi = (self.hi - ln_k).min(self.hi);
        if hi <= self.lo + 0.25 {
            return Err(Error::HorizonOverflow(format!(
                "shift log K = {ln_k:.3} leaves no sampling room"
            )));
        }
        let step = (hi - self.lo) / (cfg.t_points - 1) as f64;
        let samples = (0..cfg.t_points)
            .map(|i| {
                let y = self.lo + step * i as f64;
                Ok((y, self.top.eval_log(y + ln_k)? / self.bot.eval_log(y)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let t = tail_limit(&samples, mode, cfg)?;
        Ok(match t.divergence {
            Some(Divergence::PlusInfinity) => Inner::Diverged,
            Some(Divergence::MinusInfinity) => Inner::Collapsed,
            None if t.estimate <= 0.0 => Inner::Collapsed,
            None => Inner::Value {
                estimate: t.estimate.ln(),
                lo: t.bracket[0].max(1e-300).ln(),
                hi: t.bracket[1].max(1e-300).ln(),
            },
        })
    }
}

struct GridScan {
    /// (parameter, log-scale tail estimate) at base and extended horizons.
    base: Vec<(f64, Inner)>,
    ext: Vec<(f64, Inner)>,
    notes: Vec<String>,
}

/// Turn a two-horizon grid scan into the index estimate.
///
/// `sup_type` selects between the supremum indices (divergence at any
/// parameter, or a positive small-parameter intercept, means infinity;
/// exponent collapse under horizon extension means zero) and the infimum
/// indices (infinity only when every parameter diverges; zero as soon as one
/// exponent is nonpositive).
fn finish(kind: IndexKind, sup_type: bool, scan: GridScan, cfg: &Config) -> IndexEstimate {
    let mut est = finish_impl(kind, sup_type, scan, cfg);
    // Collapsed inner limits appear as -inf exponents during aggregation;
    // keep reports finite.
    est.per_param.retain(|(_, b)| b.is_finite());
    est.per_param_ext.retain(|(_, b)| b.is_finite());
    est
}

fn finish_impl(kind: IndexKind, sup_type: bool, scan: GridScan, cfg: &Config) -> IndexEstimate {
    let mut est = IndexEstimate::new(kind);
    est.notes = scan.notes;

    let exponents = |rows: &[(f64, Inner)]| -> Vec<(f64, f64)> {
        rows.iter()
            .filter_map(|(p, inner)| match inner {
                Inner::Value { estimate, .. } => Some((*p, estimate / p.ln())),
                Inner::Collapsed => Some((*p, f64::NEG_INFINITY)),
                Inner::Diverged => None,
            })
            .collect()
    };
    est.per_param = exponents(&scan.base);
    est.per_param_ext = exponents(&scan.ext);

    let any_diverged =
        |rows: &[(f64, Inner)]| rows.iter().any(|(_, i)| matches!(i, Inner::Diverged));
    let all_diverged = |rows: &[(f64, Inner)]| {
        !rows.is_empty() && rows.iter().all(|(_, i)| matches!(i, Inner::Diverged))
    };

    if sup_type {
        if any_diverged(&scan.base) || any_diverged(&scan.ext) {
            est.state = IndexState::Infinite;
            est.notes.push("inner tail limit diverged for some grid parameter".into());
            return est;
        }
    } else if all_diverged(&scan.base) && (scan.ext.is_empty() || all_diverged(&scan.ext)) {
        est.state = IndexState::Infinite;
        est.notes.push("inner tail limit diverged for every grid parameter".into());
        return est;
    }

    // Small-parameter intercept of the log-scale tail values; a positive
    // intercept means the exponent grows without bound as the parameter
    // approaches 1.
    if sup_type {
        let rows = if scan.ext.is_empty() { &scan.base } else { &scan.ext };
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|(p, i)| match i {
                Inner::Value { estimate, .. } => Some((p.ln(), *estimate)),
                _ => None,
            })
            .take(8)
            .collect();
        if pts.len() >= 4 {
            let (c0, _c1) = line_fit(&pts);
            let best = est
                .per_param
                .iter()
                .chain(est.per_param_ext.iter())
                .map(|(_, b)| *b)
                .fold(f64::NEG_INFINITY, f64::max);
            if c0 > cfg.infinity_intercept && best > 0.0 {
                est.state = IndexState::Infinite;
                est.notes.push(format!(
                    "positive small-parameter intercept {c0:.4}: exponent grows without bound"
                ));
                return est;
            }
        }
    }

    let aggregate = |rows: &[(f64, f64)], sup: bool| -> Option<(f64, f64)> {
        rows.iter()
            .filter(|(_, b)| b.is_finite() || (!sup && *b == f64::NEG_INFINITY))
            .fold(None, |acc: Option<(f64, f64)>, &(p, b)| match acc {
                None => Some((p, b)),
                Some((bp, bb)) => {
                    if (sup && b > bb) || (!sup && b < bb) {
                        Some((p, b))
                    } else {
                        Some((bp, bb))
                    }
                }
            })
    };

    let base_best = aggregate(&est.per_param, sup_type);
    let ext_best = aggregate(&est.per_param_ext, sup_type);

    let (witness, value_base) = match base_best {
        Some((p, b)) => (Some(p), b),
        None => {
            est.state = if sup_type { IndexState::Zero } else { IndexState::Infinite };
            est.notes.push("no grid parameter produced a finite inner estimate".into());
            return est;
        }
    };
    let (witness, value) = match ext_best {
        Some((p, b)) => (Some(p), b),
        None => (witness, value_base),
    };

    if !sup_type && value == f64::NEG_INFINITY {
        // Some parameter sent the inner limsup to zero: the bound holds for
        // every exponent.
        est.state = IndexState::Zero;
        est.witness = witness;
        est.notes.push("inner tail limit collapsed: bound holds for every exponent".into());
        return est;
    }

    if sup_type {
        if value <= 0.0 {
            est.state = IndexState::Zero;
            est.witness = witness;
            return est;
        }
        if ext_best.is_some() && value_base > 0.0 && value <= cfg.zero_shrink * value_base {
            est.state = IndexState::Zero;
            est.witness = witness;
            est.bracket = [0.0, value.max(0.0)];
            est.notes.push(format!(
                "exponent collapsed under horizon extension ({value_base:.4} -> {value:.4})"
            ));
            return est;
        }
    } else if value <= 0.0 {
        est.state = IndexState::Zero;
        est.witness = witness;
        est.notes.push("some grid parameter yields a nonpositive exponent".into());
        return est;
    }

    let lo = value.min(value_base).min(value);
    let hi = value.max(value_base);
    est.state = IndexState::Finite(value.max(0.0));
    est.witness = witness;
    est.bracket = [lo.max(0.0), hi.max(0.0)];
    est
}

fn conj_scan(
    m_num: &WeightSequence,
    m_den: &WeightSequence,
    mode: TailMode,
    cfg: &Config,
) -> Result<GridScan> {
    let mut notes = Vec::new();
    let cap = seq_cap(m_num, cfg);
    let q_all = cfg.qk_grid();
    let q_grid: Vec<f64> = q_all
        .iter()
        .cloned()
        .filter(|q| (*q * 256.0) < cap as f64)
        .collect();
    if q_grid.len() < q_all.len() {
        notes.push(format!(
            "parameter grid capped at q <= {:.3} by the tabulation ceiling",
            q_grid.last().cloned().unwrap_or(0.0)
        ));
    }
    let j_base = (1usize << 10).min((cap - 16) / q_grid.last().cloned().unwrap_or(2.0) as usize);
    let j_ext_target = 1usize << 16;
    let j_ext = j_ext_target.min((cap - 16) / q_grid.last().cloned().unwrap_or(2.0) as usize);

    let side_base = ConjSide::build(m_num, m_den, *q_grid.last().unwrap(), j_base, cfg)?;
    let base = q_grid
        .iter()
        .map(|&q| Ok((q, side_base.gap_tail(q, j_base, mode, cfg)?)))
        .collect::<Result<Vec<_>>>()?;
    let ext = if j_ext > j_base * 2 {
        match ConjSide::build(m_num, m_den, *q_grid.last().unwrap(), j_ext, cfg) {
            Ok(side_ext) => q_grid
                .iter()
                .map(|&q| Ok((q, side_ext.gap_tail(q, j_ext, mode, cfg)?)))
                .collect::<Result<Vec<_>>>()?,
            Err(_) => {
                notes.push("extended horizon unavailable; verdict capped".into());
                Vec::new()
            }
        }
    } else {
        notes.push("extended horizon unavailable; verdict capped".into());
        Vec::new()
    };
    Ok(GridScan { base, ext, notes })
}

fn ratio_scan(
    top: &WeightFunction,
    bot: &WeightFunction,
    mode: TailMode,
    cfg: &Config,
) -> Result<GridScan> {
    let mut notes = Vec::new();
    let side = RatioSide::build(top, bot, cfg)?;
    let mut base = Vec::new();
    let mut skipped = Vec::new();
    for k in cfg.qk_grid() {
        match side.ratio_tail(k.ln(), mode, cfg) {
            Ok(inner) => base.push((k, inner)),
            Err(_) => skipped.push(k),
        }
    }
    if base.is_empty() {
        return Err(Error::HorizonOverflow(
            "every shift parameter exhausted the evaluable range".into(),
        ));
    }
    if !skipped.is_empty() {
        notes.push(format!("shift parameters beyond the horizon skipped: {skipped:?}"));
    }
    let ext = match side.extended(cfg) {
        Some(eside) => base
            .iter()
            .filter_map(|(k, _)| eside.ratio_tail(k.ln(), mode, cfg).ok().map(|i| (*k, i)))
            .collect(),
        None => {
            notes.push("extended horizon unavailable; verdict capped".into());
            Vec::new()
        }
    };
    Ok(GridScan { base, ext, notes })
}

fn require_le(m: &WeightSequence, n: &WeightSequence) -> Result<()> {
    if !m.le_pointwise(n) {
        return Err(Error::Precondition(
            "the first sequence must lie below the second pointwise".into(),
        ));
    }
    Ok(())
}

fn require_lc(s: &WeightSequence, cfg: &Config) -> Result<()> {
    let v = crate::sequence::check_lc(s, cfg)?;
    if v.verdict == Verdict::False {
        return Err(Error::Precondition(format!(
            "sequence is not a class member: {:?}",
            v.diagnostics.notes
        )));
    }
    Ok(())
}

/// Sequence-side doubling index: the supremum of exponents b such that the
/// conjugate gap `phi*_(omega_N)(q j)/(q j) - phi*_(omega_M)(j)/j` eventually
/// exceeds `b log q` for some grid q.
pub fn beta_l(m: &WeightSequence, n: &WeightSequence, cfg: &Config) -> Result<IndexEstimate> {
    require_lc(m, cfg)?;
    require_lc(n, cfg)?;
    require_le(m, n)?;
    let scan = conj_scan(n, m, TailMode::LimInf, cfg)?;
    Ok(finish(IndexKind::BetaL, true, scan, cfg))
}

/// Function-side doubling index: the infimum of exponents a with
/// `limsup omega(K t)/sigma(t) < K^a` for some grid K. Requires `sigma >= omega`.
pub fn alpha_omega1(
    sigma: &WeightFunction,
    omega: &WeightFunction,
    cfg: &Config,
) -> Result<IndexEstimate> {
    let scan = ratio_scan(omega, sigma, TailMode::LimSup, cfg)?;
    Ok(finish(IndexKind::AlphaOmega1, false, scan, cfg))
}

/// Sequence-side moderate-growth index: the infimum of exponents a with
/// `limsup phi*_(omega_M)(q j)/(q j) - phi*_(omega_N)(j)/j < a log q` for
/// some grid q. Requires `M <= N`.
pub fn alpha_mg(n: &WeightSequence, m: &WeightSequence, cfg: &Config) -> Result<IndexEstimate> {
    require_lc(m, cfg)?;
    require_lc(n, cfg)?;
    require_le(m, n)?;
    let scan = conj_scan(m, n, TailMode::LimSup, cfg)?;
    Ok(finish(IndexKind::AlphaMg, false, scan, cfg))
}

/// Function-side moderate-growth index: the supremum of exponents b with
/// `liminf sigma(K t)/omega(t) > K^b` for some grid K. Requires `sigma >= omega`.
pub fn beta_omega6(
    omega: &WeightFunction,
    sigma: &WeightFunction,
    cfg: &Config,
) -> Result<IndexEstimate> {
    let scan = ratio_scan(sigma, omega, TailMode::LimInf, cfg)?;
    Ok(finish(IndexKind::BetaOmega6, true, scan, cfg))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReciprocityReport {
    pub which: String,
    pub lhs: IndexEstimate,
    pub rhs: IndexEstimate,
    /// Product of the two sides when both are finite; the identity predicts 1.
    pub product: Option<f64>,
    pub consistent: bool,
    pub band: (f64, f64),
}

fn reciprocity_consistent(lhs: &IndexEstimate, rhs: &IndexEstimate, band: (f64, f64)) -> (Option<f64>, bool) {
    match (lhs.state, rhs.state) {
        (IndexState::Finite(a), IndexState::Finite(b)) => {
            let p = a * b;
            (Some(p), p >= band.0 && p <= band.1)
        }
        (IndexState::Zero, IndexState::Infinite) | (IndexState::Infinite, IndexState::Zero) => {
            (None, true)
        }
        _ => (None, false),
    }
}

/// Doubling reciprocity: the sequence-side supremum index times the
/// function-side infimum index must be 1 (conventions 1/0 = inf, 1/inf = 0).
/// Both sides are computed independently.
pub fn verify_reciprocity_doubling(
    m: &WeightSequence,
    n: &WeightSequence,
    cfg: &Config,
) -> Result<ReciprocityReport> {
    let beta = beta_l(m, n, cfg)?;
    let need = assoc_len_for_ratio(m, cfg).max(assoc_len_for_ratio(n, cfg));
    let wm = WeightFunction::associated(&m.materialize(need, cfg)?)?;
    let wn = WeightFunction::associated(&n.materialize(need, cfg)?)?;
    let alpha = alpha_omega1(&wm, &wn, cfg)?;
    let band = cfg.reciprocity_band;
    let (product, consistent) = reciprocity_consistent(&beta, &alpha, band);
    Ok(ReciprocityReport { which: "doubling".into(), lhs: beta, rhs: alpha, product, consistent, band })
}

/// Moderate-growth reciprocity: the sequence-side infimum index times the
/// function-side supremum index must be 1.
pub fn verify_reciprocity_mg(
    m: &WeightSequence,
    n: &WeightSequence,
    cfg: &Config,
) -> Result<ReciprocityReport> {
    let alpha = alpha_mg(n, m, cfg)?;
    let need = assoc_len_for_ratio(m, cfg).max(assoc_len_for_ratio(n, cfg));
    let wm = WeightFunction::associated(&m.materialize(need, cfg)?)?;
    let wn = WeightFunction::associated(&n.materialize(need, cfg)?)?;
    let beta = beta_omega6(&wn, &wm, cfg)?;
    let band = cfg.reciprocity_band;
    let (product, consistent) = reciprocity_consistent(&alpha, &beta, band);
    Ok(ReciprocityReport { which: "moderate-growth".into(), lhs: alpha, rhs: beta, product, consistent, band })
}

fn assoc_len_for_ratio(s: &WeightSequence, cfg: &Config) -> usize {
    (1usize << 16).min(seq_cap(s, cfg)).max(s.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::SequenceFamily as SF;

    fn cfg() -> Config {
        Config::default()
    }

    fn seq(f: SF) -> WeightSequence {
        WeightSequence::from_family(f, 256, &cfg()).unwrap()
    }

    fn assoc(f: SF) -> WeightFunction {
        let s = WeightSequence::from_family(f, 1 << 16, &cfg()).unwrap();
        WeightFunction::associated(&s).unwrap()
    }

    #[test]
    fn tail_limit_op_reexports() {
        let samples: Vec<(f64, f64)> = (1..=64).map(|i| (i as f64, 1.0 + 1.0 / i as f64)).collect();
        let t = tail_limit_op(&samples, TailMode::LimSup, &cfg()).unwrap();
        assert!((t.estimate - 1.0).abs() < 0.1);
    }

    #[test]
    fn beta_doubling_index_of_factorials_is_one() {
        let e = beta_l(&seq(SF::Gevrey { s: 1.0 }), &seq(SF::Gevrey { s: 1.0 }), &cfg()).unwrap();
        match e.state {
            IndexState::Finite(v) => assert!((v - 1.0).abs() < 0.1, "beta = {v}"),
            other => panic!("expected finite, got {other:?} ({:?})", e.notes),
        }
    }

    #[test]
    fn beta_doubling_index_diverges_for_geometric_shift() {
        let m = seq(SF::Gevrey { s: 1.0 });
        let n = seq(SF::GeomShift { c: 4.0, of: Box::new(SF::Gevrey { s: 1.0 }) });
        let e = beta_l(&m, &n, &cfg()).unwrap();
        assert_eq!(e.state, IndexState::Infinite, "{:?}", e.notes);
    }

    #[test]
    fn beta_doubling_index_infinite_for_qgevrey_pair() {
        let m = seq(SF::Qgevrey { q: 2.0 });
        let e = beta_l(&m, &m, &cfg()).unwrap();
        assert_eq!(e.state, IndexState::Infinite, "{:?}", e.notes);
    }

    #[test]
    fn alpha_doubling_index_of_gevrey_two_is_half() {
        let w = assoc(SF::Gevrey { s: 2.0 });
        let e = alpha_omega1(&w, &w, &cfg()).unwrap();
        match e.state {
            IndexState::Finite(v) => assert!((v - 0.5).abs() < 0.05, "alpha = {v}"),
            other => panic!("expected finite, got {other:?}"),
        }
    }

    #[test]
    fn alpha_doubling_index_zero_for_geometric_shift() {
        let wm = assoc(SF::Gevrey { s: 1.0 });
        let wn = assoc(SF::GeomShift { c: 4.0, of: Box::new(SF::Gevrey { s: 1.0 }) });
        let e = alpha_omega1(&wm, &wn, &cfg()).unwrap();
        assert_eq!(e.state, IndexState::Zero, "{:?}", e.notes);
    }

    #[test]
    fn alpha_doubling_index_infinite_for_slowvar() {
        let w = assoc(SF::SlowVar);
        let e = alpha_omega1(&w, &w, &cfg()).unwrap();
        assert_eq!(e.state, IndexState::Infinite, "{:?}", e.notes);
    }

    #[test]
    fn alpha_mg_index_infinite_for_qgevrey() {
        let m = seq(SF::Qgevrey { q: 2.0 });
        let e = alpha_mg(&m, &m, &cfg()).unwrap();
        assert_eq!(e.state, IndexState::Infinite, "{:?}", e.notes);
    }

    #[test]
    fn beta_mg_index_zero_for_qgevrey() {
        let w = assoc(SF::Qgevrey { q: 2.0 });
        let e = beta_omega6(&w, &w, &cfg()).unwrap();
        assert_eq!(e.state, IndexState::Zero, "{:?}", e.notes);
    }

    #[test]
    fn beta_mg_index_one_for_linear_closed_form() {
        // sigma(K t)/omega(t) is exactly K to leading order.
        let w = WeightFunction::ClosedForm(crate::families::WeightFamily::Power { rho: 1.0 });
        let e = beta_omega6(&w, &w, &cfg()).unwrap();
        match e.state {
            IndexState::Finite(v) => assert!((v - 1.0).abs() < 0.1, "beta = {v}"),
            other => panic!("expected finite, got {other:?} ({:?})", e.notes),
        }
    }

    #[test]
    fn grid_refinement_moves_suprema_up_and_infima_down() {
        let mut coarse = cfg();
        coarse.q_grid_steps = 12;
        let fine = cfg();
        let m = seq(SF::Gevrey { s: 1.0 });
        let bc = beta_l(&m, &m, &coarse).unwrap();
        let bf = beta_l(&m, &m, &fine).unwrap();
        if let (IndexState::Finite(c), IndexState::Finite(f)) = (bc.state, bf.state) {
            assert!(f >= c - 1e-9, "supremum shrank under refinement: {c} -> {f}");
        }
        let w = assoc(SF::Gevrey { s: 1.0 });
        let ac = alpha_omega1(&w, &w, &coarse).unwrap();
        let af = alpha_omega1(&w, &w, &fine).unwrap();
        if let (IndexState::Finite(c), IndexState::Finite(f)) = (ac.state, af.state) {
            assert!(f <= c + 1e-9, "infimum grew under refinement: {c} -> {f}");
        }
    }

    #[test]
    fn preconditions_are_enforced() {
        let m = seq(SF::Gevrey { s: 2.0 });
        let n = seq(SF::Gevrey { s: 1.0 });
        // m > n pointwise: order violated.
        assert!(beta_l(&m, &n, &cfg()).is_err());
    }
}
