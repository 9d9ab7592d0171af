//! Suite runner: evaluates every condition item of an equivalence list on a
//! subject and reports whether the items agree, plus the index-based suites
//! tying verdicts to the growth indices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conditions::{
    check_lemma31, check_matrix_mg, check_mixed_omega1_matrix, check_prop41, check_thm32,
    ConditionType,
};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::families::FamilyDescriptor;
use crate::indices::{alpha_mg, alpha_omega1, beta_l, beta_omega6, IndexEstimate, IndexState};
use crate::instantiate::{instantiate, Instance};
use crate::matrix::WeightMatrix;
use crate::sequence::WeightSequence;
use crate::verdict::{ConditionVerdict, Verdict, Witness};
use crate::weightfn::WeightFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteId {
    Lemma31,
    Thm32,
    Prop41,
    Thm39,
    Thm44,
    Thm52,
    Thm56,
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SuiteId::Lemma31 => "lemma31",
            SuiteId::Thm32 => "thm32",
            SuiteId::Prop41 => "prop41",
            SuiteId::Thm39 => "thm39",
            SuiteId::Thm44 => "thm44",
            SuiteId::Thm52 => "thm52",
            SuiteId::Thm56 => "thm56",
        };
        f.write_str(s)
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lemma31" => SuiteId::Lemma31,
            "thm32" => SuiteId::Thm32,
            "prop41" => SuiteId::Prop41,
            "thm39" => SuiteId::Thm39,
            "thm44" => SuiteId::Thm44,
            "thm52" => SuiteId::Thm52,
            "thm56" => SuiteId::Thm56,
            other => return Err(Error::Malformed(format!("unknown suite `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Agreement {
    Agree,
    Inconclusive,
    Disagreement,
}

/// Agreement across an equivalence class of cells: all definite verdicts must
/// match; any inconclusive cell downgrades the flag, never silently agrees.
pub fn agreement_of(cells: &[ConditionVerdict]) -> Agreement {
    let mut seen_true = false;
    let mut seen_false = false;
    let mut seen_inconclusive = false;
    for c in cells {
        match c.verdict {
            Verdict::True => seen_true = true,
            Verdict::False => seen_false = true,
            Verdict::Inconclusive => seen_inconclusive = true,
        }
    }
    if seen_true && seen_false {
        Agreement::Disagreement
    } else if seen_inconclusive {
        Agreement::Inconclusive
    } else {
        Agreement::Agree
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteClassReport {
    pub class: String,
    pub cells: Vec<ConditionVerdict>,
    pub agreement: Agreement,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub subject: String,
    pub classes: Vec<SuiteClassReport>,
    pub agreement: Agreement,
    /// Index estimates computed along the way, labeled by role and pair.
    pub index_artifacts: Vec<(String, IndexEstimate)>,
    pub config: Config,
    /// Populated only on explicit request; reports must be reproducible
    /// byte-for-byte by default.
    pub timestamp: Option<String>,
}

fn combine(classes: &[SuiteClassReport]) -> Agreement {
    let mut out = Agreement::Agree;
    for c in classes {
        out = match (out, c.agreement) {
            (Agreement::Disagreement, _) | (_, Agreement::Disagreement) => Agreement::Disagreement,
            (Agreement::Inconclusive, _) | (_, Agreement::Inconclusive) => Agreement::Inconclusive,
            _ => Agreement::Agree,
        };
    }
    out
}

fn subject_matrix(subject: &FamilyDescriptor, cfg: &Config) -> Result<WeightMatrix> {
    match instantiate(subject, cfg.default_len, cfg)? {
        Instance::Matrix(m) => Ok(m),
        Instance::Sequence(s) => Ok(WeightMatrix::singleton(s)),
        Instance::Weight(_) => Err(Error::Precondition(
            "this suite needs a sequence-matrix subject, got a weight function".into(),
        )),
    }
}

/// Abstract weight-function family attached to a subject, largest weight
/// first not required; indices inherit the subject's order.
fn subject_weights(
    subject: &FamilyDescriptor,
    cfg: &Config,
) -> Result<Vec<(f64, WeightFunction)>> {
    match instantiate(subject, cfg.default_len, cfg)? {
        Instance::Weight(w) => Ok(vec![(1.0, w)]),
        Instance::Sequence(s) => {
            let s = s.materialize(1 << 14, cfg).unwrap_or(s);
            Ok(vec![(1.0, WeightFunction::associated(&s)?)])
        }
        Instance::Matrix(m) => m
            .entries()
            .iter()
            .map(|(x, s)| {
                let s = s.materialize(1 << 14, cfg).unwrap_or_else(|_| s.clone());
                Ok((*x, WeightFunction::associated(&s)?))
            })
            .collect(),
    }
}

type CellFn = fn(&WeightMatrix, ConditionType, usize, &Config) -> Result<ConditionVerdict>;

fn item_class(
    m: &WeightMatrix,
    ty: ConditionType,
    items: usize,
    f: CellFn,
    cfg: &Config,
    label: &str,
) -> Result<SuiteClassReport> {
    let mut cells = Vec::with_capacity(items);
    for item in 1..=items {
        cells.push(f(m, ty, item, cfg)?);
    }
    Ok(SuiteClassReport { class: label.into(), agreement: agreement_of(&cells), cells })
}

/// `forall x exists y` lift of an index condition over matrix entries.
///
/// `accept` decides whether an estimate witnesses the condition; candidate
/// direction follows the quantifier roles of the suite.
fn index_cell<F, A>(
    m: &WeightMatrix,
    cfg: &Config,
    id: &str,
    upward: bool,
    mut compute: F,
    accept: A,
    artifacts: &mut Vec<(String, IndexEstimate)>,
) -> ConditionVerdict
where
    F: FnMut(f64, f64) -> Result<IndexEstimate>,
    A: Fn(&IndexEstimate) -> bool,
{
    let mut verdict = Verdict::True;
    let mut witnesses = Vec::new();
    let mut notes = Vec::new();
    for (x, _) in m.entries() {
        let candidates =
            if upward { m.candidates_above(*x, cfg) } else { m.candidates_below(*x, cfg) };
        let mut found = None;
        let mut blocked = None;
        for &y in &candidates {
            match compute(*x, y) {
                Ok(est) => {
                    let ok = accept(&est);
                    artifacts.push((format!("{id}(x={x}, y={y})"), est));
                    if ok {
                        found = Some(y);
                        break;
                    }
                }
                Err(e) => blocked = Some(e.to_string()),
            }
        }
        match (found, blocked) {
            (Some(y), _) => witnesses.push(Witness::for_x(*x).with_y(y)),
            (None, Some(r)) => {
                if verdict != Verdict::False {
                    verdict = Verdict::Inconclusive;
                }
                notes.push(format!("x={x}: {r}"));
            }
            (None, None) => {
                verdict = Verdict::False;
                notes.push(format!("no index witness for x={x}"));
            }
        }
    }
    let mut v = ConditionVerdict::new(id, verdict).with_candidates(&m.indices());
    v.witnesses = witnesses;
    for n in notes {
        v = v.with_note(n);
    }
    v
}

fn assoc_for_index(m: &WeightMatrix, x: f64, cfg: &Config) -> Result<WeightFunction> {
    let len = (1usize << 14).min(crate::conjugate::CONJUGATE_TAB_CAP);
    let seq = m.sequence_at(x, len, cfg)?;
    WeightFunction::associated(&seq)
}

fn seq_for_index(m: &WeightMatrix, x: f64, cfg: &Config) -> Result<WeightSequence> {
    m.sequence_at(x, cfg.default_len, cfg)
}

fn finite_state(est: &IndexEstimate) -> bool {
    !matches!(est.state, IndexState::Infinite)
}

fn positive_state(est: &IndexEstimate) -> bool {
    est.state.is_finite_positive() || est.state == IndexState::Infinite
}

/// The index-characterization suite for the doubling side: the mixed
/// doubling verdict must match finiteness of the function-side index and
/// positivity of the sequence-side index, per type.
fn run_doubling_index_suite(
    m: &WeightMatrix,
    cfg: &Config,
    artifacts: &mut Vec<(String, IndexEstimate)>,
) -> Result<Vec<SuiteClassReport>> {
    let mut classes = Vec::new();
    for ty in [ConditionType::Roumieu, ConditionType::Beurling] {
        let up = ty == ConditionType::Roumieu;
        let mixed = check_mixed_omega1_matrix(m, ty, cfg)?;
        let alpha_cell = index_cell(
            m,
            cfg,
            &format!("alpha-doubling-finite-{}", ty.label()),
            up,
            |x, y| {
                let (sig, om) = if up { (x, y) } else { (y, x) };
                alpha_omega1(
                    &assoc_for_index(m, sig, cfg)?,
                    &assoc_for_index(m, om, cfg)?,
                    cfg,
                )
            },
            finite_state,
            artifacts,
        );
        let beta_cell = index_cell(
            m,
            cfg,
            &format!("beta-doubling-positive-{}", ty.label()),
            up,
            |x, y| {
                let (lo, hi) = if up { (x, y) } else { (y, x) };
                beta_l(&seq_for_index(m, lo, cfg)?, &seq_for_index(m, hi, cfg)?, cfg)
            },
            positive_state,
            artifacts,
        );
        let cells = vec![mixed, alpha_cell, beta_cell];
        classes.push(SuiteClassReport {
            class: ty.label().into(),
            agreement: agreement_of(&cells),
            cells,
        });
    }
    Ok(classes)
}

/// The index-characterization suite for the moderate-growth side.
fn run_mg_index_suite(
    m: &WeightMatrix,
    cfg: &Config,
    artifacts: &mut Vec<(String, IndexEstimate)>,
) -> Result<Vec<SuiteClassReport>> {
    let mut classes = Vec::new();
    for ty in [ConditionType::Roumieu, ConditionType::Beurling] {
        let up = ty == ConditionType::Roumieu;
        let mg = check_matrix_mg(m, ty, cfg)?;
        let alpha_cell = index_cell(
            m,
            cfg,
            &format!("alpha-mg-finite-{}", ty.label()),
            up,
            |x, y| {
                let (big, small) = if up { (y, x) } else { (x, y) };
                alpha_mg(&seq_for_index(m, big, cfg)?, &seq_for_index(m, small, cfg)?, cfg)
            },
            finite_state,
            artifacts,
        );
        let beta_cell = index_cell(
            m,
            cfg,
            &format!("beta-mg-positive-{}", ty.label()),
            up,
            |x, y| {
                let (om, sig) = if up { (y, x) } else { (x, y) };
                beta_omega6(
                    &assoc_for_index(m, om, cfg)?,
                    &assoc_for_index(m, sig, cfg)?,
                    cfg,
                )
            },
            positive_state,
            artifacts,
        );
        let cells = vec![mg, alpha_cell, beta_cell];
        classes.push(SuiteClassReport {
            class: ty.label().into(),
            agreement: agreement_of(&cells),
            cells,
        });
    }
    Ok(classes)
}

/// The weight-function-family suite: build the conjugate matrix, check its
/// moderate growth and mixed doubling, and compare against the index
/// conditions stated directly on the family.
fn run_weight_family_suite(
    weights: &[(f64, WeightFunction)],
    cfg: &Config,
    artifacts: &mut Vec<(String, IndexEstimate)>,
) -> Result<Vec<SuiteClassReport>> {
    let ws: Vec<WeightFunction> = weights.iter().map(|(_, w)| w.clone()).collect();
    let n = crate::conjugate::matrix_from_weight_family(&ws, cfg.default_len, cfg)?;
    let mut classes = Vec::new();
    for ty in [ConditionType::Roumieu, ConditionType::Beurling] {
        let up = ty == ConditionType::Roumieu;
        let mg = check_matrix_mg(&n, ty, cfg)?;
        let mixed = check_mixed_omega1_matrix(&n, ty, cfg)?;

        // Index conditions stated directly on the abstract weights. The
        // family is decreasing in its index, so "larger index" means
        // "smaller weight", matching the associated-function convention.
        let mut beta_cell_verdict = Verdict::True;
        let mut alpha_cell_verdict = Verdict::True;
        let mut beta_witnesses = Vec::new();
        let mut alpha_witnesses = Vec::new();
        for (x, wx) in weights {
            let mut candidates: Vec<&(f64, WeightFunction)> = weights
                .iter()
                .filter(|(y, _)| if up { *y >= *x } else { *y <= *x })
                .collect();
            candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut beta_found = None;
            let mut alpha_found = None;
            for (y, wy) in &candidates {
                // beta(omega^y, omega^x) > 0 in the Roumieu order.
                let (bo, bs) = if up { (wy, wx) } else { (wx, wy) };
                if beta_found.is_none() {
                    if let Ok(est) = beta_omega6(bo, bs, cfg) {
                        let ok = positive_state(&est);
                        artifacts.push((format!("beta-weights(x={x}, y={y})"), est));
                        if ok {
                            beta_found = Some(*y);
                        }
                    }
                }
                let (as_, ao) = if up { (wx, wy) } else { (wy, wx) };
                if alpha_found.is_none() {
                    if let Ok(est) = alpha_omega1(as_, ao, cfg) {
                        let ok = finite_state(&est);
                        artifacts.push((format!("alpha-weights(x={x}, y={y})"), est));
                        if ok {
                            alpha_found = Some(*y);
                        }
                    }
                }
                if beta_found.is_some() && alpha_found.is_some() {
                    break;
                }
            }
            match beta_found {
                Some(y) => beta_witnesses.push(Witness::for_x(*x).with_y(y)),
                None => beta_cell_verdict = Verdict::False,
            }
            match alpha_found {
                Some(y) => alpha_witnesses.push(Witness::for_x(*x).with_y(y)),
                None => alpha_cell_verdict = Verdict::False,
            }
        }
        let mut beta_cell = ConditionVerdict::new(
            &format!("beta-weights-positive-{}", ty.label()),
            beta_cell_verdict,
        );
        beta_cell.witnesses = beta_witnesses;
        let mut alpha_cell = ConditionVerdict::new(
            &format!("alpha-weights-finite-{}", ty.label()),
            alpha_cell_verdict,
        );
        alpha_cell.witnesses = alpha_witnesses;

        // Agreement: conjunction of the matrix conditions versus conjunction
        // of the index conditions.
        let lhs = mg.verdict.and(mixed.verdict);
        let rhs = beta_cell.verdict.and(alpha_cell.verdict);
        let agreement = match (lhs, rhs) {
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Agreement::Inconclusive,
            (a, b) if a == b => Agreement::Agree,
            _ => Agreement::Disagreement,
        };
        classes.push(SuiteClassReport {
            class: ty.label().into(),
            agreement,
            cells: vec![mg, mixed, beta_cell, alpha_cell],
        });
    }
    Ok(classes)
}

pub fn run_suite(
    suite: SuiteId,
    subject: &FamilyDescriptor,
    cfg: &Config,
) -> Result<SuiteReport> {
    let mut artifacts = Vec::new();
    let classes = match suite {
        SuiteId::Lemma31 => {
            let m = subject_matrix(subject, cfg)?;
            vec![
                item_class(&m, ConditionType::Roumieu, 4, check_lemma31, cfg, "I")?,
                item_class(&m, ConditionType::Beurling, 4, check_lemma31, cfg, "II")?,
            ]
        }
        SuiteId::Thm32 => {
            let m = subject_matrix(subject, cfg)?;
            vec![
                item_class(&m, ConditionType::Roumieu, 8, check_thm32, cfg, "I")?,
                item_class(&m, ConditionType::Beurling, 8, check_thm32, cfg, "II")?,
            ]
        }
        SuiteId::Prop41 => {
            let m = subject_matrix(subject, cfg)?;
            vec![
                item_class(&m, ConditionType::Roumieu, 5, check_prop41, cfg, "roumieu")?,
                item_class(&m, ConditionType::Beurling, 5, check_prop41, cfg, "beurling")?,
            ]
        }
        SuiteId::Thm39 => {
            let m = subject_matrix(subject, cfg)?;
            run_doubling_index_suite(&m, cfg, &mut artifacts)?
        }
        SuiteId::Thm44 | SuiteId::Thm52 => {
            let m = subject_matrix(subject, cfg)?;
            run_mg_index_suite(&m, cfg, &mut artifacts)?
        }
        SuiteId::Thm56 => {
            let ws = subject_weights(subject, cfg)?;
            run_weight_family_suite(&ws, cfg, &mut artifacts)?
        }
    };
    let agreement = combine(&classes);
    Ok(SuiteReport {
        suite: suite.to_string(),
        subject: subject.id(),
        classes,
        agreement,
        index_artifacts: artifacts,
        config: cfg.clone(),
        timestamp: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::parse_family;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn suite_ids_roundtrip() {
        for s in ["lemma31", "thm32", "prop41", "thm39", "thm44", "thm52", "thm56"] {
            assert_eq!(SuiteId::from_str(s).unwrap().to_string(), s);
        }
        assert!(SuiteId::from_str("nope").is_err());
    }

    #[test]
    fn agreement_logic() {
        use Verdict::*;
        let mk = |v: Verdict| ConditionVerdict::new("c", v);
        assert_eq!(agreement_of(&[mk(True), mk(True)]), Agreement::Agree);
        assert_eq!(agreement_of(&[mk(False), mk(False)]), Agreement::Agree);
        assert_eq!(agreement_of(&[mk(True), mk(False)]), Agreement::Disagreement);
        assert_eq!(agreement_of(&[mk(True), mk(Inconclusive)]), Agreement::Inconclusive);
    }

    #[test]
    fn thm39_gevrey_matrix_agrees_true() {
        let d = parse_family("gevrey-matrix:xs=1,2").unwrap();
        let r = run_suite(SuiteId::Thm39, &d, &cfg()).unwrap();
        assert_eq!(r.agreement, Agreement::Agree);
        for cl in &r.classes {
            for cell in &cl.cells {
                assert_eq!(cell.verdict, Verdict::True, "{}: {:?}", cell.condition, cell.diagnostics.notes);
            }
        }
    }

    #[test]
    fn thm39_slowvar_singleton_agrees_false() {
        let d = parse_family("singleton:of=slowvar").unwrap();
        let r = run_suite(SuiteId::Thm39, &d, &cfg()).unwrap();
        assert_eq!(r.agreement, Agreement::Agree, "{:?}", r.classes);
        for cl in &r.classes {
            for cell in &cl.cells {
                assert_eq!(cell.verdict, Verdict::False, "{}", cell.condition);
            }
        }
    }

    #[test]
    fn thm44_qgevrey_singleton_agrees_false() {
        let d = parse_family("singleton:of=qgevrey,q=2").unwrap();
        let r = run_suite(SuiteId::Thm44, &d, &cfg()).unwrap();
        assert_eq!(r.agreement, Agreement::Agree, "{:?}", r.classes);
        for cl in &r.classes {
            for cell in &cl.cells {
                assert_eq!(cell.verdict, Verdict::False, "{}", cell.condition);
            }
        }
    }

    #[test]
    fn thm44_slowvar_singleton_agrees_true() {
        let d = parse_family("singleton:of=slowvar").unwrap();
        let r = run_suite(SuiteId::Thm44, &d, &cfg()).unwrap();
        assert_eq!(r.agreement, Agreement::Agree, "{:?}", r.classes);
        for cl in &r.classes {
            for cell in &cl.cells {
                assert_eq!(cell.verdict, Verdict::True, "{}: {:?}", cell.condition, cell.diagnostics.notes);
            }
        }
    }

    #[test]
    fn thm56_singleton_weight_family() {
        // A single power weight has both the doubling and the root-doubling
        // reserve, so both sides must agree true.
        let d = parse_family("power:rho=0.5").unwrap();
        let r = run_suite(SuiteId::Thm56, &d, &cfg()).unwrap();
        assert_eq!(r.agreement, Agreement::Agree, "{:?}", r.classes);
        for cl in &r.classes {
            assert_eq!(cl.agreement, Agreement::Agree);
        }
    }
}
