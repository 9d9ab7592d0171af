//! Weight functions and the single-weight growth conditions: normalization,
//! doubling, o-smallness of the log, convexity in log t, and the
//! root-doubling reserve, plus the equivalence relation between weights.

use serde::{Deserialize, Serialize};

use crate::assoc::AssociatedWeight;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::families::WeightFamily;
use crate::sequence::WeightSequence;
use crate::tail::bounded_tail;
use crate::verdict::{ConditionVerdict, Verdict, Witness};

/// Tabulated weight: linear interpolation in (log t, value) coordinates,
/// which preserves monotonicity and keeps convexity-in-log testable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightTable {
    log_t: Vec<f64>,
    values: Vec<f64>,
}

impl WeightTable {
    pub fn new(t_grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if t_grid.len() != values.len() || t_grid.len() < 2 {
            return Err(Error::DegenerateGrid("table needs matching grids, len >= 2".into()));
        }
        if !t_grid.windows(2).all(|w| w[1] > w[0]) || !(t_grid[0] > 0.0) {
            return Err(Error::DegenerateGrid("t grid must be positive increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Malformed("weight values must be finite nonnegative".into()));
        }
        Ok(WeightTable { log_t: t_grid.iter().map(|t| t.ln()).collect(), values })
    }

    pub fn from_samples(log_t: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(log_t.iter().map(|y| y.exp()).collect(), values)
    }

    fn eval_log(&self, y: f64) -> Result<f64> {
        let n = self.log_t.len();
        if y <= self.log_t[0] {
            if self.values[0] == 0.0 || y >= self.log_t[0] - 1e-12 {
                return Ok(self.values[0]);
            }
            return Err(Error::HorizonOverflow(format!(
                "table starts at log t = {} with nonzero value; cannot evaluate {y}",
                self.log_t[0]
            )));
        }
        if y > self.log_t[n - 1] + 1e-12 {
            return Err(Error::HorizonOverflow(format!(
                "log t = {y} beyond table end {}",
                self.log_t[n - 1]
            )));
        }
        let i = self.log_t.partition_point(|&g| g <= y).min(n - 1);
        let (y0, y1) = (self.log_t[i - 1], self.log_t[i]);
        let w = (y - y0) / (y1 - y0);
        Ok(self.values[i - 1] * (1.0 - w) + self.values[i] * w)
    }
}

/// Evaluation handle for a weight on `[0, inf)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightFunction {
    ClosedForm(WeightFamily),
    Table(WeightTable),
    Associated { source: WeightSequence },
}

impl WeightFunction {
    pub fn associated(seq: &WeightSequence) -> Result<Self> {
        AssociatedWeight::new(seq)?;
        Ok(WeightFunction::Associated { source: seq.clone() })
    }

    pub fn id(&self) -> String {
        match self {
            WeightFunction::ClosedForm(f) => f.id(),
            WeightFunction::Table(t) => format!("table({} points)", t.values.len()),
            WeightFunction::Associated { source } => format!(
                "associated({})",
                source
                    .generator()
                    .map(|g| g.id())
                    .unwrap_or_else(|| format!("tabulated(J={})", source.len()))
            ),
        }
    }

    /// `omega(e^y)`.
    pub fn eval_log(&self, y: f64) -> Result<f64> {
        match self {
            WeightFunction::ClosedForm(f) => {
                if y <= 0.0 {
                    return Ok(0.0);
                }
                Ok(match f {
                    WeightFamily::Power { rho } => (rho * y).exp() - 1.0,
                    WeightFamily::LogPower { s } => y.powf(*s),
                    WeightFamily::ExpQuad => (y * y).exp() - 1.0,
                })
            }
            WeightFunction::Table(t) => t.eval_log(y),
            WeightFunction::Associated { source } => {
                let assoc = AssociatedWeight::new(source)?;
                if y >= assoc.log_t_hi() {
                    return Err(Error::HorizonOverflow(format!(
                        "log t = {y} beyond quotient horizon {}",
                        assoc.log_t_hi()
                    )));
                }
                Ok(assoc.eval_log(y))
            }
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Precondition(format!("t must be nonnegative, got {t}")));
        }
        if t <= 1e-300 {
            return Ok(0.0);
        }
        self.eval_log(t.ln())
    }

    /// Natural evaluable range of `log t` (used for grids and sups).
    pub fn log_t_range(&self, cfg: &Config) -> Result<(f64, f64)> {
        match self {
            WeightFunction::ClosedForm(f) => Ok((0.0, closed_form_scan_hi(f))),
            WeightFunction::Table(t) => Ok((t.log_t[0], t.log_t[t.log_t.len() - 1])),
            WeightFunction::Associated { source } => {
                let assoc = AssociatedWeight::new(source)?;
                let _ = cfg;
                Ok((0.0, assoc.log_t_hi() - 1e-9))
            }
        }
    }

    /// Grow the evaluable range toward `log t = target` where the
    /// representation allows it; returns the (possibly unchanged) weight and
    /// whether the target was reached.
    pub fn extend_log_t(&self, target: f64, cfg: &Config) -> (WeightFunction, bool) {
        match self {
            WeightFunction::ClosedForm(f) => (self.clone(), target <= closed_form_scan_hi(f)),
            WeightFunction::Table(t) => {
                (self.clone(), target <= t.log_t[t.log_t.len() - 1] + 1e-12)
            }
            WeightFunction::Associated { source } => {
                let assoc = match AssociatedWeight::new(source) {
                    Ok(a) => a,
                    Err(_) => return (self.clone(), false),
                };
                if target < assoc.log_t_hi() {
                    return (self.clone(), true);
                }
                match assoc.ensure_log_t(target, cfg) {
                    Ok(bigger) => {
                        (WeightFunction::Associated { source: bigger.source().clone() }, true)
                    }
                    Err(_) => {
                        // Extend as far as the cap allows.
                        let best = source
                            .materialize(cfg.max_tabulation, cfg)
                            .unwrap_or_else(|_| source.clone());
                        (WeightFunction::Associated { source: best }, false)
                    }
                }
            }
        }
    }

    /// Smallest `log t` with `omega >= 1`; ratio conditions are evaluated
    /// from here on to stay clear of the normalization plateau.
    pub fn positivity_log_t(&self, cfg: &Config) -> Result<f64> {
        let (lo, hi) = self.log_t_range(cfg)?;
        if self.eval_log(hi)? < 1.0 {
            return Err(Error::PositivityUnreachable(format!(
                "omega stays below 1 up to log t = {hi:.3}"
            )));
        }
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if self.eval_log(mid)? >= 1.0 {
                b = mid;
            } else {
                a = mid;
            }
        }
        Ok(b)
    }
}

fn closed_form_scan_hi(f: &WeightFamily) -> f64 {
    match f {
        WeightFamily::Power { rho } => (500.0 / rho).min(4096.0).max(48.0),
        WeightFamily::LogPower { .. } => 4096.0,
        WeightFamily::ExpQuad => 24.0,
    }
}

/// Sample `f(log t)` on a grid geometric in t over `[e^lo, e^hi]`.
fn sample_log<F: FnMut(f64) -> Result<f64>>(
    lo: f64,
    hi: f64,
    points: usize,
    mut f: F,
) -> Result<Vec<(f64, f64)>> {
    if hi <= lo {
        return Err(Error::DegenerateGrid(format!("empty log-t range [{lo}, {hi})")));
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let y = lo + step * i as f64;
            f(y).map(|v| (y, v))
        })
        .collect()
}

struct ScanSetup {
    base: WeightFunction,
    ext: Option<WeightFunction>,
    lo: f64,
    hi: f64,
    ext_hi: Option<f64>,
}

/// Shared preparation: find the positivity threshold, pick the base horizon,
/// and try to secure an extended horizon for the stability cross-check.
fn prepare_scan(w: &WeightFunction, cfg: &Config) -> Result<ScanSetup> {
    let lo = w.positivity_log_t(cfg)?;
    let (_, hi) = w.log_t_range(cfg)?;
    if !(hi > lo + 1e-6) {
        return Err(Error::PositivityUnreachable(
            "no room between positivity threshold and horizon".into(),
        ));
    }
    let target = lo + (hi - lo) * cfg.horizon_ext_factor;
    let (extended, reached) = w.extend_log_t(target, cfg);
    let (ext, ext_hi) = if reached {
        (Some(extended.clone()), Some(target))
    } else {
        match extended.log_t_range(cfg) {
            Ok((_, new_hi)) if new_hi > hi * 1.05 => (Some(extended.clone()), Some(new_hi)),
            _ => (None, None),
        }
    };
    Ok(ScanSetup { base: w.clone(), ext, lo, hi, ext_hi })
}

/// Normalization: vanishes on [0, 1], positive eventually, nondecreasing.
pub fn check_omega0(w: &WeightFunction, cfg: &Config) -> Result<ConditionVerdict> {
    let id = "omega0-normalized";
    for t in [0.0, 0.25, 0.5, 0.9, 1.0] {
        if w.eval(t)?.abs() > 1e-12 {
            return Ok(ConditionVerdict::new(id, Verdict::False)
                .with_note(format!("omega({t}) != 0 on the normalization plateau")));
        }
    }
    let (lo, hi) = w.log_t_range(cfg)?;
    let samples = sample_log(lo.max(0.0), hi, 128, |y| w.eval_log(y))?;
    if samples.windows(2).any(|p| p[1].1 < p[0].1 - 1e-9) {
        return Ok(ConditionVerdict::new(id, Verdict::False).with_note("not nondecreasing"));
    }
    if samples.last().unwrap().1 <= 0.0 {
        return Ok(ConditionVerdict::new(id, Verdict::False)
            .with_note("omega never leaves zero on the evaluable range"));
    }
    Ok(ConditionVerdict::new(id, Verdict::True))
}

/// Doubling bound: `omega(2t) = O(omega(t))`. The witness carries the
/// estimated limsup of `omega(2t)/(omega(t)+1)`.
pub fn check_omega1(w: &WeightFunction, cfg: &Config) -> Result<ConditionVerdict> {
    let id = "omega1-doubling";
    let setup = prepare_scan(w, cfg)?;
    let ratio = |f: &WeightFunction| {
        move |y: f64| -> Result<f64> { Ok(f.eval_log(y + 2f64.ln())? / (f.eval_log(y)? + 1.0)) }
    };
    let hi = setup.hi - 2f64.ln();
    if hi <= setup.lo {
        return Err(Error::PositivityUnreachable(
            "horizon too short to evaluate omega(2t) past the positivity threshold".into(),
        ));
    }
    let base = sample_log(setup.lo, hi, cfg.t_points, ratio(&setup.base))?;
    let ext = match (&setup.ext, setup.ext_hi) {
        (Some(e), Some(eh)) if eh - 2f64.ln() > setup.lo => {
            Some(sample_log(setup.lo, eh - 2f64.ln(), cfg.t_points, ratio(e))?)
        }
        _ => None,
    };
    let out = bounded_tail(&base, ext.as_deref(), cfg)?;
    let verdict = if out.bounded { Verdict::True } else { Verdict::False };
    Ok(ConditionVerdict::new(id, verdict)
        .with_witness(Witness::default().with("L", out.trail_max))
        .with_tail_samples(&base)
        .with_t_log_range(setup.lo, hi))
}

/// o-smallness of the logarithm: `log t = o(omega(t))`.
pub fn check_omega3(w: &WeightFunction, cfg: &Config) -> Result<ConditionVerdict> {
    let id = "omega3-log-small";
    let setup = prepare_scan(w, cfg)?;
    let ratio =
        |f: &WeightFunction| move |y: f64| -> Result<f64> { Ok(y / f.eval_log(y)?.max(1e-300)) };
    let base = sample_log(setup.lo, setup.hi, cfg.t_points, ratio(&setup.base))?;
    let n = base.len();
    let cut = n - (n as f64 * cfg.tail_window).ceil() as usize;
    let trail = base[cut..].iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let early = base[..cut].iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);

    let mut verdict = if trail < cfg.o_small_threshold && trail <= early + 1e-12 {
        Verdict::True
    } else {
        Verdict::False
    };
    let mut note = String::new();
    match (&setup.ext, setup.ext_hi) {
        (Some(e), Some(eh)) if verdict == Verdict::True => {
            let ext = sample_log(setup.lo, eh, cfg.t_points, ratio(e))?;
            let m = ext.len();
            let ecut = m - (m as f64 * cfg.tail_window).ceil() as usize;
            let etrail = ext[ecut..].iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            if etrail > cfg.o_small_decay * trail + 1e-12 {
                verdict = Verdict::False;
                note = format!(
                    "trailing ratio fails to decay under horizon extension ({etrail:.3e} vs {trail:.3e})"
                );
            }
        }
        (None, _) => note = "no horizon extension available; verdict capped".into(),
        _ => {}
    }
    let mut v = ConditionVerdict::new(id, verdict)
        .with_witness(Witness::default().with("trail_ratio", trail))
        .with_tail_samples(&base)
        .with_t_log_range(setup.lo, setup.hi);
    if !note.is_empty() {
        v = v.with_note(note);
    }
    Ok(v)
}

/// Convexity of `y -> omega(e^y)` via the slope test on consecutive triples.
pub fn check_omega4(w: &WeightFunction, cfg: &Config) -> Result<ConditionVerdict> {
    let id = "omega4-log-convex";
    let samples: Vec<(f64, f64)> = match w {
        WeightFunction::Table(t) => {
            t.log_t.iter().cloned().zip(t.values.iter().cloned()).collect()
        }
        _ => {
            let (_, hi) = w.log_t_range(cfg)?;
            sample_log(-1.0, hi, cfg.t_points.max(128), |y| w.eval_log(y))?
        }
    };
    if samples.len() < 3 {
        return Err(Error::TooFewSamples { got: samples.len(), need: 3 });
    }
    let scale = samples.iter().map(|p| p.1.abs()).fold(1.0, f64::max);
    let tol = cfg.convexity_tol * scale;
    for i in 1..samples.len() - 1 {
        let (y0, v0) = samples[i - 1];
        let (y1, v1) = samples[i];
        let (y2, v2) = samples[i + 1];
        let left = (v1 - v0) / (y1 - y0);
        let right = (v2 - v1) / (y2 - y1);
        if right < left - tol {
            return Ok(ConditionVerdict::new(id, Verdict::False).with_note(format!(
                "convexity fails on the triple log t = ({y0:.6}, {y1:.6}, {y2:.6})"
            )));
        }
    }
    Ok(ConditionVerdict::new(id, Verdict::True))
}

/// Root-doubling reserve: some `H >= 1` with `2 omega(t) <= omega(H t) + H`
/// for all t. H is scanned over a geometric grid; the witness records the
/// smallest H that works on the sampled horizon.
pub fn check_omega6(w: &WeightFunction, cfg: &Config) -> Result<ConditionVerdict> {
    let id = "omega6-root-doubling";
    let setup = prepare_scan(w, cfg)?;
    let h_grid = cfg.h_grid();
    let mut skipped = Vec::new();
    for &h in &h_grid {
        let shift = h.ln();
        let hi = setup.hi - shift;
        if hi <= 0.5 {
            skipped.push(h);
            continue;
        }
        let gap = |f: &WeightFunction| {
            move |y: f64| -> Result<f64> { Ok(2.0 * f.eval_log(y)? - f.eval_log(y + shift)?) }
        };
        // The bound must hold for every t, not only in the tail: check the
        // full-range sup, then its stability at the extended horizon.
        let base = sample_log(0.0, hi, cfg.t_points, gap(&setup.base))?;
        let sup = base.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        if sup > h {
            continue;
        }
        let stable = match (&setup.ext, setup.ext_hi) {
            (Some(e), Some(eh)) if eh - shift > 0.5 => {
                let ext = sample_log(0.0, eh - shift, cfg.t_points, gap(e))?;
                ext.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max) <= h
            }
            _ => true,
        };
        if stable {
            return Ok(ConditionVerdict::new(id, Verdict::True)
                .with_witness(Witness::default().with("H", h))
                .with_param_grid("H", &h_grid)
                .with_t_log_range(0.0, hi));
        }
    }
    let mut v = ConditionVerdict::new(id, Verdict::False)
        .with_param_grid("H", &h_grid)
        .with_t_log_range(0.0, setup.hi);
    if !skipped.is_empty() {
        v = v.with_note(format!("H values beyond the horizon were skipped: {skipped:?}"));
    }
    Ok(v)
}

/// Equivalence of weights: each is O of the other.
pub fn sim_equivalent(
    sigma: &WeightFunction,
    tau: &WeightFunction,
    cfg: &Config,
) -> Result<ConditionVerdict> {
    let id = "sim-equivalent";
    let lo = sigma.positivity_log_t(cfg)?.max(tau.positivity_log_t(cfg)?);
    let hi_s = sigma.log_t_range(cfg)?.1;
    let hi_t = tau.log_t_range(cfg)?.1;
    let hi = hi_s.min(hi_t);
    if hi <= lo + 1e-6 {
        return Err(Error::PositivityUnreachable("no common positivity range".into()));
    }
    let fwd = sample_log(lo, hi, cfg.t_points, |y| {
        Ok(tau.eval_log(y)? / (sigma.eval_log(y)? + 1.0))
    })?;
    let bwd = sample_log(lo, hi, cfg.t_points, |y| {
        Ok(sigma.eval_log(y)? / (tau.eval_log(y)? + 1.0))
    })?;
    let f = bounded_tail(&fwd, None, cfg)?;
    let b = bounded_tail(&bwd, None, cfg)?;
    let verdict = if f.bounded && b.bounded { Verdict::True } else { Verdict::False };
    Ok(ConditionVerdict::new(id, verdict)
        .with_witness(
            Witness::default()
                .with("sup_tau_over_sigma", f.trail_max)
                .with("sup_sigma_over_tau", b.trail_max),
        )
        .with_t_log_range(lo, hi))
}
