//! Young conjugation and everything built from it: the conjugate table, the
//! matrix associated with a weight function, the multi-index sequences and
//! the matrix obtained from an abstract family of weight functions.

use serde::{Deserialize, Serialize};

use crate::assoc::AssociatedWeight;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::families::{Generator, SequenceFamily, WeightFamily, WeightGen};
use crate::matrix::{IndexDomain, MatrixGenerator, WeightMatrix};
use crate::numeric::{golden_max, ArgmaxSite};
use crate::sequence::WeightSequence;
use crate::verdict::Verdict;
use crate::weightfn::{check_omega4, WeightFunction};

/// Tabulation cap for sequences that can only be regenerated through a
/// conjugate (each entry costs a full maximization).
pub const CONJUGATE_TAB_CAP: usize = 1 << 15;

enum ConjKind {
    Assoc(AssociatedWeight),
    Closed(WeightFamily),
    /// Weight evaluated through the generic interface; `convex` records
    /// whether the log-convexity certificate was obtained.
    Generic { w: WeightFunction, y_hi: f64, convex: bool },
}

/// One-time setup for evaluating `phi*_omega` at arguments up to a declared
/// maximum. Associated weights are materialized far enough that every
/// maximizer stays interior; generic tables get the convexity certificate
/// once, and fall back to a dense scan without it.
pub struct Conjugator {
    kind: ConjKind,
    max_x: f64,
}

impl Conjugator {
    pub fn new(w: &WeightFunction, max_x: f64, cfg: &Config) -> Result<Self> {
        if !(max_x >= 0.0) {
            return Err(Error::Precondition(format!("max_x must be nonnegative, got {max_x}")));
        }
        let kind = match w {
            WeightFunction::Associated { source } => {
                let assoc = AssociatedWeight::new(source)?;
                let needed = max_x.ceil() as usize + 8;
                ConjKind::Assoc(assoc.ensure_index(needed, cfg)?)
            }
            WeightFunction::ClosedForm(f) => ConjKind::Closed(f.clone()),
            WeightFunction::Table(_) => {
                let convex = check_omega4(w, cfg)?.verdict == Verdict::True;
                let (_, y_hi) = w.log_t_range(cfg)?;
                ConjKind::Generic { w: w.clone(), y_hi, convex }
            }
        };
        Ok(Conjugator { kind, max_x })
    }

    pub fn from_sequence(seq: &WeightSequence, max_x: f64, cfg: &Config) -> Result<Self> {
        Self::new(&WeightFunction::associated(seq)?, max_x, cfg)
    }

    /// `phi*(x) = sup_{y >= 0} (x y - omega(e^y))`.
    pub fn phi_star(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::Precondition(format!("conjugate argument must be >= 0, got {x}")));
        }
        if x > self.max_x + 1e-9 {
            return Err(Error::HorizonOverflow(format!(
                "conjugate argument {x} beyond the declared maximum {}",
                self.max_x
            )));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        match &self.kind {
            ConjKind::Assoc(assoc) => {
                let y_hi = assoc.log_t_hi() - 1e-9;
                let r = golden_max(|y| x * y - assoc.eval_log(y), 0.0, y_hi);
                if r.site == ArgmaxSite::UpperEdge {
                    return Err(Error::HorizonOverflow(format!(
                        "conjugate maximizer for x = {x} at the quotient horizon"
                    )));
                }
                Ok(r.value.max(0.0))
            }
            ConjKind::Closed(f) => {
                let mut y_hi = closed_form_argmax_guess(f, x) + 6.0;
                for _ in 0..8 {
                    let r = golden_max(|y| x * y - closed_eval_log(f, y), 0.0, y_hi);
                    if r.site != ArgmaxSite::UpperEdge {
                        return Ok(r.value.max(0.0));
                    }
                    y_hi *= 2.0;
                }
                Err(Error::HorizonOverflow(format!(
                    "conjugate maximizer for x = {x} keeps touching the search boundary"
                )))
            }
            ConjKind::Generic { w, y_hi, convex } => {
                let obj = |y: f64| match w.eval_log(y) {
                    Ok(v) => x * y - v,
                    Err(_) => f64::NEG_INFINITY,
                };
                let r = if *convex {
                    golden_max(obj, 0.0, *y_hi)
                } else {
                    // No concavity certificate: dense scan, then a local
                    // polish around the best cell.
                    let n = 4096;
                    let step = y_hi / (n - 1) as f64;
                    let mut bi = 0usize;
                    let mut bv = f64::NEG_INFINITY;
                    for i in 0..n {
                        let v = obj(step * i as f64);
                        if v > bv {
                            bv = v;
                            bi = i;
                        }
                    }
                    let lo = step * bi.saturating_sub(1) as f64;
                    let hi = (step * (bi + 1) as f64).min(*y_hi);
                    let mut r = golden_max(obj, lo, hi);
                    if r.value < bv {
                        r.value = bv;
                    }
                    if bi + 1 >= n {
                        r.site = ArgmaxSite::UpperEdge;
                    }
                    r
                };
                if r.site == ArgmaxSite::UpperEdge {
                    return Err(Error::HorizonOverflow(format!(
                        "conjugate maximizer for x = {x} at the table end"
                    )));
                }
                Ok(r.value.max(0.0))
            }
        }
    }
}

fn closed_eval_log(f: &WeightFamily, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    match f {
        WeightFamily::Power { rho } => (rho * y).exp() - 1.0,
        WeightFamily::LogPower { s } => y.powf(*s),
        WeightFamily::ExpQuad => (y * y).exp() - 1.0,
    }
}

fn closed_form_argmax_guess(f: &WeightFamily, x: f64) -> f64 {
    match f {
        WeightFamily::Power { rho } => (x.max(*rho) / rho).ln() / rho,
        WeightFamily::LogPower { s } => (x / s).powf(1.0 / (s - 1.0)),
        WeightFamily::ExpQuad => (1.0 + x).ln().sqrt() + 1.0,
    }
    .max(1.0)
}

/// Materialized conjugate on a uniform argument grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjugateTable {
    pub source: String,
    pub x_grid: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn conjugate_table(
    w: &WeightFunction,
    x_max: f64,
    points: usize,
    cfg: &Config,
) -> Result<ConjugateTable> {
    if points < 2 || !(x_max > 0.0) {
        return Err(Error::DegenerateGrid("conjugate table needs x_max > 0, points >= 2".into()));
    }
    let conj = Conjugator::new(w, x_max, cfg)?;
    let step = x_max / (points - 1) as f64;
    let x_grid: Vec<f64> = (0..points).map(|i| step * i as f64).collect();
    let values = x_grid.iter().map(|&x| conj.phi_star(x)).collect::<Result<Vec<f64>>>()?;
    Ok(ConjugateTable { source: w.id(), x_grid, values })
}

/// Tabulate `j -> phi*(l j)/l` for a generator-expressible weight; this is
/// what re-tabulates conjugate-backed sequences at larger horizons.
pub fn tabulate_conjugate_sequence(
    weight: &WeightGen,
    l: f64,
    len: usize,
    cfg: &Config,
) -> Result<Vec<f64>> {
    if !(l > 0.0) {
        return Err(Error::Precondition(format!("matrix parameter must be positive, got {l}")));
    }
    if len > CONJUGATE_TAB_CAP {
        return Err(Error::HorizonOverflow(format!(
            "conjugate-backed tabulation of {len} entries exceeds cap {CONJUGATE_TAB_CAP}"
        )));
    }
    let max_x = l * (len - 1) as f64;
    let w = match weight {
        WeightGen::ClosedForm(f) => WeightFunction::ClosedForm(f.clone()),
        WeightGen::Associated(fam) => {
            let need = (max_x.ceil() as usize + 16).min(cfg.max_tabulation);
            let seq = WeightSequence::from_family(fam.clone(), need, cfg)?;
            WeightFunction::associated(&seq)?
        }
    };
    let conj = Conjugator::new(&w, max_x, cfg)?;
    let mut out = Vec::with_capacity(len);
    for j in 0..len {
        let v = conj.phi_star(l * j as f64)? / l;
        out.push(if j == 0 { 0.0 } else { v });
    }
    Ok(out)
}

/// The standard log-convex matrix attached to a weight function:
/// `log W^l_j = phi*(l j)/l` for each grid parameter l.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssociatedMatrix {
    pub source: String,
    pub entries: Vec<(f64, WeightSequence)>,
}

/// Generator handle for a weight function, when one exists.
pub fn weight_gen_of(w: &WeightFunction) -> Option<WeightGen> {
    match w {
        WeightFunction::ClosedForm(f) => Some(WeightGen::ClosedForm(f.clone())),
        WeightFunction::Associated { source } => match source.generator() {
            Some(Generator::Family(f)) => Some(WeightGen::Associated(f.clone())),
            _ => None,
        },
        WeightFunction::Table(_) => None,
    }
}

pub fn associated_matrix(
    w: &WeightFunction,
    l_grid: &[f64],
    len: usize,
    cfg: &Config,
) -> Result<AssociatedMatrix> {
    if l_grid.is_empty() || !l_grid.windows(2).all(|p| p[1] > p[0]) || !(l_grid[0] > 0.0) {
        return Err(Error::DegenerateGrid("l grid must be positive increasing".into()));
    }
    let gen = weight_gen_of(w);
    let max_x = l_grid[l_grid.len() - 1] * (len - 1) as f64;
    let conj = Conjugator::new(w, max_x, cfg)?;
    let mut entries = Vec::with_capacity(l_grid.len());
    for &l in l_grid {
        let mut vals = Vec::with_capacity(len);
        for j in 0..len {
            let v = conj.phi_star(l * j as f64)? / l;
            vals.push(if j == 0 { 0.0 } else { v });
        }
        let seq = match &gen {
            Some(g) => {
                // Attach the recipe without re-running the tabulation.
                let mut s = WeightSequence::from_log_values(vals)?;
                s = s.with_generator(Generator::Conjugate { weight: g.clone(), l });
                s
            }
            None => WeightSequence::from_log_values(vals)?,
        };
        entries.push((l, seq));
    }
    Ok(AssociatedMatrix { source: w.id(), entries })
}

impl AssociatedMatrix {
    /// View as a weight matrix (index set all of (0, inf) when the source
    /// weight is generator-expressible).
    pub fn into_weight_matrix(self, w: &WeightFunction) -> Result<WeightMatrix> {
        match weight_gen_of(w) {
            Some(g) => WeightMatrix::new(
                self.entries,
                Some(MatrixGenerator::Conjugates(g)),
                IndexDomain::Unbounded,
            ),
            None => WeightMatrix::new(self.entries, None, IndexDomain::Sampled),
        }
    }
}

/// One multi-index step: `M -> exp(phi*_(omega_M)(l j) / l)`, tabulated to
/// `len` entries.
pub fn multi_index_sequence(
    m: &WeightSequence,
    l: f64,
    len: usize,
    cfg: &Config,
) -> Result<WeightSequence> {
    if !(l > 0.0) {
        return Err(Error::Precondition(format!("l must be positive, got {l}")));
    }
    if let Some(Generator::Family(f)) = m.generator() {
        return WeightSequence::from_generator(
            Generator::Conjugate { weight: WeightGen::Associated(f.clone()), l },
            len,
            cfg,
        );
    }
    // Tabulation-only input: materialize the conjugate directly; the result
    // carries no generator and is capped at the tabulated horizon.
    let need = (l * (len - 1) as f64).ceil() as usize + 8;
    let source = m.materialize(need.max(m.len()), cfg)?;
    let conj = Conjugator::from_sequence(&source, l * (len - 1) as f64, cfg)?;
    let mut vals = Vec::with_capacity(len);
    for j in 0..len {
        let v = conj.phi_star(l * j as f64)? / l;
        vals.push(if j == 0 { 0.0 } else { v });
    }
    WeightSequence::from_log_values(vals)
}

/// The second-level family: every `(x, l)` cell of the multi-index
/// construction, in lexicographic order.
pub fn matrix_squared(
    m: &WeightMatrix,
    l_grid: &[f64],
    len: usize,
    cfg: &Config,
) -> Result<Vec<((f64, f64), WeightSequence)>> {
    let mut out = Vec::with_capacity(m.len() * l_grid.len());
    for (x, seq) in m.entries() {
        for &l in l_grid {
            out.push(((*x, l), multi_index_sequence(seq, l, len, cfg)?));
        }
    }
    Ok(out)
}

/// Flatten the pair-indexed family onto synthetic indices 1..n. The pair set
/// is not totally ordered pointwise in general; the flag on the result says
/// whether this particular flattening happens to be.
pub fn flatten_matrix_squared(cells: Vec<((f64, f64), WeightSequence)>) -> Result<WeightMatrix> {
    let entries = cells
        .into_iter()
        .enumerate()
        .map(|(i, (_, seq))| (i as f64 + 1.0, seq))
        .collect();
    WeightMatrix::new_unchecked_order(entries, IndexDomain::Sampled)
}

/// Matrix generated by an abstract family of weight functions:
/// `N^x_p = exp(phi*_(omega^x)(p))`. The family must be totally ordered
/// pointwise; entries are indexed so the sequences increase with the index
/// (the largest weight gives the smallest sequence).
pub fn matrix_from_weight_family(
    weights: &[WeightFunction],
    len: usize,
    cfg: &Config,
) -> Result<WeightMatrix> {
    if weights.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    // Order by pointwise dominance on a shared grid, largest weight first.
    let lo = 0.5f64;
    let hi = weights
        .iter()
        .map(|w| w.log_t_range(cfg).map(|r| r.1))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let grid: Vec<f64> = (0..64).map(|i| lo + (hi - lo) * i as f64 / 63.0).collect();
    let mut keyed: Vec<(usize, Vec<f64>)> = Vec::new();
    for (i, w) in weights.iter().enumerate() {
        keyed.push((i, grid.iter().map(|&y| w.eval_log(y)).collect::<Result<Vec<f64>>>()?));
    }
    keyed.sort_by(|a, b| {
        let sa: f64 = a.1.iter().sum();
        let sb: f64 = b.1.iter().sum();
        sb.partial_cmp(&sa).unwrap().then(a.0.cmp(&b.0))
    });
    for w in keyed.windows(2) {
        let dominated = w[0].1.iter().zip(&w[1].1).all(|(a, b)| a + 1e-9 >= *b);
        if !dominated {
            return Err(Error::OrderViolated(format!(
                "weights {} and {} are not pointwise comparable",
                w[0].0, w[1].0
            )));
        }
    }

    let mut entries = Vec::with_capacity(weights.len());
    for (rank, (orig, _)) in keyed.iter().enumerate() {
        let w = &weights[*orig];
        let conj = Conjugator::new(w, (len - 1) as f64, cfg)?;
        let mut vals = Vec::with_capacity(len);
        for p in 0..len {
            let v = conj.phi_star(p as f64)?;
            vals.push(if p == 0 { 0.0 } else { v });
        }
        let mut seq = WeightSequence::from_log_values(vals)?;
        if let Some(g) = weight_gen_of(w) {
            seq = seq.with_generator(Generator::Conjugate { weight: g, l: 1.0 });
        }
        entries.push((rank as f64 + 1.0, seq));
    }
    WeightMatrix::new(entries, None, IndexDomain::Sampled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::SequenceFamily as SF;
    use crate::numeric::log_factorial;

    fn cfg() -> Config {
        Config::default()
    }

    fn power(rho: f64) -> WeightFunction {
        WeightFunction::ClosedForm(WeightFamily::Power { rho })
    }

    fn assoc(fam: SF, len: usize) -> WeightFunction {
        let seq = WeightSequence::from_family(fam, len, &cfg()).unwrap();
        WeightFunction::associated(&seq).unwrap()
    }

    #[test]
    fn conjugate_vanishes_at_zero_and_at_one_for_linear() {
        // Calculus oracle: for omega = max(0, t-1), the objective y - e^y + 1
        // is maximal at y = 0 with value 0.
        let c = Conjugator::new(&power(1.0), 16.0, &cfg()).unwrap();
        assert_eq!(c.phi_star(0.0).unwrap(), 0.0);
        assert!(c.phi_star(1.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn conjugate_of_linear_weight_is_stirling_like() {
        // phi*(x) = x log x - x + 1 for x >= 1.
        let c = Conjugator::new(&power(1.0), 256.0, &cfg()).unwrap();
        for x in [2.0, 5.0, 17.0, 100.0] {
            let oracle = x * x.ln() - x + 1.0;
            assert!((c.phi_star(x).unwrap() - oracle).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn conjugate_of_associated_factorial_is_log_factorial() {
        let c = Conjugator::new(&assoc(SF::Gevrey { s: 1.0 }, 512), 256.0, &cfg()).unwrap();
        for j in [1usize, 2, 7, 40, 100] {
            let got = c.phi_star(j as f64).unwrap();
            assert!((got - log_factorial(j)).abs() < 1e-8, "j={j}: {got}");
        }
    }

    #[test]
    fn argument_beyond_declared_max_errors() {
        let c = Conjugator::new(&power(1.0), 4.0, &cfg()).unwrap();
        assert!(c.phi_star(8.0).is_err());
        assert!(c.phi_star(-1.0).is_err());
    }

    #[test]
    fn associated_matrix_entries_are_normalized_log_convex() {
        let am = associated_matrix(&power(1.0), &cfg().l_grid(), 48, &cfg()).unwrap();
        for (l, seq) in &am.entries {
            assert_eq!(seq.log_m(0), 0.0, "l={l}");
            assert!(seq.log_convexity_violation().is_none(), "l={l}");
            assert!(seq.is_nondecreasing(), "l={l}");
        }
        // Pointwise order in l.
        for w in am.entries.windows(2) {
            assert!(w[0].1.le_pointwise(&w[1].1));
        }
    }

    #[test]
    fn moderate_growth_across_doubled_parameter() {
        // log W^l_(j+k) <= log W^(2l)_j + log W^(2l)_k.
        let grid = cfg().l_grid();
        let am = associated_matrix(&power(0.5), &grid, 40, &cfg()).unwrap();
        for i in 0..grid.len() - 1 {
            let wl = &am.entries[i].1;
            let w2l = &am.entries[i + 1].1;
            assert_eq!(am.entries[i + 1].0, 2.0 * am.entries[i].0);
            for j in 0..20 {
                for k in 0..20 {
                    let slack = w2l.log_m(j) + w2l.log_m(k) - wl.log_m(j + k);
                    assert!(slack >= -1e-9, "l={} j={j} k={k}: {slack}", am.entries[i].0);
                }
            }
        }
    }

    #[test]
    fn multi_index_identity_at_one() {
        let m = WeightSequence::from_family(SF::Gevrey { s: 1.0 }, 128, &cfg()).unwrap();
        let m1 = multi_index_sequence(&m, 1.0, 100, &cfg()).unwrap();
        for j in 0..100 {
            assert!((m1.log_m(j) - m.log_m(j)).abs() < 1e-6, "j={j}");
        }
    }

    #[test]
    fn multi_index_integer_parameter_contracts_factorials() {
        // M^(;L)_j = ((Lj)!)^(1/L) for M = j!.
        let m = WeightSequence::from_family(SF::Gevrey { s: 1.0 }, 64, &cfg()).unwrap();
        for l in [2usize, 3] {
            let ml = multi_index_sequence(&m, l as f64, 41, &cfg()).unwrap();
            for j in 0..41 {
                let oracle = log_factorial(l * j) / l as f64;
                assert!((ml.log_m(j) - oracle).abs() < 1e-6, "L={l} j={j}");
            }
        }
    }

    #[test]
    fn multi_index_qgevrey_oracle() {
        // (2^(j^2))^(;2): (M_(2j))^(1/2) = 2^(2 j^2).
        let m = WeightSequence::from_family(SF::Qgevrey { q: 2.0 }, 64, &cfg()).unwrap();
        let m2 = multi_index_sequence(&m, 2.0, 24, &cfg()).unwrap();
        for j in 0..24 {
            let oracle = 2.0 * (j as f64) * (j as f64) * 2f64.ln();
            assert!((m2.log_m(j) - oracle).abs() < 1e-6, "j={j}");
        }
    }

    #[test]
    fn matrix_squared_singleton_stays_ordered() {
        let m = WeightMatrix::singleton(
            WeightSequence::from_family(SF::Gevrey { s: 1.0 }, 64, &cfg()).unwrap(),
        );
        let cells = matrix_squared(&m, &[0.5, 1.0, 2.0], 32, &cfg()).unwrap();
        assert_eq!(cells.len(), 3);
        let flat = flatten_matrix_squared(cells).unwrap();
        assert!(flat.pointwise_ordered);
    }

    #[test]
    fn weight_family_matrix_scaling_order() {
        // {omega, 2 omega}: conjugate scaling phi*_(x omega)(p) = x phi*(p/x)
        // puts the doubled weight below, and the entries come out ordered.
        let base = power(1.0);
        let doubled = {
            let grid = crate::numeric::geomspace(1.0, 30f64.exp(), 1024).unwrap();
            let vals = grid.iter().map(|&t| 2.0 * (t - 1.0f64).max(0.0)).collect();
            WeightFunction::Table(crate::weightfn::WeightTable::new(grid, vals).unwrap())
        };
        let m = matrix_from_weight_family(&[base, doubled], 24, &cfg()).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.entries()[0].1.le_pointwise(&m.entries()[1].1));
        // Scaling oracle at p = 8: phi*_(2 omega)(8) = 2 phi*_omega(4).
        let c = Conjugator::new(&power(1.0), 16.0, &cfg()).unwrap();
        let expected = 2.0 * c.phi_star(4.0).unwrap();
        assert!((m.entries()[0].1.log_m(8) - expected).abs() < 1e-4);
    }

    #[test]
    fn singleton_weight_family_reproduces_sequence() {
        let m = matrix_from_weight_family(&[assoc(SF::Gevrey { s: 1.0 }, 256)], 64, &cfg()).unwrap();
        for j in 0..64 {
            assert!((m.entries()[0].1.log_m(j) - log_factorial(j)).abs() < 1e-6, "j={j}");
        }
    }

    #[test]
    fn biconjugation_recovers_the_weight() {
        // Where convexity in log t holds, sup_x (x y - phi*(x)) returns
        // omega(e^y) on interior points.
        for w in [power(1.0), WeightFunction::ClosedForm(WeightFamily::LogPower { s: 2.0 })] {
            let x_max = 512.0;
            let conj = Conjugator::new(&w, x_max, &cfg()).unwrap();
            for y in [0.5f64, 1.0, 2.0, 3.0] {
                let r = golden_max(|x| x * y - conj.phi_star(x).unwrap(), 0.0, x_max);
                assert_eq!(r.site, ArgmaxSite::Interior, "{} y={y}", w.id());
                let direct = w.eval_log(y).unwrap();
                let rel = (r.value - direct).abs() / (1.0 + direct.abs());
                assert!(rel < 1e-6, "{} y={y}: {} vs {direct}", w.id(), r.value);
            }
        }
    }

    #[test]
    fn conjugate_table_shape() {
        let t = conjugate_table(&power(1.0), 32.0, 65, &cfg()).unwrap();
        assert_eq!(t.values[0], 0.0);
        assert!(t.values.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        // x -> phi*(x)/x nondecreasing on the positive grid.
        let ratios: Vec<f64> = t
            .x_grid
            .iter()
            .zip(&t.values)
            .skip(1)
            .map(|(x, v)| v / x)
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] >= w[0] - 1e-9));
    }
}
