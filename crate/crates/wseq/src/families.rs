//! Catalog of closed-form weight families: the oracle bed every checker and
//! index estimator is exercised against, plus the test-function derivative
//! lower bound built from a sequence.
//!
//! The catalog is deliberately small and typed: each sequence family exposes
//! exact `log M_j` and `log mu_j`, so tabulations can be regenerated at any
//! horizon without drift.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::numeric::{log_factorial, logsumexp};
use crate::sequence::WeightSequence;

/// Closed-form sequence families, `M_j` given in the log domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum SequenceFamily {
    /// `M_j = (j!)^s`, s > 0.
    Gevrey { s: f64 },
    /// `M_j = q^(j^2)`, q > 1.
    Qgevrey { q: f64 },
    /// `M_j = c^j * (inner M)_j`, c >= 1.
    GeomShift { c: f64, of: Box<SequenceFamily> },
    /// `mu_j = exp(sqrt(log(1+j)))`: log-convex with diverging roots but
    /// without any doubling reserve in its quotients.
    SlowVar,
}

impl SequenceFamily {
    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceFamily::Gevrey { s } if !(*s > 0.0) => Err(Error::InvalidParameter {
                family: "gevrey".into(),
                reason: format!("s must be positive, got {s}"),
            }),
            SequenceFamily::Qgevrey { q } if !(*q > 1.0) => Err(Error::InvalidParameter {
                family: "qgevrey".into(),
                reason: format!("q must exceed 1, got {q}"),
            }),
            SequenceFamily::GeomShift { c, of } => {
                if !(*c >= 1.0) {
                    return Err(Error::InvalidParameter {
                        family: "geom-shift".into(),
                        reason: format!("c must be >= 1, got {c}"),
                    });
                }
                of.validate()
            }
            _ => Ok(()),
        }
    }

    /// Exact `log M_j`.
    pub fn log_m(&self, j: usize) -> f64 {
        match self {
            SequenceFamily::Gevrey { s } => s * log_factorial(j),
            SequenceFamily::Qgevrey { q } => (j as f64) * (j as f64) * q.ln(),
            SequenceFamily::GeomShift { c, of } => j as f64 * c.ln() + of.log_m(j),
            SequenceFamily::SlowVar => (1..=j).map(|i| Self::slowvar_mu(i)).sum(),
        }
    }

    /// Exact `log mu_j` (`mu_0 = 1`).
    pub fn log_mu(&self, j: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        match self {
            SequenceFamily::Gevrey { s } => s * (j as f64).ln(),
            SequenceFamily::Qgevrey { q } => (2.0 * j as f64 - 1.0) * q.ln(),
            SequenceFamily::GeomShift { c, of } => c.ln() + of.log_mu(j),
            SequenceFamily::SlowVar => Self::slowvar_mu(j),
        }
    }

    fn slowvar_mu(j: usize) -> f64 {
        (1.0 + j as f64).ln().sqrt()
    }

    /// Tabulate `log M_0..log M_(len-1)`. Cumulative families are summed once
    /// rather than per-entry.
    pub fn tabulate(&self, len: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(len);
        let mut acc = 0.0;
        out.push(0.0);
        for j in 1..len {
            acc += self.log_mu(j);
            out.push(acc);
        }
        out
    }

    pub fn id(&self) -> String {
        match self {
            SequenceFamily::Gevrey { s } => format!("gevrey:s={s}"),
            SequenceFamily::Qgevrey { q } => format!("qgevrey:q={q}"),
            SequenceFamily::GeomShift { c, of } => format!("geom-shift:c={c},of={}", of.id()),
            SequenceFamily::SlowVar => "from-mu:kind=slowvar".into(),
        }
    }
}

/// Closed-form weight functions, all normalized (zero on [0, 1]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum WeightFamily {
    /// `omega(t) = max(0, t^rho - 1)`, rho > 0.
    Power { rho: f64 },
    /// `omega(t) = max(0, log t)^s`, s > 1 for membership in the admissible set.
    LogPower { s: f64 },
    /// `omega(t) = max(0, exp((log t)^2) - 1)`: admissible but without the
    /// doubling property.
    ExpQuad,
}

impl WeightFamily {
    pub fn validate(&self) -> Result<()> {
        match self {
            WeightFamily::Power { rho } if !(*rho > 0.0) => Err(Error::InvalidParameter {
                family: "power".into(),
                reason: format!("rho must be positive, got {rho}"),
            }),
            WeightFamily::LogPower { s } if !(*s > 1.0) => Err(Error::InvalidParameter {
                family: "logpower".into(),
                reason: format!("s must exceed 1, got {s}"),
            }),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 1.0 {
            return 0.0;
        }
        match self {
            WeightFamily::Power { rho } => t.powf(*rho) - 1.0,
            WeightFamily::LogPower { s } => t.ln().powf(*s),
            WeightFamily::ExpQuad => {
                let y = t.ln();
                (y * y).exp() - 1.0
            }
        }
    }

    pub fn id(&self) -> String {
        match self {
            WeightFamily::Power { rho } => format!("power:rho={rho}"),
            WeightFamily::LogPower { s } => format!("logpower:s={s}"),
            WeightFamily::ExpQuad => "expquad".into(),
        }
    }
}

/// Source of an evaluable weight for conjugate-generated sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightGen {
    ClosedForm(WeightFamily),
    Associated(SequenceFamily),
}

impl WeightGen {
    pub fn id(&self) -> String {
        match self {
            WeightGen::ClosedForm(w) => w.id(),
            WeightGen::Associated(s) => format!("associated({})", s.id()),
        }
    }
}

/// Re-tabulation recipe attached to a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    Family(SequenceFamily),
    /// `M_j = exp(phi*_omega(l j) / l)` for the generating weight.
    Conjugate { weight: WeightGen, l: f64 },
}

impl Generator {
    pub fn tabulate(&self, len: usize, cfg: &Config) -> Result<Vec<f64>> {
        match self {
            Generator::Family(f) => Ok(f.tabulate(len)),
            Generator::Conjugate { weight, l } => {
                crate::conjugate::tabulate_conjugate_sequence(weight, *l, len, cfg)
            }
        }
    }

    pub fn id(&self) -> String {
        match self {
            Generator::Family(f) => f.id(),
            Generator::Conjugate { weight, l } => format!("conjugate(l={l}, {})", weight.id()),
        }
    }
}

/// Matrix families; the index-domain marker controls whether witness searches
/// may generate entries beyond the tabulated grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum MatrixFamily {
    /// `M^x = (j!)^x`, sampled at `xs`, index set all of (0, inf).
    GevreyMatrix { xs: Vec<f64> },
    /// Matrix associated with a weight function, entries at `2^k`,
    /// k in `lmin..=lmax`; index set all of (0, inf).
    Bmt { weight: WeightFamily, lmin: i32, lmax: i32 },
    /// One-element matrix; index set is exactly the sample.
    Singleton { of: SequenceFamily },
    /// `M^k = 2^(k j) j!` for k in `ks`; index set is exactly the sample.
    Chain { ks: Vec<u32> },
}

impl MatrixFamily {
    pub fn validate(&self) -> Result<()> {
        match self {
            MatrixFamily::GevreyMatrix { xs } => {
                if xs.is_empty() {
                    return Err(Error::EmptyMatrix);
                }
                if !xs.windows(2).all(|w| w[1] > w[0]) || !(xs[0] > 0.0) {
                    return Err(Error::InvalidParameter {
                        family: "gevrey-matrix".into(),
                        reason: "xs must be positive and strictly increasing".into(),
                    });
                }
                Ok(())
            }
            MatrixFamily::Bmt { weight, lmin, lmax } => {
                if lmin > lmax {
                    return Err(Error::InvalidParameter {
                        family: "bmt-matrix".into(),
                        reason: format!("lmin {lmin} exceeds lmax {lmax}"),
                    });
                }
                weight.validate()
            }
            MatrixFamily::Singleton { of } => of.validate(),
            MatrixFamily::Chain { ks } => {
                if ks.is_empty() {
                    return Err(Error::EmptyMatrix);
                }
                if !ks.windows(2).all(|w| w[1] > w[0]) {
                    return Err(Error::InvalidParameter {
                        family: "chain".into(),
                        reason: "ks must be strictly increasing".into(),
                    });
                }
                Ok(())
            }
        }
    }

    pub fn id(&self) -> String {
        match self {
            MatrixFamily::GevreyMatrix { xs } => format!(
                "gevrey-matrix:xs={}",
                xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            ),
            MatrixFamily::Bmt { weight, lmin, lmax } => {
                format!("bmt-matrix:weight={},lmin={lmin},lmax={lmax}", weight.id())
            }
            MatrixFamily::Singleton { of } => format!("singleton:of={}", of.id()),
            MatrixFamily::Chain { ks } => format!(
                "chain:ks={}",
                ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

/// Any catalog entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilyDescriptor {
    Sequence(SequenceFamily),
    Weight(WeightFamily),
    Matrix(MatrixFamily),
}

impl FamilyDescriptor {
    pub fn id(&self) -> String {
        match self {
            FamilyDescriptor::Sequence(s) => s.id(),
            FamilyDescriptor::Weight(w) => w.id(),
            FamilyDescriptor::Matrix(m) => m.id(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FamilyDescriptor::Sequence(s) => s.validate(),
            FamilyDescriptor::Weight(w) => w.validate(),
            FamilyDescriptor::Matrix(m) => m.validate(),
        }
    }
}

/// The canonical test bed: the all-pass exhibit (Gevrey scales), the
/// moderate-growth failure (qgevrey), the doubling failure (slowvar), the
/// geometric-shift pair, and the matrix subjects used by the suite runner.
pub fn catalog_list() -> Vec<FamilyDescriptor> {
    use FamilyDescriptor as F;
    vec![
        F::Sequence(SequenceFamily::Gevrey { s: 0.5 }),
        F::Sequence(SequenceFamily::Gevrey { s: 1.0 }),
        F::Sequence(SequenceFamily::Gevrey { s: 2.0 }),
        F::Sequence(SequenceFamily::Qgevrey { q: 2.0 }),
        F::Sequence(SequenceFamily::SlowVar),
        F::Sequence(SequenceFamily::GeomShift {
            c: 4.0,
            of: Box::new(SequenceFamily::Gevrey { s: 1.0 }),
        }),
        F::Weight(WeightFamily::Power { rho: 0.5 }),
        F::Weight(WeightFamily::Power { rho: 1.0 }),
        F::Weight(WeightFamily::LogPower { s: 2.0 }),
        F::Weight(WeightFamily::ExpQuad),
        F::Matrix(MatrixFamily::GevreyMatrix { xs: vec![0.5, 1.0, 2.0, 4.0] }),
        F::Matrix(MatrixFamily::Bmt { weight: WeightFamily::Power { rho: 0.5 }, lmin: -4, lmax: 4 }),
        F::Matrix(MatrixFamily::Singleton { of: SequenceFamily::Qgevrey { q: 2.0 } }),
        F::Matrix(MatrixFamily::Singleton { of: SequenceFamily::SlowVar }),
        F::Matrix(MatrixFamily::Chain { ks: vec![0, 1, 2, 3, 4] }),
    ]
}

fn parse_params(rest: &str) -> Result<Vec<(String, String)>> {
    // Comma-separated k=v pairs; bare tokens extend the previous value, which
    // is how list parameters like xs=0.5,1,2,4 come in.
    let mut out: Vec<(String, String)> = Vec::new();
    for tok in rest.split(',') {
        if let Some((k, v)) = tok.split_once('=') {
            out.push((k.trim().to_string(), v.trim().to_string()));
        } else if let Some(last) = out.last_mut() {
            last.1.push(',');
            last.1.push_str(tok.trim());
        } else {
            return Err(Error::Malformed(format!("dangling token `{tok}` in family spec")));
        }
    }
    Ok(out)
}

fn get_f64(params: &[(String, String)], key: &str, family: &str) -> Result<f64> {
    let raw = params
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.clone())
        .ok_or_else(|| Error::InvalidParameter {
            family: family.into(),
            reason: format!("missing parameter `{key}`"),
        })?;
    raw.parse::<f64>().map_err(|_| Error::InvalidParameter {
        family: family.into(),
        reason: format!("parameter `{key}`: cannot parse `{raw}` as a number"),
    })
}

fn get_list(params: &[(String, String)], key: &str, family: &str) -> Result<Vec<f64>> {
    let raw = params
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.clone())
        .ok_or_else(|| Error::InvalidParameter {
            family: family.into(),
            reason: format!("missing parameter `{key}`"),
        })?;
    raw.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| Error::InvalidParameter {
                family: family.into(),
                reason: format!("list parameter `{key}`: bad entry `{s}`"),
            })
        })
        .collect()
}

fn parse_inner_sequence(params: &[(String, String)], family: &str) -> Result<SequenceFamily> {
    let of = params
        .iter()
        .find(|(k, _)| k == "of")
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| Error::InvalidParameter {
            family: family.into(),
            reason: "missing parameter `of`".into(),
        })?;
    match of {
        "gevrey" => Ok(SequenceFamily::Gevrey { s: get_f64(params, "s", family)? }),
        "qgevrey" => Ok(SequenceFamily::Qgevrey { q: get_f64(params, "q", family)? }),
        "slowvar" => Ok(SequenceFamily::SlowVar),
        other => Err(Error::UnknownFamily(other.into())),
    }
}

/// Parse the CLI mini-grammar: `id[:key=value,...]`, e.g. `gevrey:s=2`,
/// `from-mu:kind=slowvar`, `gevrey-matrix:xs=0.5,1,2,4`.
pub fn parse_family(spec: &str) -> Result<FamilyDescriptor> {
    let (id, rest) = match spec.split_once(':') {
        Some((a, b)) => (a.trim(), b),
        None => (spec.trim(), ""),
    };
    let params = parse_params(rest)?;
    let desc = match id {
        "gevrey" => FamilyDescriptor::Sequence(SequenceFamily::Gevrey {
            s: get_f64(&params, "s", id)?,
        }),
        "qgevrey" => FamilyDescriptor::Sequence(SequenceFamily::Qgevrey {
            q: get_f64(&params, "q", id)?,
        }),
        "geom-shift" => FamilyDescriptor::Sequence(SequenceFamily::GeomShift {
            c: get_f64(&params, "c", id)?,
            of: Box::new(parse_inner_sequence(&params, id)?),
        }),
        "from-mu" => {
            let kind = params
                .iter()
                .find(|(k, _)| k == "kind")
                .map(|(_, v)| v.as_str())
                .unwrap_or("");
            if kind != "slowvar" {
                return Err(Error::UnknownFamily(format!("from-mu kind `{kind}`")));
            }
            FamilyDescriptor::Sequence(SequenceFamily::SlowVar)
        }
        "slowvar" => FamilyDescriptor::Sequence(SequenceFamily::SlowVar),
        "power" => FamilyDescriptor::Weight(WeightFamily::Power {
            rho: get_f64(&params, "rho", id)?,
        }),
        "logpower" => FamilyDescriptor::Weight(WeightFamily::LogPower {
            s: get_f64(&params, "s", id)?,
        }),
        "expquad" => FamilyDescriptor::Weight(WeightFamily::ExpQuad),
        "gevrey-matrix" => FamilyDescriptor::Matrix(MatrixFamily::GevreyMatrix {
            xs: get_list(&params, "xs", id)?,
        }),
        "bmt-matrix" => {
            let weight = params
                .iter()
                .find(|(k, _)| k == "weight")
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::InvalidParameter {
                    family: id.into(),
                    reason: "missing parameter `weight`".into(),
                })?;
            let weight = match weight {
                "power" => WeightFamily::Power { rho: get_f64(&params, "rho", id)? },
                "logpower" => WeightFamily::LogPower { s: get_f64(&params, "s", id)? },
                "expquad" => WeightFamily::ExpQuad,
                other => return Err(Error::UnknownFamily(other.into())),
            };
            let lmin = get_f64(&params, "lmin", id).unwrap_or(-4.0) as i32;
            let lmax = get_f64(&params, "lmax", id).unwrap_or(4.0) as i32;
            FamilyDescriptor::Matrix(MatrixFamily::Bmt { weight, lmin, lmax })
        }
        "singleton" => FamilyDescriptor::Matrix(MatrixFamily::Singleton {
            of: parse_inner_sequence(&params, id)?,
        }),
        "chain" => {
            let ks = get_list(&params, "ks", id)?
                .into_iter()
                .map(|k| k as u32)
                .collect();
            FamilyDescriptor::Matrix(MatrixFamily::Chain { ks })
        }
        other => return Err(Error::UnknownFamily(other.into())),
    };
    desc.validate()?;
    Ok(desc)
}

/// One order of the test-function derivative bound: the log of
/// `s_j = sum_k N_k 2^(j-k) nu_k^(j-k)` with its truncation diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaBoundEntry {
    pub order: usize,
    pub k_trunc: usize,
    /// log s_j from the truncated series.
    pub log_s: f64,
    /// log N_j, the bound the series must dominate.
    pub log_n: f64,
    /// log s_j - log N_j, nonnegative when the bound holds.
    pub log_margin: f64,
    /// Upper estimate of log(tail beyond k_trunc); the truncated sum is a
    /// lower bound either way since every term is positive.
    pub log_tail_bound: f64,
    /// Tail provably negligible relative to the sum.
    pub conclusive: bool,
}

/// Lower bound on the j-th derivative at the origin of the canonical
/// test function built from `N`: the series term at k equals
/// `N_k / (2 nu_k)^k * (2 nu_k)^j`, so the k = j term alone is `N_j`.
pub fn theta_derivative_bound(
    n: &WeightSequence,
    order: usize,
    k_trunc: usize,
    cfg: &Config,
) -> Result<ThetaBoundEntry> {
    if k_trunc < order + 16 {
        return Err(Error::Precondition(format!(
            "k_trunc = {k_trunc} must be at least order + 16 = {}",
            order + 16
        )));
    }
    let seq = n.materialize(k_trunc + 2, cfg)?;
    let mu = seq.quotients();
    let term = |k: usize| -> f64 {
        // log [ N_k * 2^(j-k) * nu_k^(j-k) ]; nu_0 = 1.
        let d = order as f64 - k as f64;
        seq.log_m(k) + d * (2f64.ln() + mu.log_mu(k))
    };
    let terms: Vec<f64> = (0..=k_trunc).map(term).collect();
    let log_s = logsumexp(&terms);
    let log_n = seq.log_m(order);

    // Beyond k >= k_trunc >= order the term ratio is at most 1/2, so the tail
    // is dominated by twice its first term.
    let first_tail = term(k_trunc + 1);
    let log_tail_bound = first_tail + 2f64.ln();
    let conclusive = log_tail_bound < log_s + (1e-9f64).ln();

    Ok(ThetaBoundEntry {
        order,
        k_trunc,
        log_s,
        log_n,
        log_margin: log_s - log_n,
        log_tail_bound,
        conclusive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gevrey_log_values_match_factorials() {
        let f = SequenceFamily::Gevrey { s: 1.0 };
        let tab = f.tabulate(4);
        assert!((tab[0]).abs() < 1e-12);
        assert!((tab[1]).abs() < 1e-12);
        assert!((tab[2] - 2f64.ln()).abs() < 1e-12);
        assert!((tab[3] - 6f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn qgevrey_log_values_match_squares() {
        let f = SequenceFamily::Qgevrey { q: 2.0 };
        let tab = f.tabulate(3);
        assert!((tab[1] - 2f64.ln()).abs() < 1e-12);
        assert!((tab[2] - 4.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn slowvar_is_cumulative_sum_of_mu() {
        // Oracle: direct cumulative sum.
        let f = SequenceFamily::SlowVar;
        let tab = f.tabulate(64);
        let direct: f64 = (1..=40u32).map(|i| (1.0 + i as f64).ln().sqrt()).sum();
        assert!((tab[40] - direct).abs() < 1e-10);
    }

    #[test]
    fn parameter_validation() {
        assert!(SequenceFamily::Gevrey { s: -1.0 }.validate().is_err());
        assert!(SequenceFamily::Qgevrey { q: 1.0 }.validate().is_err());
        assert!(WeightFamily::Power { rho: 0.0 }.validate().is_err());
        assert!(parse_family("gevrey:s=0").is_err());
        assert!(parse_family("nosuch:x=1").is_err());
    }

    #[test]
    fn parse_roundtrips_ids() {
        for d in catalog_list() {
            let reparsed = parse_family(&d.id()).unwrap();
            assert_eq!(reparsed, d, "id {}", d.id());
        }
    }

    #[test]
    fn parse_matrix_lists() {
        let d = parse_family("gevrey-matrix:xs=0.5,1,2,4").unwrap();
        match d {
            FamilyDescriptor::Matrix(MatrixFamily::GevreyMatrix { xs }) => {
                assert_eq!(xs, vec![0.5, 1.0, 2.0, 4.0]);
            }
            _ => panic!("wrong descriptor"),
        }
    }
}
