//! Deterministic report emission. Doubles are printed with 17 significant
//! digits in scientific notation; field order follows struct declaration
//! order, so identical configurations produce byte-identical output.

use serde::Serialize;
use serde_json::Value;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::families::{Generator, SequenceFamily};
use crate::matrix::{IndexDomain, WeightMatrix};
use crate::numeric::fmt17;
use crate::sequence::WeightSequence;

fn emit_value(v: &Value, out: &mut String, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else {
                out.push_str(&fmt17(n.as_f64().unwrap_or(0.0)));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string encodes"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            let scalar = items.iter().all(|i| !matches!(i, Value::Array(_) | Value::Object(_)));
            if scalar {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    emit_value(item, out, indent);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (k, item) in items.iter().enumerate() {
                    out.push_str(&"  ".repeat(indent + 1));
                    emit_value(item, out, indent + 1);
                    if k + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&"  ".repeat(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("key encodes"));
                out.push_str(": ");
                emit_value(item, out, indent + 1);
                if k + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
    }
}

/// Serialize anything into the fixed-format JSON used by the CLI and tests.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)
        .map_err(|e| Error::Malformed(format!("serialization failed: {e}")))?;
    let mut out = String::new();
    emit_value(&v, &mut out, 0);
    out.push('\n');
    Ok(out)
}

/// Two-column CSV for tabular payloads.
pub fn to_csv(header: (&str, &str), rows: &[(f64, f64)]) -> String {
    let mut out = format!("{},{}\n", header.0, header.1);
    for (a, b) in rows {
        out.push_str(&fmt17(*a));
        out.push(',');
        out.push_str(&fmt17(*b));
        out.push('\n');
    }
    out
}

/// Interchange schema of a tabulated sequence.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct SequenceJson {
    pub family: Option<String>,
    pub params: serde_json::Map<String, Value>,
    #[serde(rename = "J")]
    pub len: usize,
    pub log_values: Vec<f64>,
}

fn family_fields(f: &SequenceFamily) -> (String, serde_json::Map<String, Value>) {
    let mut params = serde_json::Map::new();
    let name = match f {
        SequenceFamily::Gevrey { s } => {
            params.insert("s".into(), (*s).into());
            "gevrey"
        }
        SequenceFamily::Qgevrey { q } => {
            params.insert("q".into(), (*q).into());
            "qgevrey"
        }
        SequenceFamily::GeomShift { c, of } => {
            params.insert("c".into(), (*c).into());
            let (inner, inner_params) = family_fields(of);
            params.insert("of".into(), inner.into());
            for (k, v) in inner_params {
                params.insert(k, v);
            }
            "geom-shift"
        }
        SequenceFamily::SlowVar => {
            params.insert("kind".into(), "slowvar".into());
            "from-mu"
        }
    };
    (name.to_string(), params)
}

pub fn sequence_to_json(seq: &WeightSequence) -> SequenceJson {
    let (family, params) = match seq.generator() {
        Some(Generator::Family(f)) => {
            let (name, params) = family_fields(f);
            (Some(name), params)
        }
        Some(g) => (Some(g.id()), serde_json::Map::new()),
        None => (None, serde_json::Map::new()),
    };
    SequenceJson {
        family,
        params,
        len: seq.len(),
        log_values: seq.log_values().to_vec(),
    }
}

pub fn sequence_from_json(j: &SequenceJson) -> Result<WeightSequence> {
    if j.log_values.len() != j.len {
        return Err(Error::Malformed(format!(
            "J = {} does not match {} log values",
            j.len,
            j.log_values.len()
        )));
    }
    let mut seq = WeightSequence::from_log_values(j.log_values.clone())?;
    if let Some(name) = &j.family {
        let spec = rebuild_spec(name, &j.params);
        if let Ok(crate::families::FamilyDescriptor::Sequence(f)) =
            crate::families::parse_family(&spec)
        {
            seq = seq.with_generator(Generator::Family(f));
        }
    }
    Ok(seq)
}

fn rebuild_spec(name: &str, params: &serde_json::Map<String, Value>) -> String {
    let mut spec = name.to_string();
    let mut first = true;
    for (k, v) in params {
        spec.push(if first { ':' } else { ',' });
        first = false;
        let vs = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            other => other.to_string(),
        };
        spec.push_str(&format!("{k}={vs}"));
    }
    spec
}

/// Interchange schema of a weight matrix.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct MatrixJson {
    pub indices: Vec<f64>,
    pub sequences: Vec<SequenceJson>,
}

pub fn matrix_to_json(m: &WeightMatrix) -> MatrixJson {
    MatrixJson {
        indices: m.indices(),
        sequences: m.entries().iter().map(|(_, s)| sequence_to_json(s)).collect(),
    }
}

pub fn matrix_from_json(j: &MatrixJson, _cfg: &Config) -> Result<WeightMatrix> {
    if j.indices.len() != j.sequences.len() {
        return Err(Error::Malformed("indices and sequences disagree in length".into()));
    }
    let entries = j
        .indices
        .iter()
        .zip(&j.sequences)
        .map(|(x, s)| sequence_from_json(s).map(|seq| (*x, seq)))
        .collect::<Result<Vec<_>>>()?;
    WeightMatrix::new(entries, None, IndexDomain::Sampled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::SequenceFamily as SF;

    #[test]
    fn json_floats_use_seventeen_digits() {
        #[derive(Serialize)]
        struct S {
            x: f64,
            n: usize,
        }
        let s = to_json(&S { x: 0.1, n: 3 }).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("\"n\": 3"), "{s}");
    }

    #[test]
    fn emission_is_deterministic() {
        let cfg = Config::default();
        let a = to_json(&cfg).unwrap();
        let b = to_json(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sequence_roundtrip_through_interchange() {
        let cfg = Config::default();
        let seq = WeightSequence::from_family(SF::Gevrey { s: 2.0 }, 32, &cfg).unwrap();
        let j = sequence_to_json(&seq);
        assert_eq!(j.family.as_deref(), Some("gevrey"));
        let text = to_json(&j).unwrap();
        let parsed: SequenceJson = serde_json::from_str(&text).unwrap();
        let back = sequence_from_json(&parsed).unwrap();
        assert_eq!(back.len(), 32);
        assert!(back.generator().is_some(), "generator should be rebuilt");
        for i in 0..32 {
            assert_eq!(back.log_m(i), seq.log_m(i));
        }
    }

    #[test]
    fn csv_rows() {
        let csv = to_csv(("t", "omega"), &[(1.0, 0.0), (2.0, 0.5)]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,omega"));
        assert!(lines.next().unwrap().starts_with("1.0000000000000000e0,"));
    }
}
