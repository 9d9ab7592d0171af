//! Outcome record for quantified growth conditions.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl Verdict {
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (True, True) => True,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Inconclusive => None,
        }
    }
}

/// Witness for one universally quantified index: which `y` worked for this
/// `x`, and the constants that came out of the search.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    /// Named constants (C, D, L, q, K, H, r, sup, ...), insertion-ordered.
    pub constants: Vec<(String, f64)>,
}

impl Witness {
    pub fn for_x(x: f64) -> Self {
        Witness { x: Some(x), ..Default::default() }
    }

    pub fn with_y(mut self, y: f64) -> Self {
        self.y = Some(y);
        self
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.constants.push((name.to_string(), value));
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Diagnostics {
    /// Decisive tail samples (argument, value), truncated for reports.
    pub tail_samples: Vec<(f64, f64)>,
    pub notes: Vec<String>,
}

/// Grid provenance: a verdict is meaningless without it.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct GridMeta {
    pub tabulation_len: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_log_range: Option<[f64; 2]>,
    pub param_grids: Vec<(String, Vec<f64>)>,
    /// Witness candidate indices actually offered to the search.
    pub candidates: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub condition: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub diagnostics: Diagnostics,
    pub grid: GridMeta,
}

impl ConditionVerdict {
    pub fn new(condition: &str, verdict: Verdict) -> Self {
        ConditionVerdict {
            condition: condition.to_string(),
            verdict,
            witnesses: Vec::new(),
            diagnostics: Diagnostics::default(),
            grid: GridMeta::default(),
        }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witnesses.push(w);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.diagnostics.notes.push(note.into());
        self
    }

    pub fn with_tail_samples(mut self, samples: &[(f64, f64)]) -> Self {
        // Keep the last handful; full grids live in the grid metadata.
        let keep = samples.len().min(8);
        self.diagnostics.tail_samples = samples[samples.len() - keep..].to_vec();
        self
    }

    pub fn with_len(mut self, len: usize) -> Self {
        self.grid.tabulation_len = len;
        self
    }

    pub fn with_param_grid(mut self, name: &str, grid: &[f64]) -> Self {
        self.grid.param_grids.push((name.to_string(), grid.to_vec()));
        self
    }

    pub fn with_candidates(mut self, c: &[f64]) -> Self {
        self.grid.candidates = c.to_vec();
        self
    }

    pub fn with_t_log_range(mut self, lo: f64, hi: f64) -> Self {
        self.grid.t_log_range = Some([lo, hi]);
        self
    }

    pub fn is_true(&self) -> bool {
        self.verdict == Verdict::True
    }
}
