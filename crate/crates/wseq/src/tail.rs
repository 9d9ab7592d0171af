//! Tail-window surrogates for liminf/limsup and for "bounded tail" decisions.
//!
//! Finite data cannot prove a limit. Every rule here is deterministic,
//! recorded in the owning report, and falsifiable by enlarging the horizon:
//! estimates come from a trailing window, brackets from a nested window, and
//! divergence from monotone growth across three dyadic window reductions
//! (optionally cross-checked at an extended horizon by the callers).

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailMode {
    LimInf,
    LimSup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Divergence {
    PlusInfinity,
    MinusInfinity,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailEstimate {
    pub estimate: f64,
    /// [lo, hi] from the trailing 25% and 12.5% windows.
    pub bracket: [f64; 2],
    pub divergence: Option<Divergence>,
    /// Bracket halves disagree beyond tolerance; treat as inconclusive.
    pub inconsistent: bool,
    pub samples_used: usize,
}

fn window_min(w: &[(f64, f64)]) -> f64 {
    w.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)
}

fn window_max(w: &[(f64, f64)]) -> f64 {
    w.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
}

/// Estimate a liminf or limsup from samples ordered by strictly increasing
/// argument.
pub fn tail_limit(samples: &[(f64, f64)], mode: TailMode, cfg: &Config) -> Result<TailEstimate> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples { got: samples.len(), need: MIN_SAMPLES });
    }
    debug_assert!(samples.windows(2).all(|w| w[1].0 > w[0].0));
    let n = samples.len();
    let w1 = &samples[n - (n as f64 * cfg.tail_window).ceil() as usize..];
    let w2 = &samples[n - (n as f64 * cfg.tail_window / 2.0).ceil() as usize..];
    let w3 = &samples[n - (n as f64 * cfg.tail_window / 4.0).ceil() as usize..];

    let (e1, e2) = match mode {
        TailMode::LimInf => (window_min(w1), window_min(w2)),
        TailMode::LimSup => (window_max(w1), window_max(w2)),
    };

    // Divergence: the dyadic window reductions must each move the window
    // floor (ceiling) by a visible margin.
    let delta = cfg.divergence_rel * (1.0 + e1.abs());
    let mins = [window_min(w1), window_min(w2), window_min(w3)];
    let maxs = [window_max(w1), window_max(w2), window_max(w3)];
    let divergence = if mins[1] >= mins[0] + delta && mins[2] >= mins[1] + delta {
        Some(Divergence::PlusInfinity)
    } else if maxs[1] <= maxs[0] - delta && maxs[2] <= maxs[1] - delta {
        Some(Divergence::MinusInfinity)
    } else {
        None
    };

    let inconsistent =
        divergence.is_none() && (e1 - e2).abs() > cfg.bracket_rel * (1.0 + e1.abs());

    Ok(TailEstimate {
        estimate: e1,
        bracket: [e1.min(e2), e1.max(e2)],
        divergence,
        inconsistent,
        samples_used: n,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundedOutcome {
    pub bounded: bool,
    /// Supremum estimate over the full sample (the witness for sup-style
    /// relations).
    pub sup: f64,
    pub trail_max: f64,
    pub early_max: f64,
    /// Trailing max of the extended-horizon pass, when one was available.
    pub ext_max: Option<f64>,
    /// No extension was possible; the verdict is capped at the base horizon.
    pub capped: bool,
}

/// Decide `sup over the tail < +infinity` for an expression sampled on an
/// increasing argument grid.
///
/// Bounded iff the trailing-window max does not exceed the early max beyond
/// tolerance, and (when an extended-horizon sample is supplied) the extended
/// trailing max agrees with the base one.
pub fn bounded_tail(
    base: &[(f64, f64)],
    ext: Option<&[(f64, f64)]>,
    cfg: &Config,
) -> Result<BoundedOutcome> {
    if base.len() < 16 {
        return Err(Error::TooFewSamples { got: base.len(), need: 16 });
    }
    let n = base.len();
    let cut = n - (n as f64 * cfg.tail_window).ceil() as usize;
    let early_max = window_max(&base[..cut]);
    let trail_max = window_max(&base[cut..]);
    let span = window_max(base) - window_min(base);
    let tol = (cfg.bounded_span_tol * span).max(cfg.bounded_rel_tol * (1.0 + trail_max.abs()));

    let mut bounded = trail_max <= early_max + tol;
    let mut ext_max = None;
    let mut capped = true;
    if let Some(e) = ext {
        capped = false;
        if e.len() >= 4 {
            let m = e.len();
            let ecut = m - (m as f64 * cfg.tail_window).ceil() as usize;
            let em = window_max(&e[ecut..]);
            ext_max = Some(em);
            bounded = bounded && em <= trail_max + tol;
        }
    }
    Ok(BoundedOutcome {
        bounded,
        sup: window_max(base).max(ext_max.unwrap_or(f64::NEG_INFINITY)),
        trail_max,
        early_max,
        ext_max,
        capped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config::default()
    }

    fn sample<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        crate::numeric::geomspace(lo, hi, n)
            .unwrap()
            .into_iter()
            .map(|t| (t, f(t)))
            .collect()
    }

    #[test]
    fn constant_sequence_both_modes() {
        let s = sample(|_| 3.5, 1.0, 1e8, 64);
        for mode in [TailMode::LimInf, TailMode::LimSup] {
            let e = tail_limit(&s, mode, &cfg()).unwrap();
            assert_eq!(e.estimate, 3.5);
            assert_eq!(e.bracket, [3.5, 3.5]);
            assert!(e.divergence.is_none());
            assert!(!e.inconsistent);
        }
    }

    #[test]
    fn monotone_convergence_from_above() {
        let s = sample(|t| 1.0 + 1.0 / t, 1.0, 1e9, 128);
        let e = tail_limit(&s, TailMode::LimSup, &cfg()).unwrap();
        assert!((e.estimate - 1.0).abs() < 1e-4);
        assert!(e.divergence.is_none());
    }

    #[test]
    fn log_growth_is_diagnosed_divergent() {
        let s = sample(|t| t.ln(), 1.0, 1e9, 128);
        let e = tail_limit(&s, TailMode::LimSup, &cfg()).unwrap();
        assert_eq!(e.divergence, Some(Divergence::PlusInfinity));
    }

    #[test]
    fn negative_drift_is_minus_infinity() {
        let s = sample(|t| -t.ln(), 1.0, 1e9, 128);
        let e = tail_limit(&s, TailMode::LimInf, &cfg()).unwrap();
        assert_eq!(e.divergence, Some(Divergence::MinusInfinity));
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let s = sample(|t| t, 1.0, 10.0, 8);
        assert!(matches!(
            tail_limit(&s, TailMode::LimSup, &cfg()),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn bounded_ratio_increasing_to_limit() {
        // omega(2t)/(omega(t)+1) for omega = t tends to 2 from below.
        let s = sample(|t| 2.0 * t / (t + 1.0), 1.0, 1e8, 256);
        let ext = sample(|t| 2.0 * t / (t + 1.0), 1.0, 1e16, 256);
        let out = bounded_tail(&s, Some(&ext), &cfg()).unwrap();
        assert!(out.bounded);
        assert!(!out.capped);
    }

    #[test]
    fn log_growth_is_unbounded() {
        let s = sample(|t| t.ln(), 1.0, 1e8, 256);
        let ext = sample(|t| t.ln(), 1.0, 1e16, 256);
        let out = bounded_tail(&s, Some(&ext), &cfg()).unwrap();
        assert!(!out.bounded);
    }
}
