use serde::{Deserialize, Serialize};

/// Every knob that can move a verdict lives here, so each report can embed the
/// exact configuration it was produced under.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Config {
    /// Default tabulation length (number of entries, indices 0..J-1).
    pub default_len: usize,
    /// Hard cap on generator-driven tabulation growth.
    pub max_tabulation: usize,
    /// Points per geometric grid for function-side scans.
    pub t_points: usize,
    /// Integer sample count for sequence-side tail scans.
    pub j_points: usize,
    /// Largest integer argument of sequence-side tail scans (base pass).
    pub j_tail_base: usize,
    /// Largest integer argument of the extended pass (0-diagnosis consistency).
    pub j_tail_ext: usize,

    /// Trailing window fraction for tail estimates.
    pub tail_window: f64,
    /// Relative floor added to the bounded-tail tolerance.
    pub bounded_rel_tol: f64,
    /// Span multiplier of the bounded-tail tolerance.
    pub bounded_span_tol: f64,
    /// Window-growth factor that flags tail divergence.
    pub divergence_rel: f64,
    /// Bracket disagreement (relative) above which an estimate is inconclusive.
    pub bracket_rel: f64,

    /// q / K parameter grid exponents: {2^(k/4) : k = 1..=q_grid_steps}.
    pub q_grid_steps: usize,
    /// Constants r and C are sampled from this grid.
    pub rc_grid: Vec<f64>,
    /// Integer L range for root-ratio conditions.
    pub l_int_max: usize,
    /// H grid for doubling-type conditions: {2^k : k = 1..=h_grid_steps}.
    pub h_grid_steps: usize,
    /// Associated-matrix parameter grid: {2^k : k in l_grid_range}.
    pub l_grid_min_exp: i32,
    pub l_grid_max_exp: i32,
    /// Matrix witness extension factors (generator-backed index domains).
    pub witness_extension: Vec<f64>,

    /// Root-divergence threshold for the LC membership heuristic.
    pub lc_root_min: f64,
    /// log-horizon multiplier of the extended pass for index estimators.
    pub horizon_ext_factor: f64,
    /// Exponent shrink ratio under horizon extension that marks an index 0.
    pub zero_shrink: f64,
    /// Positive small-q intercept that marks a supremum index infinite.
    pub infinity_intercept: f64,
    /// o-smallness threshold for the log t = o(omega) check.
    pub o_small_threshold: f64,
    /// Required decay factor of the o-check under horizon extension.
    pub o_small_decay: f64,

    /// Log-domain tolerance of roundtrip identities.
    pub roundtrip_tol: f64,
    /// Allowed negative slack in exact log-domain inequalities.
    pub ineq_slack: f64,
    /// Midpoint-convexity tolerance multiplier.
    pub convexity_tol: f64,
    /// Acceptance band for reciprocity products.
    pub reciprocity_band: (f64, f64),
}

impl Default for Config {
    fn default() -> Self {
        Config {
            default_len: 256,
            max_tabulation: 1 << 21,
            t_points: 512,
            j_points: 64,
            j_tail_base: 1 << 10,
            j_tail_ext: 1 << 17,
            tail_window: 0.25,
            bounded_rel_tol: 1e-3,
            bounded_span_tol: 1e-6,
            divergence_rel: 0.02,
            bracket_rel: 0.25,
            q_grid_steps: 24,
            rc_grid: vec![1.5, 2.0, 4.0],
            l_int_max: 8,
            h_grid_steps: 20,
            l_grid_min_exp: -4,
            l_grid_max_exp: 4,
            witness_extension: vec![2.0, 4.0, 8.0, 16.0],
            lc_root_min: 4.0,
            horizon_ext_factor: 1.7,
            zero_shrink: 0.85,
            infinity_intercept: 0.2,
            o_small_threshold: 0.05,
            o_small_decay: 0.6,
            roundtrip_tol: 1e-6,
            ineq_slack: 1e-9,
            convexity_tol: 1e-9,
            reciprocity_band: (0.9, 1.1),
        }
    }
}

impl Config {
    /// q and K parameter grid, geometric in the exponent.
    pub fn qk_grid(&self) -> Vec<f64> {
        (1..=self.q_grid_steps)
            .map(|k| (k as f64 / 4.0).exp2())
            .collect()
    }

    /// H grid for doubling-type conditions.
    pub fn h_grid(&self) -> Vec<f64> {
        (1..=self.h_grid_steps as i32).map(|k| (k as f64).exp2()).collect()
    }

    /// Associated-matrix index grid.
    pub fn l_grid(&self) -> Vec<f64> {
        (self.l_grid_min_exp..=self.l_grid_max_exp)
            .map(|k| (k as f64).exp2())
            .collect()
    }

    /// Integer L grid for root-ratio conditions.
    pub fn l_int_grid(&self) -> Vec<usize> {
        (1..=self.l_int_max).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_have_expected_shape() {
        let cfg = Config::default();
        let qk = cfg.qk_grid();
        assert_eq!(qk.len(), 24);
        assert!((qk[0] - 2f64.powf(0.25)).abs() < 1e-12);
        assert!((qk[23] - 64.0).abs() < 1e-9);
        assert_eq!(cfg.l_grid().len(), 9);
        assert_eq!(cfg.l_grid()[0], 0.0625);
        assert_eq!(cfg.h_grid()[0], 2.0);
    }
}
