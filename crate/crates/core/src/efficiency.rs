//! Exact acceptance probability of the rejection sampler and its tabulation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{solve_alphas, CorrelatedBetaTarget, DirichletAlphas};
use crate::rng::RngStream;
use crate::samplers::johnk_trial;
use crate::special::ln_gamma;

/// Default row values (`c1 = c3`) of the published efficiency tables.
pub const DEFAULT_C1_VALUES: [f64; 8] = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0];

/// Default column values (`c2`) of the published efficiency tables.
pub const DEFAULT_C2_VALUES: [f64; 8] = [0.23, 0.25, 0.5, 0.75, 1.0, 2.0, 3.0, 5.0];

/// Acceptance probability `P(S <= 1)` of one rejection trial:
///
/// ```text
/// eps = prod_i a_i Gamma(a_i) / (gamma Gamma(gamma)),   gamma = sum_i a_i
/// ```
///
/// computed in the log domain as `exp(sum_i lnGamma(a_i + 1) -
/// lnGamma(gamma + 1))`, so extreme shapes underflow gracefully to `0.0`
/// instead of poisoning the product.
pub fn johnk_efficiency(alphas: &DirichletAlphas) -> f64 {
    let mut ln_eps = -ln_gamma(alphas.gamma_sum() + 1.0);
    for a in alphas.as_array() {
        ln_eps += ln_gamma(a + 1.0);
    }
    ln_eps.exp()
}

/// Matrix of acceptance probabilities over `c1` rows and `c2` columns at a
/// fixed correlation, in the `c1 = c3` scenario (both marginals share the
/// shape pair `(c1, c2)`), which is feasible for every `r` in `[0, 1)`.
#[derive(Debug, Clone, Serialize)]
pub struct EfficiencyGrid {
    pub r: f64,
    /// The scenario this grid tabulates.
    pub constraint: &'static str,
    pub c1_values: Vec<f64>,
    pub c2_values: Vec<f64>,
    /// Full-precision values, row-major: `cells[i][j]` belongs to
    /// `(c1_values[i], c2_values[j])`.
    pub cells: Vec<Vec<f64>>,
}

/// Rounds to 3 decimals with ties away from zero, the convention used when
/// rendering grids.
pub fn round_half_up_3dp(x: f64) -> f64 {
    (x * 1000.0 + 0.5).floor() / 1000.0
}

/// Computes the efficiency grid for the `c1 = c3` scenario.
pub fn efficiency_grid(r: f64, c1_values: &[f64], c2_values: &[f64]) -> Result<EfficiencyGrid> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidInput(format!("r = {r} must lie in [0, 1)")));
    }
    if c1_values.is_empty() || c2_values.is_empty() {
        return Err(Error::InvalidInput("value lists must be non-empty".into()));
    }
    for &v in c1_values.iter().chain(c2_values) {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "grid value {v} must be a positive finite number"
            )));
        }
    }
    let cells = c1_values
        .iter()
        .map(|&c1| {
            c2_values
                .iter()
                .map(|&c2| {
                    let target = CorrelatedBetaTarget::new(c1, c2, c1, r)
                        .expect("validated grid values form a target");
                    let alphas =
                        solve_alphas(&target).expect("c1 = c3 targets are always feasible");
                    johnk_efficiency(&alphas)
                })
                .collect()
        })
        .collect();
    Ok(EfficiencyGrid {
        r,
        constraint: "c1=c3",
        c1_values: c1_values.to_vec(),
        c2_values: c2_values.to_vec(),
        cells,
    })
}

/// Empirical acceptance rate with a 3-sigma binomial half-width.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EfficiencyEstimate {
    pub rate: f64,
    /// `3 * sqrt(rate (1 - rate) / attempts)`.
    pub half_width: f64,
    pub attempts: u64,
    pub accepts: u64,
}

/// Runs `attempts` rejection trials and reports the observed acceptance
/// fraction.
pub fn empirical_efficiency(
    stream: &mut RngStream,
    alphas: &DirichletAlphas,
    attempts: u64,
) -> EfficiencyEstimate {
    assert!(attempts >= 1, "attempts must be at least 1");
    let mut accepts = 0u64;
    for _ in 0..attempts {
        if johnk_trial(stream, alphas).is_some() {
            accepts += 1;
        }
    }
    let rate = accepts as f64 / attempts as f64;
    EfficiencyEstimate {
        rate,
        half_width: 3.0 * (rate * (1.0 - rate) / attempts as f64).sqrt(),
        attempts,
        accepts,
    }
}
