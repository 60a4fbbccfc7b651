//! Statistical verification of generated batches against the target law:
//! moment bands, correlation band, and marginal goodness of fit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::CorrelatedBetaTarget;
use crate::rng::RngStream;
use crate::samplers::{sample_correlated_beta, Method};
use crate::special::regularized_incomplete_beta;

/// Asymptotic one-sample Kolmogorov-Smirnov critical value at significance
/// ~0.01, scaled by `1/sqrt(n)`.
const KS_CRITICAL: f64 = 1.63;

/// The acceptance bands a report was judged against. All are absolute
/// half-widths around the expected values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceSpec {
    /// 4 standard errors of the marginal means.
    pub mean_band_y1: f64,
    pub mean_band_y2: f64,
    /// 4 standard errors of the marginal sample variances.
    pub var_band_y1: f64,
    pub var_band_y2: f64,
    /// `max(0.01, 4 (1 - r^2) / sqrt(n))`.
    pub corr_band: f64,
    /// `1.63 / sqrt(n)` (KS test, significance about 0.01).
    pub ks_threshold: f64,
}

/// Empirical statistics of one batch next to their closed-form expectations,
/// with a pass verdict.
///
/// `pass` is true iff every statistic lies inside its band in
/// `tolerance_spec`. Serializes with exactly these field names.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n: u64,
    pub mean_y1: f64,
    pub mean_y2: f64,
    pub var_y1: f64,
    pub var_y2: f64,
    pub corr: f64,
    pub expected_mean_y1: f64,
    pub expected_mean_y2: f64,
    pub expected_var_y1: f64,
    pub expected_var_y2: f64,
    pub expected_corr: f64,
    pub ks_y1: f64,
    pub ks_y2: f64,
    pub pass: bool,
    pub tolerance_spec: ToleranceSpec,
}

/// One-sample Kolmogorov-Smirnov statistic of `values` against `cdf`.
/// Sorts the slice in place.
pub fn ks_statistic<F: Fn(f64) -> f64>(values: &mut [f64], cdf: F) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in sample"));
    let n = values.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in values.iter().enumerate() {
        let f = cdf(x);
        sup = sup
            .max((f - i as f64 / n).abs())
            .max((f - (i + 1) as f64 / n).abs());
    }
    sup
}

fn beta_mean(a: f64, b: f64) -> f64 {
    a / (a + b)
}

fn beta_var(a: f64, b: f64) -> f64 {
    let s = a + b;
    a * b / (s * s * (s + 1.0))
}

/// Fourth central moment of `Be(a, b)` from the raw moments
/// `m_k = prod_{i<k} (a + i)/(a + b + i)`.
fn beta_mu4(a: f64, b: f64) -> f64 {
    let s = a + b;
    let m1 = a / s;
    let m2 = m1 * (a + 1.0) / (s + 1.0);
    let m3 = m2 * (a + 2.0) / (s + 2.0);
    let m4 = m3 * (a + 3.0) / (s + 3.0);
    m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1
}

/// Draws `n >= 1000` pairs and checks them against the target: marginal
/// means and variances within 4 standard errors, Pearson correlation within
/// `max(0.01, 4 (1 - r^2)/sqrt(n))`, and KS statistics of each margin
/// against its beta CDF below `1.63/sqrt(n)`.
///
/// The expected values are pure functions of the target; with a fixed stream
/// the whole report is deterministic.
pub fn validate_sampler(
    stream: &mut RngStream,
    target: &CorrelatedBetaTarget,
    n: u64,
    method: Method,
) -> Result<ValidationReport> {
    if n < 1000 {
        return Err(Error::InvalidInput(format!(
            "validation needs n >= 1000, got {n}"
        )));
    }
    let batch = sample_correlated_beta(stream, target, n, method)?;
    let nf = n as f64;

    let (c1, c2, c3) = (target.c1(), target.c2(), target.c3());
    let c4 = target.c4().expect("feasible target has positive c4");
    let expected_mean_y1 = beta_mean(c1, c2);
    let expected_mean_y2 = beta_mean(c3, c4);
    let expected_var_y1 = beta_var(c1, c2);
    let expected_var_y2 = beta_var(c3, c4);
    let expected_corr = target.r();

    let mean_y1 = batch.pairs.iter().map(|p| p.y1).sum::<f64>() / nf;
    let mean_y2 = batch.pairs.iter().map(|p| p.y2).sum::<f64>() / nf;
    let (mut s11, mut s22, mut s12) = (0.0, 0.0, 0.0);
    for p in &batch.pairs {
        let d1 = p.y1 - mean_y1;
        let d2 = p.y2 - mean_y2;
        s11 += d1 * d1;
        s22 += d2 * d2;
        s12 += d1 * d2;
    }
    let var_y1 = s11 / (nf - 1.0);
    let var_y2 = s22 / (nf - 1.0);
    let corr = s12 / (s11 * s22).sqrt();

    let mut y1: Vec<f64> = batch.pairs.iter().map(|p| p.y1).collect();
    let mut y2: Vec<f64> = batch.pairs.iter().map(|p| p.y2).collect();
    let ks_y1 = ks_statistic(&mut y1, |x| {
        regularized_incomplete_beta(x, c1, c2).expect("y1 in (0,1) and shapes positive")
    });
    let ks_y2 = ks_statistic(&mut y2, |x| {
        regularized_incomplete_beta(x, c3, c4).expect("y2 in (0,1) and shapes positive")
    });

    let tolerance_spec = ToleranceSpec {
        mean_band_y1: 4.0 * (expected_var_y1 / nf).sqrt(),
        mean_band_y2: 4.0 * (expected_var_y2 / nf).sqrt(),
        var_band_y1: 4.0 * ((beta_mu4(c1, c2) - expected_var_y1 * expected_var_y1) / nf).sqrt(),
        var_band_y2: 4.0 * ((beta_mu4(c3, c4) - expected_var_y2 * expected_var_y2) / nf).sqrt(),
        corr_band: (4.0 * (1.0 - expected_corr * expected_corr) / nf.sqrt()).max(0.01),
        ks_threshold: KS_CRITICAL / nf.sqrt(),
    };

    let pass = (mean_y1 - expected_mean_y1).abs() <= tolerance_spec.mean_band_y1
        && (mean_y2 - expected_mean_y2).abs() <= tolerance_spec.mean_band_y2
        && (var_y1 - expected_var_y1).abs() <= tolerance_spec.var_band_y1
        && (var_y2 - expected_var_y2).abs() <= tolerance_spec.var_band_y2
        && (corr - expected_corr).abs() <= tolerance_spec.corr_band
        && ks_y1 <= tolerance_spec.ks_threshold
        && ks_y2 <= tolerance_spec.ks_threshold;

    Ok(ValidationReport {
        n,
        mean_y1,
        mean_y2,
        var_y1,
        var_y2,
        corr,
        expected_mean_y1,
        expected_mean_y2,
        expected_var_y1,
        expected_var_y2,
        expected_corr,
        ks_y1,
        ks_y2,
        pass,
        tolerance_spec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn target(c1: f64, c2: f64, c3: f64, r: f64) -> CorrelatedBetaTarget {
        CorrelatedBetaTarget::new(c1, c2, c3, r).unwrap()
    }

    #[test]
    fn uniform_marginals_expected_values() {
        let mut s = RngStream::new(61, 0);
        let rep =
            validate_sampler(&mut s, &target(1.0, 1.0, 1.0, 0.5), 10_000, Method::Gamma).unwrap();
        assert_eq!(rep.expected_mean_y1, 0.5);
        assert_eq!(rep.expected_mean_y2, 0.5);
        assert_eq!(rep.expected_var_y1, 1.0 / 12.0);
        assert_eq!(rep.expected_var_y2, 1.0 / 12.0);
        assert_eq!(rep.expected_corr, 0.5);
    }

    #[test]
    fn gamma_method_passes_uniform_target() {
        let mut s = RngStream::new(62, 0);
        let rep =
            validate_sampler(&mut s, &target(1.0, 1.0, 1.0, 0.5), 100_000, Method::Gamma).unwrap();
        assert!(rep.pass, "report: {rep:?}");
    }

    #[test]
    fn johnk_method_passes_small_shape_target() {
        let mut s = RngStream::new(63, 0);
        let rep = validate_sampler(
            &mut s,
            &target(0.25, 0.25, 0.25, 0.75),
            20_000,
            Method::Johnk,
        )
        .unwrap();
        assert!(rep.pass, "report: {rep:?}");
        assert_eq!(rep.expected_corr, 0.75);
    }

    #[test]
    fn report_is_deterministic() {
        let t = target(2.0, 3.0, 1.0, 0.3);
        let mut s1 = RngStream::new(64, 2);
        let mut s2 = RngStream::new(64, 2);
        let r1 = validate_sampler(&mut s1, &t, 5_000, Method::Gamma).unwrap();
        let r2 = validate_sampler(&mut s2, &t, 5_000, Method::Gamma).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn small_sample_count_is_rejected() {
        let mut s = RngStream::new(65, 0);
        assert!(matches!(
            validate_sampler(&mut s, &target(1.0, 1.0, 1.0, 0.5), 999, Method::Gamma),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn wrong_marginal_fails_ks() {
        // Power check: y1 from Be(1,1) tested against Be(2,1) must fail
        // decisively (the CDF gap is 0.25 at x = 0.5).
        let t = target(1.0, 1.0, 1.0, 0.5);
        let mut s = RngStream::new(66, 0);
        let batch = sample_correlated_beta(&mut s, &t, 100_000, Method::Gamma).unwrap();
        let mut y1: Vec<f64> = batch.pairs.iter().map(|p| p.y1).collect();
        let ks = ks_statistic(&mut y1, |x| {
            regularized_incomplete_beta(x, 2.0, 1.0).unwrap()
        });
        assert!(ks > KS_CRITICAL / (100_000f64).sqrt() * 10.0, "ks {ks}");
    }

    #[test]
    fn ks_statistic_of_exact_grid_is_small() {
        // Values at the uniform quantile midpoints give the minimal KS
        // statistic 1/(2n).
        let n = 1000;
        let mut values: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let ks = ks_statistic(&mut values, |x| x);
        assert!((ks - 0.5 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn beta_mu4_uniform_case() {
        assert!((beta_mu4(1.0, 1.0) - 1.0 / 80.0).abs() < 1e-15);
    }

    #[test]
    fn report_serializes_with_exact_field_names() {
        let mut s = RngStream::new(67, 0);
        let rep =
            validate_sampler(&mut s, &target(1.0, 1.0, 1.0, 0.5), 1000, Method::Gamma).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        let obj = json.as_object().unwrap();
        for key in [
            "n",
            "mean_y1",
            "mean_y2",
            "var_y1",
            "var_y2",
            "corr",
            "expected_mean_y1",
            "expected_mean_y2",
            "expected_var_y1",
            "expected_var_y2",
            "expected_corr",
            "ks_y1",
            "ks_y2",
            "pass",
            "tolerance_spec",
        ] {
            assert!(obj.contains_key(key), "missing field {key}");
        }
        assert_eq!(obj.len(), 15);
    }
}
