//! Self-contained special functions: log-gamma and the regularized
//! incomplete beta function.
//!
//! Both are implemented in-repo so the numeric error budget is testable
//! against frozen high-precision references rather than inherited from an
//! external dependency.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

/// Lanczos parameter `r` of the approximation from Pugh, "An Analysis of the
/// Lanczos Gamma Approximation" (2004), p. 116.
const LANCZOS_R: f64 = 10.900511;

/// Series coefficients paired with `LANCZOS_R`; relative accuracy is near
/// machine epsilon over the positive axis.
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

const LN_PI: f64 = 1.144_729_885_849_400_2;
/// `ln(2 * sqrt(e / pi))`.
const LN_2_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

/// Maximum iterations of the incomplete-beta continued fraction.
const BETA_CF_MAX_ITER: usize = 300;

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Absolute error is below `1e-12` on `[0.05, 50]` (verified against a
/// 50-digit reference in the tests; the observed maximum is about `4e-13`).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "log_gamma requires x > 0, got {x}"
        )));
    }
    Ok(ln_gamma(x))
}

/// Unchecked kernel behind [`log_gamma`]; callers guarantee `x > 0`.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the series argument away from the poles.
        let mut s = LANCZOS_DK[0];
        for (i, dk) in LANCZOS_DK.iter().enumerate().skip(1) {
            s += dk / (i as f64 - x);
        }
        LN_PI
            - (std::f64::consts::PI * x).sin().ln()
            - s.ln()
            - LN_2_SQRT_E_OVER_PI
            - (0.5 - x) * ((0.5 - x + LANCZOS_R) / std::f64::consts::E).ln()
    } else {
        let mut s = LANCZOS_DK[0];
        for (i, dk) in LANCZOS_DK.iter().enumerate().skip(1) {
            s += dk / (x + i as f64 - 1.0);
        }
        s.ln()
            + LN_2_SQRT_E_OVER_PI
            + (x - 0.5) * ((x - 0.5 + LANCZOS_R) / std::f64::consts::E).ln()
    }
}

/// `ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b)`.
pub(crate) fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Regularized incomplete beta function `I_x(a, b)` for `x` in `[0, 1]`,
/// `a > 0`, `b > 0` — the CDF of `Be(a, b)` at `x`.
///
/// Evaluated by the continued fraction of the incomplete beta integral with
/// the symmetry reduction `I_x(a, b) = 1 - I_{1-x}(b, a)` applied when `x`
/// exceeds `(a + 1)/(a + b + 2)`, so the fraction always converges quickly.
/// Absolute error is below `1e-10` over the domain.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || a <= 0.0 || !b.is_finite() || b <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "incomplete beta requires a, b > 0, got a = {a}, b = {b}"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidInput(format!(
            "incomplete beta requires 0 <= x <= 1, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        Ok(1.0 - beta_cf(1.0 - x, b, a)?)
    } else {
        beta_cf(x, a, b)
    }
}

/// Continued-fraction evaluation (modified Lentz) of `I_x(a, b)` in the
/// region where it converges well.
fn beta_cf(x: f64, a: f64, b: f64) -> Result<f64> {
    let tiny = 1e-300;
    let eps = f64::EPSILON;

    let prefix = (a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b)).exp() / a;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = 1.0 / d;
    let mut f = d;

    for m in 1..=BETA_CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let num = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + num * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = 1.0 + num / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        f *= d * c;

        let num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + num * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = 1.0 + num / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        f *= delta;

        if (delta - 1.0).abs() < eps {
            return Ok(prefix * f);
        }
    }
    Err(Error::InvalidInput(format!(
        "incomplete beta continued fraction did not converge for x = {x}, a = {a}, b = {b}"
    )))
}
