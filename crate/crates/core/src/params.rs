//! Solving beta-marginal targets for the shapes of a latent Dirichlet
//! distribution, with feasibility analysis.
//!
//! A four-shape Dirichlet vector `(X1, X2, X3)` (with `X0 = 1 - X1 - X2 - X3`
//! implied) induces the sums `Y1 = X1 + X3` and `Y2 = X2 + X3`, which are
//! beta distributed:
//!
//! ```text
//! Y1 ~ Be(a1 + a3, a0 + a2)        Y2 ~ Be(a2 + a3, a0 + a1)
//! ```
//!
//! and positively correlated whenever `a0*a3 > a1*a2`. Given marginal shapes
//! `(c1, c2)` and `(c3, c4)` with `c4 = c1 + c2 - c3` implied, plus a target
//! correlation `r`, the inverse problem has a closed-form solution:
//!
//! ```text
//! a3 = (r * sqrt(c1*c2*c3*c4) + c1*c3) / (c1 + c2)
//! a1 = c1 - a3,    a2 = c3 - a3,    a0 = c2 - c3 + a3
//! ```
//!
//! `a3` (and, for any representable target, `a0`) is automatically positive;
//! `a1` and `a2` may fail positivity, which makes the target infeasible. See
//! [`check_feasibility`] for the numeric verdict and [`case_bounds`] for the
//! closed-form conditions available when the `c` values coincide.

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance of the bisection in [`max_feasible_r`].
const BISECT_TOL: f64 = 1e-10;

/// A pair of beta marginals `Be(c1, c2)` and `Be(c3, c4)` with target
/// correlation `r`, where `c4 = c1 + c2 - c3` is implied and never stored.
///
/// Construction validates `c1, c2, c3 > 0` and `0 <= r < 1`. Positivity of
/// the implied `c4` is deliberately not enforced here so that infeasible
/// requests can still be analyzed; [`check_feasibility`] reports it as a
/// violated restriction and [`CorrelatedBetaTarget::c4`] returns an error.
///
/// `r = 0` is the degenerate independent case. Negative correlations are not
/// representable by this construction and are rejected up front.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelatedBetaTarget {
    c1: f64,
    c2: f64,
    c3: f64,
    r: f64,
}

impl CorrelatedBetaTarget {
    /// Validates and builds a target. `c1`, `c2`, `c3` must be strictly
    /// positive and finite; `r` must lie in `[0, 1)`.
    pub fn new(c1: f64, c2: f64, c3: f64, r: f64) -> Result<Self> {
        for (name, v) in [("c1", c1), ("c2", c2), ("c3", c3)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidTarget(format!(
                    "{name} = {v} must be a positive finite number"
                )));
            }
        }
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidTarget(format!("r = {r} must lie in [0, 1)")));
        }
        Ok(Self { c1, c2, c3, r })
    }

    /// First shape of the `Y1` marginal.
    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// Second shape of the `Y1` marginal.
    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// First shape of the `Y2` marginal.
    pub fn c3(&self) -> f64 {
        self.c3
    }

    /// Target correlation between `Y1` and `Y2`.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// The implied second shape of the `Y2` marginal, `c4 = c1 + c2 - c3`.
    ///
    /// Fails with [`Error::InvalidTarget`] when `c1 + c2 <= c3`, which makes
    /// the implied shape nonpositive.
    pub fn c4(&self) -> Result<f64> {
        let c4 = self.c1 + self.c2 - self.c3;
        if c4 > 0.0 {
            Ok(c4)
        } else {
            Err(Error::InvalidTarget(format!(
                "implied c4 = c1 + c2 - c3 = {c4} must be positive"
            )))
        }
    }

    /// Which shape-coincidence scenario this target falls into.
    pub fn special_case(&self) -> SpecialCase {
        special_case_of(self.c1, self.c2, self.c3)
    }
}

/// The solved Dirichlet shape parameters `(a0, a1, a2, a3)`, all strictly
/// positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirichletAlphas {
    a0: f64,
    a1: f64,
    a2: f64,
    a3: f64,
}

impl DirichletAlphas {
    /// Builds a shape vector, validating strict positivity of every entry.
    pub fn new(a0: f64, a1: f64, a2: f64, a3: f64) -> Result<Self> {
        for (name, v) in [("a0", a0), ("a1", a1), ("a2", a2), ("a3", a3)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} = {v} must be a positive finite number"
                )));
            }
        }
        Ok(Self { a0, a1, a2, a3 })
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn a3(&self) -> f64 {
        self.a3
    }

    /// Sum of the four shapes, conventionally written `gamma`.
    pub fn gamma_sum(&self) -> f64 {
        self.a0 + self.a1 + self.a2 + self.a3
    }

    /// The shapes in index order `[a0, a1, a2, a3]`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }
}

/// Shape-coincidence scenarios with closed-form feasibility conditions.
///
/// Detection uses exact equality of the input values: the cases describe
/// user-declared coincidences, not numerical ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpecialCase {
    /// No coincidence; feasibility is decided numerically.
    General,
    /// `c1 = c3`: both marginals are `Be(c1, c2)`. Always feasible.
    CaseI,
    /// `c2 = c3`: feasible iff `r*c2 < c1 < c2/r`.
    CaseII,
    /// `c1 = c2`: feasible iff `(1+r^2)/2 < c1/c3 < (1+r^2)/(2r^2)`.
    CaseIII,
    /// `c1 = c2 = c3`: always feasible.
    CaseIV,
}

impl std::fmt::Display for SpecialCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SpecialCase::General => "general",
            SpecialCase::CaseI => "case I (c1 = c3)",
            SpecialCase::CaseII => "case II (c2 = c3)",
            SpecialCase::CaseIII => "case III (c1 = c2)",
            SpecialCase::CaseIV => "case IV (c1 = c2 = c3)",
        };
        f.write_str(s)
    }
}

/// Identifiers of the positivity restrictions a target can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Restriction {
    /// `c1 + c2 - c3 > 0` (the implied marginal shape).
    C4Positive,
    /// `a1 = c1 - a3 > 0`.
    Alpha1Positive,
    /// `a2 = c3 - a3 > 0`.
    Alpha2Positive,
    /// `a0 = c2 - c3 + a3 > 0`.
    Alpha0Positive,
    /// `a3 > 0` (holds by construction; listed for completeness).
    Alpha3Positive,
}

impl std::fmt::Display for Restriction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Restriction::C4Positive => "c4_positive",
            Restriction::Alpha1Positive => "alpha1_positive",
            Restriction::Alpha2Positive => "alpha2_positive",
            Restriction::Alpha0Positive => "alpha0_positive",
            Restriction::Alpha3Positive => "alpha3_positive",
        };
        f.write_str(s)
    }
}

/// The solved shape values, in the order the restrictions are stated.
/// Each value doubles as the margin of its positivity restriction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Margins {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha0: f64,
    pub alpha3: f64,
}

/// Outcome of the feasibility analysis for one target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    /// True iff every restriction holds strictly.
    pub feasible: bool,
    /// Which shape-coincidence scenario applies.
    pub special_case: SpecialCase,
    /// Solved `a3`; `None` when `c4 <= 0` leaves it undefined.
    pub alpha3: Option<f64>,
    /// Solved shape values (the positivity margins); `None` when `c4 <= 0`.
    pub margins: Option<Margins>,
    /// Restrictions that failed, in declaration order.
    pub violated: Vec<Restriction>,
}

impl FeasibilityReport {
    /// Compact comma-separated list of violated restrictions.
    pub fn violation_summary(&self) -> String {
        if self.violated.is_empty() {
            "no violations".to_string()
        } else {
            let names: Vec<String> = self.violated.iter().map(|v| v.to_string()).collect();
            format!("violated: {}", names.join(", "))
        }
    }
}

/// Closed-form feasibility condition for a special-case target, evaluated at
/// that target.
///
/// Bounds are strict on both sides; a value sitting exactly on a bound is
/// infeasible, matching the strict positivity of the solved shapes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CaseBounds {
    /// Cases I and IV impose no restriction for any `r` in `[0, 1)`.
    Unrestricted { case: SpecialCase },
    /// Cases II and III require `lower < value < upper`. `upper` is absent
    /// when `r = 0` leaves the interval unbounded above.
    Interval {
        case: SpecialCase,
        /// The bounded quantity: `c1` for case II, `c1/c3` for case III.
        value: f64,
        lower: f64,
        upper: Option<f64>,
        feasible: bool,
    },
}

impl CaseBounds {
    /// The analytic feasibility verdict.
    pub fn feasible(&self) -> bool {
        match self {
            CaseBounds::Unrestricted { .. } => true,
            CaseBounds::Interval { feasible, .. } => *feasible,
        }
    }

    /// Which case produced these bounds.
    pub fn case(&self) -> SpecialCase {
        match self {
            CaseBounds::Unrestricted { case } | CaseBounds::Interval { case, .. } => *case,
        }
    }
}

fn special_case_of(c1: f64, c2: f64, c3: f64) -> SpecialCase {
    if c1 == c2 && c2 == c3 {
        SpecialCase::CaseIV
    } else if c1 == c3 {
        SpecialCase::CaseI
    } else if c2 == c3 {
        SpecialCase::CaseII
    } else if c1 == c2 {
        SpecialCase::CaseIII
    } else {
        SpecialCase::General
    }
}

fn alpha3_raw(c1: f64, c2: f64, c3: f64, r: f64) -> f64 {
    let c4 = c1 + c2 - c3;
    (r * (c1 * c2 * c3 * c4).sqrt() + c1 * c3) / (c1 + c2)
}

fn margins_raw(c1: f64, c2: f64, c3: f64, r: f64) -> Margins {
    let alpha3 = alpha3_raw(c1, c2, c3, r);
    Margins {
        alpha1: c1 - alpha3,
        alpha2: c3 - alpha3,
        alpha0: c2 - c3 + alpha3,
        alpha3,
    }
}

fn feasible_raw(c1: f64, c2: f64, c3: f64, r: f64) -> bool {
    if c1 + c2 - c3 <= 0.0 {
        return false;
    }
    let m = margins_raw(c1, c2, c3, r);
    m.alpha1 > 0.0 && m.alpha2 > 0.0 && m.alpha0 > 0.0 && m.alpha3 > 0.0
}

/// The implied second shape of the `Y2` marginal, `c4 = c1 + c2 - c3`.
pub fn derived_c4(target: &CorrelatedBetaTarget) -> Result<f64> {
    target.c4()
}

/// Solves for `a3 = (r * sqrt(c1*c2*c3*c4) + c1*c3) / (c1 + c2)`.
///
/// The result is strictly positive for every valid target.
pub fn solve_alpha3(target: &CorrelatedBetaTarget) -> Result<f64> {
    target.c4()?;
    Ok(alpha3_raw(target.c1, target.c2, target.c3, target.r))
}

/// Solves the full inverse problem, failing with [`Error::Infeasible`] when
/// any positivity restriction is violated.
///
/// For a feasible target the marginal identities hold to floating-point
/// accuracy: `a1 + a3 = c1`, `a0 + a2 = c2`, `a2 + a3 = c3`, `a0 + a1 = c4`,
/// and [`target_correlation`] of the result recovers `r`.
pub fn solve_alphas(target: &CorrelatedBetaTarget) -> Result<DirichletAlphas> {
    let report = check_feasibility(target);
    if !report.feasible {
        return Err(Error::Infeasible(report));
    }
    let m = report.margins.expect("feasible report has margins");
    Ok(DirichletAlphas {
        a0: m.alpha0,
        a1: m.alpha1,
        a2: m.alpha2,
        a3: m.alpha3,
    })
}

/// Evaluates every positivity restriction for the target and tags the
/// applicable shape-coincidence case.
///
/// A nonpositive implied `c4` is reported as a violation rather than an
/// error, so that near-miss requests can still be diagnosed.
pub fn check_feasibility(target: &CorrelatedBetaTarget) -> FeasibilityReport {
    let special_case = target.special_case();
    let (c1, c2, c3, r) = (target.c1, target.c2, target.c3, target.r);

    if c1 + c2 - c3 <= 0.0 {
        return FeasibilityReport {
            feasible: false,
            special_case,
            alpha3: None,
            margins: None,
            violated: vec![Restriction::C4Positive],
        };
    }

    let m = margins_raw(c1, c2, c3, r);
    let mut violated = Vec::new();
    if m.alpha1 <= 0.0 {
        violated.push(Restriction::Alpha1Positive);
    }
    if m.alpha2 <= 0.0 {
        violated.push(Restriction::Alpha2Positive);
    }
    if m.alpha0 <= 0.0 {
        violated.push(Restriction::Alpha0Positive);
    }
    if m.alpha3 <= 0.0 {
        violated.push(Restriction::Alpha3Positive);
    }
    FeasibilityReport {
        feasible: violated.is_empty(),
        special_case,
        alpha3: Some(m.alpha3),
        margins: Some(m),
        violated,
    }
}

/// Correlation of `(Y1, Y2)` induced by a shape vector:
/// `(a0*a3 - a1*a2) / sqrt((a1+a3)(a0+a2)(a2+a3)(a0+a1))`.
pub fn target_correlation(alphas: &DirichletAlphas) -> f64 {
    let (a0, a1, a2, a3) = (alphas.a0, alphas.a1, alphas.a2, alphas.a3);
    let num = a0 * a3 - a1 * a2;
    let den = ((a1 + a3) * (a0 + a2) * (a2 + a3) * (a0 + a1)).sqrt();
    num / den
}

/// Covariance of `(Y1, Y2)`: `(a0*a3 - a1*a2) / (gamma^2 (gamma + 1))`.
pub fn covariance_y(alphas: &DirichletAlphas) -> f64 {
    let g = alphas.gamma_sum();
    (alphas.a0 * alphas.a3 - alphas.a1 * alphas.a2) / (g * g * (g + 1.0))
}

/// Pairwise covariances `Cov(X1,X2), Cov(X1,X3), Cov(X2,X3)`, each equal to
/// `-ai*aj / (gamma^2 (gamma + 1))` and therefore strictly negative.
pub fn dirichlet_pair_covariances(alphas: &DirichletAlphas) -> (f64, f64, f64) {
    let g = alphas.gamma_sum();
    let scale = g * g * (g + 1.0);
    (
        -alphas.a1 * alphas.a2 / scale,
        -alphas.a1 * alphas.a3 / scale,
        -alphas.a2 * alphas.a3 / scale,
    )
}

/// Variance of the shared coordinate `X3 ~ Be(a3, gamma - a3)`:
/// `a3 (gamma - a3) / (gamma^2 (gamma + 1))`.
pub fn var_x3(alphas: &DirichletAlphas) -> f64 {
    let g = alphas.gamma_sum();
    alphas.a3 * (g - alphas.a3) / (g * g * (g + 1.0))
}

/// Closed-form feasibility bounds when the target matches one of the
/// shape-coincidence cases; `None` for a general target.
///
/// The verdict always agrees with [`check_feasibility`].
pub fn case_bounds(target: &CorrelatedBetaTarget) -> Option<CaseBounds> {
    let (c1, c2, c3, r) = (target.c1, target.c2, target.c3, target.r);
    match target.special_case() {
        SpecialCase::General => None,
        case @ (SpecialCase::CaseI | SpecialCase::CaseIV) => {
            Some(CaseBounds::Unrestricted { case })
        }
        case @ SpecialCase::CaseII => {
            let lower = r * c2;
            let upper = (r > 0.0).then(|| c2 / r);
            let feasible = lower < c1 && upper.is_none_or(|u| c1 < u);
            Some(CaseBounds::Interval {
                case,
                value: c1,
                lower,
                upper,
                feasible,
            })
        }
        case @ SpecialCase::CaseIII => {
            let value = c1 / c3;
            let lower = (1.0 + r * r) / 2.0;
            let upper = (r > 0.0).then(|| (1.0 + r * r) / (2.0 * r * r));
            let feasible = lower < value && upper.is_none_or(|u| value < u);
            Some(CaseBounds::Interval {
                case,
                value,
                lower,
                upper,
                feasible,
            })
        }
    }
}

/// Supremum of correlations attainable for the marginal shapes
/// `(c1, c2, c3)`, as a value in `[0, 1]`.
///
/// Cases I and IV admit every `r < 1`; case II has the closed form
/// `min(c1/c2, c2/c1, 1)`. Otherwise the supremum is found by bisection to
/// absolute tolerance `1e-10`, which is valid because `a1` and `a2` decrease
/// monotonically in `r` while `a0` and `a3` increase, so feasibility is
/// monotone: feasible below the supremum, infeasible above it.
pub fn max_feasible_r(c1: f64, c2: f64, c3: f64) -> Result<f64> {
    let target = CorrelatedBetaTarget::new(c1, c2, c3, 0.0)?;
    target.c4()?;
    match target.special_case() {
        SpecialCase::CaseI | SpecialCase::CaseIV => Ok(1.0),
        SpecialCase::CaseII => Ok((c1 / c2).min(c2 / c1).min(1.0)),
        _ => {
            // r = 0 is always feasible when c4 > 0; r = 1 never is outside
            // cases I/IV (the a1 and a2 conditions become contradictory).
            let mut lo = 0.0;
            let mut hi = 1.0;
            while hi - lo > BISECT_TOL {
                let mid = 0.5 * (lo + hi);
                if feasible_raw(c1, c2, c3, mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(0.5 * (lo + hi))
        }
    }
}
