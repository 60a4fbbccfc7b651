//! Sampling pairs of positively correlated beta variates.
//!
//! The marginals of a Dirichlet vector are negatively correlated, but the
//! sums `Y1 = X1 + X3` and `Y2 = X2 + X3` over a four-shape Dirichlet
//! `(a0, a1, a2, a3)` are beta distributed with a *positive* correlation.
//! This crate solves the inverse problem — given marginal shape pairs
//! `(c1, c2)`, `(c3, c4 = c1 + c2 - c3)` and a correlation `r` in `[0, 1)`,
//! find the Dirichlet shapes — checks its feasibility, generates samples by
//! two methods (gamma ratios, or uniform-power rejection), and computes the
//! exact acceptance probability of the rejection method.
//!
//! ```
//! use corrbeta::{
//!     sample_correlated_beta, solve_alphas, CorrelatedBetaTarget, Method, RngStream,
//! };
//!
//! let target = CorrelatedBetaTarget::new(1.0, 1.0, 1.0, 0.5)?;
//! let alphas = solve_alphas(&target)?;
//! assert!((alphas.a3() - 0.75).abs() < 1e-12);
//!
//! let mut stream = RngStream::new(42, 0);
//! let batch = sample_correlated_beta(&mut stream, &target, 1000, Method::Gamma)?;
//! assert_eq!(batch.pairs.len(), 1000);
//! # Ok::<(), corrbeta::Error>(())
//! ```
//!
//! Everything except the owned [`RngStream`] state is a pure function of its
//! inputs; parallel generation uses one stream per worker with distinct
//! `stream_id`s.

pub mod efficiency;
pub mod error;
pub mod params;
pub mod rng;
pub mod samplers;
pub mod special;
pub mod validation;

pub use efficiency::{
    efficiency_grid, empirical_efficiency, johnk_efficiency, round_half_up_3dp, EfficiencyEstimate,
    EfficiencyGrid,
};
pub use error::{Error, Result};
pub use params::{
    case_bounds, check_feasibility, covariance_y, derived_c4, dirichlet_pair_covariances,
    max_feasible_r, solve_alpha3, solve_alphas, target_correlation, var_x3, CaseBounds,
    CorrelatedBetaTarget, DirichletAlphas, FeasibilityReport, Margins, Restriction, SpecialCase,
};
pub use rng::RngStream;
pub use samplers::{
    sample_correlated_beta, sample_dirichlet_gamma, sample_dirichlet_johnk, sample_gamma, to_pair,
    DirichletDraw, JohnkStats, Method, SampleBatch, SamplePair, DEFAULT_MAX_ATTEMPTS,
};
pub use special::{log_gamma, regularized_incomplete_beta};
pub use validation::{ks_statistic, validate_sampler, ToleranceSpec, ValidationReport};
