//! Dirichlet vector generation (gamma ratios or uniform-power rejection) and
//! the mapping to correlated beta pairs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{solve_alphas, CorrelatedBetaTarget, DirichletAlphas};
use crate::rng::RngStream;

/// Default per-draw budget for the rejection sampler. Exceeding it is an
/// error rather than a silent fallback, so an impractically small acceptance
/// probability surfaces instead of hanging.
pub const DEFAULT_MAX_ATTEMPTS: u64 = 1_000_000;

/// Largest `f64` strictly below 1.
const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

/// Nudges a value into the open interval `(0, 1)`. Draws whose true value is
/// within half an ulp of an endpoint round to the nearest representable
/// interior point instead of leaving the interval.
fn clamp_open01(x: f64) -> f64 {
    x.clamp(f64::MIN_POSITIVE, ONE_MINUS_ULP)
}

/// One Dirichlet draw `(x1, x2, x3)` with `x0 = 1 - x1 - x2 - x3` implied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirichletDraw {
    x1: f64,
    x2: f64,
    x3: f64,
}

impl DirichletDraw {
    /// Validates coordinates: each in `(0, 1)` with `x1 + x2 + x3 < 1`.
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        for (name, v) in [("x1", x1), ("x2", x2), ("x3", x3)] {
            if !v.is_finite() || v <= 0.0 || v >= 1.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} = {v} must lie strictly inside (0, 1)"
                )));
            }
        }
        if x1 + x2 + x3 >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "x1 + x2 + x3 = {} must be < 1",
                x1 + x2 + x3
            )));
        }
        Ok(Self { x1, x2, x3 })
    }

    /// Normalizes positive weights `(z0, z1, z2, z3)` into a draw.
    fn from_unnormalized(z0: f64, z1: f64, z2: f64, z3: f64) -> Self {
        let s = z0 + z1 + z2 + z3;
        let mut x1 = clamp_open01(z1 / s);
        let mut x2 = clamp_open01(z2 / s);
        let mut x3 = clamp_open01(z3 / s);
        // If x0 was lost to rounding, shave the rest back inside the simplex.
        while x1 + x2 + x3 >= 1.0 {
            x1 *= 1.0 - f64::EPSILON;
            x2 *= 1.0 - f64::EPSILON;
            x3 *= 1.0 - f64::EPSILON;
        }
        Self { x1, x2, x3 }
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn x3(&self) -> f64 {
        self.x3
    }

    /// The implied remaining coordinate `x0`.
    pub fn x0(&self) -> f64 {
        // Group the sum exactly as the simplex invariant checks it; the
        // subtraction from 1 is then exact and stays positive.
        1.0 - (self.x1 + self.x2 + self.x3)
    }
}

/// One correlated pair `(y1, y2) = (x1 + x3, x2 + x3)`, both in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplePair {
    pub y1: f64,
    pub y2: f64,
}

/// Attempt/accept counters of the rejection sampler.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct JohnkStats {
    pub attempts: u64,
    pub accepts: u64,
}

impl JohnkStats {
    /// Empirical acceptance rate `accepts / attempts`.
    pub fn acceptance_rate(&self) -> f64 {
        self.accepts as f64 / self.attempts as f64
    }
}

/// Which Dirichlet generator drives the batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Independent gamma variates divided by their sum. Never rejects.
    Gamma,
    /// Uniform-power rejection: `Z_i = U_i^(1/a_i)` accepted when the sum
    /// stays at or below 1. Efficient only for small shapes.
    Johnk,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Gamma => "gamma",
            Method::Johnk => "johnk",
        })
    }
}

/// A reproducible batch of correlated pairs: regenerate with the same
/// `(seed, stream_id, method)` and target to get identical output.
#[derive(Debug, Clone, Serialize)]
pub struct SampleBatch {
    pub seed: u64,
    pub stream_id: u64,
    pub method: Method,
    pub pairs: Vec<SamplePair>,
    /// Rejection counters; present only for [`Method::Johnk`].
    pub johnk: Option<JohnkStats>,
}

/// One gamma variate with the given shape and unit rate.
///
/// Marsaglia-Tsang squeeze for `shape >= 1`; for `shape < 1` the draw is
/// boosted from `shape + 1` by a factor `U^(1/shape)`, which is exact for
/// every positive shape. The power is evaluated as `exp(ln(u)/shape)` to
/// dodge `powf` irregularities at tiny shapes.
pub fn sample_gamma(stream: &mut RngStream, shape: f64) -> Result<f64> {
    if !shape.is_finite() || shape <= 0.0 {
        return Err(Error::InvalidShape(shape));
    }
    Ok(if shape < 1.0 {
        let g = gamma_shape_ge_one(stream, shape + 1.0);
        let u = stream.uniform();
        (g * (u.ln() / shape).exp()).max(f64::MIN_POSITIVE)
    } else {
        gamma_shape_ge_one(stream, shape)
    })
}

fn gamma_shape_ge_one(stream: &mut RngStream, shape: f64) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = stream.normal();
        let cube_root = 1.0 + c * x;
        if cube_root <= 0.0 {
            continue;
        }
        let v = cube_root * cube_root * cube_root;
        let u = stream.uniform();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return (d * v).max(f64::MIN_POSITIVE);
        }
    }
}

/// Draws a Dirichlet vector as `X_i = Z_i / (Z_0 + Z_1 + Z_2 + Z_3)` from
/// independent gamma variates `Z_i ~ G(a_i, 1)`, consumed in index order
/// `a0, a1, a2, a3`. Always succeeds in bounded time.
pub fn sample_dirichlet_gamma(stream: &mut RngStream, alphas: &DirichletAlphas) -> DirichletDraw {
    let [a0, a1, a2, a3] = alphas.as_array();
    let z0 = gamma_any_shape(stream, a0);
    let z1 = gamma_any_shape(stream, a1);
    let z2 = gamma_any_shape(stream, a2);
    let z3 = gamma_any_shape(stream, a3);
    DirichletDraw::from_unnormalized(z0, z1, z2, z3)
}

fn gamma_any_shape(stream: &mut RngStream, shape: f64) -> f64 {
    sample_gamma(stream, shape).expect("validated alphas have positive shapes")
}

/// One rejection trial: draw `U_0..U_3`, form `Z_i = U_i^(1/a_i)`, and accept
/// when `S = sum Z_i <= 1`, returning the normalized coordinates.
pub(crate) fn johnk_trial(
    stream: &mut RngStream,
    alphas: &DirichletAlphas,
) -> Option<DirichletDraw> {
    let a = alphas.as_array();
    let mut z = [0.0f64; 4];
    let mut s = 0.0;
    for i in 0..4 {
        let u = stream.uniform();
        // exp(ln(u)/a) rather than powf; clamp the occasional underflow at
        // very small shapes back to positive.
        let zi = (u.ln() / a[i]).exp().max(f64::MIN_POSITIVE);
        z[i] = zi;
        s += zi;
    }
    (s <= 1.0).then(|| DirichletDraw::from_unnormalized(z[0], z[1], z[2], z[3]))
}

/// Draws a Dirichlet vector by rejection, incrementing `stats.attempts` per
/// trial and `stats.accepts` on success.
///
/// Fails with [`Error::TooManyRejections`] when `max_attempts` consecutive
/// trials all land outside the acceptance region.
pub fn sample_dirichlet_johnk(
    stream: &mut RngStream,
    alphas: &DirichletAlphas,
    max_attempts: u64,
    stats: &mut JohnkStats,
) -> Result<DirichletDraw> {
    assert!(max_attempts >= 1, "max_attempts must be at least 1");
    for _ in 0..max_attempts {
        stats.attempts += 1;
        if let Some(draw) = johnk_trial(stream, alphas) {
            stats.accepts += 1;
            return Ok(draw);
        }
    }
    Err(Error::TooManyRejections {
        attempts: max_attempts,
    })
}

/// Maps a Dirichlet draw to the correlated pair `(x1 + x3, x2 + x3)`.
pub fn to_pair(draw: &DirichletDraw) -> SamplePair {
    SamplePair {
        y1: clamp_open01(draw.x1 + draw.x3),
        y2: clamp_open01(draw.x2 + draw.x3),
    }
}

/// Generates `n` correlated beta pairs for a feasible target.
///
/// The batch is bit-reproducible from `(seed, stream_id, method)` on a given
/// platform. For [`Method::Johnk`] each accepted draw has a budget of
/// [`DEFAULT_MAX_ATTEMPTS`] trials and the batch carries the aggregate
/// rejection counters.
pub fn sample_correlated_beta(
    stream: &mut RngStream,
    target: &CorrelatedBetaTarget,
    n: u64,
    method: Method,
) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "sample count must be at least 1".into(),
        ));
    }
    let alphas = solve_alphas(target)?;
    let mut pairs = Vec::with_capacity(n as usize);
    let mut johnk = None;
    match method {
        Method::Gamma => {
            for _ in 0..n {
                pairs.push(to_pair(&sample_dirichlet_gamma(stream, &alphas)));
            }
        }
        Method::Johnk => {
            let mut stats = JohnkStats::default();
            for _ in 0..n {
                let draw =
                    sample_dirichlet_johnk(stream, &alphas, DEFAULT_MAX_ATTEMPTS, &mut stats)?;
                pairs.push(to_pair(&draw));
            }
            johnk = Some(stats);
        }
    }
    Ok(SampleBatch {
        seed: stream.seed(),
        stream_id: stream.stream_id(),
        method,
        pairs,
        johnk,
    })
}
