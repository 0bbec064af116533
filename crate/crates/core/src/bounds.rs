//! Irreality and its upper bounds under sequential pairwise monitoring.
//!
//! The entropy-continuity chain gives, for any observable `X` and Bloch
//! vectors `r1`, `r2`,
//!
//! ```text
//! |S(ρ_r2) - S(ρ_r1)| <= g(d) sqrt(||r2 - r1||),
//! g(d) = (d-1)^{1/4} (1 + ln(d-1)/sqrt(2)),
//! ```
//!
//! and since `Φ_X(ρ_r) = ρ_{P_X r}` the irreality of `X` at `r_n` is bounded
//! by `g(d) sqrt(||(1-P_X) r̂_n||) sqrt(||r_n||)`.
//!
//! The contraction statistic `O(ε)` is the *largest* per-step ratio
//! `ε_k = ||r_k|| / ||r_{k-1}||`; only the maximum makes
//! `Π ε_k <= O(ε)^n` hold, which is what [`n_min`] relies on.

use std::f64::consts::{LN_2, SQRT_2};

use nalgebra::DVector;

use crate::bloch::{from_bloch, BlochVector, DensityMatrix, GellMannBasis, ProjectiveObservable};
use crate::channels::{phi_map, simplex_projector, SimplexProjector, Trajectory};
use crate::kernel::{binary_entropy, von_neumann_entropy};
use crate::{Error, Result, CENTER_TOL};

/// Upper limit on the number of monitoring rounds [`nmin_report`] will
/// simulate while refining `O(ε)`.
pub const MAX_HORIZON: usize = 2_000_000;
const INITIAL_HORIZON: usize = 16;

/// Summary of the bound analysis for one `(ρ, A, B, X, δ)` configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Irreality of `X` at `evaluated_at`, in nats.
    pub irreality: f64,
    /// Continuity-bound right-hand side at `evaluated_at`, in nats.
    pub ineq2_rhs: f64,
    pub g_d: f64,
    pub o_eps: f64,
    /// Real-valued step count; `f64::INFINITY` when unreachable.
    pub n_min: f64,
    pub delta: f64,
    /// `max(1, ⌈n_min⌉)`, or 1 when `n_min` is infinite.
    pub evaluated_at: usize,
    /// `||r_0||`.
    pub initial_norm: f64,
    /// Largest `||(1 - P_X) r̂_k||` over the simulated horizon.
    pub residual: f64,
    /// Number of rounds simulated to estimate `o_eps` and `residual`.
    pub horizon: usize,
}

/// `S(Φ_X(ρ)) - S(ρ)` in nats.
pub fn irreality(x: &ProjectiveObservable, rho: &DensityMatrix) -> Result<f64> {
    let dephased = phi_map(rho, x)?;
    Ok(von_neumann_entropy(&dephased)? - von_neumann_entropy(rho)?)
}

/// `ln d - S(ρ)`, the largest irreality any observable can have at `ρ`.
pub fn max_irreality(rho: &DensityMatrix) -> Result<f64> {
    Ok((rho.dim() as f64).ln() - von_neumann_entropy(rho)?)
}

/// `(d-1)^{1/4} (1 + ln(d-1)/sqrt(2))`.
pub fn g_factor(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let dm1 = (d - 1) as f64;
    Ok(dm1.powf(0.25) * (1.0 + dm1.ln() / SQRT_2))
}

/// `g(d) sqrt(||(1-P_X) r̂_n||) sqrt(||r_n||)`; zero at the centre of the ball.
pub fn ineq2_rhs(
    r_n: &BlochVector,
    x: &ProjectiveObservable,
    px: &SimplexProjector,
) -> Result<f64> {
    for found in [x.dim(), px.dim()] {
        if found != r_n.dim() {
            return Err(Error::DimensionMismatch {
                expected: r_n.dim(),
                found,
            });
        }
    }
    let norm = r_n.norm();
    if norm <= CENTER_TOL {
        return Ok(0.0);
    }
    let unit = r_n.vector() / norm;
    Ok(g_factor(r_n.dim())? * px.residual(&unit).sqrt() * norm.sqrt())
}

/// Largest contraction ratio over the steps whose predecessor was not the
/// centre of the ball.
pub fn o_epsilon(traj: &Trajectory) -> Result<f64> {
    traj.steps
        .iter()
        .filter(|s| s.epsilon_valid)
        .map(|s| s.epsilon)
        .reduce(f64::max)
        .ok_or_else(|| Error::InvalidArgument("trajectory has no step with a valid ε".into()))
}

/// Number of pairwise rounds after which the continuity bound drops to
/// `delta`:
///
/// ```text
/// n_min = 2 ln(δ / (g(d) sqrt(||r_0|| residual))) / ln O(ε)
/// ```
///
/// Returns 0 when the bound already holds at `n = 0`, 1 when `o_eps = 0`
/// (one round reaches the centre) and `+∞` when `o_eps = 1`. Callers take
/// `max(1, ⌈n_min⌉)`.
pub fn n_min(delta: f64, d: usize, r0_norm: f64, residual: f64, o_eps: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    if !(0.0..=1.0).contains(&o_eps) {
        return Err(Error::InvalidArgument(format!("O(ε) = {o_eps} outside [0, 1]")));
    }
    if !(residual >= 0.0) || !(r0_norm >= 0.0) {
        return Err(Error::InvalidArgument("norms must be nonnegative".into()));
    }
    let initial_bound = g_factor(d)? * (r0_norm * residual).sqrt();
    if initial_bound <= delta {
        return Ok(0.0);
    }
    if o_eps >= 1.0 {
        return Ok(f64::INFINITY);
    }
    if o_eps == 0.0 {
        return Ok(1.0);
    }
    Ok(2.0 * (delta / initial_bound).ln() / o_eps.ln())
}

/// Running statistics of a Bloch-space trajectory without entropy
/// evaluations.
struct ContractionStats {
    pair: nalgebra::DMatrix<f64>,
    px: SimplexProjector,
    current: DVector<f64>,
    steps: usize,
    o_eps: Option<f64>,
    residual: f64,
}

impl ContractionStats {
    fn new(pair: nalgebra::DMatrix<f64>, px: SimplexProjector, r0: &DVector<f64>) -> Self {
        let norm = r0.norm();
        let residual = if norm > CENTER_TOL {
            px.residual(&(r0 / norm))
        } else {
            0.0
        };
        Self {
            pair,
            px,
            current: r0.clone(),
            steps: 0,
            o_eps: None,
            residual,
        }
    }

    fn advance_to(&mut self, horizon: usize) {
        while self.steps < horizon {
            let prev = self.current.norm();
            if prev <= CENTER_TOL {
                // Once at the centre the state never moves again.
                self.steps = horizon;
                break;
            }
            self.current = &self.pair * &self.current;
            self.steps += 1;
            let norm = self.current.norm();
            let eps = (norm / prev).min(1.0);
            self.o_eps = Some(self.o_eps.map_or(eps, |o| o.max(eps)));
            if norm > CENTER_TOL {
                self.residual = self.residual.max(self.px.residual(&(&self.current / norm)));
            }
        }
    }
}

/// End-to-end `n_min` analysis: estimates `O(ε)` and the residual over a
/// horizon that covers `⌈n_min⌉`, then evaluates the irreality of `x` at
/// `max(1, ⌈n_min⌉)`.
pub fn nmin_report(
    basis: &GellMannBasis,
    r0: &BlochVector,
    obs_a: &ProjectiveObservable,
    obs_b: &ProjectiveObservable,
    x: &ProjectiveObservable,
    delta: f64,
) -> Result<BoundReport> {
    let d = basis.dim();
    for found in [r0.dim(), obs_a.dim(), obs_b.dim(), x.dim()] {
        if found != d {
            return Err(Error::DimensionMismatch { expected: d, found });
        }
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let pa = simplex_projector(obs_a);
    let pb = simplex_projector(obs_b);
    let px = simplex_projector(x);
    let pair = pb.matrix() * pa.matrix();
    let initial_norm = r0.norm();

    let mut stats = ContractionStats::new(pair.clone(), px.clone(), r0.vector());
    let mut horizon = INITIAL_HORIZON;
    let (o_eps, n_min_value) = loop {
        stats.advance_to(horizon);
        let o_eps = stats.o_eps.unwrap_or(0.0);
        let value = n_min(delta, d, initial_norm, stats.residual, o_eps)?;
        if !value.is_finite() || (value.ceil() as usize) <= horizon {
            break (o_eps, value);
        }
        if horizon >= MAX_HORIZON {
            return Err(Error::InvalidArgument(format!(
                "n_min = {value:.3e} exceeds the simulation horizon {MAX_HORIZON}"
            )));
        }
        horizon = (value.ceil() as usize).max(2 * horizon).min(MAX_HORIZON);
    };

    let evaluated_at = if n_min_value.is_finite() {
        (n_min_value.ceil() as usize).max(1)
    } else {
        1
    };
    let mut r = r0.vector().clone();
    for _ in 0..evaluated_at {
        r = &pair * &r;
    }
    let r_n = BlochVector::new(d, r)?;
    let rho_n = from_bloch(&r_n, basis)?;

    Ok(BoundReport {
        irreality: irreality(x, &rho_n)?,
        ineq2_rhs: ineq2_rhs(&r_n, x, &px)?,
        g_d: g_factor(d)?,
        o_eps,
        n_min: n_min_value,
        delta,
        evaluated_at,
        initial_norm,
        residual: stats.residual,
        horizon: stats.steps,
    })
}

/// Qubit bound `(â·r)² (â·b̂)^{2(2n-1)} [1 - (x̂·b̂)⁴] ln 2`.
pub fn qubit_irreality_bound(a_dot_r: f64, a_dot_b: f64, x_dot_b: f64, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    for (name, v) in [("â·r", a_dot_r), ("â·b̂", a_dot_b), ("x̂·b̂", x_dot_b)] {
        if !(-1.0..=1.0).contains(&v) {
            return Err(Error::InvalidArgument(format!("{name} = {v} outside [-1, 1]")));
        }
    }
    let exponent = 2 * (2 * n as i32 - 1);
    Ok(a_dot_r.powi(2) * a_dot_b.powi(exponent) * (1.0 - x_dot_b.powi(4)) * LN_2)
}

/// Both sides of the binary-entropy inequality used for the qubit bound:
/// `lhs = H((1+μλ)/2) - H((1+λ)/2)` and `rhs = λ² (1-μ⁴) ln 2`.
///
/// The inequality `lhs <= rhs` fails in a thin corner near `λ = 1`,
/// `|μ| = 1` where `lhs` has an `ε ln ε` term (see the tests).
pub fn hbin_bound_check(lambda: f64, mu: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!("λ = {lambda} outside [0, 1]")));
    }
    if !(-1.0..=1.0).contains(&mu) {
        return Err(Error::InvalidArgument(format!("μ = {mu} outside [-1, 1]")));
    }
    let lhs = binary_entropy((1.0 + mu * lambda) / 2.0)? - binary_entropy((1.0 + lambda) / 2.0)?;
    let rhs = lambda * lambda * (1.0 - mu.powi(4)) * LN_2;
    Ok((lhs, rhs))
}
