//! Nonselective measurement maps and their Bloch-space projectors.
//!
//! In Hilbert space a nonselective measurement of `A` dephases the state in
//! `A`'s eigenbasis, `Φ_A(ρ) = Σ_i A_i ρ A_i`. In Bloch space the same map is
//! the linear projector `P_A r = ((d-1)/d) Σ_i (a⃗_i·r) a⃗_i` onto the simplex
//! of `A`. Sequential monitoring of a pair `{A, B}` iterates `P_B P_A`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::bloch::{from_bloch, BlochVector, DensityMatrix, GellMannBasis, ProjectiveObservable};
use crate::bounds;
use crate::{CMatrix, Error, Result, CENTER_TOL, POSITIVITY_TOL};

fn check_same(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `Σ_i P_i ρ P_i` for an arbitrary list of orthogonal projectors, possibly
/// of rank greater than one.
pub fn phi_projectors(rho: &DensityMatrix, projectors: &[CMatrix]) -> Result<DensityMatrix> {
    let d = rho.dim();
    let mut out = CMatrix::zeros(d, d);
    for p in projectors {
        check_same(d, p.nrows())?;
        out += p * rho.matrix() * p;
    }
    // Rounding in the projectors drifts the trace over many rounds.
    let trace = out.trace().re;
    if (trace - 1.0).abs() <= POSITIVITY_TOL {
        out /= Complex64::new(trace, 0.0);
    }
    DensityMatrix::new(out)
}

/// Nonselective projective measurement `Φ_A(ρ) = Σ_i A_i ρ A_i`.
pub fn phi_map(rho: &DensityMatrix, obs: &ProjectiveObservable) -> Result<DensityMatrix> {
    check_same(obs.dim(), rho.dim())?;
    phi_projectors(rho, obs.projectors())
}

/// Dense `(d²-1) x (d²-1)` matrix of the simplex projector `P_A`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexProjector {
    dim: usize,
    matrix: DMatrix<f64>,
}

impl SimplexProjector {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, r: &BlochVector) -> Result<BlochVector> {
        check_same(self.dim, r.dim())?;
        Ok(BlochVector::from_raw(self.dim, &self.matrix * r.vector()))
    }

    /// `||(1 - P) v||` for a raw vector.
    pub fn residual(&self, v: &DVector<f64>) -> f64 {
        (v - &self.matrix * v).norm()
    }
}

/// Builds `P_A = ((d-1)/d) Σ_i a⃗_i a⃗_iᵀ`.
pub fn simplex_projector(obs: &ProjectiveObservable) -> SimplexProjector {
    let d = obs.dim();
    let len = d * d - 1;
    let scale = (d as f64 - 1.0) / d as f64;
    let mut matrix = DMatrix::zeros(len, len);
    for v in obs.vertices() {
        matrix += v * v.transpose() * scale;
    }
    SimplexProjector { dim: d, matrix }
}

/// One round of pairwise monitoring, `r ↦ P_B P_A r`.
pub fn pairwise_step(
    r: &BlochVector,
    pa: &SimplexProjector,
    pb: &SimplexProjector,
) -> Result<BlochVector> {
    check_same(pa.dim(), r.dim())?;
    check_same(pb.dim(), r.dim())?;
    Ok(BlochVector::from_raw(r.dim(), &pb.matrix * (&pa.matrix * r.vector())))
}

/// One monitoring step.
#[derive(Debug, Clone)]
pub struct TrajectoryStep {
    pub n: usize,
    pub r: BlochVector,
    pub norm: f64,
    /// `||r_n|| / ||r_{n-1}||`, or 0 when the previous state was the centre.
    pub epsilon: f64,
    /// False when the previous norm was below the centre tolerance, so
    /// `epsilon` carries no contraction information.
    pub epsilon_valid: bool,
    /// Irreality of the tracked observable at `r_n`, in nats.
    pub irreality: f64,
    /// Right-hand side of the entropy-continuity bound at `r_n`, in nats.
    pub bound_rhs: f64,
}

/// Record of `r_n = (P_B P_A)^n r_0` for `n = 1..=N`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub r0: BlochVector,
    pub steps: Vec<TrajectoryStep>,
}

impl Trajectory {
    pub fn initial_norm(&self) -> f64 {
        self.r0.norm()
    }
}

/// Evolves `r0` under `n` rounds of pairwise monitoring and records the
/// irreality of `x` and its upper bound at every step.
pub fn monitor(
    basis: &GellMannBasis,
    r0: &BlochVector,
    obs_a: &ProjectiveObservable,
    obs_b: &ProjectiveObservable,
    n: usize,
    x: &ProjectiveObservable,
) -> Result<Trajectory> {
    let d = basis.dim();
    for found in [r0.dim(), obs_a.dim(), obs_b.dim(), x.dim()] {
        check_same(d, found)?;
    }
    if n < 1 {
        return Err(Error::InvalidArgument("monitoring needs n >= 1 steps".into()));
    }
    let pair = simplex_projector(obs_b).matrix * simplex_projector(obs_a).matrix;
    let px = simplex_projector(x);

    let mut steps = Vec::with_capacity(n);
    let mut current = r0.vector().clone();
    let mut prev_norm = current.norm();
    for k in 1..=n {
        current = &pair * &current;
        let norm = current.norm();
        let epsilon_valid = prev_norm > CENTER_TOL;
        let epsilon = if epsilon_valid {
            (norm / prev_norm).min(1.0)
        } else {
            0.0
        };
        let r = BlochVector::from_raw(d, current.clone());
        let rho = from_bloch(&r, basis)?;
        let irreality = bounds::irreality(x, &rho)?;
        let bound_rhs = bounds::ineq2_rhs(&r, x, &px)?;
        steps.push(TrajectoryStep {
            n: k,
            r,
            norm,
            epsilon,
            epsilon_valid,
            irreality,
            bound_rhs,
        });
        prev_norm = norm;
    }
    Ok(Trajectory {
        r0: r0.clone(),
        steps,
    })
}

/// Dilates `Φ_A` with the isometry `V = Σ_i A_i ⊗ |e_i⟩`, traces out the
/// ancilla and returns the largest entrywise deviation from `phi_map`.
pub fn stinespring_check(rho: &DensityMatrix, obs: &ProjectiveObservable) -> Result<f64> {
    check_same(obs.dim(), rho.dim())?;
    let d = rho.dim();
    let m = obs.projectors().len();

    let mut v = CMatrix::zeros(d * m, d);
    for (i, proj) in obs.projectors().iter().enumerate() {
        let mut e = CMatrix::zeros(m, 1);
        e[(i, 0)] = Complex64::new(1.0, 0.0);
        v += proj.kronecker(&e);
    }
    let joint = &v * rho.matrix() * v.adjoint();

    let mut reduced = CMatrix::zeros(d, d);
    for s in 0..d {
        for t in 0..d {
            reduced[(s, t)] = (0..m).map(|e| joint[(s * m + e, t * m + e)]).sum();
        }
    }
    let direct = phi_map(rho, obs)?;
    Ok((reduced - direct.matrix()).camax())
}
