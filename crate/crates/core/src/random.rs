//! Seeded random states, unitaries and observables.

use nalgebra::{DVector, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::bloch::{DensityMatrix, GellMannBasis, ProjectiveObservable};
use crate::{CMatrix, Error, Result};

/// Redraw eigenvalues closer than this.
const MIN_EIGENVALUE_GAP: f64 = 1e-6;

/// `n x n` matrix with i.i.d. standard normal real and imaginary parts.
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Ginibre-ensemble mixed state `G G† / Tr(G G†)`.
pub fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<DensityMatrix> {
    let g = ginibre(d, rng);
    let w = &g * g.adjoint();
    let trace = w.trace();
    DensityMatrix::new(w / trace)
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<DensityMatrix> {
    let psi: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    DensityMatrix::pure(&psi)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix, with
/// the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(d, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Nondegenerate observable with Haar-random eigenbasis and eigenvalues
/// drawn uniformly from `[-1, 1]`.
pub fn random_observable<R: Rng + ?Sized>(
    d: usize,
    basis: &GellMannBasis,
    rng: &mut R,
) -> Result<ProjectiveObservable> {
    if basis.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: d,
        });
    }
    let unitary = haar_unitary(d, rng);
    let uniform = Uniform::new_inclusive(-1.0, 1.0).expect("valid range");
    let eigenvalues = loop {
        let mut values: Vec<f64> = (0..d).map(|_| uniform.sample(rng)).collect();
        values.sort_by(|a, b| b.total_cmp(a));
        if values.windows(2).all(|w| w[0] - w[1] > MIN_EIGENVALUE_GAP) {
            break values;
        }
    };
    ProjectiveObservable::from_eigenbasis(&eigenvalues, &unitary, basis)
}

/// Uniform direction on the unit sphere in `R^n`.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-8 {
            return v / norm;
        }
    }
}

/// Uniform point in the closed unit ball of `R^3`.
pub fn random_ball_point<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    let dir = random_unit_vector(3, rng);
    let radius: f64 = rng.random::<f64>().cbrt();
    Vector3::new(dir[0], dir[1], dir[2]) * radius
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 2..=6 {
            let u = haar_unitary(d, &mut rng);
            assert!((u.adjoint() * &u - CMatrix::identity(d, d)).camax() < 1e-12);
        }
    }

    #[test]
    fn seeded_draws_repeat() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_state(3, &mut rng).unwrap().into_matrix()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }

    #[test]
    fn ball_points_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            assert!(random_ball_point(&mut rng).norm() <= 1.0);
        }
    }
}
