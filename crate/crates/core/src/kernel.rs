//! Hermitian eigendecomposition, entropies and Schatten norms.
//!
//! Everything here works on tiny dense matrices (d <= 16), so the eigensolver
//! is a plain cyclic complex Jacobi iteration. All logarithms are natural and
//! entropies are in nats.

use num_complex::Complex64;

use crate::bloch::DensityMatrix;
use crate::{CMatrix, Error, Result, CENTER_TOL, POSITIVITY_TOL};

/// Off-diagonal Frobenius mass (relative to `max(1, ||H||_F)`) at which the
/// Jacobi sweeps stop.
const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;
/// Hermiticity tolerance accepted by [`eigh`].
const HERMITIAN_TOL: f64 = 1e-10;
/// Support threshold used by [`relative_entropy`] on the weights of `rho`.
const SUPPORT_WEIGHT_TOL: f64 = 1e-12;

/// Eigenvalues in descending order with the matching eigenvectors as the
/// columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut out = CMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(k);
            out += (v * v.adjoint()) * Complex64::from(lambda);
        }
        out
    }

    /// Rank-1 projector onto the `k`-th eigenvector.
    pub fn projector(&self, k: usize) -> CMatrix {
        let v = self.eigenvectors.column(k);
        v * v.adjoint()
    }
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi diagonalisation of a Hermitian matrix.
///
/// Each pivot `(p, q)` is zeroed by a phase rotation that makes `a_pq` real
/// followed by a real Jacobi rotation.
pub fn eigh(h: &CMatrix) -> Result<Spectrum> {
    let n = check_square(h)?;
    let dev = hermitian_deviation(h);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }

    let mut a = (h + h.adjoint()) * Complex64::from(0.5);
    let mut v = CMatrix::identity(n, n);
    let threshold = JACOBI_TOL * a.norm().max(1.0);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / mag;
                let phase_c = phase.conj();
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // A <- A G with G = [[c, s], [-conj(e) s, conj(e) c]]
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * phase_c * s;
                    a[(k, q)] = akp * s + akq * phase_c * c;
                }
                // A <- G† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * phase_c * s;
                    v[(k, q)] = vkp * s + vkq * phase_c * c;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) >= threshold {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// `-Σ p ln p` over a spectrum, clipping tiny negative round-off.
///
/// Values below `-1e-10` are rejected; values below `1e-14` contribute 0.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in eigenvalues {
        if lambda < -POSITIVITY_TOL {
            return Err(Error::NotAState(format!(
                "eigenvalue {lambda:e} below -{POSITIVITY_TOL:e}"
            )));
        }
        if lambda > CENTER_TOL {
            s -= lambda * lambda.ln();
        }
    }
    Ok(s)
}

/// Von Neumann entropy `-Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let spectrum = eigh(rho.matrix())?;
    entropy_of_spectrum(&spectrum.eigenvalues)
}

/// Relative entropy `Tr ρ (ln ρ - ln σ)` in nats.
///
/// Returns `f64::INFINITY` when the support of `rho` is not contained in the
/// support of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let rho_spec = eigh(rho.matrix())?;
    let sigma_spec = eigh(sigma.matrix())?;

    let neg_entropy = -entropy_of_spectrum(&rho_spec.eigenvalues)?;
    let mut cross = 0.0;
    for (k, &mu) in sigma_spec.eigenvalues.iter().enumerate() {
        let v = sigma_spec.eigenvectors.column(k);
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if mu < CENTER_TOL {
            if weight > SUPPORT_WEIGHT_TOL {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * mu.ln();
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// Schatten `p`-norm for `p` in {1, 2}.
pub fn schatten_norm(o: &CMatrix, p: u32) -> Result<f64> {
    check_square(o)?;
    match p {
        1 => Ok(o.clone().singular_values().sum()),
        2 => Ok(o.norm()),
        _ => Err(Error::InvalidArgument(format!(
            "unsupported Schatten index {p}; expected 1 or 2"
        ))),
    }
}

/// Shannon binary entropy `-t ln t - (1-t) ln(1-t)` in nats.
pub fn binary_entropy(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "binary entropy argument {t} outside [0, 1]"
        )));
    }
    let term = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    Ok(term(t) + term(1.0 - t))
}
