//! Generalized Bloch representation of qudit states and observables.
//!
//! A state on `C^d` is written as `ρ = (1/d)(𝟙 + C_d r·Λ)` where `Λ` are the
//! `d²-1` generalized Gell-Mann matrices normalised to `Tr(Λ_i Λ_j) = 2δ_ij`
//! and `C_d = sqrt(d(d-1)/2)`. With this scaling pure states sit on the unit
//! sphere and the rank-1 projectors of a nondegenerate observable map to the
//! vertices of a regular simplex centred at the origin.
//!
//! Generator ordering: symmetric generators `|j⟩⟨k| + |k⟩⟨j|` for `j < k` in
//! lexicographic order, then antisymmetric generators `-i|j⟩⟨k| + i|k⟩⟨j|` in
//! the same order, then the diagonal generators of increasing rank. For
//! `d = 2` this yields `(σ_x, σ_y, σ_z)`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::kernel::{self, hermitian_deviation};
use crate::{CMatrix, Error, Result, ALGEBRA_TOL, POSITIVITY_TOL};

/// Tolerance for projector completeness/orthogonality and simplex geometry.
const PROJECTOR_TOL: f64 = 1e-10;
/// Minimum eigenvalue gap for a rank-1 simplex observable.
const DEGENERACY_GAP: f64 = 1e-9;

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(())
}

fn check_same(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `Tr(a b)` without forming the product.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// The `d²-1` traceless Hermitian generators of SU(d).
#[derive(Debug, Clone)]
pub struct GellMannBasis {
    dim: usize,
    generators: Vec<CMatrix>,
    c_d: f64,
}

impl GellMannBasis {
    pub fn new(d: usize) -> Result<Self> {
        build_gellmann(d)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length of a Bloch vector, `d² - 1`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// `C_d = sqrt(d(d-1)/2)`.
    pub fn c_d(&self) -> f64 {
        self.c_d
    }

    /// Coefficients `d·Tr(M Λ_j)/(2 C_d)` of a Hermitian matrix.
    fn coordinates(&self, m: &CMatrix) -> DVector<f64> {
        let scale = self.dim as f64 / (2.0 * self.c_d);
        DVector::from_iterator(
            self.len(),
            self.generators
                .iter()
                .map(|g| trace_product(m, g).re * scale),
        )
    }

    /// `(1/d)(𝟙 + C_d r·Λ)` with no positivity check.
    fn synthesize(&self, r: &DVector<f64>) -> CMatrix {
        let d = self.dim;
        let mut m = CMatrix::identity(d, d);
        for (g, &ri) in self.generators.iter().zip(r.iter()) {
            if ri != 0.0 {
                m += g * Complex64::from(self.c_d * ri);
            }
        }
        m / Complex64::from(d as f64)
    }
}

/// Builds the generalized Gell-Mann basis for dimension `d`.
pub fn build_gellmann(d: usize) -> Result<GellMannBasis> {
    check_dim(d)?;
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut generators = Vec::with_capacity(d * d - 1);

    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = one;
            m[(k, j)] = one;
            generators.push(m);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = -i;
            m[(k, j)] = i;
            generators.push(m);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for idx in 0..l {
            m[(idx, idx)] = Complex64::from(norm);
        }
        m[(l, l)] = Complex64::from(-(l as f64) * norm);
        generators.push(m);
    }

    Ok(GellMannBasis {
        dim: d,
        generators,
        c_d: ((d * (d - 1)) as f64 / 2.0).sqrt(),
    })
}

/// Real vector of length `d² - 1` encoding a qudit state.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    dim: usize,
    r: DVector<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, r: DVector<f64>) -> Result<Self> {
        check_dim(dim)?;
        check_same(dim * dim - 1, r.len())?;
        Ok(Self { dim, r })
    }

    pub fn from_slice(dim: usize, r: &[f64]) -> Result<Self> {
        Self::new(dim, DVector::from_column_slice(r))
    }

    /// The centre of the ball, i.e. the maximally mixed state.
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            r: DVector::zeros(dim * dim - 1),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self) -> &DVector<f64> {
        &self.r
    }

    pub fn as_slice(&self) -> &[f64] {
        self.r.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.r.norm()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.r.dot(&other.r)
    }

    pub(crate) fn from_raw(dim: usize, r: DVector<f64>) -> Self {
        debug_assert_eq!(r.len(), dim * dim - 1);
        Self { dim, r }
    }
}

/// A validated qudit density matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        check_dim(m.nrows())?;
        let dev = hermitian_deviation(&m);
        if dev > ALGEBRA_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let m = (&m + m.adjoint()) * Complex64::from(0.5);
        let trace = m.trace().re;
        if (trace - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::NotAState(format!("trace {trace} differs from 1")));
        }
        let spectrum = kernel::eigh(&m)?;
        let min = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -POSITIVITY_TOL {
            return Err(Error::NotAState(format!("smallest eigenvalue {min:e}")));
        }
        Ok(Self { m })
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) nonzero vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let v = DVector::from_column_slice(psi);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let v = v / Complex64::from(norm);
        Self::new(&v * v.adjoint())
    }

    /// `𝟙/d`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(Self {
            m: CMatrix::identity(d, d) / Complex64::from(d as f64),
        })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }
}

/// Maps a density matrix to its Bloch vector `r_j = d Tr(ρ Λ_j) / (2 C_d)`.
pub fn to_bloch(rho: &DensityMatrix, basis: &GellMannBasis) -> Result<BlochVector> {
    check_same(basis.dim(), rho.dim())?;
    Ok(BlochVector::from_raw(basis.dim(), basis.coordinates(rho.matrix())))
}

/// Maps a Bloch vector back to `ρ = (1/d)(𝟙 + C_d r·Λ)`.
///
/// Fails with [`Error::NotAState`] when the vector lies outside the state
/// body; for `d >= 3` that body is a strict subset of the unit ball.
pub fn from_bloch(r: &BlochVector, basis: &GellMannBasis) -> Result<DensityMatrix> {
    check_same(basis.dim(), r.dim())?;
    let m = basis.synthesize(r.vector());
    let spectrum = kernel::eigh(&m)?;
    let min = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -POSITIVITY_TOL {
        return Err(Error::NotAState(format!(
            "Bloch vector of norm {:.6} gives smallest eigenvalue {min:e}",
            r.norm()
        )));
    }
    Ok(DensityMatrix { m })
}

/// A nondegenerate projective observable with its Bloch-space simplex.
#[derive(Debug, Clone)]
pub struct ProjectiveObservable {
    dim: usize,
    eigenvalues: Vec<f64>,
    projectors: Vec<CMatrix>,
    vertices: Vec<DVector<f64>>,
}

impl ProjectiveObservable {
    /// Diagonalises a Hermitian matrix and builds its simplex.
    pub fn from_hermitian(h: &CMatrix, basis: &GellMannBasis) -> Result<Self> {
        let spectrum = kernel::eigh(h)?;
        let projectors = (0..spectrum.eigenvalues.len())
            .map(|k| spectrum.projector(k))
            .collect::<Vec<_>>();
        observable_simplex(&spectrum.eigenvalues, &projectors, basis)
    }

    /// Observable with eigenvectors given by the columns of a unitary.
    pub fn from_eigenbasis(
        eigenvalues: &[f64],
        unitary: &CMatrix,
        basis: &GellMannBasis,
    ) -> Result<Self> {
        let projectors = (0..unitary.ncols())
            .map(|k| {
                let v = unitary.column(k);
                v * v.adjoint()
            })
            .collect::<Vec<_>>();
        observable_simplex(eigenvalues, &projectors, basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    /// `Σ a_i A_i`.
    pub fn matrix(&self) -> CMatrix {
        let d = self.dim;
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(CMatrix::zeros(d, d), |acc, (&a, p)| acc + p * Complex64::from(a))
    }

    /// `(C_d/d) Σ a_i a⃗_i`; for traceless observables `A = a⃗·Λ`.
    pub fn bloch_direction(&self, basis: &GellMannBasis) -> DVector<f64> {
        let scale = basis.c_d() / self.dim as f64;
        self.eigenvalues
            .iter()
            .zip(&self.vertices)
            .fold(DVector::zeros(basis.len()), |acc, (&a, v)| acc + v * (a * scale))
    }

    /// True when the two observables share all eigenprojectors up to order.
    pub fn commutes_with(&self, other: &ProjectiveObservable) -> bool {
        let a = self.matrix();
        let b = other.matrix();
        (&a * &b - &b * &a).camax() < PROJECTOR_TOL
    }
}

/// Builds the simplex representation of a complete set of rank-1 projectors.
pub fn observable_simplex(
    eigenvalues: &[f64],
    projectors: &[CMatrix],
    basis: &GellMannBasis,
) -> Result<ProjectiveObservable> {
    let d = basis.dim();
    if projectors.len() != d || eigenvalues.len() != d {
        return Err(Error::InvalidProjectors(format!(
            "expected {d} eigenvalues and rank-1 projectors, got {} and {}",
            eigenvalues.len(),
            projectors.len()
        )));
    }
    let mut sorted = eigenvalues.to_vec();
    sorted.sort_by(f64::total_cmp);
    for w in sorted.windows(2) {
        if w[1] - w[0] < DEGENERACY_GAP {
            return Err(Error::DegenerateSpectrum(w[0], w[1]));
        }
    }

    let identity = CMatrix::identity(d, d);
    let mut sum = CMatrix::zeros(d, d);
    for (i, p) in projectors.iter().enumerate() {
        check_same(d, p.nrows())?;
        check_same(d, p.ncols())?;
        if hermitian_deviation(p) > PROJECTOR_TOL {
            return Err(Error::InvalidProjectors(format!("projector {i} is not Hermitian")));
        }
        if (p.trace().re - 1.0).abs() > PROJECTOR_TOL {
            return Err(Error::InvalidProjectors(format!("projector {i} is not rank 1")));
        }
        for (j, q) in projectors.iter().enumerate().skip(i) {
            let target = if i == j { p.clone() } else { CMatrix::zeros(d, d) };
            if (p * q - target).camax() > PROJECTOR_TOL {
                return Err(Error::InvalidProjectors(format!(
                    "projectors {i} and {j} are not orthogonal idempotents"
                )));
            }
        }
        sum += p;
    }
    if (sum - identity).camax() > PROJECTOR_TOL {
        return Err(Error::InvalidProjectors("projectors do not sum to identity".into()));
    }

    let vertices = projectors.iter().map(|p| basis.coordinates(p)).collect();
    Ok(ProjectiveObservable {
        dim: d,
        eigenvalues: eigenvalues.to_vec(),
        projectors: projectors.to_vec(),
        vertices,
    })
}

/// Probability of outcome `i`: `(1/d)[1 + (d-1) a⃗_i·r⃗]`.
pub fn outcome_probability(
    r: &BlochVector,
    obs: &ProjectiveObservable,
    i: usize,
) -> Result<f64> {
    check_same(obs.dim(), r.dim())?;
    let vertex = obs.vertices().get(i).ok_or(Error::IndexOutOfRange {
        index: i,
        len: obs.dim(),
    })?;
    let d = obs.dim() as f64;
    Ok((1.0 + (d - 1.0) * vertex.dot(r.vector())) / d)
}
