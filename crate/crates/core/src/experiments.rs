//! Reproducible experiments: the qubit closed form, the qutrit angle sweep,
//! seeded random instances and sweep CSV I/O.
//!
//! The qutrit sweep starts from the `S_z = -1` eigenstate and monitors
//! `A = S_z cos φ + S_x sin φ` followed by `B = S_z`. Each cell holds the
//! maximal irreality `ln 3 - S((Φ_B Φ_A)^n ρ)`.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bloch::{
    build_gellmann, from_bloch, to_bloch, BlochVector, DensityMatrix, ProjectiveObservable,
};
use crate::bounds::max_irreality;
use crate::channels::{phi_projectors, simplex_projector};
use crate::kernel::eigh;
use crate::random::{random_observable, random_state};
use crate::{CMatrix, Error, Result};

/// Header of the sweep CSV.
pub const CSV_HEADER: &str = "phi_rad,n,max_irreality_nats,bloch_norm";
/// Significant digits for every real printed to the CSV.
pub const CSV_DIGITS: usize = 12;
const PHI_TOL: f64 = 1e-12;
const CROSS_CHECK_CELLS: usize = 8;
const CROSS_CHECK_TOL: f64 = 1e-9;
const UNIT_TOL: f64 = 1e-9;

/// Spin-1 matrices `(S_x, S_y, S_z)` with `ħ = 1` and `S_z = diag(1, 0, -1)`.
pub fn spin1_operators() -> (CMatrix, CMatrix, CMatrix) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    let sx = CMatrix::from_row_slice(3, 3, &[z, re(s), z, re(s), z, re(s), z, re(s), z]);
    let sy = CMatrix::from_row_slice(3, 3, &[z, im(-s), z, im(s), z, im(-s), z, im(s), z]);
    let sz = CMatrix::from_row_slice(3, 3, &[re(1.0), z, z, z, z, z, z, z, re(-1.0)]);
    (sx, sy, sz)
}

/// `n̂·σ` for a qubit direction.
pub fn qubit_observable(direction: [f64; 3]) -> CMatrix {
    let basis = build_gellmann(2).expect("d = 2 is valid");
    basis
        .generators()
        .iter()
        .zip(direction)
        .fold(CMatrix::zeros(2, 2), |acc, (g, x)| acc + g * Complex64::new(x, 0.0))
}

/// Discrete Fourier matrix `F_jk = ω^{jk} / sqrt(d)`; its columns are
/// unbiased with respect to the computational basis.
pub fn fourier_unitary(d: usize) -> CMatrix {
    let norm = (d as f64).sqrt();
    CMatrix::from_fn(d, d, |j, k| {
        let angle = 2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64;
        Complex64::from_polar(1.0 / norm, angle)
    })
}

/// `A(φ) = S_z cos φ + S_x sin φ`.
pub fn qutrit_observable(phi: f64) -> CMatrix {
    let (sx, _, sz) = spin1_operators();
    sz * Complex64::new(phi.cos(), 0.0) + sx * Complex64::new(phi.sin(), 0.0)
}

/// The `S_z = -1` eigenstate `|2⟩⟨2|`.
pub fn qutrit_initial_state() -> DensityMatrix {
    let z = Complex64::new(0.0, 0.0);
    DensityMatrix::pure(&[z, z, Complex64::new(1.0, 0.0)]).expect("pure state")
}

/// `points` uniform angles on `[0, π/2]`, endpoints included.
pub fn default_phi_grid(points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidArgument(format!(
            "phi grid needs at least 2 points, got {points}"
        )));
    }
    let step = FRAC_PI_2 / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i + 1 == points { FRAC_PI_2 } else { i as f64 * step })
        .collect())
}

/// Descriptors of the swept configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepMetadata {
    pub initial_state: String,
    pub observable_a: String,
    pub observable_b: String,
}

/// Maximal irreality over a `(φ, n)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub phi_values: Vec<f64>,
    pub n_values: Vec<usize>,
    /// `results[i][j]` is the value at `(phi_values[i], n_values[j])`, in nats.
    pub results: Vec<Vec<f64>>,
    /// Bloch norm `||r_n||` for the same cells.
    pub norms: Vec<Vec<f64>>,
    pub metadata: SweepMetadata,
}

impl SweepGrid {
    pub fn value(&self, phi_index: usize, n_index: usize) -> f64 {
        self.results[phi_index][n_index]
    }

    pub fn cell_count(&self) -> usize {
        self.phi_values.len() * self.n_values.len()
    }
}

fn bloch_norm_of(rho: &CMatrix) -> f64 {
    let d = rho.nrows();
    let centred = rho - CMatrix::identity(d, d) / Complex64::new(d as f64, 0.0);
    (d as f64 / (d as f64 - 1.0)).sqrt() * centred.norm()
}

/// Sweeps the qutrit configuration over `phi_grid` and `n = 1..=n_max`.
///
/// Cells are computed by repeated dephasing of 3x3 matrices; a handful of
/// cells are recomputed through the Bloch projectors and must agree.
pub fn qutrit_sweep(phi_grid: &[f64], n_max: usize) -> Result<SweepGrid> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    if phi_grid.is_empty() {
        return Err(Error::InvalidArgument("empty phi grid".into()));
    }
    for &phi in phi_grid {
        if !(-PHI_TOL..=FRAC_PI_2 + PHI_TOL).contains(&phi) {
            return Err(Error::InvalidArgument(format!("phi = {phi} outside [0, π/2]")));
        }
    }

    let (_, _, sz) = spin1_operators();
    let b_projectors = spectral_projectors(&sz)?;
    let mut results = Vec::with_capacity(phi_grid.len());
    let mut norms = Vec::with_capacity(phi_grid.len());
    for &phi in phi_grid {
        let a_projectors = spectral_projectors(&qutrit_observable(phi))?;
        let mut rho = qutrit_initial_state();
        let mut row = Vec::with_capacity(n_max);
        let mut norm_row = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            rho = phi_projectors(&phi_projectors(&rho, &a_projectors)?, &b_projectors)?;
            row.push(max_irreality(&rho)?);
            norm_row.push(bloch_norm_of(rho.matrix()));
        }
        results.push(row);
        norms.push(norm_row);
    }

    let grid = SweepGrid {
        phi_values: phi_grid.to_vec(),
        n_values: (1..=n_max).collect(),
        results,
        norms,
        metadata: SweepMetadata {
            initial_state: "S_z eigenstate, eigenvalue -1".into(),
            observable_a: "S_z cos(phi) + S_x sin(phi)".into(),
            observable_b: "S_z".into(),
        },
    };
    bloch_cross_check(&grid)?;
    Ok(grid)
}

fn spectral_projectors(h: &CMatrix) -> Result<Vec<CMatrix>> {
    let spectrum = eigh(h)?;
    Ok((0..spectrum.eigenvalues.len())
        .map(|k| spectrum.projector(k))
        .collect())
}

/// Recomputes evenly spaced cells through `(P_B P_A)^n r_0`.
fn bloch_cross_check(grid: &SweepGrid) -> Result<()> {
    let basis = build_gellmann(3)?;
    let (_, _, sz) = spin1_operators();
    let obs_b = ProjectiveObservable::from_hermitian(&sz, &basis)?;
    let pb = simplex_projector(&obs_b);
    let r0 = to_bloch(&qutrit_initial_state(), &basis)?;

    let total = grid.cell_count();
    let samples = CROSS_CHECK_CELLS.min(total);
    for s in 0..samples {
        let cell = s * total / samples;
        let (i, j) = (cell / grid.n_values.len(), cell % grid.n_values.len());
        let obs_a = ProjectiveObservable::from_hermitian(&qutrit_observable(grid.phi_values[i]), &basis)?;
        let pair = pb.matrix() * simplex_projector(&obs_a).matrix();
        let mut r = r0.vector().clone();
        for _ in 0..grid.n_values[j] {
            r = &pair * &r;
        }
        let r = BlochVector::new(3, r)?;
        let value = max_irreality(&from_bloch(&r, &basis)?)?;
        let dv = (value - grid.results[i][j]).abs();
        let dn = (r.norm() - grid.norms[i][j]).abs();
        if dv > CROSS_CHECK_TOL || dn > CROSS_CHECK_TOL {
            return Err(Error::CrossCheck(format!(
                "cell (phi={}, n={}) differs by {dv:e} in irreality and {dn:e} in norm",
                grid.phi_values[i], grid.n_values[j]
            )));
        }
    }
    Ok(())
}

fn check_unit(name: &str, v: &Vector3<f64>) -> Result<()> {
    if (v.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidArgument(format!(
            "{name} must be a unit vector, has norm {}",
            v.norm()
        )));
    }
    Ok(())
}

/// Qubit trajectory in closed form: `r_n = (â·b̂)^{2n-1} (â·r_0) b̂`.
pub fn qubit_closed_form(
    r0: &Vector3<f64>,
    a_hat: &Vector3<f64>,
    b_hat: &Vector3<f64>,
    n: usize,
) -> Result<BlochVector> {
    check_unit("a_hat", a_hat)?;
    check_unit("b_hat", b_hat)?;
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let factor = a_hat.dot(b_hat).powi(2 * n as i32 - 1) * a_hat.dot(r0);
    BlochVector::from_slice(2, (b_hat * factor).as_slice())
}

/// A seeded random configuration: Ginibre state plus three Haar-random
/// nondegenerate observables.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub rho: DensityMatrix,
    pub a: ProjectiveObservable,
    pub b: ProjectiveObservable,
    pub x: ProjectiveObservable,
}

pub fn random_instance(d: usize, seed: u64) -> Result<RandomInstance> {
    if !(2..=16).contains(&d) {
        return Err(Error::InvalidArgument(format!("d = {d} outside [2, 16]")));
    }
    let basis = build_gellmann(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(RandomInstance {
        rho: random_state(d, &mut rng)?,
        a: random_observable(d, &basis, &mut rng)?,
        b: random_observable(d, &basis, &mut rng)?,
        x: random_observable(d, &basis, &mut rng)?,
    })
}

/// Formats a real with `digits` significant digits, using positional
/// notation for moderate exponents and scientific notation otherwise.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Renders the grid in the CSV schema, one row per cell, φ-major.
pub fn sweep_csv_string(grid: &SweepGrid) -> String {
    let mut out = String::with_capacity(64 * (grid.cell_count() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, &phi) in grid.phi_values.iter().enumerate() {
        for (j, &n) in grid.n_values.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                format_significant(phi, CSV_DIGITS),
                n,
                format_significant(grid.results[i][j], CSV_DIGITS),
                format_significant(grid.norms[i][j], CSV_DIGITS),
            ));
        }
    }
    out
}

/// Writes `contents` to a temporary file next to `path` and renames it into
/// place, so a failed write never leaves a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn emit_sweep_csv(grid: &SweepGrid, path: &Path) -> Result<()> {
    write_atomic(path, sweep_csv_string(grid).as_bytes())
}

/// Parses a sweep CSV back into a grid, requiring a complete rectangle.
pub fn parse_sweep_csv(text: &str) -> Result<SweepGrid> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        Some((_, h)) => {
            return Err(Error::Csv {
                line: 1,
                msg: format!("unexpected header {h:?}"),
            })
        }
        None => {
            return Err(Error::Csv {
                line: 1,
                msg: "empty file".into(),
            })
        }
    }

    let mut rows: Vec<(f64, usize, f64, f64)> = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| Error::Csv { line: idx + 1, msg };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(bad(format!("expected 4 fields, found {}", fields.len())));
        }
        let real = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("{s:?}: {e}")));
        let n = fields[1]
            .parse::<usize>()
            .map_err(|e| bad(format!("{:?}: {e}", fields[1])))?;
        rows.push((real(fields[0])?, n, real(fields[2])?, real(fields[3])?));
    }

    let mut phi_values: Vec<f64> = Vec::new();
    let mut n_values: Vec<usize> = Vec::new();
    for &(phi, n, _, _) in &rows {
        if !phi_values.contains(&phi) {
            phi_values.push(phi);
        }
        if !n_values.contains(&n) {
            n_values.push(n);
        }
    }
    let mut results = vec![vec![f64::NAN; n_values.len()]; phi_values.len()];
    let mut norms = results.clone();
    for &(phi, n, value, norm) in &rows {
        let i = phi_values.iter().position(|&p| p == phi).expect("collected");
        let j = n_values.iter().position(|&m| m == n).expect("collected");
        if !results[i][j].is_nan() {
            return Err(Error::Csv {
                line: 0,
                msg: format!("duplicate cell (phi={phi}, n={n})"),
            });
        }
        results[i][j] = value;
        norms[i][j] = norm;
    }
    for (i, row) in results.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.is_nan() {
                return Err(Error::Csv {
                    line: 0,
                    msg: format!("missing cell (phi={}, n={})", phi_values[i], n_values[j]),
                });
            }
        }
    }
    Ok(SweepGrid {
        phi_values,
        n_values,
        results,
        norms,
        metadata: SweepMetadata {
            initial_state: String::new(),
            observable_a: String::new(),
            observable_b: String::new(),
        },
    })
}

pub fn read_sweep_csv(path: &Path) -> Result<SweepGrid> {
    parse_sweep_csv(&fs::read_to_string(path)?)
}
