//! Qudit states in the generalized Bloch representation, nonselective
//! projective measurements, and the decay of irreality under sequential
//! pairwise monitoring of two observables.
//!
//! The crate is organised bottom-up:
//!
//! - [`kernel`]: Hermitian eigensolver, entropies and Schatten norms.
//! - [`bloch`]: SU(d) generators, density matrix <-> Bloch vector maps and
//!   observables represented as regular simplices.
//! - [`channels`]: the dephasing map, its Bloch-space projector, sequential
//!   composition and the Stinespring dilation check.
//! - [`bounds`]: irreality, the entropy-continuity bound and the number of
//!   monitoring steps sufficient to reach a target irreality.
//! - [`experiments`]: qubit closed form, the qutrit angle sweep and CSV I/O.
//! - [`validate`]: seeded property suites shared by the CLI.

pub mod bloch;
pub mod bounds;
pub mod channels;
mod error;
pub mod experiments;
pub mod kernel;
pub mod random;
pub mod validate;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use bloch::{BlochVector, DensityMatrix, GellMannBasis, ProjectiveObservable};
pub use bounds::BoundReport;
pub use channels::{SimplexProjector, Trajectory, TrajectoryStep};
pub use error::{Error, Result};
pub use kernel::Spectrum;

/// Dense complex matrix used for operators on the qudit Hilbert space.
pub type CMatrix = DMatrix<Complex64>;

/// Absolute tolerance for algebraic identities.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Tolerance on the smallest eigenvalue of a state.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Norms below this are treated as the centre of the Bloch ball.
pub const CENTER_TOL: f64 = 1e-14;
