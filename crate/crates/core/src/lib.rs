//! Entanglement of SU(2)-invariant two-spin density matrices.
//!
//! The crate builds rotation-invariant states of two spins, analyzes their
//! partial transpose (numerically and through closed-form spectra), produces
//! explicit separable decompositions when one of the spins is 1/2, and
//! obtains such states from thermal equilibrium of isotropic Heisenberg
//! models by exact diagonalization.
//!
//! Batch loops run on rayon when the `parallel` feature is enabled (the
//! default); see [`exec::Execution`].

pub mod clebsch_gordan;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod ppt;
pub mod sampling;
pub mod separability;
pub mod spin;
pub mod state;
pub mod thermal;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use exec::Execution;
pub use linalg::{DenseMatrix, Spectrum};
pub use ppt::{analyze, PtReport, Verdict};
pub use separability::{decompose, Decomposition};
pub use spin::SpinLength;
pub use state::{CorrelatorSet, InvariantState};
pub use thermal::{ExactDiagonalization, LatticeSpec, Temperature};
