//! Random operators, unitaries and invariant states for property checks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::DenseMatrix;
use crate::spin::{exp_i_hermitian, rotation, RotationParams, SpinLength};
use crate::state::InvariantState;

fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Arbitrary complex matrix with Gaussian entries.
pub fn random_operator<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DenseMatrix {
    DenseMatrix::from_fn(dim, |_, _| Complex64::new(standard_normal(rng), standard_normal(rng)))
}

/// Hermitian matrix from the GUE-like ensemble.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DenseMatrix {
    random_operator(rng, dim).hermitian_part()
}

/// Random density matrix `A A^+ / Tr(A A^+)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DenseMatrix {
    let a = random_operator(rng, dim);
    let m = a.matmul(&a.adjoint()).expect("square").hermitian_part();
    let tr = m.trace().re;
    m.scale(1.0 / tr)
}

/// Random unitary `exp(iH)` with a random Hermitian generator.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DenseMatrix {
    exp_i_hermitian(&random_hermitian(rng, dim)).expect("generator is Hermitian")
}

/// Random rotation angles, each component uniform in `[-π, π]`.
pub fn random_rotation_params<R: Rng + ?Sized>(rng: &mut R) -> RotationParams {
    let pi = std::f64::consts::PI;
    RotationParams::new([0; 3].map(|_| rng.gen_range(-pi..pi)))
}

/// SU(2) rotation of spin `s` with random angles.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R, s: SpinLength) -> DenseMatrix {
    rotation(s, random_rotation_params(rng))
}

/// Invariant state with weights drawn uniformly from the simplex.
pub fn random_invariant_state<R: Rng + ?Sized>(rng: &mut R, s1: SpinLength, s2: SpinLength) -> InvariantState {
    let n = crate::clebsch_gordan::coupled_twice_j(s1, s2).len();
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    InvariantState::normalized(s1, s2, w).expect("exponential weights are positive")
}
