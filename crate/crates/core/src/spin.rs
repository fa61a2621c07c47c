//! Spin operators, SU(2) rotations and spin-coherent states (ħ = 1).
//!
//! The basis of a spin `S` is `|S, m>` with `m = S, S-1, ..., -S`; row `k`
//! corresponds to `m = S - k`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{eigh, DenseMatrix};

/// Spin length stored as `2S`, so half-integers stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpinLength(u32);

impl SpinLength {
    pub const HALF: SpinLength = SpinLength(1);
    pub const ONE: SpinLength = SpinLength(2);

    pub const fn from_twice(two_s: u32) -> Self {
        SpinLength(two_s)
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `2S + 1`.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// `S(S+1)`.
    pub fn casimir(self) -> f64 {
        let s = self.value();
        s * (s + 1.0)
    }

    /// Magnetic quantum number of basis row `k`.
    pub fn m_of(self, k: usize) -> f64 {
        self.value() - k as f64
    }
}

impl fmt::Display for SpinLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Cartesian spin operators of one spin.
#[derive(Debug, Clone)]
pub struct SpinOps {
    pub sx: DenseMatrix,
    pub sy: DenseMatrix,
    pub sz: DenseMatrix,
}

impl SpinOps {
    pub fn components(&self) -> [&DenseMatrix; 3] {
        [&self.sx, &self.sy, &self.sz]
    }

    /// `η · S`.
    pub fn dot(&self, eta: [f64; 3]) -> DenseMatrix {
        let mut g = self.sx.scale(eta[0]);
        g.add_scaled(eta[1], &self.sy);
        g.add_scaled(eta[2], &self.sz);
        g
    }

    /// `S⁺` (raising), real.
    pub fn raising(&self) -> DenseMatrix {
        let i = Complex64::new(0.0, 1.0);
        &self.sx + &self.sy.scale_complex(i)
    }

    pub fn lowering(&self) -> DenseMatrix {
        self.raising().adjoint()
    }
}

/// Axis-angle parameters `η` of `U = exp(i η·S)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationParams {
    pub eta: [f64; 3],
}

impl RotationParams {
    pub fn new(eta: [f64; 3]) -> Self {
        RotationParams { eta }
    }

    pub fn scaled(self, k: f64) -> Self {
        RotationParams {
            eta: self.eta.map(|x| x * k),
        }
    }
}

/// Standard spin matrices: `sx`, `sz` real, `sy` purely imaginary.
pub fn spin_ops(s: SpinLength) -> SpinOps {
    let n = s.dim();
    let sv = s.value();
    // <m+1| S+ |m> sits at row k-1, column k.
    let ladder = |k: usize| -> f64 {
        let m = s.m_of(k);
        (sv * (sv + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
    };
    let mut sx = DenseMatrix::zeros(n);
    let mut sy = DenseMatrix::zeros(n);
    for k in 1..n {
        let a = ladder(k);
        sx[(k - 1, k)] = Complex64::new(0.5 * a, 0.0);
        sx[(k, k - 1)] = Complex64::new(0.5 * a, 0.0);
        sy[(k - 1, k)] = Complex64::new(0.0, -0.5 * a);
        sy[(k, k - 1)] = Complex64::new(0.0, 0.5 * a);
    }
    let diag: Vec<f64> = (0..n).map(|k| s.m_of(k)).collect();
    SpinOps {
        sx: sx.into_hermitian().expect("sx is Hermitian"),
        sy: sy.into_hermitian().expect("sy is Hermitian"),
        sz: DenseMatrix::from_diagonal(&diag),
    }
}

/// `exp(i G)` for a Hermitian generator `G`, via its eigendecomposition.
pub fn exp_i_hermitian(generator: &DenseMatrix) -> Result<DenseMatrix> {
    let e = eigh(generator)?;
    Ok(e.apply_fn(|l| Complex64::from_polar(1.0, l)))
}

/// `U = exp(i η·S)`.
pub fn rotation(s: SpinLength, p: RotationParams) -> DenseMatrix {
    if p.eta == [0.0; 3] {
        return DenseMatrix::identity(s.dim());
    }
    exp_i_hermitian(&spin_ops(s).dot(p.eta)).expect("spin generator is Hermitian")
}

/// The rotation carrying `+z` to the direction `(θ, φ)`: angle θ about the
/// axis `(-sin φ, cos φ, 0)`.
pub fn coherent_rotation(s: SpinLength, polar: f64, azimuth: f64) -> DenseMatrix {
    // exp(-iθ n·S) is the active rotation by θ about n.
    let eta = [azimuth.sin() * polar, -azimuth.cos() * polar, 0.0];
    rotation(s, RotationParams::new(eta))
}

/// Spin-coherent state polarized along `(sinθ cosφ, sinθ sinφ, cosθ)`.
/// The global phase is not fixed.
pub fn coherent_state(s: SpinLength, polar: f64, azimuth: f64) -> Vec<Complex64> {
    coherent_rotation(s, polar, azimuth).column(0)
}

/// `<S>` in the given state.
pub fn spin_expectation(s: SpinLength, psi: &[Complex64]) -> [f64; 3] {
    let ops = spin_ops(s);
    ops.components()
        .map(|op| op.expectation(psi).expect("state dimension matches spin").re)
}

/// Outcome of a numerical identity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(residual: f64, tolerance: f64) -> Self {
        Check {
            residual,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Verifies `U(η)* = exp(i η·(-Sx, Sy, -Sz))` elementwise to 1e-10.
pub fn conjugate_rep_check(s: SpinLength, p: RotationParams) -> Check {
    let u = rotation(s, p);
    let ops = spin_ops(s);
    let mut flipped = ops.sx.scale(-p.eta[0]);
    flipped.add_scaled(p.eta[1], &ops.sy);
    flipped.add_scaled(-p.eta[2], &ops.sz);
    let rhs = exp_i_hermitian(&flipped).expect("generator is Hermitian");
    Check::new(u.conj().max_abs_diff(&rhs).expect("same dimension"), 1e-10)
}
