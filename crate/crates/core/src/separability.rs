//! Explicit separable decompositions for invariant states of a spin `S` and
//! a spin 1/2.
//!
//! A PPT state of this family has `<S1·S2> = (S/2) cos γ` for some angle γ.
//! Averaging the product of coherent states `|S, ẑ> ⊗ |1/2, n(γ)>` over all
//! simultaneous rotations gives an invariant, separable state with the same
//! correlator, hence the target state itself. The group average is realized
//! as a finite Euler-angle product quadrature, which is exact once the order
//! exceeds `2(S1 + S2)`, so the certificate is a finite convex mixture of
//! product projectors.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{pairwise_sum, Execution};
use crate::linalg::{eigh, kron, kron_vec, trace_distance, DenseMatrix, Eigh};
use crate::spin::{coherent_state, spin_ops, SpinLength};
use crate::state::InvariantState;

pub const DEFAULT_ORDER: usize = 16;
pub const MAX_ORDER: usize = 64;
pub const DEFAULT_RECONSTRUCTION_TOL: f64 = 1e-6;

/// Text stored alongside a certificate describing how to rebuild it.
pub const CONVENTION: &str = "node state = (U1 |S1,S1>) x (U2 |coherent(polar=gamma, azimuth=0)>), \
U_a = exp(-i a0 Sz) exp(-i a1 Sy) exp(-i a2 Sz) for euler = [a0, a1, a2]; \
basis |S,m> ordered m = S..-S, spin 1 is the slow index";

/// One quadrature node: Euler angles `(α, β, γ)` and a convex weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureNode {
    pub euler: [f64; 3],
    pub weight: f64,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Product quadrature over SU(2) with `order` points per Euler angle.
/// Weights are normalized to sum to one.
pub fn quadrature_nodes(order: usize) -> Vec<QuadratureNode> {
    let gl = gauss_legendre(order);
    let step = 2.0 * PI / order as f64;
    let mut nodes = Vec::with_capacity(order * order * order);
    for a in 0..order {
        for &(x, wx) in &gl {
            for c in 0..order {
                nodes.push(QuadratureNode {
                    euler: [a as f64 * step, x.acos(), c as f64 * step],
                    weight: wx,
                });
            }
        }
    }
    let total: f64 = nodes.iter().map(|n| n.weight).sum();
    for n in &mut nodes {
        n.weight /= total;
    }
    nodes
}

/// Precomputed pieces for `exp(-iα Sz) exp(-iβ Sy) exp(-iγ Sz)` of one spin.
struct EulerRotor {
    m_values: Vec<f64>,
    sy: Eigh,
}

impl EulerRotor {
    fn new(s: SpinLength) -> Self {
        EulerRotor {
            m_values: (0..s.dim()).map(|k| s.m_of(k)).collect(),
            sy: eigh(&spin_ops(s).sy).expect("Sy is Hermitian"),
        }
    }

    fn matrix(&self, euler: [f64; 3]) -> DenseMatrix {
        let ry = self.sy.apply_fn(|l| Complex64::from_polar(1.0, -euler[1] * l));
        let phase = |angle: f64, k: usize| Complex64::from_polar(1.0, -angle * self.m_values[k]);
        DenseMatrix::from_fn(self.m_values.len(), |i, j| {
            phase(euler[0], i) * ry[(i, j)] * phase(euler[2], j)
        })
    }

    fn apply(&self, euler: [f64; 3], v: &[Complex64]) -> Vec<Complex64> {
        self.matrix(euler).matvec(v).expect("vector matches spin")
    }
}

/// Average of `m` over simultaneous rotations `U1 ⊗ U2` at the given order.
pub fn haar_average(m: &DenseMatrix, s1: SpinLength, s2: SpinLength, order: usize) -> Result<DenseMatrix> {
    haar_average_with(m, s1, s2, order, Execution::default())
}

pub fn haar_average_with(
    m: &DenseMatrix,
    s1: SpinLength,
    s2: SpinLength,
    order: usize,
    exec: Execution,
) -> Result<DenseMatrix> {
    let dim = s1.dim() * s2.dim();
    if m.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.dim(),
        });
    }
    if order == 0 {
        return Err(Error::Argument("quadrature order must be positive".into()));
    }
    let (r1, r2) = (EulerRotor::new(s1), EulerRotor::new(s2));
    let nodes = quadrature_nodes(order);
    let terms = exec.map(&nodes, |node| {
        let u = kron(&r1.matrix(node.euler), &r2.matrix(node.euler)).expect("small dimension");
        let rotated = u.matmul(m).and_then(|x| x.matmul(&u.adjoint())).expect("dims match");
        rotated.scale(node.weight)
    });
    let sum = pairwise_sum(terms, |a, b| &a + &b).expect("at least one node");
    Ok(if m.is_hermitian() { sum.hermitian_part() } else { sum })
}

/// A separability certificate: a convex mixture of rotated product states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// `2 S1`; the second spin is 1/2.
    pub s1: u32,
    pub s2: u32,
    pub c1: f64,
    /// Angle between the two coherent-state polarizations.
    pub gamma: f64,
    pub order: usize,
    pub convention: String,
    pub nodes: Vec<QuadratureNode>,
    /// Trace distance between the mixture and the target state.
    pub reconstruction_error: f64,
}

impl Decomposition {
    fn spins(&self) -> (SpinLength, SpinLength) {
        (SpinLength::from_twice(self.s1), SpinLength::from_twice(self.s2))
    }

    /// The product-state pairs `(ψ1, ψ2, weight)` making up the mixture.
    pub fn product_states(&self) -> Vec<(Vec<Complex64>, Vec<Complex64>, f64)> {
        let (s1, s2) = self.spins();
        let (r1, r2) = (EulerRotor::new(s1), EulerRotor::new(s2));
        let (v1, v2) = (coherent_state(s1, 0.0, 0.0), coherent_state(s2, self.gamma, 0.0));
        self.nodes
            .iter()
            .map(|n| (r1.apply(n.euler, &v1), r2.apply(n.euler, &v2), n.weight))
            .collect()
    }

    /// `Σ w |ψ1 ψ2><ψ1 ψ2|`.
    pub fn mixture(&self, exec: Execution) -> DenseMatrix {
        let (s1, s2) = self.spins();
        let (r1, r2) = (EulerRotor::new(s1), EulerRotor::new(s2));
        let (v1, v2) = (coherent_state(s1, 0.0, 0.0), coherent_state(s2, self.gamma, 0.0));
        let terms = exec.map(&self.nodes, |n| {
            let psi = kron_vec(&r1.apply(n.euler, &v1), &r2.apply(n.euler, &v2));
            DenseMatrix::outer(&psi).scale(n.weight)
        });
        pairwise_sum(terms, |a, b| &a + &b)
            .map(|m| m.hermitian_part())
            .unwrap_or_else(|| DenseMatrix::zeros(s1.dim() * s2.dim()))
    }

    /// Recomputes the trace distance to `target`, independently of the
    /// stored `reconstruction_error`.
    pub fn verify(&self, target: &InvariantState) -> Result<f64> {
        if self.nodes.iter().any(|n| n.weight < 0.0) {
            return Err(Error::ContractViolation("negative mixture weight".into()));
        }
        trace_distance(&self.mixture(Execution::default()), &target.to_matrix())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DecomposeOptions {
    pub order: usize,
    pub max_order: usize,
    pub tolerance: f64,
    pub exec: Execution,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            order: DEFAULT_ORDER,
            max_order: MAX_ORDER,
            tolerance: DEFAULT_RECONSTRUCTION_TOL,
            exec: Execution::default(),
        }
    }
}

/// Builds a separability certificate for a PPT state with `S2 = 1/2`.
pub fn decompose(st: &InvariantState) -> Result<Decomposition> {
    decompose_with(st, DecomposeOptions::default())
}

pub fn decompose_with(st: &InvariantState, opts: DecomposeOptions) -> Result<Decomposition> {
    let (s1, s2) = (st.s1(), st.s2());
    if s2 != SpinLength::HALF || s1.twice() == 0 {
        return Err(Error::Argument(format!(
            "certificates need S1 >= 1/2 and S2 = 1/2, got S1 = {s1}, S2 = {s2}"
        )));
    }
    let sv = s1.value();
    let c1 = st.correlators().c1;
    // The PPT boundary c1 = -S/2 is included; rounding can push c1 below it.
    let bound = -sv / 2.0;
    if c1 < bound - 1e-12 {
        return Err(Error::CertificateUnavailable { c1, bound });
    }
    let gamma = (2.0 * c1 / sv).clamp(-1.0, 1.0).acos();
    let target = st.to_matrix();

    let mut order = opts.order.max(1);
    loop {
        let mut dec = Decomposition {
            s1: s1.twice(),
            s2: s2.twice(),
            c1,
            gamma,
            order,
            convention: CONVENTION.to_string(),
            nodes: quadrature_nodes(order),
            reconstruction_error: f64::INFINITY,
        };
        dec.reconstruction_error = trace_distance(&dec.mixture(opts.exec), &target)?;
        if dec.reconstruction_error <= opts.tolerance {
            return Ok(dec);
        }
        if order >= opts.max_order {
            return Err(Error::Convergence {
                achieved: dec.reconstruction_error,
                target: opts.tolerance,
            });
        }
        order = (order * 2).min(opts.max_order);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{from_correlators_half, twirl};
    use approx::assert_abs_diff_eq;

    const HALF: SpinLength = SpinLength::HALF;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let gl = gauss_legendre(8);
        let w: f64 = gl.iter().map(|p| p.1).sum();
        assert_abs_diff_eq!(w, 2.0, epsilon = 1e-14);
        // ∫ x^14 = 2/15 is exact for 8 points.
        let i: f64 = gl.iter().map(|(x, w)| w * x.powi(14)).sum();
        assert_abs_diff_eq!(i, 2.0 / 15.0, epsilon = 1e-14);
        assert_eq!(gauss_legendre(1), vec![(0.0, 2.0)]);
    }

    #[test]
    fn quadrature_weights_are_convex() {
        let nodes = quadrature_nodes(6);
        assert_eq!(nodes.len(), 216);
        assert!(nodes.iter().all(|n| n.weight > 0.0));
        assert_abs_diff_eq!(nodes.iter().map(|n| n.weight).sum::<f64>(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn euler_rotor_matches_product_of_rotations() {
        use crate::spin::{rotation, RotationParams};
        let s = SpinLength::from_twice(3);
        let r = EulerRotor::new(s);
        let (a, b, c) = (0.4, 1.1, -2.3);
        let u = rotation(s, RotationParams::new([0.0, 0.0, -a]))
            .matmul(&rotation(s, RotationParams::new([0.0, -b, 0.0])))
            .unwrap()
            .matmul(&rotation(s, RotationParams::new([0.0, 0.0, -c])))
            .unwrap();
        assert!(r.matrix([a, b, c]).max_abs_diff(&u).unwrap() < 1e-12);
    }

    #[test]
    fn averaging_fixed_points() {
        let id = DenseMatrix::identity(4).scale(0.25);
        assert!(haar_average(&id, HALF, HALF, 8).unwrap().max_abs_diff(&id).unwrap() < 1e-14);
        let singlet = InvariantState::new(HALF, HALF, vec![1.0, 0.0]).unwrap().to_matrix();
        let avg = haar_average(&singlet, HALF, HALF, 8).unwrap();
        assert!(avg.max_abs_diff(&singlet).unwrap() < 1e-13);
    }

    #[test]
    fn averaging_stretched_state_gives_triplet() {
        let up_up = DenseMatrix::from_diagonal(&[1.0, 0.0, 0.0, 0.0]);
        let avg = haar_average(&up_up, HALF, HALF, 8).unwrap();
        let triplet = InvariantState::new(HALF, HALF, vec![0.0, 1.0]).unwrap().to_matrix();
        assert!(avg.max_abs_diff(&triplet).unwrap() < 1e-13);
        assert!(haar_average(&up_up, HALF, SpinLength::ONE, 8).is_err());
    }

    #[test]
    fn averaging_matches_projector_twirl() {
        let (s1, s2) = (SpinLength::from_twice(3), SpinLength::ONE);
        let psi = kron_vec(&coherent_state(s1, 0.7, 0.2), &coherent_state(s2, 2.0, -1.0));
        let m = DenseMatrix::outer(&psi).hermitian_part();
        let avg = haar_average(&m, s1, s2, 12).unwrap();
        let exact = twirl(&m, s1, s2).unwrap().to_matrix();
        assert!(avg.max_abs_diff(&exact).unwrap() < 1e-12);
    }

    #[test]
    fn certificates_for_spin_half_pairs() {
        let boundary = from_correlators_half(HALF, -0.25).unwrap();
        let dec = decompose(&boundary).unwrap();
        assert_abs_diff_eq!(dec.gamma, PI, epsilon = 1e-7);
        assert!(dec.reconstruction_error < 1e-6);

        let aligned = from_correlators_half(HALF, 0.25).unwrap();
        let dec = decompose(&aligned).unwrap();
        assert_abs_diff_eq!(dec.gamma, 0.0, epsilon = 1e-7);
        assert!(dec.verify(&aligned).unwrap() < 1e-6);

        let s = SpinLength::from_twice(3);
        let dec = decompose(&from_correlators_half(s, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(dec.gamma, PI / 2.0, epsilon = 1e-14);
        assert!(dec.reconstruction_error < 1e-6);
    }

    #[test]
    fn npt_states_are_refused() {
        let st = from_correlators_half(SpinLength::ONE, -0.6).unwrap();
        assert!(matches!(decompose(&st), Err(Error::CertificateUnavailable { .. })));
        let st = InvariantState::maximally_mixed(SpinLength::ONE, SpinLength::ONE);
        assert!(matches!(decompose(&st), Err(Error::Argument(_))));
    }

    #[test]
    fn low_order_fails_to_converge() {
        let st = from_correlators_half(SpinLength::from_twice(4), 0.3).unwrap();
        let opts = DecomposeOptions {
            order: 1,
            max_order: 2,
            ..DecomposeOptions::default()
        };
        assert!(matches!(decompose_with(&st, opts), Err(Error::Convergence { .. })));
    }

    #[test]
    fn product_states_rebuild_the_mixture() {
        let st = from_correlators_half(SpinLength::ONE, 0.1).unwrap();
        let dec = decompose_with(&st, DecomposeOptions { order: 6, ..Default::default() }).unwrap();
        let mut m = DenseMatrix::zeros(6);
        for (a, b, w) in dec.product_states() {
            m.add_scaled(w, &DenseMatrix::outer(&kron_vec(&a, &b)));
        }
        let m = m.hermitian_part();
        assert!(trace_distance(&m, &st.to_matrix()).unwrap() < 1e-6);
    }
}
