//! Partial-transpose analysis of invariant two-spin states.
//!
//! The partial transpose of an invariant state commutes with the twisted
//! spin operators `K = (S1x - S2x, S1y + S2y, S1z - S2z)`, which close an
//! su(2) algebra. Its spectrum therefore organizes into K-multiplets, one per
//! `K = |S1-S2| ... S1+S2`, and is computed here both numerically and, where
//! closed forms exist (`S2 = 1/2`, and `S1 = S2 = 1`), from formulas.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{eigh, eigvalsh, kron, partial_transpose_2, DenseMatrix, Spectrum};
use crate::spin::{spin_ops, Check, SpinLength};
use crate::state::InvariantState;

/// Absolute tolerance on the smallest partial-transpose eigenvalue.
pub const PPT_TOL: f64 = 1e-10;

/// Tolerance for `[ρ^T2, K^α] = 0`.
pub const K_COMMUTATOR_TOL: f64 = 1e-10;

/// Separability conclusion drawn from the partial transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Negative partial transpose: the state is entangled.
    #[serde(rename = "NPT: entangled")]
    Entangled,
    /// Positive partial transpose, and PPT implies separability here
    /// (one of the spins is 1/2, or trivial).
    #[serde(rename = "PPT: separable")]
    Separable,
    /// Positive partial transpose with both spins >= 1.
    #[serde(rename = "PPT: separability undetermined")]
    PptUndetermined,
}

/// Scalar value of the partial transpose on one K-multiplet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KMultiplet {
    /// `2K`.
    #[serde(rename = "K2")]
    pub two_k: u32,
    pub eigenvalue: f64,
    /// Largest deviation of the restricted block from `eigenvalue · I`.
    pub spread: f64,
}

impl KMultiplet {
    pub fn multiplicity(&self) -> usize {
        self.two_k as usize + 1
    }
}

/// A closed-form eigenvalue, its multiplicity and its K label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormEigenvalue {
    pub value: f64,
    pub multiplicity: usize,
    #[serde(rename = "K2")]
    pub two_k: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct PtReport {
    pub state: InvariantState,
    pub spectrum: Spectrum,
    pub min_eigenvalue: f64,
    pub ppt: bool,
    /// `|min_eigenvalue| < PPT_TOL`: the state sits on the PPT boundary.
    pub boundary: bool,
    pub verdict: Verdict,
    /// Largest K first.
    pub k_multiplets: Vec<KMultiplet>,
    pub closed_form: Option<Vec<ClosedFormEigenvalue>>,
    /// `max |closed_form - numeric|` over the full sorted spectrum.
    pub agreement: Option<f64>,
}

/// The twisted spin operators on the product space.
#[derive(Debug, Clone)]
pub struct KOps {
    pub kx: DenseMatrix,
    pub ky: DenseMatrix,
    pub kz: DenseMatrix,
}

impl KOps {
    pub fn new(s1: SpinLength, s2: SpinLength) -> Self {
        let (a, b) = (spin_ops(s1), spin_ops(s2));
        let (i1, i2) = (DenseMatrix::identity(s1.dim()), DenseMatrix::identity(s2.dim()));
        let left = |x: &DenseMatrix| kron(x, &i2).expect("two-spin dimension is small");
        let right = |y: &DenseMatrix| kron(&i1, y).expect("two-spin dimension is small");
        KOps {
            kx: &left(&a.sx) - &right(&b.sx),
            ky: &left(&a.sy) + &right(&b.sy),
            kz: &left(&a.sz) - &right(&b.sz),
        }
    }

    pub fn components(&self) -> [&DenseMatrix; 3] {
        [&self.kx, &self.ky, &self.kz]
    }

    /// `K^2 = Kx^2 + Ky^2 + Kz^2`.
    pub fn casimir(&self) -> DenseMatrix {
        let mut k2 = DenseMatrix::zeros(self.kx.dim());
        for k in self.components() {
            k2.add_scaled(1.0, &k.matmul(k).expect("same dimension"));
        }
        k2.hermitian_part()
    }
}

/// Partial transpose of the state's density matrix over the second spin.
pub fn partial_transpose(st: &InvariantState) -> DenseMatrix {
    partial_transpose_2(&st.to_matrix(), st.s1().dim(), st.s2().dim())
        .expect("state dimension factorizes")
}

/// Smallest eigenvalue of the partial transpose.
pub fn min_pt_eigenvalue(st: &InvariantState) -> f64 {
    eigvalsh(&partial_transpose(st)).expect("partial transpose is Hermitian").min()
}

/// Full partial-transpose analysis of an invariant state.
pub fn analyze(st: &InvariantState) -> PtReport {
    let (s1, s2) = (st.s1(), st.s2());
    let pt = partial_transpose(st);
    let spectrum = eigvalsh(&pt).expect("partial transpose is Hermitian");
    let min_eigenvalue = spectrum.min();
    let ppt = min_eigenvalue >= -PPT_TOL;
    let verdict = if !ppt {
        Verdict::Entangled
    } else if s1.twice() <= 1 || s2.twice() <= 1 {
        Verdict::Separable
    } else {
        Verdict::PptUndetermined
    };
    let k_multiplets = analyze_k_structure(&pt, s1, s2).unwrap_or_default();
    let closed_form = closed_form_spectrum(st);
    let agreement = closed_form
        .as_ref()
        .map(|cf| spectrum_deviation(cf, &spectrum.eigenvalues));
    PtReport {
        state: st.clone(),
        spectrum,
        min_eigenvalue,
        ppt,
        boundary: min_eigenvalue.abs() < PPT_TOL,
        verdict,
        k_multiplets,
        closed_form,
        agreement,
    }
}

/// Analyzes a batch of states, in order.
pub fn analyze_batch(states: &[InvariantState], exec: Execution) -> Vec<PtReport> {
    exec.map(states, analyze)
}

/// Closed-form partial-transpose spectrum where one is available.
pub fn closed_form_spectrum(st: &InvariantState) -> Option<Vec<ClosedFormEigenvalue>> {
    let (s1, s2) = (st.s1(), st.s2());
    if s2 == SpinLength::HALF && s1.twice() >= 1 {
        let l = lambda_closed_form(s1, st.weights()[0]).ok()?;
        Some(vec![
            ClosedFormEigenvalue {
                value: l.lambda1,
                multiplicity: l.multiplicity1,
                two_k: s1.twice() + 1,
            },
            ClosedFormEigenvalue {
                value: l.lambda2,
                multiplicity: l.multiplicity2,
                two_k: s1.twice() - 1,
            },
        ])
    } else if s1 == SpinLength::ONE && s2 == SpinLength::ONE {
        mu_closed_form(st.weights()[0], st.weights()[1]).ok().map(Vec::from)
    } else {
        None
    }
}

fn spectrum_deviation(closed: &[ClosedFormEigenvalue], numeric: &[f64]) -> f64 {
    let mut expanded: Vec<f64> = closed
        .iter()
        .flat_map(|c| std::iter::repeat(c.value).take(c.multiplicity))
        .collect();
    if expanded.len() != numeric.len() {
        return f64::INFINITY;
    }
    expanded.sort_by(f64::total_cmp);
    expanded
        .iter()
        .zip(numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// The two partial-transpose eigenvalues for spin `S` with spin 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfSpinEigenvalues {
    pub lambda1: f64,
    pub multiplicity1: usize,
    pub lambda2: f64,
    pub multiplicity2: usize,
}

/// `λ1 = (F + (1-F)/(2S+2))/(2S+1)` with multiplicity `2S+2`, and
/// `λ2 = 1/(2S+1) - F/(2S)` with multiplicity `2S`.
pub fn lambda_closed_form(s: SpinLength, f: f64) -> Result<HalfSpinEigenvalues> {
    if s.twice() == 0 {
        return Err(Error::Argument("spin S must be at least 1/2".into()));
    }
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::Argument(format!("F = {f} is outside [0, 1]")));
    }
    let sv = s.value();
    Ok(HalfSpinEigenvalues {
        lambda1: (f + (1.0 - f) / (2.0 * sv + 2.0)) / (2.0 * sv + 1.0),
        multiplicity1: s.twice() as usize + 2,
        lambda2: 1.0 / (2.0 * sv + 1.0) - f / (2.0 * sv),
        multiplicity2: s.twice() as usize,
    })
}

/// Partial-transpose eigenvalues of two spins 1 with `G = A(0)`, `H = A(1)`:
/// `μ1` (K = 2, ×5), `μ2` (K = 1, ×3), `μ3` (K = 0, ×1).
pub fn mu_closed_form(g: f64, h: f64) -> Result<[ClosedFormEigenvalue; 3]> {
    let tol = 1e-12;
    if g < -tol || h < -tol || g + h > 1.0 + tol || !g.is_finite() || !h.is_finite() {
        return Err(Error::Argument(format!(
            "(G, H) = ({g}, {h}) are not valid multiplet weights"
        )));
    }
    Ok([
        ClosedFormEigenvalue {
            value: 1.0 / 30.0 + 0.3 * g + 2.0 / 15.0 * h,
            multiplicity: 5,
            two_k: 4,
        },
        ClosedFormEigenvalue {
            value: 1.0 / 6.0 - 0.5 * g,
            multiplicity: 3,
            two_k: 2,
        },
        ClosedFormEigenvalue {
            value: 1.0 / 3.0 - 2.0 / 3.0 * h,
            multiplicity: 1,
            two_k: 0,
        },
    ])
}

/// True when spin `S` with a spin 1/2 has a negative partial transpose:
/// `<S1·S2> < -S/2`.
pub fn criterion_half(s: SpinLength, c1: f64) -> bool {
    c1 < -s.value() / 2.0
}

/// True when two spins 1 have a negative partial transpose:
/// `<(S1·S2)^2> > 2` or `<S1·S2> + <(S1·S2)^2> < 1`.
pub fn criterion_one(c1: f64, c2: f64) -> bool {
    c2 > 2.0 || c1 + c2 < 1.0
}

/// Labels the partial transpose `m` by K-multiplets. Fails with
/// [`Error::NotInvariant`] when `m` does not commute with the K operators.
pub fn analyze_k_structure(m: &DenseMatrix, s1: SpinLength, s2: SpinLength) -> Result<Vec<KMultiplet>> {
    let dim = s1.dim() * s2.dim();
    if m.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.dim(),
        });
    }
    let ops = KOps::new(s1, s2);
    let mut residual: f64 = 0.0;
    for k in ops.components() {
        residual = residual.max(m.commutator(k)?.max_abs());
    }
    if residual > K_COMMUTATOR_TOL {
        return Err(Error::NotInvariant { residual });
    }

    let casimir = eigh(&ops.casimir())?;
    let max_two_k = s1.twice() + s2.twice();
    let mut groups: Vec<Vec<Vec<num_complex::Complex64>>> = vec![Vec::new(); max_two_k as usize + 1];
    for (idx, &lam) in casimir.spectrum.eigenvalues.iter().enumerate() {
        let two_k = (-1.0 + (1.0 + 4.0 * lam.max(0.0)).sqrt()).round() as usize;
        let k = two_k as f64 / 2.0;
        if two_k > max_two_k as usize || (k * (k + 1.0) - lam).abs() > 1e-8 {
            return Err(Error::ContractViolation(format!(
                "K^2 eigenvalue {lam} is not of the form K(K+1)"
            )));
        }
        groups[two_k].push(casimir.vector(idx));
    }

    let mut out = Vec::new();
    for two_k in (0..=max_two_k).rev() {
        let vs = &groups[two_k as usize];
        if vs.is_empty() {
            continue;
        }
        if vs.len() != two_k as usize + 1 {
            return Err(Error::ContractViolation(format!(
                "K = {} appears with dimension {}, expected {}",
                SpinLength::from_twice(two_k),
                vs.len(),
                two_k + 1
            )));
        }
        let block = m.restrict(vs)?;
        let n = vs.len();
        let eigenvalue = block.trace().re / n as f64;
        let spread = block
            .max_abs_diff(&DenseMatrix::identity(n).scale(eigenvalue))
            .expect("same dimension");
        out.push(KMultiplet {
            two_k,
            eigenvalue,
            spread,
        });
    }
    Ok(out)
}

/// Checks `((U1⊗U2) O (U1⊗U2)^+)^T2 = (U1⊗U2*) O^T2 (U1⊗U2*)^+` to 1e-10.
pub fn pt_covariance_check(o: &DenseMatrix, u1: &DenseMatrix, u2: &DenseMatrix) -> Result<Check> {
    let (d1, d2) = (u1.dim(), u2.dim());
    let u = kron(u1, u2)?;
    let lhs = partial_transpose_2(&u.matmul(o)?.matmul(&u.adjoint())?, d1, d2)?;
    let v = kron(u1, &u2.conj())?;
    let rhs = v.matmul(&partial_transpose_2(o, d1, d2)?)?.matmul(&v.adjoint())?;
    Ok(Check::new(lhs.max_abs_diff(&rhs)?, 1e-10))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{rotation, RotationParams};
    use crate::state::from_correlators_half;
    use approx::assert_abs_diff_eq;

    const HALF: SpinLength = SpinLength::HALF;
    const ONE: SpinLength = SpinLength::ONE;

    #[test]
    fn singlet_is_npt() {
        let st = InvariantState::new(HALF, HALF, vec![1.0, 0.0]).unwrap();
        let r = analyze(&st);
        assert_abs_diff_eq!(r.min_eigenvalue, -0.5, epsilon = 1e-12);
        assert!(!r.ppt);
        assert_eq!(r.verdict, Verdict::Entangled);
        assert_eq!(r.k_multiplets.len(), 2);
        assert_eq!(r.k_multiplets[0].two_k, 2);
        assert_abs_diff_eq!(r.k_multiplets[0].eigenvalue, 0.5, epsilon = 1e-12);
        assert_eq!(r.k_multiplets[1].two_k, 0);
        assert_abs_diff_eq!(r.k_multiplets[1].eigenvalue, -0.5, epsilon = 1e-12);
        assert!(r.agreement.unwrap() < 1e-12);
    }

    #[test]
    fn boundary_state_for_spin_one_with_half() {
        let st = InvariantState::new(ONE, HALF, vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let r = analyze(&st);
        assert!(r.min_eigenvalue.abs() < 1e-12);
        assert!(r.ppt && r.boundary);
        assert_eq!(r.verdict, Verdict::Separable);
    }

    #[test]
    fn maximally_mixed_is_ppt() {
        for (a, b) in [(1, 1), (2, 2), (3, 4), (9, 9)] {
            let (s1, s2) = (SpinLength::from_twice(a), SpinLength::from_twice(b));
            let r = analyze(&InvariantState::maximally_mixed(s1, s2));
            assert!(r.ppt);
            assert_eq!(r.spectrum.clusters.len(), 1);
            if a >= 2 && b >= 2 {
                assert_eq!(r.verdict, Verdict::PptUndetermined);
            }
        }
        let r = analyze(&InvariantState::maximally_mixed(ONE, ONE));
        for k in &r.k_multiplets {
            assert_abs_diff_eq!(k.eigenvalue, 1.0 / 9.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn lambda_values() {
        let l = lambda_closed_form(HALF, 1.0).unwrap();
        assert_abs_diff_eq!(l.lambda1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(l.lambda2, -0.5, epsilon = 1e-15);
        assert_eq!((l.multiplicity1, l.multiplicity2), (3, 1));
        let l = lambda_closed_form(HALF, 0.0).unwrap();
        assert_abs_diff_eq!(l.lambda1, 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.lambda2, 0.5, epsilon = 1e-15);
        for two_s in 1..10 {
            let s = SpinLength::from_twice(two_s);
            let f = s.twice() as f64 / (s.twice() as f64 + 1.0);
            let l = lambda_closed_form(s, f).unwrap();
            assert_abs_diff_eq!(l.lambda2, 0.0, epsilon = 1e-15);
            let total = l.multiplicity1 as f64 * l.lambda1 + l.multiplicity2 as f64 * l.lambda2;
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-14);
        }
        assert!(lambda_closed_form(HALF, 1.5).is_err());
        assert!(lambda_closed_form(SpinLength::from_twice(0), 0.5).is_err());
    }

    #[test]
    fn mu_values() {
        let m = mu_closed_form(1.0 / 9.0, 1.0 / 3.0).unwrap();
        for e in m {
            assert_abs_diff_eq!(e.value, 1.0 / 9.0, epsilon = 1e-15);
        }
        let m = mu_closed_form(1.0, 0.0).unwrap();
        assert_abs_diff_eq!(m[0].value, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[1].value, -1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[2].value, 1.0 / 3.0, epsilon = 1e-15);
        for h in [0.0, 0.3, 0.6] {
            assert_abs_diff_eq!(mu_closed_form(1.0 / 3.0, h).unwrap()[1].value, 0.0, epsilon = 1e-15);
        }
        assert!(mu_closed_form(0.8, 0.5).is_err());
        assert!(mu_closed_form(-0.1, 0.5).is_err());
    }

    #[test]
    fn correlator_criteria() {
        assert!(criterion_half(HALF, -0.75));
        assert!(!criterion_half(HALF, -0.25));
        assert!(criterion_half(ONE, -0.6));
        assert!(criterion_one(-2.0, 4.0));
        assert!(!criterion_one(0.0, 4.0 / 3.0));
        assert!(criterion_one(-1.0, 1.0));
    }

    #[test]
    fn criterion_matches_analysis_on_the_half_family() {
        let s = SpinLength::from_twice(3);
        for i in 0..=40 {
            let c1 = -1.25 + 2.0 * i as f64 / 40.0;
            let st = from_correlators_half(s, c1).unwrap();
            assert_eq!(criterion_half(s, c1), !analyze(&st).ppt, "c1 = {c1}");
        }
    }

    #[test]
    fn k_structure_requires_invariance() {
        let m = kron(&spin_ops(HALF).sx, &DenseMatrix::identity(2)).unwrap();
        assert!(matches!(
            analyze_k_structure(&m, HALF, HALF),
            Err(Error::NotInvariant { .. })
        ));
    }

    #[test]
    fn k_operators_close_su2() {
        let k = KOps::new(SpinLength::from_twice(3), ONE);
        let i = num_complex::Complex64::new(0.0, 1.0);
        let r = k.kx.commutator(&k.ky).unwrap().max_abs_diff(&k.kz.scale_complex(i)).unwrap();
        assert!(r < 1e-12);
    }

    #[test]
    fn covariance_trivial_case() {
        let o = DenseMatrix::from_fn(4, |i, j| num_complex::Complex64::new(i as f64, j as f64));
        let id = DenseMatrix::identity(2);
        assert!(pt_covariance_check(&o, &id, &id).unwrap().passed());
        let u1 = rotation(HALF, RotationParams::new([0.3, 0.2, -1.0]));
        let u2 = rotation(HALF, RotationParams::new([1.3, -0.2, 0.4]));
        assert!(pt_covariance_check(&o, &u1, &u2).unwrap().passed());
    }

    #[test]
    fn report_serializes() {
        let r = analyze(&InvariantState::maximally_mixed(HALF, HALF));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["verdict"], "PPT: separable");
        assert_eq!(v["k_multiplets"][0]["K2"], 2);
    }
}
