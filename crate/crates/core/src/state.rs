//! SU(2)-invariant two-spin density matrices.
//!
//! An invariant state is fixed by its multiplet weights `A(J)`, one per total
//! spin `J = |S1-S2| ... S1+S2`; on each multiplet it acts as `A(J)/(2J+1)`.

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::clebsch_gordan::{coupled_basis, coupled_twice_j};
use crate::error::{Error, Result};
use crate::linalg::{kron, DenseMatrix};
use crate::spin::{spin_ops, SpinLength};

/// Negative weights down to this size are rounding noise and clipped to zero.
pub const WEIGHT_CLIP: f64 = 1e-12;

/// Tolerance on `Tr(m) = 1` accepted by [`twirl`].
pub const TWIRL_TRACE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantState {
    s1: SpinLength,
    s2: SpinLength,
    weights: Vec<f64>,
}

/// `<S1·S2>` and, when available, `<(S1·S2)^2>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorSet {
    pub c1: f64,
    pub c2: Option<f64>,
}

impl InvariantState {
    /// Weights are ordered by ascending `J`.
    pub fn new(s1: SpinLength, s2: SpinLength, weights: Vec<f64>) -> Result<Self> {
        let js = coupled_twice_j(s1, s2);
        if weights.len() != js.len() {
            return Err(Error::DimensionMismatch {
                expected: js.len(),
                found: weights.len(),
            });
        }
        let mut clipped = Vec::with_capacity(weights.len());
        for (&w, &two_j) in weights.iter().zip(&js) {
            if !w.is_finite() || w < -WEIGHT_CLIP {
                return Err(Error::Infeasible(format!(
                    "weight A(J={}) = {w} lies outside [0, 1]",
                    SpinLength::from_twice(two_j)
                )));
            }
            clipped.push(w.max(0.0));
        }
        let total: f64 = clipped.iter().sum();
        if (total - 1.0).abs() > WEIGHT_CLIP {
            return Err(Error::Infeasible(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(InvariantState {
            s1,
            s2,
            weights: clipped,
        })
    }

    /// Rescales nonnegative weights to unit sum.
    pub fn normalized(s1: SpinLength, s2: SpinLength, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
        if !(total > 0.0) {
            return Err(Error::Argument("weights have no positive mass".into()));
        }
        let w = weights.into_iter().map(|w| w / total).collect();
        Self::new(s1, s2, w)
    }

    /// `I/dim`, i.e. `A(J) = (2J+1)/dim`.
    pub fn maximally_mixed(s1: SpinLength, s2: SpinLength) -> Self {
        let dim = (s1.dim() * s2.dim()) as f64;
        let w = coupled_twice_j(s1, s2)
            .into_iter()
            .map(|tj| (tj + 1) as f64 / dim)
            .collect();
        Self::normalized(s1, s2, w).expect("uniform weights are feasible")
    }

    /// All weight on the multiplet `2J`.
    pub fn pure_multiplet(s1: SpinLength, s2: SpinLength, two_j: u32) -> Result<Self> {
        let js = coupled_twice_j(s1, s2);
        let idx = js.iter().position(|&j| j == two_j).ok_or_else(|| {
            Error::Argument(format!("2J = {two_j} is not allowed for {s1} and {s2}"))
        })?;
        let mut w = vec![0.0; js.len()];
        w[idx] = 1.0;
        Self::new(s1, s2, w)
    }

    pub fn s1(&self) -> SpinLength {
        self.s1
    }

    pub fn s2(&self) -> SpinLength {
        self.s2
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(2J, A(J))` pairs, J ascending.
    pub fn weighted_multiplets(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        coupled_twice_j(self.s1, self.s2)
            .into_iter()
            .zip(self.weights.iter().copied())
    }

    /// `A(J)` for the multiplet `2J`, zero if not present.
    pub fn weight(&self, two_j: u32) -> f64 {
        self.weighted_multiplets()
            .find(|&(j, _)| j == two_j)
            .map_or(0.0, |(_, w)| w)
    }

    pub fn dim(&self) -> usize {
        self.s1.dim() * self.s2.dim()
    }

    /// `Σ_J A(J)/(2J+1) P_J` in the product basis.
    pub fn to_matrix(&self) -> DenseMatrix {
        let map = coupled_basis(self.s1, self.s2);
        let mut rho = DenseMatrix::zeros(self.dim());
        for (two_j, w) in self.weighted_multiplets() {
            if w != 0.0 {
                rho.add_scaled(w / (two_j + 1) as f64, &map.projector(two_j));
            }
        }
        rho
    }

    /// Moments of `S1·S2` from the multiplet weights.
    pub fn correlators(&self) -> CorrelatorSet {
        let (mut c1, mut c2) = (0.0, 0.0);
        for (two_j, w) in self.weighted_multiplets() {
            let j = s1_dot_s2_on_multiplet(self.s1, self.s2, two_j);
            c1 += w * j;
            c2 += w * j * j;
        }
        CorrelatorSet { c1, c2: Some(c2) }
    }

    /// Largest `|[ρ, J^α]|` over the three total-spin components.
    pub fn invariance_residual(&self) -> f64 {
        total_spin_commutator_residual(&self.to_matrix(), self.s1, self.s2)
            .expect("state matrix matches its spins")
    }
}

/// Eigenvalue of `S1·S2` on the multiplet `2J`:
/// `(J(J+1) - S1(S1+1) - S2(S2+1)) / 2`.
pub fn s1_dot_s2_on_multiplet(s1: SpinLength, s2: SpinLength, two_j: u32) -> f64 {
    let j = two_j as f64 / 2.0;
    0.5 * (j * (j + 1.0) - s1.casimir() - s2.casimir())
}

/// The operator `S1·S2` in the product basis.
pub fn s1_dot_s2(s1: SpinLength, s2: SpinLength) -> DenseMatrix {
    let (a, b) = (spin_ops(s1), spin_ops(s2));
    let mut out = DenseMatrix::zeros(s1.dim() * s2.dim());
    for (x, y) in a.components().into_iter().zip(b.components()) {
        out.add_scaled(1.0, &kron(x, y).expect("two-spin dimension is small"));
    }
    out
}

/// Total spin components `J^α = S1^α ⊗ 1 + 1 ⊗ S2^α`.
pub fn total_spin(s1: SpinLength, s2: SpinLength) -> [DenseMatrix; 3] {
    let (a, b) = (spin_ops(s1), spin_ops(s2));
    let (i1, i2) = (DenseMatrix::identity(s1.dim()), DenseMatrix::identity(s2.dim()));
    let comp = |x: &DenseMatrix, y: &DenseMatrix| {
        &kron(x, &i2).expect("small") + &kron(&i1, y).expect("small")
    };
    [comp(&a.sx, &b.sx), comp(&a.sy, &b.sy), comp(&a.sz, &b.sz)]
}

/// Largest elementwise commutator of `m` with the total spin components.
pub fn total_spin_commutator_residual(m: &DenseMatrix, s1: SpinLength, s2: SpinLength) -> Result<f64> {
    let mut r: f64 = 0.0;
    for j in total_spin(s1, s2) {
        r = r.max(m.commutator(&j)?.max_abs());
    }
    Ok(r)
}

/// Spin `S` coupled to a spin 1/2 with `<S1·S2> = c1`:
/// `F = (S - 2 c1)/(2S + 1)` on `J = S - 1/2`.
pub fn from_correlators_half(s: SpinLength, c1: f64) -> Result<InvariantState> {
    if s.twice() == 0 {
        return Err(Error::Argument("spin S must be positive".into()));
    }
    let sv = s.value();
    let f = (sv - 2.0 * c1) / (2.0 * sv + 1.0);
    if !(-WEIGHT_CLIP..=1.0 + WEIGHT_CLIP).contains(&f) {
        return Err(Error::Infeasible(format!(
            "<S1.S2> = {c1} gives F = {f}; admissible interval is [{}, {}]",
            -(sv + 1.0) / 2.0,
            sv / 2.0
        )));
    }
    let f = f.clamp(0.0, 1.0);
    InvariantState::new(s, SpinLength::HALF, vec![f, 1.0 - f])
}

/// Spin `S >= 1` coupled to a spin 1 with `<S1·S2> = c1` and
/// `<(S1·S2)^2> = c2`. Returns weights `(G, H, 1 - G - H)` on
/// `J = S-1, S, S+1`.
pub fn from_correlators_one(s: SpinLength, c1: f64, c2: f64) -> Result<InvariantState> {
    if s.twice() < 2 {
        return Err(Error::Argument("spin S must be at least 1".into()));
    }
    let sv = s.value();
    let g = (-sv - (sv - 1.0) * c1 + c2) / (sv * (2.0 * sv + 1.0));
    let h = 1.0 - (c1 + c2) / (sv * (sv + 1.0));
    let rest = 1.0 - g - h;
    for (name, w) in [("G = A(S-1)", g), ("H = A(S)", h), ("1-G-H = A(S+1)", rest)] {
        if !(-WEIGHT_CLIP..=1.0 + WEIGHT_CLIP).contains(&w) {
            return Err(Error::Infeasible(format!(
                "(<S1.S2>, <(S1.S2)^2>) = ({c1}, {c2}) gives {name} = {w}, outside [0, 1]"
            )));
        }
    }
    let w = [g, h, rest].map(|x| x.clamp(0.0, 1.0));
    let total: f64 = w.iter().sum();
    InvariantState::new(s, SpinLength::ONE, w.iter().map(|x| x / total).collect())
}

/// Projects a two-spin density matrix onto the invariant family,
/// `A(J) = Tr(P_J m)`.
pub fn twirl(m: &DenseMatrix, s1: SpinLength, s2: SpinLength) -> Result<InvariantState> {
    let dim = s1.dim() * s2.dim();
    if m.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.dim(),
        });
    }
    let tr = m.trace();
    if (tr - 1.0).norm() > TWIRL_TRACE_TOL {
        return Err(Error::ContractViolation(format!(
            "density matrix trace is {tr}, expected 1"
        )));
    }
    let map = coupled_basis(s1, s2);
    let weights: Vec<f64> = coupled_twice_j(s1, s2)
        .into_iter()
        .map(|two_j| {
            map.multiplet_columns(two_j)
                .map(|c| m.expectation(&map.unitary.column(c)).expect("dims match").re)
                .sum()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    InvariantState::new(s1, s2, weights.into_iter().map(|w| w / total).collect())
}

#[derive(Serialize, Deserialize)]
struct WeightEntry {
    #[serde(rename = "J2")]
    two_j: u32,
    #[serde(rename = "A")]
    a: f64,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    s1: u32,
    s2: u32,
    weights: Vec<WeightEntry>,
}

impl Serialize for InvariantState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            s1: self.s1.twice(),
            s2: self.s2.twice(),
            weights: self
                .weighted_multiplets()
                .map(|(two_j, a)| WeightEntry { two_j, a })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for InvariantState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(deserializer)?;
        let (s1, s2) = (SpinLength::from_twice(repr.s1), SpinLength::from_twice(repr.s2));
        let js = coupled_twice_j(s1, s2);
        let mut weights = vec![0.0; js.len()];
        for entry in repr.weights {
            let idx = js.iter().position(|&j| j == entry.two_j).ok_or_else(|| {
                de::Error::custom(format!("J2 = {} not allowed for s1={s1}, s2={s2}", entry.two_j))
            })?;
            weights[idx] = entry.a;
        }
        InvariantState::new(s1, s2, weights).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const HALF: SpinLength = SpinLength::HALF;
    const ONE: SpinLength = SpinLength::ONE;

    #[test]
    fn maximally_mixed_is_identity_over_dim() {
        for (a, b) in [(1, 1), (2, 1), (3, 2), (4, 4)] {
            let (s1, s2) = (SpinLength::from_twice(a), SpinLength::from_twice(b));
            let st = InvariantState::maximally_mixed(s1, s2);
            let id = DenseMatrix::identity(st.dim()).scale(1.0 / st.dim() as f64);
            assert!(st.to_matrix().max_abs_diff(&id).unwrap() < 1e-14);
        }
    }

    #[test]
    fn singlet_matrix() {
        let st = InvariantState::new(HALF, HALF, vec![1.0, 0.0]).unwrap();
        let m = st.to_matrix();
        assert_abs_diff_eq!(m[(1, 1)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(1, 2)].re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(0, 0)].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(st.correlators().c1, -0.75, epsilon = 1e-15);
    }

    #[test]
    fn spin_one_pair_correlators() {
        let st = InvariantState::maximally_mixed(ONE, ONE);
        let c = st.correlators();
        assert_abs_diff_eq!(c.c1, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.c2.unwrap(), 4.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn weight_validation() {
        assert!(InvariantState::new(HALF, HALF, vec![1.0]).is_err());
        assert!(InvariantState::new(HALF, HALF, vec![1.1, -0.1]).is_err());
        assert!(InvariantState::new(HALF, HALF, vec![0.6, 0.6]).is_err());
        let st = InvariantState::new(HALF, HALF, vec![1.0 + 5e-13, -5e-13]).unwrap();
        assert_eq!(st.weights()[1], 0.0);
    }

    #[test]
    fn half_parameterization() {
        let f = |s: u32, c1: f64| from_correlators_half(SpinLength::from_twice(s), c1).unwrap().weights()[0];
        assert_abs_diff_eq!(f(1, -0.75), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f(1, 0.25), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f(2, -1.0), 1.0, epsilon = 1e-15);
        let err = from_correlators_half(ONE, -1.2).unwrap_err();
        assert!(err.to_string().contains("[-1, 0.5]"), "{err}");
    }

    #[test]
    fn one_parameterization() {
        let st = from_correlators_one(ONE, 0.0, 4.0 / 3.0).unwrap();
        assert_abs_diff_eq!(st.weights()[0], 1.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(st.weights()[1], 1.0 / 3.0, epsilon = 1e-15);
        let st = from_correlators_one(ONE, -2.0, 4.0).unwrap();
        assert_abs_diff_eq!(st.weights()[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(st.weights()[1], 0.0, epsilon = 1e-15);
        let st = from_correlators_one(ONE, -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(st.weights()[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(st.weights()[1], 1.0, epsilon = 1e-15);
        let err = from_correlators_one(ONE, 0.0, 5.0).unwrap_err();
        assert!(err.to_string().contains("G = A(S-1)"), "{err}");
        assert!(from_correlators_one(HALF, 0.0, 0.0).is_err());
    }

    #[test]
    fn twirl_examples() {
        let singlet = InvariantState::new(HALF, HALF, vec![1.0, 0.0]).unwrap();
        let back = twirl(&singlet.to_matrix(), HALF, HALF).unwrap();
        assert_abs_diff_eq!(back.weights()[0], 1.0, epsilon = 1e-14);
        let s1 = SpinLength::from_twice(3);
        let id = DenseMatrix::identity(12).scale(1.0 / 12.0);
        let st = twirl(&id, s1, ONE).unwrap();
        for (two_j, w) in st.weighted_multiplets() {
            assert_abs_diff_eq!(w, (two_j + 1) as f64 / 12.0, epsilon = 1e-14);
        }
        assert!(twirl(&DenseMatrix::identity(4), HALF, HALF).is_err());
        assert!(twirl(&id, HALF, HALF).is_err());
    }

    #[test]
    fn json_format() {
        let st = InvariantState::new(HALF, HALF, vec![0.25, 0.75]).unwrap();
        let v = serde_json::to_value(&st).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"s1": 1, "s2": 1, "weights": [{"J2": 0, "A": 0.25}, {"J2": 2, "A": 0.75}]})
        );
        let back: InvariantState = serde_json::from_value(v).unwrap();
        assert_eq!(back, st);
        let bad = serde_json::json!({"s1": 1, "s2": 1, "weights": [{"J2": 4, "A": 1.0}]});
        assert!(serde_json::from_value::<InvariantState>(bad).is_err());
    }
}
