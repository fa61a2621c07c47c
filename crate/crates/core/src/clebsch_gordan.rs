//! Clebsch-Gordan coefficients (Condon-Shortley phase) and the map between
//! the product basis `|m1, m2>` and the coupled basis `|J, Jz>`.
//!
//! All angular momenta are passed as twice their value so that half-integer
//! quantum numbers stay exact.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::spin::SpinLength;

const LN_FACTORIAL_LEN: usize = 1024;

fn ln_factorials() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_LEN);
        t.push(0.0);
        for n in 1..LN_FACTORIAL_LEN {
            t.push(t[n - 1] + (n as f64).ln());
        }
        t
    })
}

fn ln_fact(n: i64) -> f64 {
    ln_factorials()[n as usize]
}

fn check_projection(two_j: i64, two_m: i64, what: &str) -> Result<()> {
    if two_m.abs() > two_j || (two_j - two_m) % 2 != 0 {
        return Err(Error::Argument(format!(
            "{what}: projection {two_m}/2 invalid for angular momentum {two_j}/2"
        )));
    }
    Ok(())
}

/// `<S1 m1; S2 m2 | J Jz>` with every argument given as twice its value.
pub fn cg(s1: SpinLength, s2: SpinLength, two_m1: i32, two_m2: i32, two_j: i32, two_jz: i32) -> Result<f64> {
    let (j1, j2) = (s1.twice() as i64, s2.twice() as i64);
    let (m1, m2, j, jz) = (two_m1 as i64, two_m2 as i64, two_j as i64, two_jz as i64);
    check_projection(j1, m1, "m1")?;
    check_projection(j2, m2, "m2")?;
    if j < (j1 - j2).abs() || j > j1 + j2 || (j1 + j2 - j) % 2 != 0 {
        return Err(Error::Argument(format!(
            "J = {j}/2 is not in the coupling range of {s1} and {s2}"
        )));
    }
    check_projection(j, jz, "Jz")?;
    if (j1 + j2 + j) / 2 + 1 >= LN_FACTORIAL_LEN as i64 {
        return Err(Error::Argument("angular momenta too large".into()));
    }
    if m1 + m2 != jz {
        return Ok(0.0);
    }

    // Integer-valued combinations (all even before halving).
    let h = |x: i64| x / 2;
    let a = h(j1 + j2 - j);
    let b = h(j1 - j2 + j);
    let c = h(-j1 + j2 + j);
    let d = h(j1 + j2 + j) + 1;
    let ln_prefactor = 0.5
        * (((j + 1) as f64).ln() + ln_fact(a) + ln_fact(b) + ln_fact(c) - ln_fact(d)
            + ln_fact(h(j1 + m1))
            + ln_fact(h(j1 - m1))
            + ln_fact(h(j2 + m2))
            + ln_fact(h(j2 - m2))
            + ln_fact(h(j + jz))
            + ln_fact(h(j - jz)));

    let e1 = h(j1 - m1);
    let e2 = h(j2 + m2);
    let e3 = h(j - j2 + m1);
    let e4 = h(j - j1 - m2);
    let k_min = 0.max(-e3).max(-e4);
    let k_max = a.min(e1).min(e2);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ln_den = ln_fact(k)
            + ln_fact(a - k)
            + ln_fact(e1 - k)
            + ln_fact(e2 - k)
            + ln_fact(e3 + k)
            + ln_fact(e4 + k);
        let term = (ln_prefactor - ln_den).exp();
        sum += if k % 2 == 0 { term } else { -term };
    }
    Ok(sum)
}

/// Allowed `2J` values for coupling `s1` and `s2`, ascending.
pub fn coupled_twice_j(s1: SpinLength, s2: SpinLength) -> Vec<u32> {
    let (a, b) = (s1.twice(), s2.twice());
    (a.abs_diff(b)..=a + b).step_by(2).collect()
}

/// The coupled basis of two spins expressed in the product basis.
#[derive(Debug, Clone)]
pub struct CoupledBasisMap {
    pub s1: SpinLength,
    pub s2: SpinLength,
    /// Column `c` is the coupled state `labels[c]` in the product basis.
    pub unitary: DenseMatrix,
    /// `(2J, 2Jz)` per column, J ascending then Jz descending.
    pub labels: Vec<(u32, i32)>,
}

impl CoupledBasisMap {
    pub fn dim(&self) -> usize {
        self.unitary.dim()
    }

    /// Columns belonging to the multiplet `2J`.
    pub fn multiplet_columns(&self, two_j: u32) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(move |(_, &(j, _))| j == two_j)
            .map(|(c, _)| c)
    }

    /// Projector onto the total-spin multiplet `2J` in the product basis.
    pub fn projector(&self, two_j: u32) -> DenseMatrix {
        let n = self.dim();
        let cols: Vec<usize> = self.multiplet_columns(two_j).collect();
        let u = &self.unitary;
        let p = DenseMatrix::from_fn(n, |i, k| {
            cols.iter().map(|&c| u[(i, c)] * u[(k, c)].conj()).sum::<Complex64>()
        });
        p.hermitian_part()
    }
}

/// Builds the product-to-coupled basis map from Clebsch-Gordan coefficients.
pub fn coupled_basis(s1: SpinLength, s2: SpinLength) -> CoupledBasisMap {
    let (d1, d2) = (s1.dim(), s2.dim());
    let n = d1 * d2;
    let mut labels = Vec::with_capacity(n);
    for two_j in coupled_twice_j(s1, s2) {
        let mut two_jz = two_j as i32;
        while two_jz >= -(two_j as i32) {
            labels.push((two_j, two_jz));
            two_jz -= 2;
        }
    }
    let mut unitary = DenseMatrix::zeros(n);
    for (col, &(two_j, two_jz)) in labels.iter().enumerate() {
        for k1 in 0..d1 {
            let two_m1 = s1.twice() as i32 - 2 * k1 as i32;
            let two_m2 = two_jz - two_m1;
            if two_m2.abs() > s2.twice() as i32 {
                continue;
            }
            let k2 = ((s2.twice() as i32 - two_m2) / 2) as usize;
            let v = cg(s1, s2, two_m1, two_m2, two_j as i32, two_jz)
                .expect("labels enumerate valid quantum numbers");
            unitary[(k1 * d2 + k2, col)] = Complex64::new(v, 0.0);
        }
    }
    CoupledBasisMap {
        s1,
        s2,
        unitary,
        labels,
    }
}
