//! Exact diagonalization of isotropic Heisenberg spin systems, thermal and
//! ground-state reduced two-spin states, and threshold-temperature scans.
//!
//! The Hamiltonian `H = Σ J_ij S_i·S_j` conserves the total `S^z`, so the
//! diagonalization runs on dense real blocks, one per magnetization sector.
//! [`build_hamiltonian`] and [`dense_gibbs_state`] provide the unreduced
//! dense route as an independent check.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{eigh, kron_capped, partial_trace, DenseMatrix};
use crate::ppt::{min_pt_eigenvalue, PPT_TOL};
use crate::spin::{spin_ops, SpinLength};
use crate::state::{total_spin_commutator_residual, twirl, InvariantState};

/// Default ceiling on the Hilbert-space dimension.
pub const DEFAULT_DIM_CAP: usize = 20000;

/// Environment variable overriding [`DEFAULT_DIM_CAP`].
pub const DIM_CAP_ENV: &str = "SU2ENT_DIM_CAP";

/// Reduced pair states must commute with the pair's total spin to this level.
pub const ISOTROPY_TOL: f64 = 1e-8;

/// Dimension cap from the environment, falling back to the default.
pub fn dim_cap_from_env() -> usize {
    std::env::var(DIM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DIM_CAP)
}

/// Exchange bond `J (S_i · S_j)`; serialized as `[i, j, J]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, f64)", into = "(usize, usize, f64)")]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub coupling: f64,
}

impl From<(usize, usize, f64)> for Bond {
    fn from((i, j, coupling): (usize, usize, f64)) -> Self {
        Bond { i, j, coupling }
    }
}

impl From<Bond> for (usize, usize, f64) {
    fn from(b: Bond) -> Self {
        (b.i, b.j, b.coupling)
    }
}

/// Sites (spin lengths as `2S`) and exchange bonds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub sites: Vec<SpinLength>,
    pub bonds: Vec<Bond>,
}

impl LatticeSpec {
    /// Two spins coupled by one bond.
    pub fn dimer(s1: SpinLength, s2: SpinLength, coupling: f64) -> Self {
        LatticeSpec {
            sites: vec![s1, s2],
            bonds: vec![Bond { i: 0, j: 1, coupling }],
        }
    }

    /// Periodic nearest-neighbor ring of `n >= 3` identical spins.
    pub fn ring(n: usize, s: SpinLength, coupling: f64) -> Self {
        Self::ring_of(vec![s; n], coupling)
    }

    /// Periodic ring of `cells` unit cells `(a, b)`.
    pub fn alternating_ring(cells: usize, a: SpinLength, b: SpinLength, coupling: f64) -> Self {
        Self::ring_of((0..cells).flat_map(|_| [a, b]).collect(), coupling)
    }

    fn ring_of(sites: Vec<SpinLength>, coupling: f64) -> Self {
        let n = sites.len();
        let bonds = (0..n)
            .map(|i| Bond {
                i,
                j: (i + 1) % n,
                coupling,
            })
            .collect();
        LatticeSpec { sites, bonds }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.sites.iter().map(|s| s.dim()).collect()
    }

    /// Total Hilbert-space dimension, `None` on overflow.
    pub fn hilbert_dim(&self) -> Option<usize> {
        self.sites.iter().try_fold(1usize, |acc, s| acc.checked_mul(s.dim()))
    }

    /// Checks indices and the dimension cap; messages name the offending field.
    pub fn validate(&self, cap: usize) -> Result<()> {
        if self.sites.is_empty() {
            return Err(Error::Argument("sites: at least one site is required".into()));
        }
        for (k, b) in self.bonds.iter().enumerate() {
            if b.i >= self.sites.len() || b.j >= self.sites.len() {
                return Err(Error::Argument(format!(
                    "bonds[{k}]: site index out of range for {} sites",
                    self.sites.len()
                )));
            }
            if b.i == b.j {
                return Err(Error::Argument(format!("bonds[{k}]: a bond needs two distinct sites")));
            }
            if !b.coupling.is_finite() {
                return Err(Error::Argument(format!("bonds[{k}]: coupling must be finite")));
            }
        }
        match self.hilbert_dim() {
            Some(dim) if dim <= cap => Ok(()),
            Some(dim) => Err(Error::Capacity { dim, cap }),
            None => Err(Error::Capacity { dim: usize::MAX, cap }),
        }
    }

    fn check_pair(&self, (a, b): (usize, usize)) -> Result<()> {
        if a >= self.sites.len() || b >= self.sites.len() || a == b {
            return Err(Error::Argument(format!(
                "pair ({a}, {b}) must name two distinct sites out of {}",
                self.sites.len()
            )));
        }
        Ok(())
    }

    /// Largest `|J|`, used as the energy scale.
    fn energy_scale(&self) -> f64 {
        self.bonds.iter().map(|b| b.coupling.abs()).fold(0.0, f64::max)
    }
}

/// Temperature in units of the coupling (`k_B = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    /// Uniform mixture over the (possibly degenerate) ground space.
    Ground,
    Finite(f64),
}

/// Embeds a single-site operator into the full product space.
fn embed(op: &DenseMatrix, site: usize, dims: &[usize], cap: usize) -> Result<DenseMatrix> {
    let left: usize = dims[..site].iter().product();
    let right: usize = dims[site + 1..].iter().product();
    let m = kron_capped(&DenseMatrix::identity(left), op, cap)?;
    kron_capped(&m, &DenseMatrix::identity(right), cap)
}

/// Dense `H = Σ J_ij S_i·S_j` built from Kronecker products.
pub fn build_hamiltonian(spec: &LatticeSpec) -> Result<DenseMatrix> {
    build_hamiltonian_capped(spec, DEFAULT_DIM_CAP)
}

pub fn build_hamiltonian_capped(spec: &LatticeSpec, cap: usize) -> Result<DenseMatrix> {
    spec.validate(cap)?;
    let dims = spec.dims();
    let ops: Vec<_> = spec.sites.iter().map(|&s| spin_ops(s)).collect();
    let total = spec.hilbert_dim().expect("validated");
    let mut h = DenseMatrix::zeros(total);
    for b in &spec.bonds {
        if b.coupling == 0.0 {
            continue;
        }
        for (x, y) in ops[b.i].components().into_iter().zip(ops[b.j].components()) {
            let term = embed(x, b.i, &dims, cap)?.matmul(&embed(y, b.j, &dims, cap)?)?;
            h.add_scaled(b.coupling, &term);
        }
    }
    Ok(h.hermitian_part())
}

/// Dense Gibbs state `e^{-H/T}/Z` (or the ground-space mixture).
pub fn dense_gibbs_state(spec: &LatticeSpec, temp: Temperature) -> Result<DenseMatrix> {
    let e = eigh(&build_hamiltonian(spec)?)?;
    let weights = boltzmann_weights(&e.spectrum.eigenvalues, temp)?;
    let n = weights.len();
    let mut rho = DenseMatrix::zeros(n);
    for (k, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            rho.add_scaled(w, &DenseMatrix::outer(&e.vector(k)));
        }
    }
    Ok(rho.hermitian_part())
}

fn ground_tolerance(e0: f64) -> f64 {
    1e-8 * e0.abs().max(1.0)
}

/// Normalized Boltzmann weights for the given energies.
fn boltzmann_weights(energies: &[f64], temp: Temperature) -> Result<Vec<f64>> {
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = match temp {
        Temperature::Ground => {
            let tol = ground_tolerance(e0);
            energies
                .iter()
                .map(|&e| if e - e0 <= tol { 1.0 } else { 0.0 })
                .collect()
        }
        Temperature::Finite(t) => {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::Argument(format!("temperature must be positive, got {t}")));
            }
            energies.iter().map(|&e| (-(e - e0) / t).exp()).collect()
        }
    };
    let z: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w / z).collect())
}

/// One magnetization sector: basis configurations and its eigensystem.
#[derive(Debug, Clone)]
struct Sector {
    /// Full product-basis indices of the sector's basis states.
    basis: Vec<usize>,
    energies: Vec<f64>,
    /// Column `k` is eigenvector `k` in the sector basis.
    vectors: DMatrix<f64>,
}

/// Complete eigensystem of a lattice Hamiltonian, block-diagonal in `S^z_tot`.
#[derive(Debug, Clone)]
pub struct ExactDiagonalization {
    spec: LatticeSpec,
    sectors: Vec<Sector>,
    exec: Execution,
}

impl ExactDiagonalization {
    pub fn new(spec: &LatticeSpec) -> Result<Self> {
        Self::with(spec, DEFAULT_DIM_CAP, Execution::default())
    }

    pub fn with(spec: &LatticeSpec, cap: usize, exec: Execution) -> Result<Self> {
        spec.validate(cap)?;
        let dims = spec.dims();
        let total = spec.hilbert_dim().expect("validated");
        let strides = strides(&dims);

        // Group configurations by total 2Mz; index k on a site means m = S - k.
        let mut by_mz: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for idx in 0..total {
            let mut two_mz = 0i64;
            for (site, s) in spec.sites.iter().enumerate() {
                let k = (idx / strides[site]) % dims[site];
                two_mz += s.twice() as i64 - 2 * k as i64;
            }
            by_mz.entry(two_mz).or_default().push(idx);
        }
        let bases: Vec<Vec<usize>> = by_mz.into_values().collect();

        let sectors = exec.map(&bases, |basis| {
            let h = sector_hamiltonian(spec, &dims, &strides, basis);
            let eig = SymmetricEigen::new(h);
            Sector {
                basis: basis.clone(),
                energies: eig.eigenvalues.iter().copied().collect(),
                vectors: eig.eigenvectors,
            }
        });
        Ok(ExactDiagonalization {
            spec: spec.clone(),
            sectors,
            exec,
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    /// All eigenvalues, ascending.
    pub fn energies(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.sectors.iter().flat_map(|s| s.energies.iter().copied()).collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn ground_energy(&self) -> f64 {
        self.sectors
            .iter()
            .flat_map(|s| s.energies.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// Reduces every eigenstate onto the sites `(a, b)`.
    pub fn pair(&self, pair: (usize, usize)) -> Result<PairResolved> {
        self.spec.check_pair(pair)?;
        let (a, b) = pair;
        let dims = self.spec.dims();
        let strides = strides(&dims);
        let (da, db) = (dims[a], dims[b]);
        let dp = da * db;

        let mut energies = Vec::new();
        let mut reduced = Vec::new();
        for sector in &self.sectors {
            // States sharing the configuration of all other sites.
            let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
            for (local, &idx) in sector.basis.iter().enumerate() {
                let ka = (idx / strides[a]) % da;
                let kb = (idx / strides[b]) % db;
                let rest = idx - ka * strides[a] - kb * strides[b];
                groups.entry(rest).or_default().push((local, ka * db + kb));
            }
            let groups: Vec<Vec<(usize, usize)>> = groups.into_values().collect();
            let per_state = self.exec.map_range(sector.energies.len(), |k| {
                let v = sector.vectors.column(k);
                let mut r = vec![0.0; dp * dp];
                for g in &groups {
                    for &(s, p) in g {
                        for &(t, q) in g {
                            r[p * dp + q] += v[s] * v[t];
                        }
                    }
                }
                r
            });
            energies.extend(sector.energies.iter().copied());
            reduced.extend(per_state);
        }
        Ok(PairResolved {
            pair,
            s_a: self.spec.sites[a],
            s_b: self.spec.sites[b],
            energies,
            reduced,
        })
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn sector_hamiltonian(spec: &LatticeSpec, dims: &[usize], strides: &[usize], basis: &[usize]) -> DMatrix<f64> {
    let n = basis.len();
    let position: HashMap<usize, usize> = basis.iter().enumerate().map(|(l, &i)| (i, l)).collect();
    let mut h = DMatrix::<f64>::zeros(n, n);
    let m_of = |site: usize, k: usize| spec.sites[site].m_of(k);
    // sqrt(S(S+1) - m(m+1)) for raising, sqrt(S(S+1) - m(m-1)) for lowering.
    let raise = |site: usize, m: f64| (spec.sites[site].casimir() - m * (m + 1.0)).max(0.0).sqrt();
    let lower = |site: usize, m: f64| (spec.sites[site].casimir() - m * (m - 1.0)).max(0.0).sqrt();
    for (col, &idx) in basis.iter().enumerate() {
        for bond in &spec.bonds {
            let (i, j, jc) = (bond.i, bond.j, bond.coupling);
            if jc == 0.0 {
                continue;
            }
            let ki = (idx / strides[i]) % dims[i];
            let kj = (idx / strides[j]) % dims[j];
            let (mi, mj) = (m_of(i, ki), m_of(j, kj));
            h[(col, col)] += jc * mi * mj;
            // S+_i S-_j: k_i decreases, k_j increases.
            if ki > 0 && kj + 1 < dims[j] {
                let amp = 0.5 * jc * raise(i, mi) * lower(j, mj);
                let new = idx - strides[i] + strides[j];
                h[(position[&new], col)] += amp;
            }
            // S-_i S+_j.
            if kj > 0 && ki + 1 < dims[i] {
                let amp = 0.5 * jc * lower(i, mi) * raise(j, mj);
                let new = idx + strides[i] - strides[j];
                h[(position[&new], col)] += amp;
            }
        }
    }
    h
}

/// Eigenstate-resolved reduced density matrices of one site pair.
#[derive(Debug, Clone)]
pub struct PairResolved {
    pub pair: (usize, usize),
    pub s_a: SpinLength,
    pub s_b: SpinLength,
    energies: Vec<f64>,
    /// Row-major real `(d_a d_b)^2` blocks, one per eigenstate.
    reduced: Vec<Vec<f64>>,
}

impl PairResolved {
    /// Reduced two-spin density matrix, site `a` as the slow index.
    pub fn density_matrix(&self, temp: Temperature) -> Result<DenseMatrix> {
        let weights = boltzmann_weights(&self.energies, temp)?;
        let dp = self.s_a.dim() * self.s_b.dim();
        let mut acc = vec![0.0; dp * dp];
        for (w, r) in weights.iter().zip(&self.reduced) {
            if *w == 0.0 {
                continue;
            }
            for (x, y) in acc.iter_mut().zip(r) {
                *x += w * y;
            }
        }
        let data = acc.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        Ok(DenseMatrix::from_row_major(dp, data)?.hermitian_part())
    }

    /// The reduced state as an invariant two-spin state. Fails when the
    /// reduced matrix does not commute with the pair's total spin.
    pub fn state(&self, temp: Temperature) -> Result<InvariantState> {
        let rho = self.density_matrix(temp)?;
        let residual = total_spin_commutator_residual(&rho, self.s_a, self.s_b)?;
        if residual > ISOTROPY_TOL {
            return Err(Error::NotInvariant { residual });
        }
        twirl(&rho, self.s_a, self.s_b)
    }
}

/// Reduced Gibbs state of `pair` at temperature `t > 0`.
pub fn gibbs_reduced_pair(spec: &LatticeSpec, t: f64, pair: (usize, usize)) -> Result<InvariantState> {
    reduced_pair(spec, Temperature::Finite(t), pair)
}

pub fn reduced_pair(spec: &LatticeSpec, temp: Temperature, pair: (usize, usize)) -> Result<InvariantState> {
    spec.check_pair(pair)?;
    ExactDiagonalization::new(spec)?.pair(pair)?.state(temp)
}

/// Reduced pair state via the dense route: full Gibbs state and partial
/// trace. Only the sites in `pair` are kept, in ascending order.
pub fn dense_reduced_pair(spec: &LatticeSpec, temp: Temperature, pair: (usize, usize)) -> Result<DenseMatrix> {
    spec.check_pair(pair)?;
    let rho = dense_gibbs_state(spec, temp)?;
    partial_trace(&rho, &spec.dims(), &[pair.0, pair.1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    #[serde(rename = "T")]
    pub t: f64,
    pub c1: f64,
    pub c2: f64,
    pub min_pt_eig: f64,
    pub ppt: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalScan {
    pub pair: (usize, usize),
    pub temperatures: Vec<f64>,
    pub rows: Vec<ScanRow>,
}

/// `points` evenly spaced temperatures in `[tmin, tmax]`.
pub fn temperature_grid(tmin: f64, tmax: f64, points: usize) -> Result<Vec<f64>> {
    if !(tmin > 0.0 && tmin < tmax && tmax.is_finite()) {
        return Err(Error::Argument(format!(
            "temperatures need 0 < tmin < tmax, got tmin = {tmin}, tmax = {tmax}"
        )));
    }
    match points {
        0 => Err(Error::Argument("points must be at least 1".into())),
        1 => Ok(vec![tmin]),
        _ => Ok((0..points)
            .map(|k| tmin + (tmax - tmin) * k as f64 / (points - 1) as f64)
            .collect()),
    }
}

fn row(resolved: &PairResolved, t: f64) -> Result<ScanRow> {
    let st = resolved.state(Temperature::Finite(t))?;
    let c = st.correlators();
    let min_pt_eig = min_pt_eigenvalue(&st);
    Ok(ScanRow {
        t,
        c1: c.c1,
        c2: c.c2.unwrap_or(f64::NAN),
        min_pt_eig,
        ppt: min_pt_eig >= -PPT_TOL,
    })
}

/// Correlators and partial-transpose positivity over a temperature grid.
pub fn scan(ed: &ExactDiagonalization, pair: (usize, usize), temperatures: &[f64]) -> Result<ThermalScan> {
    if temperatures.iter().any(|&t| !(t > 0.0)) || temperatures.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Argument(
            "temperatures must be strictly positive and ascending".into(),
        ));
    }
    let resolved = ed.pair(pair)?;
    let rows = ed
        .exec
        .map(temperatures, |&t| row(&resolved, t))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ThermalScan {
        pair,
        temperatures: temperatures.to_vec(),
        rows,
    })
}

/// Absolute width of the final bisection bracket.
pub const THRESHOLD_TOL: f64 = 1e-10;

/// Temperature at which the reduced pair state stops having a negative
/// partial transpose.
pub fn threshold_temperature(spec: &LatticeSpec, pair: (usize, usize)) -> Result<f64> {
    let ed = ExactDiagonalization::new(spec)?;
    threshold_temperature_ed(&ed, pair)
}

pub fn threshold_temperature_ed(ed: &ExactDiagonalization, pair: (usize, usize)) -> Result<f64> {
    let resolved = ed.pair(pair)?;
    let f = |temp: Temperature| -> Result<f64> { Ok(min_pt_eigenvalue(&resolved.state(temp)?)) };
    let ground = f(Temperature::Ground)?;
    if ground >= -PPT_TOL {
        return Err(Error::NoThreshold(format!(
            "the ground-state pair {pair:?} already has a positive partial transpose \
             (min eigenvalue {ground:.3e})"
        )));
    }
    let scale = ed.spec.energy_scale().max(f64::MIN_POSITIVE);
    let mut hi = scale;
    let mut doublings = 0;
    while f(Temperature::Finite(hi))? < 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::NoThreshold("partial transpose stays negative at all temperatures".into()));
        }
    }
    let mut lo = hi / 2.0;
    while f(Temperature::Finite(lo))? >= 0.0 {
        hi = lo;
        lo /= 2.0;
        if lo < 1e-12 * scale {
            return Err(Error::NoThreshold("no sign change above T = 0".into()));
        }
    }
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if f(Temperature::Finite(mid))? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `<S_0·S_n>` for `n = 1 ... N/2`.
pub fn correlator_vs_distance(spec: &LatticeSpec, temp: Temperature) -> Result<Vec<(usize, f64)>> {
    let ed = ExactDiagonalization::new(spec)?;
    correlator_vs_distance_ed(&ed, temp)
}

pub fn correlator_vs_distance_ed(ed: &ExactDiagonalization, temp: Temperature) -> Result<Vec<(usize, f64)>> {
    let n = ed.spec.sites.len();
    (1..=n / 2)
        .map(|d| Ok((d, ed.pair((0, d))?.state(temp)?.correlators().c1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const HALF: SpinLength = SpinLength::HALF;

    #[test]
    fn dimer_spectrum() {
        let h = build_hamiltonian(&LatticeSpec::dimer(HALF, HALF, 1.0)).unwrap();
        let s = eigh(&h).unwrap().spectrum;
        assert_eq!(s.clusters.len(), 2);
        assert_abs_diff_eq!(s.clusters[0].value, -0.75, epsilon = 1e-14);
        assert_eq!(s.clusters[1].multiplicity, 3);
        assert_abs_diff_eq!(s.clusters[1].value, 0.25, epsilon = 1e-14);
    }

    #[test]
    fn zero_coupling_gives_zero_matrix() {
        let h = build_hamiltonian(&LatticeSpec::dimer(HALF, SpinLength::ONE, 0.0)).unwrap();
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn validation_names_fields() {
        let mut spec = LatticeSpec::ring(4, HALF, 1.0);
        spec.bonds[2].j = 9;
        assert!(spec.validate(100).unwrap_err().to_string().contains("bonds[2]"));
        spec.bonds[2].j = 2;
        assert!(spec.validate(100).unwrap_err().to_string().contains("bonds[2]"));
        let spec = LatticeSpec::ring(16, HALF, 1.0);
        assert!(matches!(spec.validate(20000), Err(Error::Capacity { dim: 65536, .. })));
        assert!(ExactDiagonalization::new(&spec).is_err());
    }

    #[test]
    fn sector_route_matches_dense_spectrum() {
        for spec in [
            LatticeSpec::ring(4, HALF, 1.0),
            LatticeSpec::alternating_ring(2, SpinLength::ONE, HALF, 1.3),
            LatticeSpec::dimer(SpinLength::from_twice(3), SpinLength::ONE, -0.7),
        ] {
            let dense = eigh(&build_hamiltonian(&spec).unwrap()).unwrap().spectrum.eigenvalues;
            let sectors = ExactDiagonalization::new(&spec).unwrap().energies();
            assert_eq!(dense.len(), sectors.len());
            for (a, b) in dense.iter().zip(&sectors) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn four_site_ring_ground_energy() {
        let ed = ExactDiagonalization::new(&LatticeSpec::ring(4, HALF, 1.0)).unwrap();
        assert_abs_diff_eq!(ed.ground_energy(), -2.0, epsilon = 1e-12);
    }

    #[test]
    fn grid_validation() {
        assert_eq!(temperature_grid(1.0, 2.0, 3).unwrap(), vec![1.0, 1.5, 2.0]);
        assert!(temperature_grid(0.0, 2.0, 3).is_err());
        assert!(temperature_grid(2.0, 1.0, 3).is_err());
        assert!(temperature_grid(1.0, 2.0, 0).is_err());
        let ed = ExactDiagonalization::new(&LatticeSpec::dimer(HALF, HALF, 1.0)).unwrap();
        assert!(scan(&ed, (0, 1), &[1.0, 0.5]).is_err());
        assert!(scan(&ed, (0, 0), &[1.0]).is_err());
    }

    #[test]
    fn same_sublattice_pair_has_no_threshold() {
        let spec = LatticeSpec::ring(8, HALF, 1.0);
        assert!(matches!(
            threshold_temperature(&spec, (0, 2)),
            Err(Error::NoThreshold(_))
        ));
    }
}
