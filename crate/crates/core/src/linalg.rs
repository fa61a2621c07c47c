//! Dense complex linear algebra on small square matrices.
//!
//! Storage is row-major. For bipartite operators the first subsystem is the
//! slow index: the product basis state `|i1, i2>` sits at `i1 * d2 + i2`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Elementwise tolerance for the Hermiticity certificate.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Relative clustering tolerance used to count eigenvalue multiplicities.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Default ceiling on the dimension produced by [`kron`].
pub const DEFAULT_KRON_CAP: usize = 65536;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A square complex matrix with a Hermiticity certificate.
///
/// The `hermitian` flag is only ever set by constructors that guarantee the
/// property (within [`HERMITIAN_TOL`]) or after an explicit check.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
    hermitian: bool,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![ZERO; dim * dim],
            hermitian: true,
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// General (non-certified) matrix from a row-major element function.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        DenseMatrix {
            dim,
            data,
            hermitian: false,
        }
    }

    /// General matrix from row-major entries.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(DenseMatrix {
            dim,
            data,
            hermitian: false,
        })
    }

    /// Real matrix from rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Ok(DenseMatrix {
            dim,
            data,
            hermitian: false,
        })
    }

    /// Rank-one projector `|v><v|` (not normalized).
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Largest elementwise deviation from Hermiticity, `max |M - M^+|`.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.dim;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                r = r.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        r
    }

    /// Checks Hermiticity and sets the certificate.
    pub fn into_hermitian(mut self) -> Result<Self> {
        let r = self.hermitian_residual();
        if r > HERMITIAN_TOL {
            return Err(Error::ContractViolation(format!(
                "matrix is not Hermitian (residual {r:.3e})"
            )));
        }
        self.hermitian = true;
        Ok(self)
    }

    /// Projects onto the Hermitian part `(M + M^+)/2` and certifies it.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut m = self.clone();
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = 0.5 * (self.data[i * n + j] + self.data[j * n + i].conj());
            }
        }
        m.hermitian = true;
        m
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::from_fn(n, |i, j| self.data[j * n + i].conj());
        m.hermitian = self.hermitian;
        m
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut m = Self::from_fn(n, |i, j| self.data[j * n + i]);
        m.hermitian = self.hermitian;
        m
    }

    /// Elementwise complex conjugate.
    pub fn conj(&self) -> Self {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
            hermitian: self.hermitian,
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
            hermitian: self.hermitian,
        }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
            hermitian: self.hermitian && s.im == 0.0,
        }
    }

    /// In-place `self += s * other`.
    pub fn add_scaled(&mut self, s: f64, other: &DenseMatrix) {
        assert_eq!(self.dim, other.dim, "add_scaled: dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
        self.hermitian &= other.hermitian;
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        check_same_dim(self, other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(DenseMatrix {
            dim: n,
            data: out,
            hermitian: false,
        })
    }

    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        let n = self.dim;
        Ok((0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// `<v| M |v>`.
    pub fn expectation(&self, v: &[Complex64]) -> Result<Complex64> {
        let mv = self.matvec(v)?;
        Ok(v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum())
    }

    /// `U M U^+`; Hermiticity of `M` carries over.
    pub fn conjugate_by(&self, u: &DenseMatrix) -> Result<DenseMatrix> {
        let mut out = u.matmul(self)?.matmul(&u.adjoint())?;
        if self.hermitian {
            out = out.hermitian_part();
        }
        Ok(out)
    }

    /// `[self, other] = self other - other self`.
    pub fn commutator(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    /// Largest elementwise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Result<f64> {
        check_same_dim(self, other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|j| (0..n).map(|i| self.data[i * n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.data[i * self.dim + j]).collect()
    }

    /// `V^+ M V` for a `dim x k` block of columns `vs`.
    pub fn restrict(&self, vs: &[Vec<Complex64>]) -> Result<DenseMatrix> {
        let mv: Vec<Vec<Complex64>> = vs.iter().map(|v| self.matvec(v)).collect::<Result<_>>()?;
        let k = vs.len();
        let mut out = DenseMatrix::from_fn(k, |a, b| {
            vs[a].iter().zip(&mv[b]).map(|(x, y)| x.conj() * y).sum()
        });
        if self.hermitian {
            out = out.hermitian_part();
        }
        Ok(out)
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.dim && j < self.dim, "index out of bounds");
        &self.data[i * self.dim + j]
    }
}

/// Mutable access drops the Hermiticity certificate.
impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.dim && j < self.dim, "index out of bounds");
        self.hermitian = false;
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "add: dimension mismatch");
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "sub: dimension mismatch");
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.matmul(rhs).expect("mul: dimension mismatch")
    }
}

fn check_same_dim(a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    Ok(())
}

/// A distinct eigenvalue together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

/// Ascending eigenvalues plus their degeneracy structure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
}

impl Spectrum {
    /// Sorts `values` and clusters them with absolute tolerance `tol`.
    /// A cluster never spreads by more than `tol` from its smallest member.
    pub fn from_values(mut values: Vec<f64>, tol: f64) -> Self {
        values.sort_by(f64::total_cmp);
        let mut clusters: Vec<(f64, f64, usize)> = Vec::new();
        for &v in &values {
            match clusters.last_mut() {
                Some((start, sum, count)) if v - *start <= tol => {
                    *sum += v;
                    *count += 1;
                }
                _ => clusters.push((v, v, 1)),
            }
        }
        Spectrum {
            clusters: clusters
                .into_iter()
                .map(|(_, sum, count)| Cluster {
                    value: sum / count as f64,
                    multiplicity: count,
                })
                .collect(),
            eigenvalues: values,
        }
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Eigendecomposition `M = V diag(eigenvalues) V^+`.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub spectrum: Spectrum,
    /// Eigenvector `k` is column `k`, ordered like `spectrum.eigenvalues`.
    pub vectors: DenseMatrix,
}

impl Eigh {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// Rebuilds `V f(Λ) V^+` for a real function of the eigenvalues.
    pub fn apply_fn(&self, f: impl Fn(f64) -> Complex64) -> DenseMatrix {
        let n = self.vectors.dim();
        let fl: Vec<Complex64> = self.spectrum.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.vectors.data;
        DenseMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| v[i * n + k] * fl[k] * v[j * n + k].conj()).sum()
        })
    }
}

/// Hermitian eigendecomposition, eigenvalues ascending.
pub fn eigh(m: &DenseMatrix) -> Result<Eigh> {
    if !m.hermitian {
        return Err(Error::ContractViolation(
            "eigh requires a Hermitian matrix".into(),
        ));
    }
    let n = m.dim;
    if n == 0 {
        return Ok(Eigh {
            spectrum: Spectrum::from_values(Vec::new(), 0.0),
            vectors: DenseMatrix::zeros(0),
        });
    }
    let eig = SymmetricEigen::new(m.to_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DenseMatrix::from_fn(n, |i, j| eig.eigenvectors[(i, order[j])]);
    let tol = DEGENERACY_TOL * m.norm1().max(f64::MIN_POSITIVE);
    Ok(Eigh {
        spectrum: Spectrum::from_values(values, tol),
        vectors,
    })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &DenseMatrix) -> Result<Spectrum> {
    Ok(eigh(m)?.spectrum)
}

/// Kronecker product with the default dimension ceiling.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    kron_capped(a, b, DEFAULT_KRON_CAP)
}

/// Kronecker product `a ⊗ b`; `(a ⊗ b)[(i1 i2),(j1 j2)] = a[i1,j1] b[i2,j2]`.
pub fn kron_capped(a: &DenseMatrix, b: &DenseMatrix, cap: usize) -> Result<DenseMatrix> {
    let dim = a
        .dim
        .checked_mul(b.dim)
        .ok_or(Error::DimensionTooLarge { dim: usize::MAX, cap })?;
    if dim > cap {
        return Err(Error::DimensionTooLarge { dim, cap });
    }
    let (na, nb) = (a.dim, b.dim);
    let mut data = vec![ZERO; dim * dim];
    for i1 in 0..na {
        for j1 in 0..na {
            let x = a.data[i1 * na + j1];
            if x == ZERO {
                continue;
            }
            for i2 in 0..nb {
                let row = (i1 * nb + i2) * dim + j1 * nb;
                for j2 in 0..nb {
                    data[row + j2] = x * b.data[i2 * nb + j2];
                }
            }
        }
    }
    Ok(DenseMatrix {
        dim,
        data,
        hermitian: a.hermitian && b.hermitian,
    })
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Transposes the second tensor factor:
/// `out[(i1 i2),(j1 j2)] = m[(i1 j2),(j1 i2)]`.
pub fn partial_transpose_2(m: &DenseMatrix, d1: usize, d2: usize) -> Result<DenseMatrix> {
    if d1 * d2 != m.dim {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: m.dim,
        });
    }
    let n = m.dim;
    let mut data = vec![ZERO; n * n];
    for i1 in 0..d1 {
        for i2 in 0..d2 {
            for j1 in 0..d1 {
                for j2 in 0..d2 {
                    data[(i1 * d2 + i2) * n + j1 * d2 + j2] =
                        m.data[(i1 * d2 + j2) * n + j1 * d2 + i2];
                }
            }
        }
    }
    Ok(DenseMatrix {
        dim: n,
        data,
        hermitian: m.hermitian,
    })
}

/// Transposes the first tensor factor.
pub fn partial_transpose_1(m: &DenseMatrix, d1: usize, d2: usize) -> Result<DenseMatrix> {
    Ok(partial_transpose_2(m, d1, d2)?.transpose())
}

/// Traces out every site not listed in `keep`. The kept sites appear in
/// ascending site order in the output.
pub fn partial_trace(m: &DenseMatrix, dims: &[usize], keep: &[usize]) -> Result<DenseMatrix> {
    let total: usize = dims.iter().product();
    if total != m.dim {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: m.dim,
        });
    }
    if keep.is_empty() {
        return Err(Error::Argument("partial_trace: keep set is empty".into()));
    }
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() {
            return Err(Error::Argument(format!(
                "partial_trace: site {k} out of range for {} sites",
                dims.len()
            )));
        }
        kept[k] = true;
    }
    let kept_dims: Vec<usize> = (0..dims.len()).filter(|&s| kept[s]).map(|s| dims[s]).collect();
    let traced_dims: Vec<usize> = (0..dims.len()).filter(|&s| !kept[s]).map(|s| dims[s]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    // Full index for (kept digits, traced digits) in the original site order.
    let full_index = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut kd = digits(kept_idx, &kept_dims);
        let mut td = digits(traced_idx, &traced_dims);
        kd.reverse();
        td.reverse();
        let mut idx = 0;
        for (s, &d) in dims.iter().enumerate() {
            let digit = if kept[s] { kd.pop() } else { td.pop() }.unwrap_or(0);
            idx = idx * d + digit;
        }
        idx
    };
    let table: Vec<Vec<usize>> = (0..dk)
        .map(|a| (0..dt).map(|t| full_index(a, t)).collect())
        .collect();

    let n = m.dim;
    let mut out = DenseMatrix::zeros(dk);
    for a in 0..dk {
        for b in 0..dk {
            out.data[a * dk + b] = (0..dt).map(|t| m.data[table[a][t] * n + table[b][t]]).sum();
        }
    }
    out.hermitian = m.hermitian;
    Ok(out)
}

/// Mixed-radix digits of `idx`, most significant first.
fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = idx % d;
        idx /= d;
    }
    out
}

/// `½ Σ |eig(a - b)|`.
pub fn trace_distance(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    check_same_dim(a, b)?;
    if !a.hermitian || !b.hermitian {
        return Err(Error::ContractViolation(
            "trace_distance requires Hermitian arguments".into(),
        ));
    }
    let diff = a - b;
    Ok(0.5 * eigvalsh(&diff)?.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn singlet() -> DenseMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DenseMatrix::outer(&[c(0.0), c(s), c(-s), c(0.0)]).hermitian_part()
    }

    #[test]
    fn kron_identities_and_diagonals() {
        let i2 = DenseMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), DenseMatrix::identity(4));
        let z = DenseMatrix::from_diagonal(&[1.0, -1.0]);
        assert_eq!(
            kron(&z, &i2).unwrap(),
            DenseMatrix::from_diagonal(&[1.0, 1.0, -1.0, -1.0])
        );
        let sz = DenseMatrix::from_diagonal(&[0.5, -0.5]);
        let s = eigvalsh(&kron(&sz, &sz).unwrap()).unwrap();
        assert_eq!(
            s.clusters,
            vec![
                Cluster { value: -0.25, multiplicity: 2 },
                Cluster { value: 0.25, multiplicity: 2 }
            ]
        );
    }

    #[test]
    fn kron_respects_cap() {
        let a = DenseMatrix::identity(300);
        assert!(matches!(
            kron(&a, &a),
            Err(Error::DimensionTooLarge { dim: 90000, cap: 65536 })
        ));
        assert!(kron_capped(&DenseMatrix::identity(3), &a, 899).is_err());
    }

    #[test]
    fn eigh_small_cases() {
        let s = eigvalsh(&DenseMatrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 2.0, 3.0]);
        let x = DenseMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
            .unwrap()
            .into_hermitian()
            .unwrap();
        let s = eigvalsh(&x).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eigh_rejects_uncertified_input() {
        let m = DenseMatrix::from_fn(2, |i, j| c((i + 2 * j) as f64));
        assert!(matches!(eigh(&m), Err(Error::ContractViolation(_))));
        assert!(m.into_hermitian().is_err());
    }

    #[test]
    fn singlet_partial_transpose() {
        let pt = partial_transpose_2(&singlet(), 2, 2).unwrap();
        let s = eigvalsh(&pt).unwrap();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in s.eigenvalues.iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(s.min(), -0.5, epsilon = 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let m = DenseMatrix::from_fn(6, |i, j| Complex64::new(i as f64, (j * j) as f64));
        let twice = partial_transpose_2(&partial_transpose_2(&m, 2, 3).unwrap(), 2, 3).unwrap();
        assert_eq!(twice, m);
        assert!(partial_transpose_2(&m, 4, 2).is_err());
    }

    #[test]
    fn partial_transpose_of_product() {
        let r1 = DenseMatrix::from_fn(2, |i, j| Complex64::new((i + j) as f64, i as f64 - j as f64));
        let r2 = DenseMatrix::from_fn(3, |i, j| Complex64::new(i as f64 * 0.5, j as f64));
        let pt = partial_transpose_2(&kron(&r1, &r2).unwrap(), 2, 3).unwrap();
        let expect = kron(&r1, &r2.transpose()).unwrap();
        assert_abs_diff_eq!(pt.max_abs_diff(&expect).unwrap(), 0.0);
    }

    #[test]
    fn partial_trace_cases() {
        let r1 = DenseMatrix::from_diagonal(&[0.25, 0.75]);
        let r2 = DenseMatrix::from_diagonal(&[0.5, 0.3, 0.2]).scale(2.0);
        let prod = kron(&r1, &r2).unwrap();
        let kept = partial_trace(&prod, &[2, 3], &[0]).unwrap();
        assert!(kept.max_abs_diff(&r1.scale(2.0)).unwrap() < 1e-14);
        let all = partial_trace(&prod, &[2, 3], &[0, 1]).unwrap();
        assert_eq!(all, prod);
        let marg = partial_trace(&singlet(), &[2, 2], &[1]).unwrap();
        assert!(marg.max_abs_diff(&DenseMatrix::identity(2).scale(0.5)).unwrap() < 1e-14);
        assert!(matches!(
            partial_trace(&prod, &[2, 3], &[2]),
            Err(Error::Argument(_))
        ));
        assert!(partial_trace(&prod, &[2, 3], &[]).is_err());
    }

    #[test]
    fn partial_trace_middle_site() {
        let a = DenseMatrix::from_diagonal(&[1.0, 2.0]);
        let b = DenseMatrix::from_diagonal(&[3.0, 5.0, 7.0]);
        let cm = DenseMatrix::from_fn(2, |i, j| Complex64::new((i * 2 + j) as f64, 1.0));
        let abc = kron(&kron(&a, &b).unwrap(), &cm).unwrap();
        let ac = partial_trace(&abc, &[2, 3, 2], &[0, 2]).unwrap();
        let expect = kron(&a, &cm).unwrap().scale(15.0);
        assert!(ac.max_abs_diff(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn trace_distance_cases() {
        let m = singlet();
        assert_abs_diff_eq!(trace_distance(&m, &m).unwrap(), 0.0, epsilon = 1e-15);
        let d = trace_distance(
            &DenseMatrix::from_diagonal(&[1.0, 0.0]),
            &DenseMatrix::from_diagonal(&[0.0, 1.0]),
        )
        .unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-15);
        // eig(singlet - I/4) = {3/4, -1/4, -1/4, -1/4}
        let d = trace_distance(&m, &DenseMatrix::identity(4).scale(0.25)).unwrap();
        assert_abs_diff_eq!(d, 0.75, epsilon = 1e-12);
        assert!(trace_distance(&m, &DenseMatrix::identity(2)).is_err());
    }

    #[test]
    fn spectrum_clustering() {
        let s = Spectrum::from_values(vec![1.0, 1.0 + 1e-12, 0.0, 2.0], 1e-9);
        assert_eq!(s.clusters.len(), 3);
        assert_eq!(s.clusters[1].multiplicity, 2);
        assert_eq!(s.dim(), 4);
        let total: usize = s.clusters.iter().map(|c| c.multiplicity).sum();
        assert_eq!(total, 4);
    }
}
