use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use su2ent::linalg::{eigh, eigvalsh, kron, partial_transpose_1, partial_transpose_2, DenseMatrix};
use su2ent::sampling::{random_density, random_hermitian, random_operator};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_is_associative(seed in any::<u64>(), da in 1usize..=4, db in 1usize..=4, dc in 1usize..=4) {
        let mut r = rng(seed);
        let (a, b, c) = (random_operator(&mut r, da), random_operator(&mut r, db), random_operator(&mut r, dc));
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-12);
    }

    #[test]
    fn eigh_reconstructs(seed in any::<u64>(), dim in 1usize..=48) {
        let m = random_hermitian(&mut rng(seed), dim);
        let e = eigh(&m).unwrap();
        let v = &e.vectors;
        let ortho = v.adjoint().matmul(v).unwrap().max_abs_diff(&DenseMatrix::identity(dim)).unwrap();
        prop_assert!(ortho < 1e-10);
        let rebuilt = e.apply_fn(|l| l.into());
        prop_assert!(rebuilt.max_abs_diff(&m).unwrap() < 1e-10 * dim as f64);
        let tr: f64 = e.spectrum.eigenvalues.iter().sum();
        prop_assert!((tr - m.trace().re).abs() < 1e-10);
        let total: usize = e.spectrum.clusters.iter().map(|c| c.multiplicity).sum();
        prop_assert_eq!(total, dim);
    }

    #[test]
    fn partial_transpose_spectrum_is_side_independent(seed in any::<u64>(), d1 in 1usize..=4, d2 in 1usize..=4) {
        let rho = random_density(&mut rng(seed), d1 * d2);
        let pt2 = partial_transpose_2(&rho, d1, d2).unwrap();
        let pt1 = partial_transpose_1(&rho, d1, d2).unwrap();
        prop_assert!(pt2.is_hermitian() && pt2.hermitian_residual() < 1e-14);
        prop_assert!((pt2.trace() - rho.trace()).norm() < 1e-14);
        let (s1, s2) = (eigvalsh(&pt1).unwrap(), eigvalsh(&pt2).unwrap());
        for (a, b) in s1.eigenvalues.iter().zip(&s2.eigenvalues) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn eigh_large_random_hermitian() {
    let mut r = rng(7);
    for dim in [128, 256] {
        let m = random_hermitian(&mut r, dim);
        let e = eigh(&m).unwrap();
        let v = &e.vectors;
        let ortho = v.adjoint().matmul(v).unwrap().max_abs_diff(&DenseMatrix::identity(dim)).unwrap();
        assert!(ortho < 1e-10, "dim {dim}: {ortho:e}");
        let tr: f64 = e.spectrum.eigenvalues.iter().sum();
        assert!((tr - m.trace().re).abs() < 1e-10);
        let rebuilt = e.apply_fn(|l| l.into());
        assert!(rebuilt.max_abs_diff(&m).unwrap() < 1e-10 * dim as f64);
    }
}
