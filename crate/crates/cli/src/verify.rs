//! Built-in consistency suites for `su2ent verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use su2ent::clebsch_gordan::coupled_basis;
use su2ent::linalg::DenseMatrix;
use su2ent::ppt::{analyze, lambda_closed_form, mu_closed_form, pt_covariance_check, KOps};
use su2ent::sampling::{random_invariant_state, random_operator, random_rotation, random_rotation_params};
use su2ent::spin::{conjugate_rep_check, spin_ops};
use su2ent::state::InvariantState;
use su2ent::{Complex64, SpinLength};

use crate::Suite;

struct Line {
    suite: &'static str,
    what: String,
    residual: f64,
    tol: f64,
}

impl Line {
    fn passed(&self) -> bool {
        self.residual <= self.tol
    }
}

fn line(suite: &'static str, what: impl Into<String>, residual: f64, tol: f64) -> Line {
    Line {
        suite,
        what: what.into(),
        residual,
        tol,
    }
}

/// Runs the selected suites, prints one line per check, and reports
/// whether all of them passed.
pub fn run(suite: Suite) -> bool {
    let mut lines = Vec::new();
    if matches!(suite, Suite::Cg | Suite::All) {
        lines.extend(cg());
    }
    if matches!(suite, Suite::Spectra | Suite::All) {
        lines.extend(spectra());
    }
    if matches!(suite, Suite::Kstructure | Suite::All) {
        lines.extend(kstructure());
    }
    if matches!(suite, Suite::Covariance | Suite::All) {
        lines.extend(covariance());
    }
    let mut ok = true;
    for l in &lines {
        ok &= l.passed();
        println!(
            "{} {}: {}: max residual {:.3e} (tol {:.0e})",
            if l.passed() { "PASS" } else { "FAIL" },
            l.suite,
            l.what,
            l.residual,
            l.tol
        );
    }
    ok
}

fn cg() -> Vec<Line> {
    let (mut orth, mut comp, mut casimir) = (0.0f64, 0.0f64, 0.0f64);
    for two_s1 in 0..=9 {
        let ops = spin_ops(SpinLength::from_twice(two_s1));
        let mut c = DenseMatrix::zeros(two_s1 as usize + 1);
        for k in ops.components() {
            c.add_scaled(1.0, &k.matmul(k).expect("square"));
        }
        let s = SpinLength::from_twice(two_s1);
        casimir = casimir.max(c.max_abs_diff(&DenseMatrix::identity(s.dim()).scale(s.casimir())).expect("dims"));
        for two_s2 in 0..=9 {
            let u = coupled_basis(s, SpinLength::from_twice(two_s2)).unitary;
            let id = DenseMatrix::identity(u.dim());
            orth = orth.max(u.adjoint().matmul(&u).expect("dims").max_abs_diff(&id).expect("dims"));
            comp = comp.max(u.matmul(&u.adjoint()).expect("dims").max_abs_diff(&id).expect("dims"));
        }
    }
    vec![
        line("cg", "coupled basis orthogonality, 2S1, 2S2 <= 9", orth, 1e-12),
        line("cg", "coupled basis completeness, 2S1, 2S2 <= 9", comp, 1e-12),
        line("cg", "spin Casimir S(S+1), 2S <= 9", casimir, 1e-12),
    ]
}

fn sorted_expansion(values: impl Iterator<Item = (f64, usize)>) -> Vec<f64> {
    let mut v: Vec<f64> = values.flat_map(|(x, m)| std::iter::repeat(x).take(m)).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn spectra() -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (mut lam, mut lam_trace) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let s = SpinLength::from_twice(rng.gen_range(1..=9));
        let f: f64 = rng.gen();
        let l = lambda_closed_form(s, f).expect("F in range");
        let want = sorted_expansion([(l.lambda1, l.multiplicity1), (l.lambda2, l.multiplicity2)].into_iter());
        let st = InvariantState::new(s, SpinLength::HALF, vec![f, 1.0 - f]).expect("valid weights");
        lam = lam.max(deviation(&want, &analyze(&st).spectrum.eigenvalues));
        let tr = l.multiplicity1 as f64 * l.lambda1 + l.multiplicity2 as f64 * l.lambda2;
        lam_trace = lam_trace.max((tr - 1.0).abs());
    }
    let (mut mu, mut mu_trace) = (0.0f64, 0.0f64);
    for a in 0..10 {
        for b in 0..5 {
            let g = a as f64 / 10.0;
            let h = (1.0 - g) * b as f64 / 4.0;
            let m = mu_closed_form(g, h).expect("simplex point");
            let want = sorted_expansion(m.iter().map(|x| (x.value, x.multiplicity)));
            let st = InvariantState::new(SpinLength::ONE, SpinLength::ONE, vec![g, h, (1.0 - g - h).max(0.0)])
                .expect("valid weights");
            mu = mu.max(deviation(&want, &analyze(&st).spectrum.eigenvalues));
            let tr: f64 = m.iter().map(|x| x.value * x.multiplicity as f64).sum();
            mu_trace = mu_trace.max((tr - 1.0).abs());
        }
    }
    vec![
        line("spectra", "lambda closed form vs numeric, 200 random (S, F)", lam, 1e-10),
        line("spectra", "lambda trace identity", lam_trace, 1e-14),
        line("spectra", "mu closed form vs numeric, 50 (G, H) points", mu, 1e-10),
        line("spectra", "mu trace identity", mu_trace, 1e-14),
    ]
}

fn kstructure() -> Vec<Line> {
    let i = Complex64::new(0.0, 1.0);
    let mut algebra = 0.0f64;
    for (a, b) in [(1, 1), (2, 1), (3, 2), (5, 4)] {
        let k = KOps::new(SpinLength::from_twice(a), SpinLength::from_twice(b));
        let [x, y, z] = k.components();
        for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
            let lhs = p.commutator(q).expect("dims");
            algebra = algebra.max(lhs.max_abs_diff(&r.scale_complex(i)).expect("dims"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (mut structure, mut spread, mut top) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let s1 = SpinLength::from_twice(rng.gen_range(1..=5));
        let s2 = SpinLength::from_twice(rng.gen_range(1..=5));
        let r = analyze(&random_invariant_state(&mut rng, s1, s2));
        let want: Vec<u32> = (s1.twice().abs_diff(s2.twice())..=s1.twice() + s2.twice())
            .rev()
            .step_by(2)
            .collect();
        let got: Vec<u32> = r.k_multiplets.iter().map(|k| k.two_k).collect();
        if got != want {
            structure = 1.0;
        }
        spread = r.k_multiplets.iter().map(|k| k.spread).fold(spread, f64::max);
        if let Some(k) = r.k_multiplets.first() {
            top = top.max(-k.eigenvalue);
        }
    }
    vec![
        line("kstructure", "K operators close su(2)", algebra, 1e-12),
        line("kstructure", "one K-multiplet per K, 100 random states (0 = all present)", structure, 0.0),
        line("kstructure", "eigenvalue spread inside each K-multiplet", spread, 1e-10),
        line("kstructure", "negativity of the largest-K eigenvalue", top.max(0.0), 1e-12),
    ]
}

fn covariance() -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut worst = 0.0f64;
    for d1 in 2..=4u32 {
        for d2 in 2..=3u32 {
            let (s1, s2) = (SpinLength::from_twice(d1 - 1), SpinLength::from_twice(d2 - 1));
            for _ in 0..100 {
                let o = random_operator(&mut rng, (d1 * d2) as usize);
                let (u1, u2) = (random_rotation(&mut rng, s1), random_rotation(&mut rng, s2));
                worst = worst.max(pt_covariance_check(&o, &u1, &u2).expect("dims").residual);
            }
        }
    }
    let mut conj = 0.0f64;
    for two_s in 1..=9 {
        for _ in 0..10 {
            let p = random_rotation_params(&mut rng);
            conj = conj.max(conjugate_rep_check(SpinLength::from_twice(two_s), p).residual);
        }
    }
    vec![
        line("covariance", "partial transpose of rotated operators, 600 instances", worst, 1e-10),
        line("covariance", "conjugate representation U* = exp(i eta.(-Sx, Sy, -Sz))", conj, 1e-10),
    ]
}
