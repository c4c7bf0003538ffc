use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use groupoidlab::calgebra::{
    block_decompose, convolve, induced_rep, induced_rep_closed_form, involute, reduced_norm, reduced_norm_all_units,
    unit_orbits, zeta, AlgebraElement, CMatrix, ACCUMULATED_TOL, STRUCTURAL_TOL,
};
use groupoidlab::corpus;
use groupoidlab::groupoid::RelationGroupoid;
use groupoidlab::twist::{coboundary_twist, TwoCocycle};

struct Instance {
    relation: RelationGroupoid,
    sigma: Arc<TwoCocycle>,
    rng: rand_chacha::ChaCha8Rng,
}

fn instance(seed: u64) -> Instance {
    let mut rng = corpus::rng(seed);
    let (relation, sigma) = corpus::random_twisted_relation(&mut rng, 8, 8);
    Instance { relation, sigma, rng }
}

fn element<R: Rng>(rng: &mut R, sigma: &Arc<TwoCocycle>) -> AlgebraElement {
    let coeffs = (0..sigma.groupoid().len())
        .map(|_| if rng.gen_bool(0.3) { Complex64::new(0.0, 0.0) } else { Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) })
        .collect();
    AlgebraElement::from_coeffs(sigma.clone(), coeffs)
}

fn star(f: &AlgebraElement) -> AlgebraElement {
    involute(f)
}

fn mul(f: &AlgebraElement, g: &AlgebraElement) -> AlgebraElement {
    convolve(f, g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_algebra_axioms(seed in any::<u64>()) {
        let mut t = instance(seed);
        let (f, g, h) = (element(&mut t.rng, &t.sigma), element(&mut t.rng, &t.sigma), element(&mut t.rng, &t.sigma));
        prop_assert!(mul(&mul(&f, &g), &h).max_abs_diff(&mul(&f, &mul(&g, &h))) < ACCUMULATED_TOL);
        prop_assert!(star(&star(&f)).max_abs_diff(&f) < STRUCTURAL_TOL);
        prop_assert!(star(&mul(&f, &g)).max_abs_diff(&mul(&star(&g), &star(&f))) < STRUCTURAL_TOL);
        let one = AlgebraElement::identity(t.sigma.clone());
        prop_assert!(mul(&one, &f).max_abs_diff(&f) < STRUCTURAL_TOL);
        prop_assert!(mul(&f, &one).max_abs_diff(&f) < STRUCTURAL_TOL);
        let support = f.support();
        prop_assert!(support.iter().all(|&a| a < t.relation.groupoid.len()));
    }

    #[test]
    fn induced_representations(seed in any::<u64>()) {
        let mut t = instance(seed);
        let (f, g) = (element(&mut t.rng, &t.sigma), element(&mut t.rng, &t.sigma));
        let fg = mul(&f, &g);
        for &u in t.relation.groupoid.units() {
            let mf = induced_rep(u, &f).unwrap();
            prop_assert_eq!(mf.matrix.rows(), t.relation.groupoid.source_fibre(u).len());
            prop_assert!(mf.matrix.max_abs_diff(&induced_rep_closed_form(u, &f).unwrap().matrix) < STRUCTURAL_TOL);
            let mg = induced_rep(u, &g).unwrap().matrix;
            prop_assert!(induced_rep(u, &fg).unwrap().matrix.max_abs_diff(&(&mf.matrix * &mg)) < STRUCTURAL_TOL);
            prop_assert!(induced_rep(u, &star(&f)).unwrap().matrix.max_abs_diff(&mf.matrix.adjoint()) < STRUCTURAL_TOL);
        }
    }

    #[test]
    fn norms_agree(seed in any::<u64>()) {
        let mut t = instance(seed);
        let f = element(&mut t.rng, &t.sigma);
        let norm = reduced_norm(&f);
        prop_assert!((norm - reduced_norm_all_units(&f)).abs() < ACCUMULATED_TOL);
        let blocks = block_decompose(&t.relation, t.sigma.clone()).unwrap();
        prop_assert!((norm - blocks.norm(&f)).abs() < ACCUMULATED_TOL);
        prop_assert!((reduced_norm(&mul(&star(&f), &f)) - norm * norm).abs() < ACCUMULATED_TOL);
        let orbits = unit_orbits(&t.relation.groupoid);
        let sizes: usize = orbits.iter().map(|o| o.len() * o.len()).sum();
        prop_assert_eq!(sizes, t.relation.groupoid.len());
        prop_assert!(blocks.report.dimension_conserved && blocks.report.is_isomorphism);
    }

    /// With `σ₂ = σ₁ + δb`, `f ↦ f·ζ^{-b}` carries `Ind^{σ₁}_u(f)` to
    /// `Ind^{σ₂}_u` conjugated by `diag(ζ^{b(α)})`.
    #[test]
    fn cohomologous_twists_are_intertwined(seed in any::<u64>()) {
        let mut t = instance(seed);
        let g = t.sigma.groupoid().clone();
        let n = t.sigma.n();
        let b = corpus::random_cochain(&mut t.rng, &g, n);
        let sigma2 = Arc::new(t.sigma.add(&coboundary_twist(&b)).unwrap());
        let f = element(&mut t.rng, &t.sigma);
        let mut f2 = AlgebraElement::zero(sigma2.clone());
        for a in 0..g.len() {
            f2.set(a, f.coeff(a) * zeta(n, -(b.value(a) as i64)));
        }
        for &u in g.units() {
            let m1 = induced_rep(u, &f).unwrap();
            let m2 = induced_rep(u, &f2).unwrap().matrix;
            let d = CMatrix::from_fn(m1.basis.len(), m1.basis.len(), |i, j| {
                if i == j { zeta(n, b.value(m1.basis[i]) as i64) } else { Complex64::new(0.0, 0.0) }
            });
            prop_assert!((&(&d * &m2) * &d.adjoint()).max_abs_diff(&m1.matrix) < STRUCTURAL_TOL);
        }
    }
}
