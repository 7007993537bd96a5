mod common;

use common::{pd_corpus, sample};
use proptest::prelude::*;
use rhfact::grid::{Grid, C64};
use rhfact::posdef::{bochner_matrix, min_bochner_eigenvalue, pd_report, BochnerMatrix, PdConfig, Verdict};

const TOL: f64 = 1e-8;

fn points() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-6.0..6.0f64, 2..12)
}

fn schur(a: &BochnerMatrix, b: &BochnerMatrix) -> BochnerMatrix {
    BochnerMatrix {
        matrix: a.matrix.component_mul(&b.matrix),
        asymmetry: 0.0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bochner_matrices_of_pd_functions_are_psd(i in 0usize..10, pts in points()) {
        let f = pd_corpus()[i].f;
        prop_assert!(min_bochner_eigenvalue(&f, &pts).unwrap() >= -TOL);
    }

    #[test]
    fn bochner_matrix_is_hermitian(i in 0usize..10, pts in points()) {
        let b = bochner_matrix(&pd_corpus()[i].f, &pts).unwrap();
        prop_assert!(b.asymmetry < 1e-15);
    }

    #[test]
    fn schur_product_of_matrices(i in 0usize..10, j in 0usize..10, pts in points()) {
        let c = pd_corpus();
        let a = bochner_matrix(&c[i].f, &pts).unwrap();
        let b = bochner_matrix(&c[j].f, &pts).unwrap();
        prop_assert!(schur(&a, &b).min_eigenvalue() >= -TOL);
    }

    #[test]
    fn product_function_is_pd(i in 0usize..10, j in 0usize..10, pts in points()) {
        let c = pd_corpus();
        let (f, g) = (c[i].f, c[j].f);
        let fg = move |x: f64| f(x) * g(x);
        prop_assert!(min_bochner_eigenvalue(&fg, &pts).unwrap() >= -TOL);
    }

    #[test]
    fn exponential_closure(i in 0usize..10, k in prop::sample::select(vec![0.5, 1.0, 2.0]), pts in points()) {
        let f = pd_corpus()[i].f;
        let e = move |x: f64| (k * f(x)).exp();
        prop_assert!(min_bochner_eigenvalue(&e, &pts).unwrap() >= -TOL * (k * 1.0f64).exp());
    }
}

#[test]
fn schur_closure_on_every_corpus_pair() {
    let g = Grid::new(0.1, 400).unwrap();
    let c = pd_corpus();
    for a in &c {
        for b in &c {
            let (f, h) = (a.f, b.f);
            let s = rhfact::grid::SampledFunction::from_fn(g, |x| f(x) * h(x)).unwrap();
            let r = pd_report(&s, &PdConfig::default()).unwrap();
            assert_eq!(r.verdict, Verdict::Pd, "{} x {}: {r:?}", a.name, b.name);
        }
    }
}

#[test]
fn corpus_is_pd() {
    let g = Grid::new(0.1, 400).unwrap();
    for n in pd_corpus() {
        let r = pd_report(&sample(g, n.f), &PdConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pd, "{}: {r:?}", n.name);
    }
}

#[test]
fn rectangle_counterexample() {
    let rect = |x: f64| C64::new(if x.abs() <= 1.0 { 1.0 } else { 0.0 }, 0.0);
    let e = min_bochner_eigenvalue(&rect, &[0.0, 0.9, 1.8]).unwrap();
    assert!(e <= 1.0 - 2f64.sqrt() + 1e-8);
}
