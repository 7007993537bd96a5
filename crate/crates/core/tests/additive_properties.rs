mod common;

use common::{pd_corpus, sample};
use proptest::prelude::*;
use rhfact::additive::{
    one_sided_leakage, spectral_cardinal_gap_bound, split_additive_cardinal_grid, split_additive_spectral, Side,
};
use rhfact::grid::{Grid, SampledFunction, C64};
use rhfact::posdef::{pd_report, PdConfig, Verdict};

fn grid() -> Grid {
    Grid::new(0.1, 400).unwrap()
}

/// Sum of shifted, modulated Gaussian bumps with complex weights.
fn bumps(params: &[(f64, f64, f64, f64, f64)]) -> SampledFunction {
    let p = params.to_vec();
    SampledFunction::from_fn(grid(), move |x| {
        p.iter()
            .map(|&(wr, wi, c, w, a)| C64::new(wr, wi) * C64::new(0.0, a * x).exp() * (-((x - c) / w).powi(2)).exp())
            .sum()
    })
    .unwrap()
}

fn bump() -> impl Strategy<Value = (f64, f64, f64, f64, f64)> {
    (-2.0..2.0f64, -2.0..2.0f64, -5.0..5.0f64, 0.5..2.0f64, -3.0..3.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parts_reconstruct(params in prop::collection::vec(bump(), 1..4)) {
        let f = bumps(&params);
        let s = split_additive_spectral(&f, 1e-8).unwrap();
        prop_assert!(s.sum_residual < 1e-12 * (1.0 + f.sup_norm()));
        let c = split_additive_cardinal_grid(&f, 1e-8).unwrap();
        prop_assert!(c.sum_residual < 1e-12 * (1.0 + f.sup_norm()));
    }

    #[test]
    fn splits_agree_within_gap_bound(params in prop::collection::vec(bump(), 1..3)) {
        let f = bumps(&params);
        let s = split_additive_spectral(&f, 1e-8).unwrap();
        let c = split_additive_cardinal_grid(&f, 1e-8).unwrap();
        let gap = s.f_plus.max_abs_diff(&c.f_plus);
        prop_assert!(gap <= spectral_cardinal_gap_bound(&f) + 1e-12, "{} > {}", gap, spectral_cardinal_gap_bound(&f));
    }

    #[test]
    fn split_is_linear(a in prop::collection::vec(bump(), 1..3), b in prop::collection::vec(bump(), 1..3), k in -2.0..2.0f64) {
        let (fa, fb) = (bumps(&a), bumps(&b));
        let sum = fa.zip_with(&fb, |x, y| x * k + y).unwrap();
        let (sa, sb, ss) = (
            split_additive_spectral(&fa, 1.0).unwrap(),
            split_additive_spectral(&fb, 1.0).unwrap(),
            split_additive_spectral(&sum, 1.0).unwrap(),
        );
        let lin = sa.f_plus.zip_with(&sb.f_plus, |x, y| x * k + y).unwrap();
        prop_assert!(lin.max_abs_diff(&ss.f_plus) < 1e-12);
    }

    #[test]
    fn real_even_input_gives_conjugate_parts(w in 0.5..2.0f64) {
        // f real and even: f- is the reflection of f+, and f+(-x) = conj f+(x)
        let f = SampledFunction::from_real_fn(grid(), |x| (-(x / w).powi(2)).exp()).unwrap();
        let s = split_additive_spectral(&f, 1e-8).unwrap();
        let n = grid().n_half() as isize;
        for k in -n..=n {
            let p = s.f_plus.at_node(k).unwrap();
            prop_assert!((p - s.f_minus.at_node(-k).unwrap()).norm() < 1e-14);
            prop_assert!((s.f_minus.at_node(k).unwrap() - p.conj()).norm() < 1e-14);
        }
    }
}

#[test]
fn corpus_contract() {
    let g = grid();
    for n in pd_corpus() {
        let f = sample(g, n.f);
        let s = split_additive_spectral(&f, 1e-8).unwrap();
        assert!(s.relative_wrongside() < 1e-8, "{}", n.name);
        let c = split_additive_cardinal_grid(&f, 1e-8).unwrap();
        assert!(s.f_plus.max_abs_diff(&c.f_plus) <= spectral_cardinal_gap_bound(&f) + 1e-12, "{}", n.name);
        for part in [&s.f_plus, &s.f_minus] {
            let r = pd_report(part, &PdConfig::default()).unwrap();
            assert_eq!(r.verdict, Verdict::Pd, "{}: {r:?}", n.name);
        }
    }
}

#[test]
fn parts_are_one_sided() {
    let f = sample(grid(), |x| C64::new((-0.5 * x * x).exp(), 0.0));
    let s = split_additive_cardinal_grid(&f, 1e-8).unwrap();
    assert!(one_sided_leakage(&s.f_plus, Side::Plus) < 1e-4);
    assert!(one_sided_leakage(&s.f_minus, Side::Minus) < 1e-4);
}

#[test]
fn zero_function() {
    let f = SampledFunction::zeros(grid());
    let s = split_additive_spectral(&f, 1e-8).unwrap();
    assert!(s.f_plus.values().iter().chain(s.f_minus.values()).all(|v| *v == C64::new(0.0, 0.0)));
}

#[test]
fn plain_sinc_split() {
    // 1/x decay makes the truncated transform ring, so only the linear
    // contract is checked here
    let f = SampledFunction::from_real_fn(Grid::new(1.0, 400).unwrap(), |x| if x == 0.0 { 1.0 } else { x.sin() / x }).unwrap();
    let s = split_additive_spectral(&f, 1e-10).unwrap();
    assert!(s.relative_wrongside() < 1e-8);
    let c = split_additive_cardinal_grid(&f, 1e-10).unwrap();
    assert!(s.f_plus.max_abs_diff(&c.f_plus) <= spectral_cardinal_gap_bound(&f) + 1e-12);
}
