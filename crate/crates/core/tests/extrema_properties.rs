mod common;

use common::models;
use rhfact::extrema::{default_x_grid, extrema_distributions, wh_factors, DensityOptions, WhOptions};
use rhfact::grid::Grid;
use rhfact::levy::{char_fn_exp_time, LevyModel};

#[test]
fn corpus_factors_and_laws() {
    let g = Grid::default();
    let xs = default_x_grid();
    for (name, m) in models() {
        for q in [0.5, 1.0, 2.0] {
            let wh = wh_factors(&m, q, g, &WhOptions::default()).unwrap_or_else(|e| panic!("{name} q={q}: {e}"));
            let target = char_fn_exp_time(&m, q, g).unwrap();
            let prod = wh.psi_q_plus.zip_with(&wh.psi_q_minus, |a, b| a * b).unwrap();
            assert!(prod.max_abs_diff(&target) < 1e-6, "{name} q={q}");
            println!(
                "{name} q={q}: leak {:.1e} {:.1e} g {:.1e} {:.1e}",
                wh.leakage_plus, wh.leakage_minus, wh.leakage_g_plus, wh.leakage_g_minus
            );
            for l in [wh.leakage_plus, wh.leakage_minus, wh.leakage_g_plus, wh.leakage_g_minus] {
                assert!(l < 1e-2, "{name} q={q}: leakage {l}");
            }
            let d = extrema_distributions(&wh, &xs, &DensityOptions::default()).unwrap();
            assert!((d.mass_sup - 1.0).abs() < 1e-2 && (d.mass_inf - 1.0).abs() < 1e-2, "{name} q={q}");
            // supports: M >= 0 and I <= 0
            for (i, &x) in xs.iter().enumerate() {
                if x < -0.05 {
                    assert!(d.pdf_sup[i].abs() < 5e-3 && d.cdf_sup[i].abs() < 5e-3, "{name} x={x}");
                }
                if x > 0.05 {
                    assert!(d.pdf_inf[i].abs() < 5e-3 && (d.cdf_inf[i] - 1.0).abs() < 5e-3, "{name} x={x}");
                }
            }
            assert!(d.cdf_defect_sup < 1e-3 && d.cdf_defect_inf < 1e-3, "{name} q={q}");
        }
    }
}

#[test]
fn supremum_grows_as_rate_falls() {
    // a longer horizon can only raise the supremum: cdf_sup(q') <= cdf_sup(q) for q' < q
    let xs = default_x_grid();
    for (name, m) in models() {
        let laws: Vec<_> = [0.5, 1.0, 2.0]
            .iter()
            .map(|&q| {
                let wh = wh_factors(&m, q, Grid::default(), &WhOptions::default()).unwrap();
                extrema_distributions(&wh, &xs, &DensityOptions::default()).unwrap()
            })
            .collect();
        for w in laws.windows(2) {
            for i in 0..xs.len() {
                assert!(w[0].cdf_sup[i] <= w[1].cdf_sup[i] + 2e-3, "{name} x={}", xs[i]);
                assert!(w[0].cdf_inf[i] + 2e-3 >= w[1].cdf_inf[i], "{name} x={}", xs[i]);
            }
        }
    }
}

#[test]
fn mirrored_model_swaps_the_extrema() {
    let m = LevyModel::brownian(0.4, 1.1);
    let r = LevyModel::brownian(-0.4, 1.1);
    let xs = default_x_grid();
    let opts = WhOptions::default();
    let d = extrema_distributions(&wh_factors(&m, 1.0, Grid::default(), &opts).unwrap(), &xs, &DensityOptions::default()).unwrap();
    let e = extrema_distributions(&wh_factors(&r, 1.0, Grid::default(), &opts).unwrap(), &xs, &DensityOptions::default()).unwrap();
    let n = xs.len() - 1;
    for i in 0..=n {
        assert!((d.pdf_sup[i] - e.pdf_inf[n - i]).abs() < 1e-3);
    }
}
