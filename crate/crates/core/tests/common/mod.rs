//! Shared function and model corpora for the integration tests.
#![allow(dead_code)]

use rhfact::grid::{Grid, SampledFunction, C64};
use rhfact::levy::{JumpLaw, LevyModel};

pub struct Named {
    pub name: &'static str,
    pub f: fn(f64) -> C64,
}

fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        t.sin() / t
    }
}

/// Positive definite functions: each has a nonnegative transform.
pub fn pd_corpus() -> Vec<Named> {
    vec![
        Named { name: "gaussian", f: |x| re((-0.5 * x * x).exp()) },
        Named { name: "narrow gaussian", f: |x| re((-2.0 * x * x).exp()) },
        Named { name: "wide gaussian", f: |x| re((-x * x / 8.0).exp()) },
        Named { name: "cauchy", f: |x| re(1.0 / (1.0 + x * x)) },
        Named { name: "wide cauchy", f: |x| re(1.0 / (1.0 + x * x / 4.0)) },
        Named { name: "gaussian at +1", f: |x| C64::new(0.0, x).exp() * (-0.5 * x * x).exp() },
        Named { name: "gaussian at -2", f: |x| C64::new(0.0, -2.0 * x).exp() * (-0.5 * x * x).exp() },
        Named { name: "wide gaussian at 0.5", f: |x| C64::new(0.0, 0.5 * x).exp() * (-x * x / 4.5).exp() },
        Named { name: "sinc squared", f: |x| re(sinc(x).powi(2)) },
        Named { name: "wide-band sinc squared", f: |x| re(sinc(1.5 * x).powi(2)) },
    ]
}

pub fn sample(g: Grid, f: fn(f64) -> C64) -> SampledFunction {
    SampledFunction::from_fn(g, f).unwrap()
}

pub fn models() -> Vec<(&'static str, LevyModel)> {
    vec![
        ("bm", LevyModel::brownian(0.0, 2f64.sqrt())),
        ("bm drift up", LevyModel::brownian(0.5, 1.0)),
        ("bm drift down", LevyModel::brownian(-0.3, 0.8)),
        ("gaussian jumps", LevyModel::jump_diffusion(0.2, 1.0, 1.0, JumpLaw::Gaussian { m: 0.0, s: 0.5 })),
        (
            "two-sided exponential jumps",
            LevyModel::jump_diffusion(0.1, 0.8, 2.0, JumpLaw::ExponentialTwosided { p: 0.4, theta_plus: 3.0, theta_minus: 2.0 }),
        ),
        (
            "pure jump",
            LevyModel::jump_diffusion(-1.0, 0.0, 1.0, JumpLaw::ExponentialTwosided { p: 0.5, theta_plus: 2.0, theta_minus: 2.0 }),
        ),
    ]
}
