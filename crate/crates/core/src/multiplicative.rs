//! Multiplicative factorization `f = Φ₊ Φ₋` through a continuous logarithm.
//!
//! `log f = g₊ + g₋ + λ₀` with `λ₀` the value of `log f` at infinity (the
//! mean of its two end values on the grid), `g₊ + g₋ = log f - λ₀` split
//! additively, and `Φ± = exp(g± + λ₀/2)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::additive::{split_additive_cardinal_grid, split_additive_spectral};
use crate::error::{Error, Result};
use crate::grid::{SampledFunction, C64};

/// Increments at or above this are treated as unresolved by the grid.
const MAX_PHASE_STEP: f64 = 0.9 * PI;

#[derive(Clone, Debug, PartialEq)]
pub struct LogBranch {
    pub values: Vec<C64>,
    /// Total change of the argument from the left end to the right end.
    pub winding_accumulated: f64,
    pub min_abs: f64,
}

/// Unwrapped argument of a nonvanishing sequence, starting from the
/// principal argument of the first value.
pub fn unwrap_phase(values: &[C64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(values.len());
    let Some(first) = values.first() else {
        return Ok(out);
    };
    let mut phase = first.arg();
    out.push(phase);
    for (i, w) in values.windows(2).enumerate() {
        let step = (w[1] / w[0]).arg();
        if step.abs() >= MAX_PHASE_STEP {
            return Err(Error::PhaseJump {
                index: i,
                next: i + 1,
                increment: step,
            });
        }
        phase += step;
        out.push(phase);
    }
    Ok(out)
}

/// `log|f| + i arg f` with the argument continued from the left end.
/// `zero_tol` is the smallest admissible `|f|`.
pub fn continuous_log(f: &SampledFunction, zero_tol: f64) -> Result<LogBranch> {
    let min_abs = f.min_abs();
    if !(min_abs > zero_tol) {
        return Err(Error::ZeroCrossing { min_abs, tol: zero_tol });
    }
    let phase = unwrap_phase(f.values())?;
    let values = f
        .values()
        .iter()
        .zip(&phase)
        .map(|(v, p)| C64::new(v.norm().ln(), *p))
        .collect();
    Ok(LogBranch {
        values,
        winding_accumulated: phase[phase.len() - 1] - phase[0],
        min_abs,
    })
}

/// `f + ε`. A nonnegative constant adds `2πε δ(ω)` to the transform, so
/// positive definiteness is preserved.
pub fn perturb_epsilon(f: &SampledFunction, epsilon: f64) -> Result<SampledFunction> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {epsilon}")));
    }
    f.map(|_, v| v + epsilon)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMethod {
    /// Full half-kernel series (linear convolution). No wrap-around.
    #[default]
    Cardinal,
    /// Masked discrete transform. Periodic, so functions that do not
    /// decay pick up an O(1/L) artifact.
    Spectral,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FactorizeOptions {
    /// Bound on `‖Φ₊Φ₋ - (f + ε)‖∞`.
    pub tol: f64,
    pub epsilon: f64,
    pub normalize_at_zero: bool,
    pub split: SplitMethod,
    /// Relative zero threshold: `min |f + ε|` must exceed `zero_tol * sup|f + ε|`.
    pub zero_tol: f64,
}

impl Default for FactorizeOptions {
    fn default() -> Self {
        FactorizeOptions {
            tol: 1e-6,
            epsilon: 0.0,
            normalize_at_zero: false,
            split: SplitMethod::Cardinal,
            zero_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FactorizationResult {
    pub phi_plus: SampledFunction,
    pub phi_minus: SampledFunction,
    pub g_plus: SampledFunction,
    pub g_minus: SampledFunction,
    pub const_lambda: C64,
    pub epsilon_used: f64,
    /// `Φ₊` was divided by this and `Φ₋` multiplied by it.
    pub normalization_factor: C64,
    pub product_residual: f64,
    pub min_abs: f64,
    pub winding_accumulated: f64,
}

pub fn factorize_multiplicative(f: &SampledFunction, opts: &FactorizeOptions) -> Result<FactorizationResult> {
    let target = perturb_epsilon(f, opts.epsilon)?;
    let log = continuous_log(&target, opts.zero_tol * target.sup_norm())?;
    let last = log.values.len() - 1;
    let lambda0 = (log.values[0] + log.values[last]) * 0.5;
    let g = SampledFunction::new(*f.grid(), log.values.iter().map(|v| v - lambda0).collect())?;
    let split = match opts.split {
        SplitMethod::Cardinal => split_additive_cardinal_grid(&g, f64::INFINITY)?,
        SplitMethod::Spectral => split_additive_spectral(&g, f64::INFINITY)?,
    };
    let half = lambda0 * 0.5;
    let mut phi_plus = split.f_plus.map(|_, v| (v + half).exp())?;
    let mut phi_minus = split.f_minus.map(|_, v| (v + half).exp())?;
    let mut norm = C64::new(1.0, 0.0);
    if opts.normalize_at_zero {
        norm = phi_plus.at_zero();
        phi_plus = phi_plus.map(|_, v| v / norm)?;
        phi_minus = phi_minus.map(|_, v| v * norm)?;
    }
    let product_residual = phi_plus
        .values()
        .iter()
        .zip(phi_minus.values())
        .zip(target.values())
        .map(|((p, m), t)| (p * m - t).norm())
        .fold(0.0, f64::max);
    if !(product_residual <= opts.tol) {
        return Err(Error::Residual {
            what: "factor product",
            residual: product_residual,
            tol: opts.tol,
        });
    }
    Ok(FactorizationResult {
        phi_plus,
        phi_minus,
        g_plus: split.f_plus,
        g_minus: split.f_minus,
        const_lambda: lambda0,
        epsilon_used: opts.epsilon,
        normalization_factor: norm,
        product_residual,
        min_abs: log.min_abs,
        winding_accumulated: log.winding_accumulated,
    })
}

/// Runs [`factorize_multiplicative`]; on a zero-crossing and with
/// `auto_epsilon` set, retries once with `ε = 1e-3 sup|f|`.
pub fn factorize_with_retry(f: &SampledFunction, opts: &FactorizeOptions, auto_epsilon: bool) -> Result<FactorizationResult> {
    match factorize_multiplicative(f, opts) {
        Err(Error::ZeroCrossing { .. }) if auto_epsilon => {
            let retry = FactorizeOptions {
                epsilon: opts.epsilon.max(1e-3 * f.sup_norm()),
                ..*opts
            };
            log::info!("zero-crossing; retrying with epsilon = {:.3e}", retry.epsilon);
            factorize_multiplicative(f, &retry)
        }
        other => other,
    }
}

/// `exp(M) * g_error`: the factor error caused by an additive-stage error of
/// `g_error` when the real parts stay below `m_bound`.
pub fn error_propagation_bound(g_error: f64, m_bound: f64) -> f64 {
    m_bound.exp() * g_error
}

/// `exp(N) * g_error`, the matching lower bound when real parts stay above
/// `n_bound`.
pub fn error_propagation_lower_bound(g_error: f64, n_bound: f64) -> f64 {
    n_bound.exp() * g_error
}
