//! Lévy–Khintchine exponents for jump-diffusions and the characteristic
//! functions of the process stopped at an independent random time.
//!
//! `E exp(iλX_t) = exp(-tψ(λ))` with
//! `ψ(λ) = σ²λ²/2 - iμλ + η(1 - E exp(iλJ))` for compound-Poisson jumps.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction, C64};
use crate::multiplicative::unwrap_phase;
use crate::posdef::{pd_report, PdConfig, PdReport};
use crate::quad::exp_sinh;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum JumpLaw {
    /// Normal(m, s²) jump sizes.
    Gaussian { m: f64, s: f64 },
    /// With probability `p` an Exp(theta_plus) upward jump, otherwise an
    /// Exp(theta_minus) downward one.
    ExponentialTwosided { p: f64, theta_plus: f64, theta_minus: f64 },
}

impl JumpLaw {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            JumpLaw::Gaussian { m, s } => m.is_finite() && s.is_finite() && s >= 0.0,
            JumpLaw::ExponentialTwosided { p, theta_plus, theta_minus } => {
                (0.0..=1.0).contains(&p) && theta_plus > 0.0 && theta_minus > 0.0 && theta_plus.is_finite() && theta_minus.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid jump law {self:?}")))
        }
    }

    /// `E exp(iλJ)`.
    pub fn char_fn(&self, lambda: f64) -> C64 {
        match *self {
            JumpLaw::Gaussian { m, s } => C64::new(-0.5 * s * s * lambda * lambda, m * lambda).exp(),
            JumpLaw::ExponentialTwosided { p, theta_plus, theta_minus } => {
                p * theta_plus / C64::new(theta_plus, -lambda) + (1.0 - p) * theta_minus / C64::new(theta_minus, lambda)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Jumps {
    #[default]
    None,
    CompoundPoisson { intensity: f64, law: JumpLaw },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevyModel {
    pub mu: f64,
    pub sigma: f64,
    #[serde(default)]
    pub jumps: Jumps,
}

impl LevyModel {
    pub fn brownian(mu: f64, sigma: f64) -> Self {
        LevyModel { mu, sigma, jumps: Jumps::None }
    }

    pub fn jump_diffusion(mu: f64, sigma: f64, intensity: f64, law: JumpLaw) -> Self {
        LevyModel {
            mu,
            sigma,
            jumps: Jumps::CompoundPoisson { intensity, law },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() || !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need finite mu and sigma >= 0, got mu = {}, sigma = {}",
                self.mu, self.sigma
            )));
        }
        if let Jumps::CompoundPoisson { intensity, law } = self.jumps {
            if !(intensity.is_finite() && intensity > 0.0) {
                return Err(Error::InvalidParameter(format!("jump intensity must be > 0, got {intensity}")));
            }
            law.validate()?;
        }
        Ok(())
    }

    pub fn psi(&self, lambda: f64) -> C64 {
        let mut v = C64::new(0.5 * self.sigma * self.sigma * lambda * lambda, -self.mu * lambda);
        if let Jumps::CompoundPoisson { intensity, law } = self.jumps {
            v += intensity * (1.0 - law.char_fn(lambda));
        }
        v
    }

    /// `E exp(iλX_t) = exp(-tψ(λ))`.
    pub fn char_fn_at(&self, lambda: f64, t: f64) -> C64 {
        (-t * self.psi(lambda)).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KillingTime {
    Exponential { q: f64 },
    /// Number of unit steps `T` with `P(T = k) = (1-q) q^k`.
    Geometric { q: f64 },
}

impl KillingTime {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KillingTime::Exponential { q } if q.is_finite() && q > 0.0 => Ok(()),
            KillingTime::Geometric { q } if q > 0.0 && q < 1.0 => Ok(()),
            other => Err(Error::InvalidParameter(format!("invalid killing time {other:?}"))),
        }
    }

    pub fn q(&self) -> f64 {
        match *self {
            KillingTime::Exponential { q } | KillingTime::Geometric { q } => q,
        }
    }

    /// Characteristic function of the killed position.
    pub fn char_fn(&self, model: &LevyModel, lambda: f64) -> C64 {
        match *self {
            KillingTime::Exponential { q } => q / (q + model.psi(lambda)),
            KillingTime::Geometric { q } => (1.0 - q) / (1.0 - q * model.char_fn_at(lambda, 1.0)),
        }
    }
}

fn sampled(model: &LevyModel, grid: Grid, f: impl Fn(f64) -> C64) -> Result<SampledFunction> {
    model.validate()?;
    SampledFunction::from_fn(grid, f)
}

pub fn psi_function(model: &LevyModel, grid: Grid) -> Result<SampledFunction> {
    sampled(model, grid, |l| model.psi(l))
}

pub fn char_fn_at_time(model: &LevyModel, t: f64, grid: Grid) -> Result<SampledFunction> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be >= 0, got {t}")));
    }
    sampled(model, grid, |l| model.char_fn_at(l, t))
}

/// `q / (q + ψ)`.
pub fn char_fn_exp_time(model: &LevyModel, q: f64, grid: Grid) -> Result<SampledFunction> {
    KillingTime::Exponential { q }.validate()?;
    sampled(model, grid, |l| q / (q + model.psi(l)))
}

/// `(1-q) / (1 - q exp(-t_step ψ))`: the position after a geometric number
/// of steps of length `t_step`.
pub fn char_fn_geom_time(model: &LevyModel, q: f64, t_step: f64, grid: Grid) -> Result<SampledFunction> {
    KillingTime::Geometric { q }.validate()?;
    if !(t_step.is_finite() && t_step > 0.0) {
        return Err(Error::InvalidParameter(format!("t_step must be > 0, got {t_step}")));
    }
    sampled(model, grid, |l| (1.0 - q) / (1.0 - q * model.char_fn_at(l, t_step)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingIndex {
    pub index: i64,
    /// Unrounded winding number.
    pub raw: f64,
    pub min_abs: f64,
}

/// Winding number of `f + offset` along the grid, closed through infinity
/// by joining the right end value back to the left one.
pub fn winding_index(f: &SampledFunction, offset: C64, zero_tol: f64) -> Result<WindingIndex> {
    let shifted: Vec<C64> = f.values().iter().map(|v| v + offset).collect();
    let min_abs = shifted.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if !(min_abs > zero_tol) {
        return Err(Error::ZeroCrossing { min_abs, tol: zero_tol });
    }
    let phase = unwrap_phase(&shifted)?;
    let closing = (shifted[0] / shifted[shifted.len() - 1]).arg();
    let raw = (phase[phase.len() - 1] - phase[0] + closing) / (2.0 * PI);
    Ok(WindingIndex {
        index: raw.round() as i64,
        raw,
        min_abs,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaPowerReport {
    pub beta: f64,
    pub pd: PdReport,
    /// Largest gap between the principal power and the gamma-integral form.
    pub identity_max_error: f64,
    pub check_points: Vec<f64>,
}

/// Tolerance for the gamma-integral cross-check.
pub const IDENTITY_TOL: f64 = 1e-6;

/// `∫_0^∞ x^{β-1} e^{-x} / Γ(β) · exp(-(x/q) ψ(λ)) dx`, which equals
/// `(q/(q+ψ(λ)))^β`.
pub fn gamma_mixture(model: &LevyModel, q: f64, beta: f64, lambda: f64) -> C64 {
    let rate = 1.0 + model.psi(lambda) / q;
    let lg = ln_gamma(beta);
    exp_sinh(|x, ln_x| ((beta - 1.0) * ln_x - lg - x * rate).exp(), 1.0 / 64.0)
}

/// `(q/(q+ψ))^β` by principal power (`Re(q+ψ) > 0`, so the principal branch
/// is continuous), cross-checked against [`gamma_mixture`] at the nodes
/// nearest to λ = -2, -1, 0, 1, 2, then tested for positive definiteness.
pub fn beta_power_check(model: &LevyModel, q: f64, beta: f64, grid: Grid, pd_cfg: &PdConfig) -> Result<BetaPowerReport> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidParameter(format!("beta must be > 0, got {beta}")));
    }
    KillingTime::Exponential { q }.validate()?;
    let f = sampled(model, grid, |l| (beta * (q.ln() - (q + model.psi(l)).ln())).exp())?;
    let mut check_points = Vec::new();
    let mut err: f64 = 0.0;
    for target in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        let k = (target / grid.h()).round() as isize;
        let k = k.clamp(-(grid.n_half() as isize), grid.n_half() as isize);
        let lambda = k as f64 * grid.h();
        check_points.push(lambda);
        let v = f.at_node(k).expect("clamped node");
        err = err.max((v - gamma_mixture(model, q, beta, lambda)).norm());
    }
    if err > IDENTITY_TOL {
        return Err(Error::BoundViolated {
            what: "gamma-integral identity",
            value: err,
            bound: IDENTITY_TOL,
        });
    }
    Ok(BetaPowerReport {
        beta,
        pd: pd_report(&f, pd_cfg)?,
        identity_max_error: err,
        check_points,
    })
}

/// Grid L¹ norm and squared L² norm of `exp(-tψ)`, checked against
/// `√(2π)/(σ√t)` and `√π/(σ√t)`. The slack covers roundoff and the
/// Gaussian mass beyond the grid.
pub fn l1_l2_bounds_check(model: &LevyModel, t: f64, grid: Grid) -> Result<(f64, f64)> {
    if !(model.sigma > 0.0 && t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter("need sigma > 0 and t > 0".into()));
    }
    let phi = char_fn_at_time(model, t, grid)?;
    let h = grid.h();
    let l1 = phi.values().iter().map(|v| v.norm()).sum::<f64>() * h;
    let l2 = phi.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * h;
    let scale = model.sigma * t.sqrt();
    let b1 = (2.0 * PI).sqrt() / scale;
    let b2 = PI.sqrt() / scale;
    let slack = |b: f64| 1e-9 * b;
    if l1 > b1 + slack(b1) {
        return Err(Error::BoundViolated { what: "L1 norm", value: l1, bound: b1 });
    }
    if l2 > b2 + slack(b2) {
        return Err(Error::BoundViolated { what: "squared L2 norm", value: l2, bound: b2 });
    }
    Ok((l1, l2))
}

/// Part of the Gaussian L¹ bound lying beyond the grid, for callers who
/// compare the grid norm with the full-line value.
pub fn gaussian_l1_tail(model: &LevyModel, t: f64, grid: Grid) -> f64 {
    let scale = model.sigma * t.sqrt();
    (2.0 * PI).sqrt() / scale * erfc(grid.x_max() * scale / 2f64.sqrt())
}

/// `(min, max)` of `|ψ(λ)| / λ²` over the outer tenth of the grid; a
/// positive, stable ratio is the numerical reading of quadratic growth.
pub fn quadratic_growth_ratio(model: &LevyModel, grid: Grid) -> (f64, f64) {
    let cut = 0.9 * grid.x_max();
    grid.points()
        .filter(|l| l.abs() >= cut)
        .map(|l| model.psi(l).norm() / (l * l))
        .fold((f64::INFINITY, 0.0), |(lo, hi), r| (lo.min(r), hi.max(r)))
}
