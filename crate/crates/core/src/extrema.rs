//! Laws of the supremum `M_q` and infimum `I_q` of a Lévy process run up to
//! an independent Exponential(q) time.
//!
//! With `g(λ) = (c + ln q - ln(q + ψ(λ))) / (1 + iλ)` split as `g₊ + g₋`,
//!
//! ```text
//! q/(q+ψ) = ψ_{q+} ψ_{q-},   ψ_{q±}(λ) = exp((1 + iλ) g±(λ) - c/2)
//! ```
//!
//! and `ψ_{q+}` (`ψ_{q-}`) is the characteristic function of `M_q` (`I_q`).
//!
//! `g` decays only like `ln|λ|/|λ|`, which the grid cannot resolve to the
//! required accuracy. Its slowly decaying part is therefore written in
//! closed form,
//!
//! ```text
//! ln(q+ψ) ≈ A₊ ln(1-iλ) + A₋ ln(1+iλ) + r∞ + d (1/(1-iλ) - 1/(1+iλ)),
//! ```
//!
//! and split analytically; only the O(|λ|⁻³) remainder goes through the
//! numerical additive split.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::additive::{one_sided_leakage, split_additive_cardinal_grid, split_additive_spectral, Side};
use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction, C64};
use crate::levy::{KillingTime, LevyModel};
use crate::multiplicative::SplitMethod;
use crate::posdef::{pd_report, PdConfig, PdReport, Verdict};

/// `(c + ln q - ln(q + ψ(λ))) / (1 + iλ)`. `Re(q + ψ) >= q > 0`, so the
/// principal logarithm is the continuous branch with `ln(q + ψ(0)) = ln q`.
pub fn build_g(model: &LevyModel, q: f64, c: f64, grid: Grid) -> Result<SampledFunction> {
    model.validate()?;
    KillingTime::Exponential { q }.validate()?;
    SampledFunction::from_fn(grid, |l| (c + q.ln() - (q + model.psi(l)).ln()) / C64::new(1.0, l))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WhOptions {
    pub c: f64,
    pub split: SplitMethod,
    /// Bound on `‖ψ_{q+}ψ_{q-} - q/(q+ψ)‖∞`.
    pub tol_residual: f64,
    /// Run `pd_report` on both factors; `not_pd` is then an error.
    pub check_pd: bool,
    pub pd: PdConfig,
    /// Where the logarithmic tail constants are read off.
    pub tail_lambda: f64,
}

impl Default for WhOptions {
    fn default() -> Self {
        WhOptions {
            c: 0.0,
            split: SplitMethod::Cardinal,
            tol_residual: 1e-6,
            check_pd: true,
            pd: PdConfig { tol: Some(FACTOR_PD_TOL), ..PdConfig::default() },
            tail_lambda: 1e5,
        }
    }
}

/// Exponents of `ln(1 ∓ iλ)` in the growth of `ln(q + ψ)`.
fn log_growth(model: &LevyModel) -> (u32, u32) {
    if model.sigma > 0.0 {
        (1, 1)
    } else if model.mu > 0.0 {
        (1, 0)
    } else if model.mu < 0.0 {
        (0, 1)
    } else {
        (0, 0)
    }
}

/// Closed-form tail of `g` and its `+` part.
struct LogTail {
    a_plus: f64,
    a_minus: f64,
    r_inf: C64,
    d: C64,
}

impl LogTail {
    fn new(model: &LevyModel, q: f64, big: f64) -> Self {
        let (ap, am) = log_growth(model);
        let (a_plus, a_minus) = (ap as f64, am as f64);
        let rest = |l: f64| {
            (q + model.psi(l)).ln() - a_plus * C64::new(1.0, -l).ln() - a_minus * C64::new(1.0, l).ln()
        };
        let (rp, rm) = (rest(big), rest(-big));
        LogTail {
            a_plus,
            a_minus,
            r_inf: (rp + rm) * 0.5,
            d: (rp - rm) * (1.0 + big * big) / C64::new(0.0, 4.0 * big),
        }
    }

    /// Tail of `g` for the given `c` and `q`.
    fn g(&self, l: f64, q: f64, c: f64) -> C64 {
        let (up, down) = (C64::new(1.0, -l), C64::new(1.0, l));
        let ln_growth = self.a_plus * up.ln() + self.a_minus * down.ln() + self.r_inf + self.d * (1.0 / up - 1.0 / down);
        (c + q.ln() - ln_growth) / down
    }

    /// `+` part of [`LogTail::g`]: `[ln(1-iλ) - ln 2]/(1+iλ)` is regular at
    /// `λ = i`, and `1/((1-iλ)(1+iλ))` splits into simple fractions.
    fn g_plus(&self, l: f64) -> C64 {
        let (up, down) = (C64::new(1.0, -l), C64::new(1.0, l));
        -self.a_plus * (up.ln() - 2f64.ln()) / down - self.d * 0.5 / up
    }
}

/// Absolute pd tolerance for computed factors. Both factors have sup 1 and
/// at the default grid carry discretization errors near 1e-4, so the
/// `1e-8 * sup` default used for exact inputs would flag that noise.
pub const FACTOR_PD_TOL: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct WhFactors {
    pub psi_q_plus: SampledFunction,
    pub psi_q_minus: SampledFunction,
    pub g_plus: SampledFunction,
    pub g_minus: SampledFunction,
    pub c_used: f64,
    pub product_residual: f64,
    /// `ψ_{q+}` was divided by this (and `ψ_{q-}` multiplied) so both are 1 at 0.
    pub normalization: C64,
    /// Decay order `k` of `ψ_{q±} ~ (1 ∓ iλ)^{-k}`; 0 means an atom at 0.
    pub decay_plus: u32,
    pub decay_minus: u32,
    pub pd_plus: Option<PdReport>,
    pub pd_minus: Option<PdReport>,
    /// One-sided leakage of `ψ_{q±}` and of `(1+iλ) g±`.
    pub leakage_plus: f64,
    pub leakage_minus: f64,
    pub leakage_g_plus: f64,
    pub leakage_g_minus: f64,
}

pub fn wh_factors(model: &LevyModel, q: f64, grid: Grid, opts: &WhOptions) -> Result<WhFactors> {
    let c = opts.c;
    let g = build_g(model, q, c, grid)?;
    let tail = LogTail::new(model, q, opts.tail_lambda);
    let remainder = g.map(|l, v| v - tail.g(l, q, c))?;
    let rem_split = match opts.split {
        SplitMethod::Cardinal => split_additive_cardinal_grid(&remainder, f64::INFINITY)?,
        SplitMethod::Spectral => split_additive_spectral(&remainder, f64::INFINITY)?,
    };
    let g_plus = rem_split.f_plus.map(|l, v| v + tail.g_plus(l))?;
    let g_minus = g.zip_with(&g_plus, |a, b| a - b)?;
    let factor = |s: &SampledFunction| s.map(|l, v| (C64::new(1.0, l) * v - c / 2.0).exp());
    let (raw_plus, raw_minus) = (factor(&g_plus)?, factor(&g_minus)?);
    let norm = raw_plus.at_zero();
    let psi_q_plus = raw_plus.map(|_, v| v / norm)?;
    let psi_q_minus = raw_minus.map(|_, v| v * norm)?;
    let product_residual = psi_q_plus
        .values()
        .iter()
        .zip(psi_q_minus.values())
        .zip(grid.points())
        .map(|((a, b), l)| (a * b - q / (q + model.psi(l))).norm())
        .fold(0.0, f64::max);
    if !(product_residual <= opts.tol_residual) {
        return Err(Error::Residual {
            what: "Wiener-Hopf factor product",
            residual: product_residual,
            tol: opts.tol_residual,
        });
    }
    let (pd_plus, pd_minus) = if opts.check_pd {
        let p = pd_report(&psi_q_plus, &opts.pd)?;
        let m = pd_report(&psi_q_minus, &opts.pd)?;
        for (r, name) in [(&p, "psi_q_plus"), (&m, "psi_q_minus")] {
            if r.verdict == Verdict::NotPd {
                return Err(Error::NotPositiveDefinite(format!(
                    "{name}: min Bochner eigenvalue {:.3e}, negative spectral mass {:.3e} of {:.3e}",
                    r.min_bochner_eigenvalue, r.negative_spectral_mass, r.total_spectral_mass
                )));
            }
        }
        (Some(p), Some(m))
    } else {
        (None, None)
    };
    let times_one_plus = |s: &SampledFunction| s.map(|l, v| v * C64::new(1.0, l)).expect("finite");
    let (dp, dm) = log_growth(model);
    Ok(WhFactors {
        leakage_plus: one_sided_leakage(&psi_q_plus, Side::Plus),
        leakage_minus: one_sided_leakage(&psi_q_minus, Side::Minus),
        leakage_g_plus: one_sided_leakage(&times_one_plus(&g_plus), Side::Plus),
        leakage_g_minus: one_sided_leakage(&times_one_plus(&g_minus), Side::Minus),
        psi_q_plus,
        psi_q_minus,
        g_plus,
        g_minus,
        c_used: c,
        product_residual,
        normalization: norm,
        decay_plus: dp,
        decay_minus: dm,
        pd_plus,
        pd_minus,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityOptions {
    /// Accepted total mass is `[1 - tol_mass, 1 + tol_mass]`.
    pub tol_mass: f64,
    /// Negative pdf values above `-clip_tol` are set to zero.
    pub clip_tol: f64,
    /// Fraction of the λ grid (at each end) used for the tail fit.
    pub fit_fraction: f64,
    /// Rate `r` of the tail basis `(r/(r ∓ iλ))^k`, whose terms are
    /// Gamma(k, r) laws. It should exceed the decay rate of the densities so
    /// the fitted terms die out inside the x window.
    pub basis_rate: f64,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            tol_mass: 0.02,
            clip_tol: 1e-3,
            fit_fraction: 0.1,
            basis_rate: 2.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremaDistributions {
    pub x_grid: Vec<f64>,
    pub pdf_sup: Vec<f64>,
    pub cdf_sup: Vec<f64>,
    pub pdf_inf: Vec<f64>,
    pub cdf_inf: Vec<f64>,
    /// Probability inside the x window, `cdf(x_max) - cdf(x_min)`.
    pub mass_sup: f64,
    pub mass_inf: f64,
    /// `∫ max(0, -pdf)` before clipping.
    pub negativity_sup: f64,
    pub negativity_inf: f64,
    /// Point masses at 0 (nonzero when the path can stay on one side).
    pub atom_sup: f64,
    pub atom_inf: f64,
    /// Largest decrease between consecutive cdf values.
    pub cdf_defect_sup: f64,
    pub cdf_defect_inf: f64,
}

fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let last = xs.len() - 1;
    if x >= xs[last] {
        return ys[last];
    }
    let i = xs.partition_point(|&v| v <= x) - 1;
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + t * (ys[i + 1] - ys[i])
}

impl ExtremaDistributions {
    pub fn cdf_sup_at(&self, x: f64) -> f64 {
        interp(&self.x_grid, &self.cdf_sup, x)
    }

    pub fn cdf_inf_at(&self, x: f64) -> f64 {
        interp(&self.x_grid, &self.cdf_inf, x)
    }
}

/// `[-10, 10]` in steps of 0.01.
pub fn default_x_grid() -> Vec<f64> {
    (0..=2000).map(|i| -10.0 + i as f64 * 0.01).collect()
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Gamma(k, 1) density and cdf at `y`; `k = 0` is the unit atom at zero
/// (density zero, cdf a step).
fn gamma_pdf_cdf(k: u32, y: f64) -> (f64, f64) {
    if y < 0.0 {
        return (0.0, 0.0);
    }
    if k == 0 {
        return (0.0, 1.0);
    }
    let pdf = y.powi(k as i32 - 1) * (-y).exp() / factorial(k - 1);
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..k {
        term *= y / j as f64;
        sum += term;
    }
    (pdf, 1.0 - (-y).exp() * sum)
}

struct SideLaw {
    pdf: Vec<f64>,
    cdf: Vec<f64>,
    atom: f64,
    negativity: f64,
    defect: f64,
}

/// Law of the extremum whose characteristic function is `phi`. `sign = 1`
/// for the supremum (`phi ~ Σ a_k (1 - iλ)^{-k}`), `-1` for the infimum.
fn side_law(phi: &SampledFunction, k0: u32, sign: f64, xs: &[f64], opts: &DensityOptions) -> Result<SideLaw> {
    let grid = phi.grid();
    let cut = (1.0 - opts.fit_fraction) * grid.x_max();
    let ks: Vec<u32> = (k0..k0 + 3).collect();
    let r = opts.basis_rate;
    let basis = |l: f64, k: u32| (r / C64::new(r, -sign * l)).powi(k as i32);
    let rows: Vec<usize> = (0..grid.len()).filter(|&i| grid.x(i).abs() >= cut).collect();
    let a = DMatrix::from_fn(rows.len(), ks.len(), |r, c| basis(grid.x(rows[r]), ks[c]));
    let b = DVector::from_fn(rows.len(), |r, _| phi.values()[rows[r]]);
    let coef = a
        .svd(true, true)
        .solve(&b, 1e-300)
        .map_err(|e| Error::InvalidParameter(format!("tail fit failed: {e}")))?;
    let resid: Vec<C64> = (0..grid.len())
        .map(|i| {
            let l = grid.x(i);
            phi.values()[i] - ks.iter().zip(coef.iter()).map(|(&k, c)| c * basis(l, k)).sum::<C64>()
        })
        .collect();
    // remainder density (h/2π) Re Σ r_j exp(-iλ_j x), by a phase recurrence
    let h = grid.h();
    let n = grid.n_half() as i32;
    let remainder_pdf: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let step = C64::new(0.0, -h * x).exp();
            let mut w = C64::new(0.0, h * x * n as f64).exp();
            let mut acc = C64::new(0.0, 0.0);
            for r in &resid {
                acc += r * w;
                w *= step;
            }
            acc.re * h / (2.0 * PI)
        })
        .collect();
    // M >= 0, so its cdf is accumulated from the left. I <= 0, so its cdf is
    // anchored at +∞ by the remainder's total mass r(0) and accumulated
    // from the right; law mass below the window then cannot shift it.
    let last = xs.len() - 1;
    let cell = |i: usize| 0.5 * (xs[i + 1] - xs[i]) * (remainder_pdf[i + 1] + remainder_pdf[i]);
    let mut remainder_cdf = vec![0.0; xs.len()];
    if sign > 0.0 {
        for i in 0..last {
            remainder_cdf[i + 1] = remainder_cdf[i] + cell(i);
        }
    } else {
        remainder_cdf[last] = resid[grid.n_half()].re;
        for i in (0..last).rev() {
            remainder_cdf[i] = remainder_cdf[i + 1] - cell(i);
        }
    }
    let atom = if k0 == 0 { coef[0].re } else { 0.0 };
    let mut pdf = Vec::with_capacity(xs.len());
    let mut cdf = Vec::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        let y = sign * x;
        let (mut p, mut c) = (remainder_pdf[i], remainder_cdf[i]);
        for (&k, a) in ks.iter().zip(coef.iter()) {
            p += a.re * r * gamma_pdf_cdf(k, r * y).0;
            // P(M <= x) = G(rx); P(I <= x) = P(Y >= -x) = 1 - G(-rx) for x < 0
            c += a.re
                * if sign > 0.0 {
                    gamma_pdf_cdf(k, r * x).1
                } else if x >= 0.0 {
                    1.0
                } else {
                    1.0 - gamma_pdf_cdf(k, -r * x).1
                };
        }
        pdf.push(p);
        cdf.push(c);
    }
    let negativity = trapezoid_negative(xs, &pdf);
    for p in pdf.iter_mut() {
        if *p < 0.0 && *p > -opts.clip_tol {
            *p = 0.0;
        }
    }
    let defect = cdf.windows(2).map(|w| (w[0] - w[1]).max(0.0)).fold(0.0, f64::max);
    Ok(SideLaw { pdf, cdf, atom, negativity, defect })
}

fn trapezoid_negative(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * ((-y[0]).max(0.0) + (-y[1]).max(0.0)))
        .sum()
}

pub fn extrema_distributions(factors: &WhFactors, x_grid: &[f64], opts: &DensityOptions) -> Result<ExtremaDistributions> {
    if x_grid.len() < 2 || x_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("x grid must be strictly increasing with at least 2 points".into()));
    }
    let half_period = PI / factors.psi_q_plus.grid().h();
    if x_grid.iter().any(|x| x.abs() >= half_period) {
        return Err(Error::OutOfRange {
            x: x_grid.iter().fold(0.0, |m: f64, x| m.max(x.abs())),
            limit: half_period,
        });
    }
    if !(opts.basis_rate.is_finite() && opts.basis_rate > 0.0 && opts.fit_fraction > 0.0 && opts.fit_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!("invalid density options {opts:?}")));
    }
    let sup = side_law(&factors.psi_q_plus, factors.decay_plus, 1.0, x_grid, opts)?;
    let inf = side_law(&factors.psi_q_minus, factors.decay_minus, -1.0, x_grid, opts)?;
    let out = ExtremaDistributions {
        x_grid: x_grid.to_vec(),
        mass_sup: sup.cdf[sup.cdf.len() - 1] - sup.cdf[0],
        mass_inf: inf.cdf[inf.cdf.len() - 1] - inf.cdf[0],
        pdf_sup: sup.pdf,
        cdf_sup: sup.cdf,
        pdf_inf: inf.pdf,
        cdf_inf: inf.cdf,
        negativity_sup: sup.negativity,
        negativity_inf: inf.negativity,
        atom_sup: sup.atom,
        atom_inf: inf.atom,
        cdf_defect_sup: sup.defect,
        cdf_defect_inf: inf.defect,
    };
    let (lo, hi) = (1.0 - opts.tol_mass, 1.0 + opts.tol_mass);
    for (what, mass) in [("supremum", out.mass_sup), ("infimum", out.mass_inf)] {
        if !(lo..=hi).contains(&mass) {
            return Err(Error::Mass { what, mass, lo, hi });
        }
    }
    Ok(out)
}

/// Rates of the Brownian Wiener–Hopf factors: `M_q ~ Exp(b₊)`,
/// `-I_q ~ Exp(b₋)`, `b± = (∓μ + √(μ² + 2qσ²))/σ²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BmFactors {
    pub b_plus: f64,
    pub b_minus: f64,
}

impl BmFactors {
    pub fn plus(&self, l: f64) -> C64 {
        self.b_plus / C64::new(self.b_plus, -l)
    }

    pub fn minus(&self, l: f64) -> C64 {
        self.b_minus / C64::new(self.b_minus, l)
    }

    pub fn pdf_sup(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.b_plus * (-self.b_plus * x).exp()
        }
    }

    pub fn cdf_sup(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            1.0 - (-self.b_plus * x).exp()
        }
    }

    pub fn pdf_inf(&self, x: f64) -> f64 {
        if x > 0.0 {
            0.0
        } else {
            self.b_minus * (self.b_minus * x).exp()
        }
    }

    pub fn cdf_inf(&self, x: f64) -> f64 {
        if x >= 0.0 {
            1.0
        } else {
            (self.b_minus * x).exp()
        }
    }
}

pub fn analytic_bm_factors(mu: f64, sigma: f64, q: f64) -> Result<BmFactors> {
    if !(sigma > 0.0 && q > 0.0 && mu.is_finite() && sigma.is_finite() && q.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need sigma > 0 and q > 0, got sigma = {sigma}, q = {q}"
        )));
    }
    let r = (mu * mu + 2.0 * q * sigma * sigma).sqrt();
    let s2 = sigma * sigma;
    Ok(BmFactors {
        b_plus: (-mu + r) / s2,
        b_minus: (mu + r) / s2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::JumpLaw;

    fn max_err(f: &SampledFunction, exact: impl Fn(f64) -> C64) -> f64 {
        f.grid().points().zip(f.values()).map(|(l, v)| (v - exact(l)).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn g_examples() {
        let g = Grid::new(0.25, 64).unwrap();
        let bm = LevyModel::brownian(0.0, 2f64.sqrt());
        let f = build_g(&bm, 1.0, 0.7, g).unwrap();
        assert!((f.at_zero() - C64::new(0.7, 0.0)).norm() < 1e-15);
        let f = build_g(&bm, 1.0, 0.0, g).unwrap();
        let want = C64::new(-2f64.ln(), 0.0) / C64::new(1.0, 1.0);
        assert!((f.at_node(4).unwrap() - want).norm() < 1e-15);
        let jd = LevyModel::jump_diffusion(0.3, 1.0, 1.0, JumpLaw::Gaussian { m: 0.1, s: 0.5 });
        let f = build_g(&jd, 2.0, 0.5, g).unwrap();
        assert!(f.hermitian_defect() < 1e-15);
    }

    #[test]
    fn brownian_rates() {
        let b = analytic_bm_factors(0.0, 2f64.sqrt(), 1.0).unwrap();
        assert!((b.b_plus - 1.0).abs() < 1e-15 && (b.b_minus - 1.0).abs() < 1e-15);
        let b = analytic_bm_factors(0.5, 1.0, 1.0).unwrap();
        assert!((b.b_plus - 1.0).abs() < 1e-15);
        for (mu, sigma, q) in [(0.5, 1.0, 1.0), (-0.3, 0.8, 2.0), (1.2, 0.4, 0.3)] {
            let b = analytic_bm_factors(mu, sigma, q).unwrap();
            assert!((b.b_plus * b.b_minus - 2.0 * q / (sigma * sigma)).abs() < 1e-12);
            let m = LevyModel::brownian(mu, sigma);
            for l in [-7.0, -1.0, 0.0, 0.3, 12.0] {
                assert!((b.plus(l) * b.minus(l) - q / (q + m.psi(l))).norm() < 1e-12);
            }
        }
        assert!(analytic_bm_factors(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn brownian_factors_match_rational_oracle() {
        for (mu, sigma, q, tol) in [(0.0, 2f64.sqrt(), 1.0, 1e-4), (0.5, 1.0, 1.0, 1e-3), (-0.3, 0.8, 2.0, 1e-3)] {
            let m = LevyModel::brownian(mu, sigma);
            let wh = wh_factors(&m, q, Grid::default(), &WhOptions::default()).unwrap();
            let b = analytic_bm_factors(mu, sigma, q).unwrap();
            let ep = max_err(&wh.psi_q_plus, |l| b.plus(l));
            let em = max_err(&wh.psi_q_minus, |l| b.minus(l));
            assert!(ep < tol && em < tol, "({mu},{sigma},{q}): {ep} {em}");
            assert!((wh.psi_q_plus.at_zero() - 1.0).norm() < 1e-15);
            assert!((wh.psi_q_minus.at_zero() - 1.0).norm() < 1e-14);
            assert!(wh.product_residual < 1e-12);
            assert_eq!(wh.pd_plus.unwrap().verdict, Verdict::Pd);
            assert_eq!(wh.pd_minus.unwrap().verdict, Verdict::Pd);
        }
    }

    #[test]
    fn constant_c_cancels_after_normalization() {
        let m = LevyModel::brownian(0.2, 1.0);
        let a = wh_factors(&m, 1.0, Grid::default(), &WhOptions::default()).unwrap();
        let opts = WhOptions { c: 0.8, ..WhOptions::default() };
        let b = wh_factors(&m, 1.0, Grid::default(), &opts).unwrap();
        assert!(a.psi_q_plus.max_abs_diff(&b.psi_q_plus) < 1e-12);
        assert_eq!(b.c_used, 0.8);
    }

    #[test]
    fn brownian_extrema_laws() {
        let m = LevyModel::brownian(0.0, 2f64.sqrt());
        let wh = wh_factors(&m, 1.0, Grid::default(), &WhOptions::default()).unwrap();
        let xs = default_x_grid();
        let d = extrema_distributions(&wh, &xs, &DensityOptions::default()).unwrap();
        let b = analytic_bm_factors(0.0, 2f64.sqrt(), 1.0).unwrap();
        for (i, &x) in xs.iter().enumerate() {
            assert!((d.pdf_sup[i] - b.pdf_sup(x)).abs() < 1e-3, "sup x={x}");
            assert!((d.pdf_inf[i] - b.pdf_inf(x)).abs() < 1e-3, "inf x={x}");
            assert!((d.cdf_sup[i] - b.cdf_sup(x)).abs() < 1e-3);
            assert!((d.cdf_inf[i] - b.cdf_inf(x)).abs() < 1e-3);
        }
        assert!((d.mass_sup - 1.0).abs() < 1e-2 && (d.mass_inf - 1.0).abs() < 1e-2);
        assert_eq!(d.atom_sup, 0.0);
        assert!(d.cdf_defect_sup < 1e-4);
    }

    #[test]
    fn pure_jump_with_negative_drift_has_atom_at_zero() {
        // the supremum is 0 with positive probability when paths start downward
        let m = LevyModel::jump_diffusion(
            -1.0,
            0.0,
            1.0,
            JumpLaw::ExponentialTwosided { p: 0.5, theta_plus: 2.0, theta_minus: 2.0 },
        );
        let wh = wh_factors(&m, 1.0, Grid::default(), &WhOptions::default()).unwrap();
        assert_eq!((wh.decay_plus, wh.decay_minus), (0, 1));
        let d = extrema_distributions(&wh, &default_x_grid(), &DensityOptions::default()).unwrap();
        assert!(d.atom_sup > 0.0 && d.atom_sup < 1.0, "{}", d.atom_sup);
        assert!((d.mass_sup - 1.0).abs() < 1e-2 && (d.mass_inf - 1.0).abs() < 1e-2);
    }

    #[test]
    fn x_grid_validation() {
        let m = LevyModel::brownian(0.0, 1.0);
        let wh = wh_factors(&m, 1.0, Grid::default(), &WhOptions::default()).unwrap();
        let opts = DensityOptions::default();
        assert!(extrema_distributions(&wh, &[1.0, 0.5], &opts).is_err());
        assert!(extrema_distributions(&wh, &[0.0, 20.0], &opts).is_err());
    }
}
