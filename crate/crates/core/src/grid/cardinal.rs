//! Shannon–Whittaker cardinal series and the complex Dawson integral.

use std::f64::consts::PI;

use super::{SampledFunction, SpectralFunction, C64};
use crate::error::{Error, Result};
use crate::quad::{integrate_from, simpson};

/// `sin(πt)/(πt)`, with the argument reduced to [-1/2, 1/2] first so that
/// the zeros at nonzero integers are exact.
pub fn sinc_pi(t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    sin_pi(t) / (PI * t)
}

pub(crate) fn sin_pi(t: f64) -> f64 {
    let k = t.round();
    let r = t - k;
    let s = (PI * r).sin();
    if (k as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Symmetric partial cardinal series `Σ_{|n|<=n_terms} f(nh) sinc(π(x-nh)/h)`.
/// At a node inside the window the stored sample is returned as is.
pub fn cardinal_interpolate(f: &SampledFunction, x: f64, n_terms: usize) -> Result<C64> {
    let grid = f.grid();
    if n_terms > grid.n_half() {
        return Err(Error::InvalidParameter(format!(
            "n_terms = {n_terms} exceeds n_half = {}",
            grid.n_half()
        )));
    }
    if !x.is_finite() {
        return Err(Error::OutOfRange {
            x,
            limit: grid.x_max(),
        });
    }
    let t = x / grid.h();
    let k = t.round();
    let window = n_terms as isize;
    if (t - k).abs() <= 1e-12 * k.abs().max(1.0) {
        let k = k as isize;
        return Ok(if k.abs() <= window {
            f.at_node(k).unwrap_or_default()
        } else {
            C64::new(0.0, 0.0)
        });
    }
    // sin(π(t-n)) = (-1)^n sin(πt): one sine for the whole sum
    let mut acc = C64::new(0.0, 0.0);
    for n in -window..=window {
        let v = f.at_node(n).unwrap_or_default();
        let term = v / (t - n as f64);
        if n % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc * (sin_pi(t) / PI))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationBound {
    pub bound: f64,
    /// False when the spectrum stops short of π/h; the bound then only
    /// counts `analytic_tail` and is not reliable.
    pub grid_reaches_cutoff: bool,
}

/// `(1/π) ∫_{|ω|>=π/h} |F|`, the sup-norm aliasing bound of the full cardinal
/// series at spacing `h`. `analytic_tail` is the caller's estimate of
/// `∫ |F|` beyond the sampled frequency range.
pub fn truncation_error_bound(
    spectrum: &SpectralFunction,
    h: f64,
    analytic_tail: Option<f64>,
) -> Result<TruncationBound> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidParameter(format!("h must be positive, got {h}")));
    }
    let fg = spectrum.grid();
    let cutoff = PI / h;
    let reaches = fg.omega_max() >= cutoff;
    if !reaches {
        log::warn!(
            "spectrum covers |w| <= {:.4} but the cutoff is {:.4}; bound is unreliable",
            fg.omega_max(),
            cutoff
        );
    }
    let n = fg.n_half;
    let abs: Vec<f64> = spectrum.values().iter().map(|v| v.norm()).collect();
    let right = &abs[n..];
    let left: Vec<f64> = abs[..=n].iter().rev().copied().collect();
    let inside = integrate_from(right, fg.d_omega, cutoff) + integrate_from(&left, fg.d_omega, cutoff);
    Ok(TruncationBound {
        bound: (inside + analytic_tail.unwrap_or(0.0)) / PI,
        grid_reaches_cutoff: reaches,
    })
}

/// Rybicki's sum `(1/√π) Σ_{n odd, |n|<=2N-1} exp(-(z-nh)²)/n`, which tends
/// to Dawson's integral `F(z)` as `h -> 0` and `N -> ∞`.
pub fn dawson_via_cardinal(z: C64, h: f64, n_terms: usize) -> Result<C64> {
    if !(h.is_finite() && h > 0.0) || n_terms < 1 {
        return Err(Error::InvalidParameter(format!(
            "need h > 0 and n_terms >= 1, got h = {h}, n_terms = {n_terms}"
        )));
    }
    // |exp(-(z-nh)²)| = exp(y² - (x-nh)²)
    let reach = (2 * n_terms - 1) as f64 * h;
    let nearest = if z.re.abs() <= reach { 0.0 } else { z.re.abs() - reach };
    if z.im * z.im - nearest * nearest > 700.0 {
        return Err(Error::Overflow(format!(
            "exp(Im(z)^2) overflows for z = {z}; reduce |Im z|"
        )));
    }
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..n_terms {
        let n = (2 * j + 1) as f64;
        let a = z - n * h;
        let b = z + n * h;
        acc += ((-a * a).exp() - (-b * b).exp()) / n;
    }
    Ok(acc / PI.sqrt())
}

/// Dawson's integral `F(z) = exp(-z²) ∫_0^z exp(t²) dt`, independent of the
/// cardinal machinery: Maclaurin series for |z| <= 2, otherwise composite
/// Simpson on `F(z) = z ∫_0^1 exp(z²(s²-1)) ds`.
pub fn dawson_reference(z: C64) -> C64 {
    if z.norm() <= 2.0 {
        // F(z) = Σ (-2z²)^k z / (2k+1)!!
        let m = -2.0 * z * z;
        let mut term = z;
        let mut sum = z;
        for k in 0..200 {
            term = term * m / (2 * k + 3) as f64;
            sum += term;
            if term.norm() < 1e-18 * sum.norm().max(1e-300) {
                break;
            }
        }
        return sum;
    }
    let z2 = z * z;
    let panels = 40_000;
    let ds = 1.0 / panels as f64;
    let sample = |s: f64| (z2 * (s * s - 1.0)).exp();
    let re: Vec<f64> = (0..=panels).map(|i| sample(i as f64 * ds).re).collect();
    let im: Vec<f64> = (0..=panels).map(|i| sample(i as f64 * ds).im).collect();
    z * C64::new(simpson(&re, ds), simpson(&im, ds))
}
