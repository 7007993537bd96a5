//! Additive splitting `f = f₊ + f₋` with `f̂₊` on `[0, ∞)` and `f̂₋` on
//! `(-∞, 0]`.
//!
//! Two independent algorithms are provided. The spectral one masks the
//! discrete transform; the cardinal one sums the half-kernel series
//!
//! ```text
//! f₊(w) = Σ f(nh) K₊(w/h - n),   K₊(θ) = (exp(iπθ) - 1) / (2πiθ)
//! f₋(w) = Σ f(nh) K₋(w/h - n),   K₋(θ) = (1 - exp(-iπθ)) / (2πiθ)
//! ```
//!
//! with `K₊(0) = K₋(0) = 1/2`. `K₊ + K₋` is the sinc kernel, so the two
//! parts always add back to the cardinal series of `f`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{dft_centered, forward_ft, inverse_ft, linear_convolve, sin_pi, SampledFunction, SpectralFunction, C64};

/// Open half-line of frequencies; the `ω = 0` bin belongs to neither.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfLine {
    Negative,
    Positive,
}

/// Which half-plane a function is meant to extend to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Transform on `[0, ∞)`, holomorphic in the upper half-plane.
    Plus,
    /// Transform on `(-∞, 0]`, holomorphic in the lower half-plane.
    Minus,
}

impl Side {
    pub fn wrong_half_line(self) -> HalfLine {
        match self {
            Side::Plus => HalfLine::Negative,
            Side::Minus => HalfLine::Positive,
        }
    }
}

pub fn halfline_energy(spectrum: &SpectralFunction, side: HalfLine) -> f64 {
    let n = spectrum.grid().n_half;
    let v = spectrum.values();
    let part = match side {
        HalfLine::Negative => &v[..n],
        HalfLine::Positive => &v[n + 1..],
    };
    part.iter().map(|z| z.norm()).sum::<f64>() * spectrum.grid().d_omega
}

#[derive(Clone, Debug)]
pub struct AdditiveSplit {
    pub f_plus: SampledFunction,
    pub f_minus: SampledFunction,
    /// `‖f₊ + f₋ - f‖∞`.
    pub sum_residual: f64,
    /// L¹ mass of `f̂₊` on `ω < 0`.
    pub wrongside_energy_plus: f64,
    /// L¹ mass of `f̂₋` on `ω > 0`.
    pub wrongside_energy_minus: f64,
    /// L¹ mass of `f̂`.
    pub total_energy: f64,
}

impl AdditiveSplit {
    fn assemble(f: &SampledFunction, f_plus: SampledFunction, f_minus: SampledFunction, tol: f64) -> Result<Self> {
        let sum_residual = f_plus
            .values()
            .iter()
            .zip(f_minus.values())
            .zip(f.values())
            .map(|((p, m), v)| (p + m - v).norm())
            .fold(0.0, f64::max);
        let split = AdditiveSplit {
            wrongside_energy_plus: halfline_energy(&forward_ft(&f_plus), HalfLine::Negative),
            wrongside_energy_minus: halfline_energy(&forward_ft(&f_minus), HalfLine::Positive),
            total_energy: forward_ft(f).l1_mass(),
            f_plus,
            f_minus,
            sum_residual,
        };
        if split.sum_residual > tol {
            return Err(Error::Residual {
                what: "additive split",
                residual: split.sum_residual,
                tol,
            });
        }
        Ok(split)
    }

    /// Larger of the two wrong-side energies relative to the total.
    pub fn relative_wrongside(&self) -> f64 {
        if self.total_energy == 0.0 {
            return 0.0;
        }
        self.wrongside_energy_plus.max(self.wrongside_energy_minus) / self.total_energy
    }
}

fn step_mask(n: usize) -> Vec<C64> {
    (0..2 * n + 1)
        .map(|i| {
            C64::new(
                match i.cmp(&n) {
                    std::cmp::Ordering::Less => 0.0,
                    std::cmp::Ordering::Equal => 0.5,
                    std::cmp::Ordering::Greater => 1.0,
                },
                0.0,
            )
        })
        .collect()
}

/// Restricts the discrete transform to the half-lines, sharing the `ω = 0`
/// bin evenly.
pub fn split_additive_spectral(f: &SampledFunction, tol: f64) -> Result<AdditiveSplit> {
    let spec = forward_ft(f);
    let fg = *spec.grid();
    let mask = step_mask(fg.n_half);
    let plus: Vec<C64> = spec.values().iter().zip(&mask).map(|(v, m)| v * m).collect();
    let minus: Vec<C64> = spec.values().iter().zip(&mask).map(|(v, m)| v * (1.0 - m)).collect();
    let f_plus = inverse_ft(&SpectralFunction::new(fg, plus)?)?;
    let f_minus = inverse_ft(&SpectralFunction::new(fg, minus)?)?;
    AdditiveSplit::assemble(f, f_plus, f_minus, tol)
}

pub fn kernel_plus(theta: f64) -> C64 {
    if theta == 0.0 {
        return C64::new(0.5, 0.0);
    }
    let s = sin_pi(theta);
    let half = sin_pi(0.5 * theta);
    C64::new(s, 2.0 * half * half) / (2.0 * PI * theta)
}

pub fn kernel_minus(theta: f64) -> C64 {
    kernel_plus(theta).conj()
}

/// `K₊(m)` for integer offsets `m = -2n..=2n`.
fn integer_kernel_plus(n: usize) -> Vec<C64> {
    (0..4 * n + 1)
        .map(|i| {
            let m = i as i64 - 2 * n as i64;
            if m == 0 {
                C64::new(0.5, 0.0)
            } else if m % 2 == 0 {
                C64::new(0.0, 0.0)
            } else {
                C64::new(0.0, 1.0 / (PI * m as f64))
            }
        })
        .collect()
}

/// The full (non-periodic) half-kernel series evaluated at every node, as
/// one linear convolution.
pub fn split_additive_cardinal_grid(f: &SampledFunction, tol: f64) -> Result<AdditiveSplit> {
    let n = f.grid().n_half();
    let conv = linear_convolve(f.values(), &integer_kernel_plus(n));
    let plus: Vec<C64> = conv[2 * n..2 * n + f.values().len()].to_vec();
    let minus: Vec<C64> = f.values().iter().zip(&plus).map(|(v, p)| v - p).collect();
    let f_plus = SampledFunction::new(*f.grid(), plus)?;
    let f_minus = SampledFunction::new(*f.grid(), minus)?;
    AdditiveSplit::assemble(f, f_plus, f_minus, tol)
}

/// Half-kernel series at arbitrary points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSplit {
    pub points: Vec<f64>,
    pub f_plus: Vec<C64>,
    pub f_minus: Vec<C64>,
    /// Cardinal series of `f` itself at the same points.
    pub f_values: Vec<C64>,
    pub sum_residual: f64,
}

/// Evaluates both half-kernel series with `|n| <= n_terms` at `points`.
/// The result does not depend on how the points are ordered or chunked.
pub fn split_additive_cardinal(f: &SampledFunction, n_terms: usize, points: &[f64]) -> Result<PointSplit> {
    let g = f.grid();
    if n_terms > g.n_half() {
        return Err(Error::InvalidParameter(format!(
            "n_terms = {n_terms} exceeds n_half = {}",
            g.n_half()
        )));
    }
    let window = n_terms as isize;
    let mut out = PointSplit {
        points: points.to_vec(),
        f_plus: Vec::with_capacity(points.len()),
        f_minus: Vec::with_capacity(points.len()),
        f_values: Vec::with_capacity(points.len()),
        sum_residual: 0.0,
    };
    for &w in points {
        if !w.is_finite() {
            return Err(Error::OutOfRange { x: w, limit: g.x_max() });
        }
        let t = w / g.h();
        let (mut p, mut m, mut s) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for n in -window..=window {
            let v = f.at_node(n).unwrap_or_default();
            let theta = t - n as f64;
            let kp = kernel_plus(theta);
            p += v * kp;
            m += v * kp.conj();
            s += v * crate::grid::sinc_pi(theta);
        }
        out.sum_residual = out.sum_residual.max((p + m - s).norm());
        out.f_plus.push(p);
        out.f_minus.push(m);
        out.f_values.push(s);
    }
    Ok(out)
}

/// Pointwise bound on `|spectral f₊ - cardinal f₊|` on the grid. On nodes
/// the spectral split is a periodic convolution with `p₊` and the cardinal
/// one a linear convolution with `K₊`, so the gap at node k is at most
/// `Σ_n |f_n| |p₊(k-n) - K₊(k-n)|`; the maximum over k is returned.
pub fn spectral_cardinal_gap_bound(f: &SampledFunction) -> f64 {
    let n = f.grid().n_half();
    let m = 2 * n + 1;
    let periodic: Vec<C64> = dft_centered(&step_mask(n), true)
        .into_iter()
        .map(|v| v / m as f64)
        .collect();
    let kp = integer_kernel_plus(n);
    let diff: Vec<C64> = (0..4 * n + 1)
        .map(|i| {
            let off = i as i64 - 2 * n as i64;
            let wrapped = (off + n as i64).rem_euclid(m as i64) as usize;
            C64::new((periodic[wrapped] - kp[i]).norm(), 0.0)
        })
        .collect();
    let mags: Vec<C64> = f.values().iter().map(|v| C64::new(v.norm(), 0.0)).collect();
    linear_convolve(&mags, &diff)[2 * n..2 * n + m]
        .iter()
        .map(|v| v.re)
        .fold(0.0, f64::max)
}

/// `f₊(z) = (1/2π) ∫_0^∞ f̂(ω) exp(iωz) dω` for `Im z >= 0`, with the
/// `ω = 0` bin at half weight.
pub fn eval_plus_upper_half_plane(f: &SampledFunction, z: C64) -> Result<C64> {
    half_plane_eval(f, z, Side::Plus)
}

/// `f₋(z) = (1/2π) ∫_{-∞}^0 f̂(ω) exp(iωz) dω` for `Im z <= 0`.
pub fn eval_minus_lower_half_plane(f: &SampledFunction, z: C64) -> Result<C64> {
    half_plane_eval(f, z, Side::Minus)
}

fn half_plane_eval(f: &SampledFunction, z: C64, side: Side) -> Result<C64> {
    let ok = match side {
        Side::Plus => z.im >= 0.0,
        Side::Minus => z.im <= 0.0,
    };
    if !ok || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidParameter(format!("{z} is outside the {side:?} half-plane")));
    }
    let spec = forward_ft(f);
    let fg = spec.grid();
    let n = fg.n_half;
    let mut acc = spec.values()[n] * 0.5;
    for j in 1..=n {
        let idx = match side {
            Side::Plus => n + j,
            Side::Minus => n - j,
        };
        acc += spec.values()[idx] * (C64::new(0.0, fg.omega(idx)) * z).exp();
    }
    Ok(acc * fg.d_omega / (2.0 * PI))
}

/// `(1/2π) ∫_0^∞ |f̂|`, the bound on `|f₊|` over the closed upper half-plane.
pub fn upper_half_plane_bound(f: &SampledFunction) -> f64 {
    let spec = forward_ft(f);
    let n = spec.grid().n_half;
    let v = spec.values();
    (0.5 * v[n].norm() + v[n + 1..].iter().map(|z| z.norm()).sum::<f64>()) * spec.grid().d_omega / (2.0 * PI)
}

/// Relative wrong-side spectral energy of `f` after multiplying by the
/// one-sided window `(s/(s ∓ iλ))^8`, `s = x_max/20`.
///
/// The window belongs to the same side as `f` and decays fast, so the
/// product keeps the side while becoming summable; this makes the
/// diagnostic usable on functions that grow logarithmically or tend to a
/// nonzero constant, where a bare transform would be dominated by the
/// truncation at the grid ends.
pub fn one_sided_leakage(f: &SampledFunction, side: Side) -> f64 {
    let s = f.grid().x_max() / 20.0;
    let sign = match side {
        Side::Plus => -1.0,
        Side::Minus => 1.0,
    };
    let windowed = f
        .map(|x, v| v * (C64::new(s, 0.0) / C64::new(s, sign * x)).powi(8))
        .expect("window is bounded by one");
    let spec = forward_ft(&windowed);
    let total = spec.l1_mass();
    if total == 0.0 {
        return 0.0;
    }
    halfline_energy(&spec, side.wrong_half_line()) / total
}
