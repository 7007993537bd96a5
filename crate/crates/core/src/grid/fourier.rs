//! Continuous Fourier transform approximated by a centered DFT.
//!
//! On a grid with spacing `h` and `M = 2n+1` samples the forward transform is
//! the Riemann sum `F(w_j) = h Σ_k f(x_k) exp(-i w_j x_k)` on `w_j = j dw`,
//! `dw = 2π/(M h)`. The inverse is its exact discrete inverse, so round trips
//! are exact up to roundoff.

use rustfft::FftPlanner;
use std::f64::consts::PI;

use super::{C64, SampledFunction, SpectralFunction};
use crate::error::Result;

/// Unnormalized centered DFT: input and output are indexed `-n..=n`
/// (storage offset `n`). `inverse` flips the sign of the exponent.
pub(crate) fn dft_centered(values: &[C64], inverse: bool) -> Vec<C64> {
    let m = values.len();
    let n = m / 2;
    // ifftshift: node k goes to slot k mod m
    let mut buf: Vec<C64> = (0..m).map(|s| values[(s + n) % m]).collect();
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(m)
    } else {
        planner.plan_fft_forward(m)
    };
    fft.process(&mut buf);
    (0..m).map(|i| buf[(i + m - n) % m]).collect()
}

/// Full linear convolution `c[i+j] = Σ a[i] b[j]`, length `a.len()+b.len()-1`.
pub(crate) fn linear_convolve(a: &[C64], b: &[C64]) -> Vec<C64> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let zero = C64::new(0.0, 0.0);
    let mut fa: Vec<C64> = a.iter().copied().chain(std::iter::repeat(zero)).take(size).collect();
    let mut fb: Vec<C64> = b.iter().copied().chain(std::iter::repeat(zero)).take(size).collect();
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    let scale = 1.0 / size as f64;
    fa.truncate(out_len);
    fa.iter_mut().for_each(|v| *v *= scale);
    fa
}

pub fn forward_ft(f: &SampledFunction) -> SpectralFunction {
    let grid = f.grid();
    let h = grid.h();
    let values = dft_centered(f.values(), false)
        .into_iter()
        .map(|v| v * h)
        .collect();
    // finite input gives finite output
    SpectralFunction::new(grid.frequency_grid(), values).expect("finite transform")
}

pub fn inverse_ft(spectrum: &SpectralFunction) -> Result<SampledFunction> {
    let fg = spectrum.grid();
    let scale = fg.d_omega / (2.0 * PI);
    let values = dft_centered(spectrum.values(), true)
        .into_iter()
        .map(|v| v * scale)
        .collect();
    SampledFunction::new(fg.dual(), values)
}

/// `‖inverse_ft(forward_ft(f)) - f‖∞`.
pub fn round_trip_residual(f: &SampledFunction) -> f64 {
    match inverse_ft(&forward_ft(f)) {
        Ok(back) => back.max_abs_diff(f),
        Err(_) => f64::INFINITY,
    }
}
