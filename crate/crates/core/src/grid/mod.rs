//! Uniform-grid function representation.
//!
//! Every function in the crate is carried as complex samples on an odd,
//! centered grid `x = k*h`, `k = -n_half..=n_half`, so that `x = 0` is always a
//! sample. Transforms follow one convention throughout:
//!
//! ```text
//! F(w) = ∫ f(x) exp(-i w x) dx        f(x) = (1/2π) ∫ F(w) exp(i w x) dw
//! ```
//!
//! A function is positive definite when `F >= 0`, and a transform supported
//! on `[0, ∞)` corresponds to a bounded holomorphic extension of `f` to the
//! upper half-plane.

mod cardinal;
mod fourier;

pub use cardinal::{
    cardinal_interpolate, dawson_reference, dawson_via_cardinal, sinc_pi, truncation_error_bound,
    TruncationBound,
};
pub use fourier::{forward_ft, inverse_ft, round_trip_residual};
pub(crate) use cardinal::sin_pi;
pub(crate) use fourier::{dft_centered, linear_convolve};

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub const DEFAULT_H: f64 = 0.25;
pub const DEFAULT_N_HALF: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    h: f64,
    n_half: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            h: DEFAULT_H,
            n_half: DEFAULT_N_HALF,
        }
    }
}

impl Grid {
    pub fn new(h: f64, n_half: usize) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing h must be positive, got {h}")));
        }
        if n_half < 1 {
            return Err(Error::InvalidGrid("n_half must be at least 1".into()));
        }
        Ok(Grid { h, n_half })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n_half(&self) -> usize {
        self.n_half
    }

    /// Number of samples, always odd.
    pub fn len(&self) -> usize {
        2 * self.n_half + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest sampled |x|.
    pub fn x_max(&self) -> f64 {
        self.n_half as f64 * self.h
    }

    /// Signed node number of storage index `i`.
    pub fn node(&self, i: usize) -> isize {
        i as isize - self.n_half as isize
    }

    pub fn index_of_node(&self, k: isize) -> Option<usize> {
        let i = k + self.n_half as isize;
        (0..self.len() as isize).contains(&i).then_some(i as usize)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.node(i) as f64 * self.h
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.x(i))
    }

    /// Storage index of `x` when it sits on a node (relative tolerance 1e-12).
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let t = x / self.h;
        let k = t.round();
        if (t - k).abs() <= 1e-12 * k.abs().max(1.0) {
            self.index_of_node(k as isize)
        } else {
            None
        }
    }

    /// Frequency grid induced by the discrete transform:
    /// `dw = 2π / ((2 n_half + 1) h)`, covering |w| < π/h.
    pub fn frequency_grid(&self) -> FrequencyGrid {
        FrequencyGrid {
            d_omega: 2.0 * PI / (self.len() as f64 * self.h),
            n_half: self.n_half,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub d_omega: f64,
    pub n_half: usize,
}

impl FrequencyGrid {
    pub fn new(d_omega: f64, n_half: usize) -> Result<Self> {
        if !(d_omega.is_finite() && d_omega > 0.0) || n_half < 1 {
            return Err(Error::InvalidGrid(format!(
                "frequency grid needs d_omega > 0 and n_half >= 1, got ({d_omega}, {n_half})"
            )));
        }
        Ok(FrequencyGrid { d_omega, n_half })
    }

    pub fn len(&self) -> usize {
        2 * self.n_half + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn omega(&self, i: usize) -> f64 {
        (i as isize - self.n_half as isize) as f64 * self.d_omega
    }

    pub fn omega_max(&self) -> f64 {
        self.n_half as f64 * self.d_omega
    }

    /// The spatial grid whose transform lives on this frequency grid.
    pub fn dual(&self) -> Grid {
        Grid {
            h: 2.0 * PI / (self.len() as f64 * self.d_omega),
            n_half: self.n_half,
        }
    }
}

fn check_finite(values: &[C64]) -> Result<()> {
    match values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Complex samples of a function on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<C64>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        check_finite(&values)?;
        Ok(SampledFunction { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> C64) -> Result<Self> {
        let values = grid.points().map(f).collect();
        Self::new(grid, values)
    }

    pub fn from_real_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |x| C64::new(f(x), 0.0))
    }

    pub fn zeros(grid: Grid) -> Self {
        SampledFunction {
            grid,
            values: vec![C64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn at_node(&self, k: isize) -> Option<C64> {
        self.grid.index_of_node(k).map(|i| self.values[i])
    }

    pub fn at_zero(&self) -> C64 {
        self.values[self.grid.n_half]
    }

    /// Value at an arbitrary `x`: exact lookup on nodes, full cardinal
    /// series elsewhere.
    pub fn eval(&self, x: f64) -> Result<C64> {
        let limit = self.grid.x_max();
        if !x.is_finite() || x.abs() > limit * (1.0 + 1e-12) {
            return Err(Error::OutOfRange { x, limit });
        }
        match self.grid.node_index(x) {
            Some(i) => Ok(self.values[i]),
            None => cardinal_interpolate(self, x, self.grid.n_half),
        }
    }

    /// Pointwise map; fails if the map produces non-finite values.
    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| f(self.grid.x(i), v))
            .collect();
        Self::new(self.grid, values)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("operands live on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.grid, values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Sup-norm distance to another function on the same grid.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest |f(-x) - conj f(x)| over the grid.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.values.len();
        (0..n)
            .map(|i| (self.values[n - 1 - i] - self.values[i].conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// Samples of a transform on a [`FrequencyGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralFunction {
    grid: FrequencyGrid,
    values: Vec<C64>,
}

impl SpectralFunction {
    pub fn new(grid: FrequencyGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        check_finite(&values)?;
        Ok(SpectralFunction { grid, values })
    }

    pub fn from_fn(grid: FrequencyGrid, f: impl Fn(f64) -> C64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(grid.omega(i))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.grid.len()).map(move |i| self.grid.omega(i))
    }

    /// Riemann-sum L1 norm, `Σ |F| dw`.
    pub fn l1_mass(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() * self.grid.d_omega
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_odd_and_centered() {
        let g = Grid::new(0.5, 3).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g.x(3), 0.0);
        assert_eq!(g.x(0), -1.5);
        assert_eq!(g.node_index(1.0), Some(5));
        assert_eq!(g.node_index(0.7), None);
        assert_eq!(g.node_index(2.0), None);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(0.0, 4).is_err());
        assert!(Grid::new(-1.0, 4).is_err());
        assert!(Grid::new(f64::NAN, 4).is_err());
        assert!(Grid::new(0.1, 0).is_err());
    }

    #[test]
    fn rejects_non_finite_and_wrong_length() {
        let g = Grid::new(1.0, 2).unwrap();
        let mut v = vec![C64::new(1.0, 0.0); 5];
        v[2] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            SampledFunction::new(g, v),
            Err(Error::NonFinite { index: 2 })
        ));
        assert!(matches!(
            SampledFunction::new(g, vec![C64::new(0.0, 0.0); 4]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn frequency_grid_duality() {
        let g = Grid::new(0.25, 100).unwrap();
        let fg = g.frequency_grid();
        let back = fg.dual();
        assert!((back.h() - g.h()).abs() < 1e-15);
        assert!(fg.omega_max() < PI / g.h());
    }

    #[test]
    fn hermitian_defect_of_characteristic_function() {
        let g = Grid::new(0.1, 50).unwrap();
        let f = SampledFunction::from_fn(g, |x| C64::new(0.0, 0.7 * x).exp() * (-x * x).exp()).unwrap();
        assert!(f.hermitian_defect() < 1e-15);
    }
}
