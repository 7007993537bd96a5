//! Positive definiteness: Bochner Gram matrices and spectral nonnegativity.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{forward_ft, SampledFunction, C64};

/// Anything that can be evaluated at a real point.
pub trait PointEval {
    fn eval_at(&self, x: f64) -> Result<C64>;
}

impl PointEval for SampledFunction {
    fn eval_at(&self, x: f64) -> Result<C64> {
        self.eval(x)
    }
}

impl<F: Fn(f64) -> C64> PointEval for F {
    fn eval_at(&self, x: f64) -> Result<C64> {
        Ok(self(x))
    }
}

#[derive(Clone, Debug)]
pub struct BochnerMatrix {
    /// `M[i][j] = f(x_i - x_j)` as evaluated, before symmetrization.
    pub matrix: DMatrix<C64>,
    /// `max |M - M*| / 2`, zero for an exactly Hermitian-symmetric `f`.
    pub asymmetry: f64,
}

impl BochnerMatrix {
    pub fn hermitian_part(&self) -> DMatrix<C64> {
        (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.hermitian_part())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

pub fn bochner_matrix(f: &impl PointEval, points: &[f64]) -> Result<BochnerMatrix> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("need at least one point".into()));
    }
    let k = points.len();
    let mut m = DMatrix::from_element(k, k, C64::new(0.0, 0.0));
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = f.eval_at(points[i] - points[j])?;
        }
    }
    let asymmetry = (&m - m.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max) / 2.0;
    Ok(BochnerMatrix { matrix: m, asymmetry })
}

pub fn min_bochner_eigenvalue(f: &impl PointEval, points: &[f64]) -> Result<f64> {
    Ok(bochner_matrix(f, points)?.min_eigenvalue())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pd,
    NotPd,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PdConfig {
    pub random_point_sets: usize,
    pub set_size: usize,
    /// Absolute eigenvalue tolerance; `None` means `1e-8 * sup|f|`.
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for PdConfig {
    fn default() -> Self {
        PdConfig {
            random_point_sets: 16,
            set_size: 24,
            tol: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdReport {
    pub min_bochner_eigenvalue: f64,
    /// `∫ max(0, -Re F_w)` for the Gaussian-windowed transform `F_w`.
    pub negative_spectral_mass: f64,
    pub total_spectral_mass: f64,
    pub verdict: Verdict,
    pub tolerance_used: f64,
    pub max_asymmetry: f64,
}

/// Width of the Gaussian taper, as a fraction of the half-width of the grid.
/// The taper is itself positive definite, so tapering never turns a pd
/// function into a non-pd one, but it removes the ringing that hard
/// truncation of a slowly decaying function puts into its transform.
const TAPER_FRACTION: f64 = 1.0 / 7.0;

/// Negative and total spectral mass of `f` after tapering.
pub fn spectral_negativity(f: &SampledFunction) -> (f64, f64) {
    let s = f.grid().x_max() * TAPER_FRACTION;
    let tapered = f
        .map(|x, v| v * (-0.5 * (x / s).powi(2)).exp())
        .expect("tapering keeps values finite");
    let spec = forward_ft(&tapered);
    let dw = spec.grid().d_omega;
    let neg = spec.values().iter().map(|v| (-v.re).max(0.0)).sum::<f64>() * dw;
    (neg, spec.l1_mass())
}

/// Random lattice point sets: distinct nodes in `[-n/2, n/2]` so every
/// pairwise difference is itself a node and needs no interpolation.
fn lattice_point_sets(f: &SampledFunction, cfg: &PdConfig) -> Vec<Vec<f64>> {
    let g = f.grid();
    let half = g.n_half() / 2;
    let span = 2 * half + 1;
    let size = cfg.set_size.clamp(1, span);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.random_point_sets)
        .map(|_| {
            sample(&mut rng, span, size)
                .into_iter()
                .map(|i| (i as f64 - half as f64) * g.h())
                .collect()
        })
        .collect()
}

/// Dual-criterion positive-definiteness report.
///
/// `not_pd` when a Bochner eigenvalue is below `-tol` or the tapered spectrum
/// has negative mass above ten times the threshold; `inconclusive` when the
/// negative mass sits between one and ten thresholds; `pd` otherwise. The
/// spectral threshold is `(tol / sup|f|) * total_spectral_mass`.
pub fn pd_report(f: &SampledFunction, cfg: &PdConfig) -> Result<PdReport> {
    let sup = f.sup_norm();
    let tol = cfg.tol.unwrap_or(1e-8 * sup);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be >= 0, got {tol}")));
    }
    if sup == 0.0 {
        return Ok(PdReport {
            min_bochner_eigenvalue: 0.0,
            negative_spectral_mass: 0.0,
            total_spectral_mass: 0.0,
            verdict: Verdict::Pd,
            tolerance_used: tol,
            max_asymmetry: 0.0,
        });
    }
    let (neg, total) = spectral_negativity(f);
    let mut min_eig = f64::INFINITY;
    let mut asym: f64 = 0.0;
    for pts in lattice_point_sets(f, cfg) {
        let b = bochner_matrix(f, &pts)?;
        asym = asym.max(b.asymmetry);
        min_eig = min_eig.min(b.min_eigenvalue());
    }
    let threshold = tol / sup * total;
    let verdict = if min_eig < -tol || neg > 10.0 * threshold {
        Verdict::NotPd
    } else if neg > threshold {
        Verdict::Inconclusive
    } else {
        Verdict::Pd
    };
    Ok(PdReport {
        min_bochner_eigenvalue: min_eig,
        negative_spectral_mass: neg,
        total_spectral_mass: total,
        verdict,
        tolerance_used: tol,
        max_asymmetry: asym,
    })
}
