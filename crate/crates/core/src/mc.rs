//! Monte-Carlo extrema of killed Lévy paths.
//!
//! Worker `w` of `n_workers` draws from `ChaCha8Rng::seed_from_u64(seed)` on
//! stream `w` and simulates paths `w, w + n_workers, w + 2 n_workers, ...` in
//! order. Results are merged by path index, so output is a pure function of
//! `(seed, n_workers)` and the rest of the config.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Exp1, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::{JumpLaw, Jumps, KillingTime, LevyModel};

/// How the running supremum and infimum are observed inside a time step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monitoring {
    /// Only at step ends, with Poisson(η·dt) jumps added at the end of each
    /// step. Biased low for the supremum by about `0.5826 σ √dt`.
    Discrete,
    /// Exact jump times, and between jumps the Brownian-bridge extreme of each
    /// step sampled from its closed-form law. No monitoring bias.
    #[default]
    Bridge,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub model: LevyModel,
    pub killing: KillingTime,
    pub n_paths: usize,
    /// Step for exponential killing. Geometric killing always uses unit steps.
    pub dt: f64,
    pub seed: u64,
    pub n_workers: usize,
    pub monitoring: Monitoring,
}

impl SimConfig {
    pub fn new(model: LevyModel, killing: KillingTime, n_paths: usize, seed: u64) -> Self {
        SimConfig {
            model,
            killing,
            n_paths,
            dt: 1e-3,
            seed,
            n_workers: 1,
            monitoring: Monitoring::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.killing.validate()?;
        if self.n_paths == 0 || self.n_workers == 0 {
            return Err(Error::InvalidParameter("n_paths and n_workers must be >= 1".into()));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be > 0, got {}", self.dt)));
        }
        Ok(())
    }

    /// `(σ√dt, η·dt)`: per-step diffusion scale and expected jump count.
    pub fn step_diagnostics(&self) -> (f64, f64) {
        let dt = match self.killing {
            KillingTime::Exponential { .. } => self.dt,
            KillingTime::Geometric { .. } => 1.0,
        };
        let eta = match self.model.jumps {
            Jumps::None => 0.0,
            Jumps::CompoundPoisson { intensity, .. } => intensity,
        };
        (self.model.sigma * dt.sqrt(), eta * dt)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathExtrema {
    pub sup: f64,
    pub inf: f64,
    pub terminal: f64,
    pub killing_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    pub sorted_samples: Vec<f64>,
    pub n: usize,
}

impl EmpiricalDistribution {
    pub fn from_samples(mut samples: Vec<f64>) -> Self {
        samples.sort_by(f64::total_cmp);
        let n = samples.len();
        EmpiricalDistribution { sorted_samples: samples, n }
    }

    /// Fraction of samples `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted_samples.partition_point(|&s| s <= x) as f64 / self.n as f64
    }

    pub fn mean(&self) -> f64 {
        self.sorted_samples.iter().sum::<f64>() / self.n as f64
    }
}

fn sample_jump(law: &JumpLaw, rng: &mut ChaCha8Rng) -> f64 {
    match *law {
        JumpLaw::Gaussian { m, s } => m + s * rng.sample::<f64, _>(StandardNormal),
        JumpLaw::ExponentialTwosided { p, theta_plus, theta_minus } => {
            let e: f64 = rng.sample(Exp1);
            if rng.random::<f64>() < p {
                e / theta_plus
            } else {
                -e / theta_minus
            }
        }
    }
}

/// Uniform on (0, 1], safe to take the log of.
fn open_uniform(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Poisson count with mean `m`; zero for `m == 0`.
fn poisson(m: f64, rng: &mut ChaCha8Rng) -> u64 {
    if m <= 0.0 {
        return 0;
    }
    let p = Poisson::new(m).expect("positive finite mean");
    p.sample(rng) as u64
}

struct Walker<'a> {
    model: &'a LevyModel,
    hi: f64,
    lo: f64,
    x: f64,
}

impl Walker<'_> {
    fn new(model: &LevyModel) -> Walker<'_> {
        Walker { model, hi: 0.0, lo: 0.0, x: 0.0 }
    }

    fn observe(&mut self) {
        self.hi = self.hi.max(self.x);
        self.lo = self.lo.min(self.x);
    }

    fn compound(&mut self, mean_count: f64, rng: &mut ChaCha8Rng) {
        if let Jumps::CompoundPoisson { law, .. } = &self.model.jumps {
            for _ in 0..poisson(mean_count, rng) {
                self.x += sample_jump(law, rng);
            }
        }
    }

    /// Diffusion over `len`; with `bridge`, also the extremes in between.
    fn diffuse(&mut self, len: f64, bridge: bool, rng: &mut ChaCha8Rng) {
        let s = self.model.sigma;
        let z: f64 = rng.sample(StandardNormal);
        let a = self.x;
        let b = a + self.model.mu * len + s * len.sqrt() * z;
        if bridge && s > 0.0 {
            // the max and min of a Brownian bridge from a to b over `len`;
            // drawn with separate uniforms, so each marginal is exact
            let var = 2.0 * s * s * len;
            let d2 = (b - a) * (b - a);
            let up = (d2 - var * open_uniform(rng).ln()).sqrt();
            let down = (d2 - var * open_uniform(rng).ln()).sqrt();
            self.hi = self.hi.max(0.5 * (a + b + up));
            self.lo = self.lo.min(0.5 * (a + b - down));
        }
        self.x = b;
    }
}

fn exponential_path(cfg: &SimConfig, q: f64, rng: &mut ChaCha8Rng) -> PathExtrema {
    let tau = rng.sample::<f64, _>(Exp1) / q;
    let mut w = Walker::new(&cfg.model);
    let eta = match cfg.model.jumps {
        Jumps::None => 0.0,
        Jumps::CompoundPoisson { intensity, .. } => intensity,
    };
    let mut t = 0.0;
    match cfg.monitoring {
        Monitoring::Discrete => {
            while t < tau {
                let len = cfg.dt.min(tau - t);
                w.diffuse(len, false, rng);
                w.compound(eta * len, rng);
                w.observe();
                t += len;
            }
        }
        Monitoring::Bridge => {
            let exp_eta = (eta > 0.0).then(|| Exp::new(eta).expect("positive intensity"));
            let mut next_jump = exp_eta.map_or(f64::INFINITY, |e| e.sample(rng));
            let mut step_end = cfg.dt.min(tau);
            loop {
                let jump_first = next_jump < step_end;
                let end = if jump_first { next_jump } else { step_end };
                w.diffuse(end - t, true, rng);
                t = end;
                if jump_first {
                    if let Jumps::CompoundPoisson { law, .. } = &cfg.model.jumps {
                        w.x += sample_jump(law, rng);
                    }
                    next_jump += exp_eta.map_or(f64::INFINITY, |e| e.sample(rng));
                } else if step_end >= tau {
                    w.observe();
                    break;
                } else {
                    step_end = (step_end + cfg.dt).min(tau);
                }
                w.observe();
            }
        }
    }
    PathExtrema { sup: w.hi, inf: w.lo, terminal: w.x, killing_time: tau }
}

/// Random walk with `X_1` increments stopped at `T`, `P(T = k) = (1-q) q^k`.
fn geometric_path(cfg: &SimConfig, q: f64, rng: &mut ChaCha8Rng) -> PathExtrema {
    let steps = (open_uniform(rng).ln() / q.ln()).floor() as u64;
    let eta = match cfg.model.jumps {
        Jumps::None => 0.0,
        Jumps::CompoundPoisson { intensity, .. } => intensity,
    };
    let mut w = Walker::new(&cfg.model);
    for _ in 0..steps {
        w.diffuse(1.0, false, rng);
        w.compound(eta, rng);
        w.observe();
    }
    PathExtrema { sup: w.hi, inf: w.lo, terminal: w.x, killing_time: steps as f64 }
}

/// Per-path extrema in path-index order.
pub fn simulate_paths(cfg: &SimConfig) -> Result<Vec<PathExtrema>> {
    cfg.validate()?;
    let nw = cfg.n_workers.min(cfg.n_paths);
    let run = |worker: usize| -> Vec<PathExtrema> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(worker as u64);
        (worker..cfg.n_paths)
            .step_by(nw)
            .map(|_| match cfg.killing {
                KillingTime::Exponential { q } => exponential_path(cfg, q, &mut rng),
                KillingTime::Geometric { q } => geometric_path(cfg, q, &mut rng),
            })
            .collect()
    };
    let per_worker: Vec<Vec<PathExtrema>> = if nw == 1 {
        vec![run(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..nw).map(|w| s.spawn(move || run(w))).collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut out = Vec::with_capacity(cfg.n_paths);
    for i in 0..cfg.n_paths {
        out.push(per_worker[i % nw][i / nw]);
    }
    Ok(out)
}

/// Empirical laws of `(M, I)`.
pub fn simulate_extrema(cfg: &SimConfig) -> Result<(EmpiricalDistribution, EmpiricalDistribution)> {
    let paths = simulate_paths(cfg)?;
    let sup = paths.iter().map(|p| p.sup).collect();
    let inf = paths.iter().map(|p| p.inf).collect();
    Ok((EmpiricalDistribution::from_samples(sup), EmpiricalDistribution::from_samples(inf)))
}

/// `sup_x |F_n(x) - F(x)|`, checked on both sides of every distinct sample.
///
/// The left limit `F(v-)` is read as `F(v - 1e-9 (1 + |v|))`, so a model cdf
/// with an atom is compared correctly against tied samples at the atom.
pub fn ks_distance(emp: &EmpiricalDistribution, cdf: impl Fn(f64) -> f64) -> f64 {
    let s = &emp.sorted_samples;
    let n = emp.n as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < s.len() {
        let v = s[i];
        let mut j = i;
        while j < s.len() && s[j] == v {
            j += 1;
        }
        let below = i as f64 / n;
        let at = j as f64 / n;
        d = d.max((at - cdf(v)).abs()).max((below - cdf(v - 1e-9 * (1.0 + v.abs()))).abs());
        i = j;
    }
    d.min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm(mu: f64, sigma: f64) -> LevyModel {
        LevyModel::brownian(mu, sigma)
    }

    fn exp_cfg(model: LevyModel, q: f64, n: usize) -> SimConfig {
        SimConfig::new(model, KillingTime::Exponential { q }, n, 11)
    }

    #[test]
    fn constant_path() {
        for monitoring in [Monitoring::Discrete, Monitoring::Bridge] {
            let cfg = SimConfig { monitoring, ..exp_cfg(bm(0.0, 0.0), 1.0, 200) };
            let (m, i) = simulate_extrema(&cfg).unwrap();
            assert!(m.sorted_samples.iter().chain(&i.sorted_samples).all(|&v| v == 0.0));
        }
    }

    #[test]
    fn monotone_path() {
        for monitoring in [Monitoring::Discrete, Monitoring::Bridge] {
            let cfg = SimConfig { monitoring, ..exp_cfg(bm(0.7, 0.0), 1.0, 200) };
            for p in simulate_paths(&cfg).unwrap() {
                assert_eq!(p.inf, 0.0);
                assert!((p.sup - 0.7 * p.killing_time).abs() < 1e-12 * (1.0 + p.sup));
            }
        }
    }

    #[test]
    fn ordering_holds_pathwise() {
        let law = JumpLaw::ExponentialTwosided { p: 0.4, theta_plus: 3.0, theta_minus: 2.0 };
        for killing in [KillingTime::Exponential { q: 1.0 }, KillingTime::Geometric { q: 0.6 }] {
            let cfg = SimConfig {
                dt: 1e-2,
                n_workers: 3,
                ..SimConfig::new(LevyModel::jump_diffusion(0.1, 0.8, 2.0, law), killing, 500, 3)
            };
            for p in simulate_paths(&cfg).unwrap() {
                assert!(p.sup >= p.terminal && p.terminal >= p.inf && p.sup >= 0.0 && p.inf <= 0.0);
            }
        }
    }

    #[test]
    fn deterministic_for_seed_and_workers() {
        let cfg = SimConfig { n_workers: 4, dt: 1e-2, ..exp_cfg(bm(0.1, 1.0), 1.0, 1000) };
        assert_eq!(simulate_extrema(&cfg).unwrap(), simulate_extrema(&cfg).unwrap());
        let other = SimConfig { seed: 12, ..cfg };
        assert_ne!(simulate_extrema(&cfg).unwrap().0, simulate_extrema(&other).unwrap().0);
    }

    #[test]
    fn geometric_step_count() {
        // E[T] = q / (1 - q)
        let cfg = SimConfig::new(bm(0.0, 1.0), KillingTime::Geometric { q: 0.7 }, 40_000, 5);
        let mean = simulate_paths(&cfg).unwrap().iter().map(|p| p.killing_time).sum::<f64>() / 40_000.0;
        assert!((mean - 0.7 / 0.3).abs() < 0.08, "{mean}");
    }

    #[test]
    fn ks_examples() {
        let zeros = EmpiricalDistribution::from_samples(vec![0.0; 10]);
        let exp1 = |x: f64| if x <= 0.0 { 0.0 } else { 1.0 - (-x).exp() };
        assert_eq!(ks_distance(&zeros, exp1), 1.0);
        let same = EmpiricalDistribution::from_samples(vec![1.0, 2.0]);
        let step = |x: f64| if x < 1.0 { 0.0 } else if x < 2.0 { 0.5 } else { 1.0 };
        assert_eq!(ks_distance(&same, step), 0.0);
        // atom handled from the left
        let atom = |x: f64| if x < 0.0 { 0.0 } else { 0.5 };
        let half = EmpiricalDistribution::from_samples(vec![0.0, 0.0, 5.0, 6.0]);
        assert_eq!(ks_distance(&half, atom), 0.5);
    }

    #[test]
    fn exponential_samples_pass_ks() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs: Vec<f64> = (0..100_000).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let d = ks_distance(&EmpiricalDistribution::from_samples(xs), |x| 1.0 - (-x).exp());
        assert!(d < 0.01, "{d}");
    }

    #[test]
    fn brownian_supremum_is_exponential() {
        let cfg = SimConfig { n_workers: 2, ..exp_cfg(bm(0.0, 2f64.sqrt()), 1.0, 20_000) };
        let (m, i) = simulate_extrema(&cfg).unwrap();
        let exp1 = |x: f64| if x <= 0.0 { 0.0 } else { 1.0 - (-x).exp() };
        assert!(ks_distance(&m, exp1) < 0.02);
        assert!(ks_distance(&i, |x: f64| if x >= 0.0 { 1.0 } else { x.exp() }) < 0.02);
    }

    #[test]
    fn validation() {
        assert!(simulate_paths(&exp_cfg(bm(0.0, 1.0), 1.0, 0)).is_err());
        assert!(simulate_paths(&SimConfig { dt: 0.0, ..exp_cfg(bm(0.0, 1.0), 1.0, 1) }).is_err());
        assert!(simulate_paths(&exp_cfg(bm(0.0, 1.0), -1.0, 1)).is_err());
    }
}

