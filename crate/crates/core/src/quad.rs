//! Small quadrature helpers shared by the numerical modules.

use crate::grid::C64;

/// Composite Simpson on equally spaced samples. Odd interval counts finish
/// with a 3/8 panel; a single interval falls back to the trapezoid.
pub fn simpson(y: &[f64], dx: f64) -> f64 {
    let intervals = y.len().saturating_sub(1);
    match intervals {
        0 => 0.0,
        1 => 0.5 * dx * (y[0] + y[1]),
        2 => dx / 3.0 * (y[0] + 4.0 * y[1] + y[2]),
        3 => 3.0 * dx / 8.0 * (y[0] + 3.0 * y[1] + 3.0 * y[2] + y[3]),
        k if k % 2 == 0 => {
            let mut s = y[0] + y[k];
            for (i, v) in y.iter().enumerate().take(k).skip(1) {
                s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            s * dx / 3.0
        }
        k => simpson(&y[..k - 2], dx) + simpson(&y[k - 3..], dx),
    }
}

/// Trapezoid rule with Gregory end corrections through fifth differences;
/// sixth order on smooth data. Short inputs fall back to [`simpson`].
pub fn gregory(y: &[f64], dx: f64) -> f64 {
    const C: [f64; 5] = [1.0 / 12.0, 1.0 / 24.0, 19.0 / 720.0, 3.0 / 160.0, 863.0 / 60480.0];
    let n = y.len();
    if n < 12 {
        return simpson(y, dx);
    }
    let mut total = y.iter().sum::<f64>() - 0.5 * (y[0] + y[n - 1]);
    let mut fwd: Vec<f64> = y[..6].to_vec();
    let mut bwd: Vec<f64> = y[n - 6..].iter().rev().copied().collect();
    for (k, c) in C.iter().enumerate() {
        // k+1-th differences: forward at the start, backward at the end
        for i in 0..5 - k {
            fwd[i] = fwd[i + 1] - fwd[i];
            let next = bwd[i + 1];
            bwd[i] -= next;
        }
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        total -= c * (bwd[0] + sign * fwd[0]);
    }
    total * dx
}

/// `∫_a^{b} y` where `y[i]` samples a function at `i*dx` (i = 0..len) and
/// `0 <= a <= b = (len-1)*dx`. The partial cell at `a` uses the degree-5
/// interpolant through the nearest six samples, integrated by 3-point
/// Gauss–Legendre (exact for that degree).
pub fn integrate_from(y: &[f64], dx: f64, a: f64) -> f64 {
    let last = y.len() - 1;
    let end = last as f64 * dx;
    if a >= end {
        return 0.0;
    }
    let i0 = ((a / dx).ceil() as usize).min(last);
    let mut total = gregory(&y[i0..], dx);
    let gap = i0 as f64 * dx - a;
    if gap > 0.0 {
        let width = 6.min(y.len());
        let lo = (i0 + 3).min(y.len()).saturating_sub(width);
        let nodes: Vec<usize> = (lo..lo + width).collect();
        let interp = |t: f64| {
            nodes
                .iter()
                .map(|&j| {
                    let w: f64 = nodes
                        .iter()
                        .filter(|&&m| m != j)
                        .map(|&m| (t - m as f64) / (j as f64 - m as f64))
                        .product();
                    w * y[j]
                })
                .sum::<f64>()
        };
        let (t1, t2) = (a / dx, i0 as f64);
        let (mid, half) = (0.5 * (t1 + t2), 0.5 * (t2 - t1));
        let r = (0.6f64).sqrt();
        let gl = (5.0 * interp(mid - half * r) + 8.0 * interp(mid) + 5.0 * interp(mid + half * r)) / 9.0;
        total += gl * half * dx;
    }
    total
}

/// Double-exponential (exp-sinh) rule for `∫_0^∞ f(x) dx`, with
/// `x = exp(π/2 sinh t)`. The integrand is passed `ln x` as well so callers
/// can stay in log space near the endpoints.
pub fn exp_sinh(f: impl Fn(f64, f64) -> C64, step: f64) -> C64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut sum = C64::new(0.0, 0.0);
    let kmax = (6.5 / step).ceil() as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * step;
        let ln_x = half_pi * t.sinh();
        if ln_x > 700.0 {
            break;
        }
        let x = ln_x.exp();
        let w = half_pi * t.cosh() * x;
        let v = f(x, ln_x) * w;
        if v.re.is_finite() && v.im.is_finite() {
            sum += v;
        }
    }
    sum * step
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_on_cubics() {
        for n in 2..9 {
            let dx = 1.0 / n as f64;
            let y: Vec<f64> = (0..=n).map(|i| (i as f64 * dx).powi(3)).collect();
            assert!((simpson(&y, dx) - 0.25).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn partial_cell_is_accurate() {
        let dx = 0.1;
        let y: Vec<f64> = (0..=30).map(|i| (i as f64 * dx).powi(2)).collect();
        let got = integrate_from(&y, dx, 0.537);
        let want = (27.0 - 0.537_f64.powi(3)) / 3.0;
        let g: Vec<f64> = (0..=30).map(|i| (i as f64 * dx).sin()).collect();
        let e = integrate_from(&g, dx, 0.537) - (0.537f64.cos() - 3f64.cos());
        assert!(e.abs() < 5e-9, "sine error {e}");
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn gregory_is_sixth_order() {
        // ∫_0^1 e^x dx; halving dx should cut the error by roughly 2^6
        let err = |n: usize| {
            let dx = 1.0 / n as f64;
            let y: Vec<f64> = (0..=n).map(|i| (i as f64 * dx).exp()).collect();
            (gregory(&y, dx) - (1f64.exp() - 1.0)).abs()
        };
        assert!(err(20) < 1e-10);
        assert!(err(40) < err(20) / 30.0 || err(40) < 1e-14);
    }

    #[test]
    fn exp_sinh_gamma_function() {
        // ∫ x^{1/2} e^{-x} dx = Γ(3/2) = √π/2
        let v = exp_sinh(|x, lx| C64::new((0.5 * lx - x).exp(), 0.0), 1.0 / 32.0);
        assert!((v.re - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }
}
