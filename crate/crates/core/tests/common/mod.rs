#![allow(dead_code)]
//! Oracles shared by the integration tests. Nothing here calls into the
//! crate's own quadrature or special-function code.

use std::f64::consts::PI;

/// Tanh-sinh quadrature on `[a, b]`.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let h = 1.0 / 128.0;
    let r = 0.5 * (b - a);
    let mut sum = 0.0;
    let kmax = (4.5 / h) as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let ch = u.cosh();
        // distance from the nearer endpoint, computed without cancellation
        let d = r / (u.abs().exp() * ch);
        let xp = if u < 0.0 { a + d } else { b - d };
        if xp <= a || xp >= b {
            continue;
        }
        let w = r * 0.5 * PI * t.cosh() / (ch * ch);
        sum += w * f(xp);
    }
    sum * h
}

/// Density of `V = log|X|` for `X ~ N(0, sigma^2)`.
pub fn log_abs_density(v: f64, sigma: f64) -> f64 {
    (2.0 / PI).sqrt() / sigma * (v - (2.0 * v).exp() / (2.0 * sigma * sigma)).exp()
}

/// `E g(log|X|)` by integrating against the density of `log|X|`, split at 0.
pub fn log_abs_expectation<G: Fn(f64) -> f64>(sigma: f64, g: G) -> f64 {
    let hi = sigma.ln() + 5.0;
    let lo = -80.0;
    let f = |v: f64| g(v) * log_abs_density(v, sigma);
    if hi <= 0.0 {
        tanh_sinh(f, lo, hi)
    } else {
        tanh_sinh(f, lo, 0.0) + tanh_sinh(f, 0.0, hi)
    }
}

/// `Gamma(s, x) = ∫_x^∞ t^{s-1} e^{-t} dt` for `x > 0`.
pub fn upper_gamma(s: f64, x: f64) -> f64 {
    let f = |t: f64| ((s - 1.0) * t.ln() - t).exp();
    tanh_sinh(f, x, x + 10.0) + tanh_sinh(f, x + 10.0, x + 80.0)
}

/// `d^n/ds^n Gamma(s, x)` at `s` by Richardson-extrapolated central differences.
pub fn upper_gamma_fd(n: u32, s: f64, x: f64) -> f64 {
    let d = |h: f64| {
        let g = |k: f64| upper_gamma(s + k * h, x);
        match n {
            1 => (g(1.0) - g(-1.0)) / (2.0 * h),
            2 => (g(1.0) - 2.0 * g(0.0) + g(-1.0)) / (h * h),
            3 => (g(2.0) - 2.0 * g(1.0) + 2.0 * g(-1.0) - g(-2.0)) / (2.0 * h * h * h),
            _ => panic!("order {n} not supported"),
        }
    };
    let h = 0.02;
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// `T(n, 1/2, x)` recovered from the incomplete-gamma derivatives at `x = 1/(sqrt2 sigma)`.
pub fn t_oracle(n: u32, sigma: f64) -> f64 {
    let x = 1.0 / (2f64.sqrt() * sigma);
    let lx = x.ln();
    let g = upper_gamma(0.5, x);
    let t3 = (upper_gamma_fd(1, 0.5, x) - lx * g) / x;
    if n == 3 {
        return t3;
    }
    let t4 = (upper_gamma_fd(2, 0.5, x) - lx * lx * g) / (2.0 * x) - lx * t3;
    if n == 4 {
        return t4;
    }
    ((upper_gamma_fd(3, 0.5, x) - lx * lx * lx * g) / (3.0 * x) - lx * lx * t3 - 2.0 * lx * t4) / 2.0
}

/// `Gamma^{(n)}(1/2) = ∫_0^∞ log^n(t) t^{-1/2} e^{-t} dt = 2 ∫_0^∞ log^n(u^2) e^{-u^2} du`.
pub fn gamma_half_derivative_oracle(n: u32) -> f64 {
    let f = |u: f64| 2.0 * (2.0 * u.ln()).powi(n as i32) * (-u * u).exp();
    tanh_sinh(f, 0.0, 1.0) + tanh_sinh(f, 1.0, 12.0)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
