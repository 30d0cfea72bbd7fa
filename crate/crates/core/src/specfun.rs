//! Special-function values behind the log-moment closed forms: derivatives of
//! `Gamma` at `1/2`, s-derivatives of the upper incomplete gamma function
//! `Gamma(s, x)` at `s = 1/2`, and the Meijer-G auxiliary function
//! `T(n, 1/2, x)` that expresses them.
//!
//! Throughout, `sigma` parametrises the incomplete-gamma argument as
//! `x = 1 / (sqrt(2) * sigma)`; the expansions used here are validated for
//! `sigma^2 > 1/2`, i.e. `x < 1`.
//!
//! `T(n, 1/2, x)` is evaluated from its Mellin-Barnes representation
//!
//! ```text
//! T(n, 1/2, x) = (1 / 2 pi i) ∮ (-1 / (u + 1))^(n-1) Gamma(-1/2 - u) x^u du
//! ```
//!
//! as minus the sum of residues: an order-`n-1` pole at `u = -1` (see
//! [`t_residue`]) and simple poles at `u = k - 1/2`, `k = 0, 1, ...` (see
//! [`t_series_term`]).

use crate::error::{domain, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// `zeta(2) = pi^2 / 6`.
pub const ZETA2: f64 = core::f64::consts::PI * core::f64::consts::PI / 6.0;
/// `zeta(3)` (Apery's constant).
pub const ZETA3: f64 = 1.202_056_903_159_594_3;
/// `zeta(4) = pi^4 / 90`.
pub const ZETA4: f64 =
    core::f64::consts::PI * core::f64::consts::PI * core::f64::consts::PI * core::f64::consts::PI / 90.0;
/// `sqrt(pi) = Gamma(1/2)`.
pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// `2 log 2 + gamma = -psi(1/2)`.
pub const TWO_LN2_PLUS_GAMMA: f64 = 2.0 * core::f64::consts::LN_2 + EULER_GAMMA;

/// The constants used by the closed forms, bundled for inspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecfunConstants {
    pub euler_gamma: f64,
    pub zeta2: f64,
    pub zeta3: f64,
    pub zeta4: f64,
    pub sqrt_pi: f64,
}

impl SpecfunConstants {
    pub const fn get() -> Self {
        Self { euler_gamma: EULER_GAMMA, zeta2: ZETA2, zeta3: ZETA3, zeta4: ZETA4, sqrt_pi: SQRT_PI }
    }
}

/// Number of terms retained in the `T`-function series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesTruncation {
    k_max: usize,
}

impl SeriesTruncation {
    pub fn new(k_max: usize) -> Result<Self> {
        if k_max < 1 {
            return Err(domain("series truncation k_max must be >= 1"));
        }
        Ok(Self { k_max })
    }

    pub fn k_max(self) -> usize {
        self.k_max
    }
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self { k_max: 10 }
    }
}

/// Moment polynomials `p_j(a)` with cumulants `(a, 3 zeta2, 14 zeta3, 90 zeta4)`.
///
/// `(-1)^j Gamma^(j)(1/2) = sqrt(pi) p_j(2 log 2 + gamma)`, and shifting the
/// first cumulant gives the binomial convolution with powers of a logarithm.
fn moment_poly(order: usize, a: f64) -> f64 {
    let k2 = 3.0 * ZETA2;
    let k3 = 14.0 * ZETA3;
    let k4 = 90.0 * ZETA4;
    match order {
        0 => 1.0,
        1 => a,
        2 => a * a + k2,
        3 => a * a * a + 3.0 * a * k2 + k3,
        4 => a * a * a * a + 6.0 * a * a * k2 + 4.0 * a * k3 + 3.0 * k2 * k2 + k4,
        _ => unreachable!("moment_poly order {order}"),
    }
}

/// `d^n Gamma(s) / ds^n` at `s = 1/2`, for `n` in `0..=4`.
pub fn gamma_half_derivative(order: u32) -> Result<f64> {
    if order > 4 {
        return Err(domain("gamma_half_derivative: order must be in 0..=4"));
    }
    let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * SQRT_PI * moment_poly(order as usize, TWO_LN2_PLUS_GAMMA))
}

/// Standard error function.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / core::f64::consts::SQRT_2)
}

/// `Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x))`.
pub fn upper_gamma_half(x: f64) -> f64 {
    SQRT_PI * erfc(libm::sqrt(x))
}

fn check_t_args(n: u32, sigma: f64) -> Result<()> {
    if !(3..=5).contains(&n) {
        return Err(domain("T-function order n must be in 3..=5"));
    }
    if !(sigma.is_finite() && 2.0 * sigma * sigma > 1.0) {
        return Err(domain("T-function expansion requires sigma^2 > 1/2"));
    }
    Ok(())
}

/// Contribution of the order-`n-1` pole at `u = -1` to `T(n, 1/2, 1/(sqrt(2) sigma))`.
///
/// Equals `(-1)^n sqrt(2 pi) sigma p_{n-2}(2 log 2 + gamma - log(sqrt(2) sigma)) / (n-2)!`.
pub fn t_residue(n: u32, sigma: f64) -> Result<f64> {
    if !(3..=5).contains(&n) {
        return Err(domain("T-function order n must be in 3..=5"));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(domain("t_residue requires sigma > 0"));
    }
    let shifted = TWO_LN2_PLUS_GAMMA - libm::log(core::f64::consts::SQRT_2 * sigma);
    let j = (n - 2) as usize;
    let factorial = [1.0, 1.0, 2.0, 6.0][j];
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * libm::sqrt(2.0 * core::f64::consts::PI) * sigma * moment_poly(j, shifted) / factorial)
}

/// Coefficient `a` of the `k`-th pole term `a * sigma^(1/2 - k)` of `T(n, 1/2, 1/(sqrt(2) sigma))`.
///
/// The term comes from the pole of `Gamma(-1/2 - u)` at `u = k - 1/2`. For
/// `k = 1` its magnitude is `(4/9) 2^(-1/4) (2/3)^(n-3)`.
pub fn t_series_coefficient(n: u32, k: usize) -> f64 {
    let half_k = k as f64 + 0.5;
    let sign = if (k + n as usize - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut factorial = 1.0;
    for i in 2..=k {
        factorial *= i as f64;
    }
    sign * libm::pow(2.0, (1.0 - 2.0 * k as f64) / 4.0) / (factorial * libm::pow(half_k, (n - 1) as f64))
}

/// The `k`-th pole term of `T(n, 1/2, 1/(sqrt(2) sigma))`.
pub fn t_series_term(n: u32, sigma: f64, k: usize) -> f64 {
    t_series_coefficient(n, k) * libm::pow(sigma, 0.5 - k as f64)
}

/// `T(n, 1/2, 1/(sqrt(2) sigma))` for `n` in `3..=5`, summing pole terms `k = 0..=k_max`.
///
/// The pole terms alternate in sign and decrease in magnitude from `k = 1`
/// on when `sigma^2 > 1/2`, so the truncation error is below the first
/// omitted term.
pub fn t_function(n: u32, sigma: f64, trunc: SeriesTruncation) -> Result<f64> {
    check_t_args(n, sigma)?;
    let series: f64 = (0..=trunc.k_max()).map(|k| t_series_term(n, sigma, k)).sum();
    Ok(t_residue(n, sigma)? + series)
}

/// `d^n Gamma(s, x) / ds^n` at `s = 1/2` with `x = 1/(sqrt(2) sigma)`, for `n` in `0..=3`.
pub fn incomplete_gamma_s_derivative(order: u32, sigma: f64, trunc: SeriesTruncation) -> Result<f64> {
    if order > 3 {
        return Err(domain("incomplete_gamma_s_derivative: order must be in 0..=3"));
    }
    if !(sigma.is_finite() && 2.0 * sigma * sigma > 1.0) {
        return Err(domain("incomplete-gamma expansion requires sigma^2 > 1/2"));
    }
    let x = 1.0 / (core::f64::consts::SQRT_2 * sigma);
    let lx = libm::log(x);
    let g = upper_gamma_half(x);
    if order == 0 {
        return Ok(g);
    }
    let t3 = t_function(3, sigma, trunc)?;
    Ok(match order {
        1 => lx * g + x * t3,
        2 => {
            let t4 = t_function(4, sigma, trunc)?;
            lx * lx * g + 2.0 * x * (lx * t3 + t4)
        }
        _ => {
            let t4 = t_function(4, sigma, trunc)?;
            let t5 = t_function(5, sigma, trunc)?;
            lx * lx * lx * g + 3.0 * x * (lx * lx * t3 + 2.0 * lx * t4 + 2.0 * t5)
        }
    })
}

/// `d^n gamma(s, x) / ds^n` at `s = 1/2` (lower incomplete gamma), via `Gamma = Gamma(s,x) + gamma(s,x)`.
pub fn lower_incomplete_gamma_s_derivative(order: u32, sigma: f64, trunc: SeriesTruncation) -> Result<f64> {
    Ok(gamma_half_derivative(order)? - incomplete_gamma_s_derivative(order, sigma, trunc)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let c = SpecfunConstants::get();
        assert!(c.euler_gamma > 0.5772156 && c.euler_gamma < 0.5772157);
        assert!((c.zeta2 - libm::pow(core::f64::consts::PI, 2.0) / 6.0).abs() < 1e-15);
        assert!((c.zeta4 - libm::pow(core::f64::consts::PI, 4.0) / 90.0).abs() < 1e-15);
        assert!((c.sqrt_pi * c.sqrt_pi - core::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn gamma_half_low_orders() {
        assert!((gamma_half_derivative(0).unwrap() - 1.772_453_850_905_516).abs() < 1e-15);
        let d1 = gamma_half_derivative(1).unwrap();
        assert!((d1 + SQRT_PI * (EULER_GAMMA + 2.0 * core::f64::consts::LN_2)).abs() < 1e-14);
        assert!(gamma_half_derivative(5).is_err());
    }

    #[test]
    fn truncation_rejects_zero() {
        assert!(SeriesTruncation::new(0).is_err());
        assert_eq!(SeriesTruncation::default().k_max(), 10);
    }

    #[test]
    fn t_domain_errors() {
        let tr = SeriesTruncation::default();
        assert!(t_function(2, 1.0, tr).is_err());
        assert!(t_function(6, 1.0, tr).is_err());
        assert!(t_function(3, 0.7, tr).is_err()); // 0.49 <= 1/2
        assert!(t_residue(3, 0.0).is_err());
        assert!(incomplete_gamma_s_derivative(1, 0.5, tr).is_err());
    }

    #[test]
    fn leading_decaying_coefficient() {
        let expected = 4.0 / 9.0 * libm::pow(2.0, -0.25);
        assert!((t_series_coefficient(3, 1).abs() - expected).abs() < 1e-15);
        assert!(t_series_coefficient(3, 1) < 0.0);
        assert!(t_series_coefficient(4, 1) > 0.0);
        assert!(t_series_coefficient(5, 1) < 0.0);
    }

    #[test]
    fn residue_vanishing_bracket() {
        // sigma where 2 log 2 + gamma - log(sqrt2 sigma) = 0 leaves only the
        // cumulant: n=4 residue = sqrt(2 pi) sigma * 3 zeta2 / 2.
        let sigma = libm::exp(TWO_LN2_PLUS_GAMMA) / core::f64::consts::SQRT_2;
        let r = t_residue(4, sigma).unwrap();
        let expected = libm::sqrt(2.0 * core::f64::consts::PI) * sigma * 3.0 * ZETA2 / 2.0;
        assert!((r - expected).abs() < 1e-12 * expected);
        let r3 = t_residue(3, sigma).unwrap();
        assert!(r3.abs() < 1e-12);
    }

    #[test]
    fn erf_symmetry() {
        assert_eq!(erf(0.0), 0.0);
        for &x in &[0.1, 0.5, 1.0, 2.5, 5.9] {
            assert_eq!(erf(x), -erf(-x));
        }
    }
}
