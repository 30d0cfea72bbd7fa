//! Moments of `log|X|` for `X ~ N(0, sigma^2)`.
//!
//! Writing `|X| = sqrt(2) sigma |U|` with `U ~ N(0, 1/2)` reduces every moment
//! to integrals `∫ log^j(u) e^{-u^2} du`, i.e. to s-derivatives of the
//! complete and incomplete gamma functions at `s = 1/2`. The mean, second and
//! fourth moments are polynomials in `log(sqrt(2) sigma)`; the absolute third
//! moment needs the incomplete gamma function and the expansion in
//! [`specfun`](crate::specfun) is only valid for `sigma^2 > 1/2`. Outside that
//! region the value comes from adaptive quadrature.

use core::f64::consts::{FRAC_2_SQRT_PI, LN_2, PI, SQRT_2};

use crate::error::{domain, Result};
use crate::quadrature;
use crate::specfun::{
    self, gamma_half_derivative, incomplete_gamma_s_derivative, SeriesTruncation, EULER_GAMMA, TWO_LN2_PLUS_GAMMA,
    ZETA3,
};

/// `Var(log|X|) = pi^2 / 8`, for every `sigma > 0`.
pub const VAR_LOG_ABS: f64 = PI * PI / 8.0;

/// Absolute tolerance of the quadrature route.
pub const QUAD_TOL: f64 = 1e-10;

/// How [`moments_with`] evaluates the moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Closed forms (quadrature for the absolute third moment when `sigma^2 <= 1/2`).
    #[default]
    Closed,
    /// Adaptive quadrature throughout.
    Quadrature,
}

/// Moments of `log|X|` for `X ~ N(0, sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogAbsMoments {
    pub sigma: f64,
    /// `E log|X|`
    pub mean: f64,
    /// `E log^2|X|`
    pub second: f64,
    pub variance: f64,
    /// `rho = E |log|X||^3`
    pub abs_third: f64,
    /// `E log^4|X|`
    pub fourth: f64,
    /// Whether `abs_third` came from the closed form.
    pub abs_third_exact: bool,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(domain("sigma must be finite and > 0"))
    }
}

pub(crate) fn mean_unchecked(sigma: f64) -> f64 {
    libm::log(sigma) - 0.5 * (EULER_GAMMA + LN_2)
}

/// `E log|X| = log sigma - (gamma + log 2) / 2`.
pub fn mean_log_abs(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(mean_unchecked(sigma))
}

/// `E log^2|X|`.
pub fn second_moment_log_abs(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let l = libm::log(SQRT_2 * sigma);
    let a = TWO_LN2_PLUS_GAMMA;
    Ok(l * l - l * a + 0.25 * (a * a + 0.5 * PI * PI))
}

/// `Var log|X| = pi^2 / 8`.
pub fn variance_log_abs(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(VAR_LOG_ABS)
}

/// `sigma_log^3 = (pi^2 / 8)^(3/2)`.
pub fn sigma_log_cubed() -> f64 {
    VAR_LOG_ABS * libm::sqrt(VAR_LOG_ABS)
}

/// `E log^4|X|`, a quartic in `log(sqrt(2) sigma)`.
pub fn fourth_moment_log_abs(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let l = libm::log(SQRT_2 * sigma);
    let a = TWO_LN2_PLUS_GAMMA;
    let pi2 = PI * PI;
    let (l2, l3, l4) = (l * l, l * l * l, l * l * l * l);
    let (a2, a3, a4) = (a * a, a * a * a, a * a * a * a);
    Ok(l4 - 2.0 * l3 * a + 1.5 * l2 * (a2 + 0.5 * pi2) - 0.5 * l * (a3 + 1.5 * pi2 * a + 14.0 * ZETA3)
        + (a4 + 3.0 * pi2 * a2 + 56.0 * a * ZETA3 + 1.75 * pi2 * pi2) / 16.0)
}

/// `(E log^4|X|)^(3/4)`, an upper bound on `rho` valid for every `sigma > 0` (Hölder).
pub fn holder_bound(sigma: f64) -> Result<f64> {
    Ok(libm::pow(fourth_moment_log_abs(sigma)?, 0.75))
}

/// `E g(log|X|)` by adaptive quadrature, split where `log|X|` changes sign.
pub fn expect_log_abs_quad<G: Fn(f64) -> f64>(sigma: f64, g: G) -> Result<f64> {
    check_sigma(sigma)?;
    let ln_sigma = libm::log(sigma);
    // X = sigma T with T ~ N(0,1); density of |T| is sqrt(2/pi) e^{-t^2/2}.
    let integrand = |t: f64| g(ln_sigma + libm::log(t)) * libm::exp(-0.5 * t * t);
    let split = 1.0 / sigma;
    let norm = libm::sqrt(2.0 / PI);
    let tol = QUAD_TOL / (2.0 * norm);
    let low = quadrature::integrate(integrand, 0.0, split, tol)?;
    let high = quadrature::integrate_to_infinity(integrand, split, tol)?;
    Ok(norm * (low.value + high.value))
}

/// `E |log|X||^3` by quadrature.
pub fn abs_third_moment_quad(sigma: f64) -> Result<f64> {
    expect_log_abs_quad(sigma, |v| (v * v * v).abs())
}

fn abs_third_closed(sigma: f64, trunc: SeriesTruncation) -> Result<f64> {
    let l = libm::log(SQRT_2 * sigma);
    let a = 1.0 / (SQRT_2 * sigma);
    // log|X| > 0 iff |U| > a; the s-derivatives are needed at Gamma(s, a^2),
    // which is Gamma(s, 1/(sqrt2 sigma')) with sigma' = sqrt2 sigma^2.
    let sigma_arg = SQRT_2 * sigma * sigma;
    let binom = [1.0, 3.0, 3.0, 1.0];
    let mut rho = l * l * l * (1.0 - 2.0 * specfun::erf(a));
    for j in 1..=3u32 {
        let upper = incomplete_gamma_s_derivative(j, sigma_arg, trunc)?;
        let complete = gamma_half_derivative(j)?;
        let scale = FRAC_2_SQRT_PI * libm::pow(2.0, -(j as f64 + 1.0));
        rho += binom[j as usize] * libm::pow(l, (3 - j) as f64) * scale * (2.0 * upper - complete);
    }
    Ok(rho)
}

/// `rho = E |log|X||^3` and whether the closed form was used (`sigma^2 > 1/2`).
pub fn abs_third_moment(sigma: f64, trunc: SeriesTruncation) -> Result<(f64, bool)> {
    check_sigma(sigma)?;
    if 2.0 * sigma * sigma > 1.0 {
        Ok((abs_third_closed(sigma, trunc)?, true))
    } else {
        Ok((abs_third_moment_quad(sigma)?, false))
    }
}

/// All moments, closed forms where available.
pub fn moments(sigma: f64) -> Result<LogAbsMoments> {
    moments_with(sigma, Method::Closed)
}

pub fn moments_with(sigma: f64, method: Method) -> Result<LogAbsMoments> {
    check_sigma(sigma)?;
    match method {
        Method::Closed => {
            let (abs_third, abs_third_exact) = abs_third_moment(sigma, SeriesTruncation::default())?;
            Ok(LogAbsMoments {
                sigma,
                mean: mean_log_abs(sigma)?,
                second: second_moment_log_abs(sigma)?,
                variance: variance_log_abs(sigma)?,
                abs_third,
                fourth: fourth_moment_log_abs(sigma)?,
                abs_third_exact,
            })
        }
        Method::Quadrature => {
            let mean = expect_log_abs_quad(sigma, |v| v)?;
            let second = expect_log_abs_quad(sigma, |v| v * v)?;
            Ok(LogAbsMoments {
                sigma,
                mean,
                second,
                variance: second - mean * mean,
                abs_third: abs_third_moment_quad(sigma)?,
                fourth: expect_log_abs_quad(sigma, |v| v * v * v * v)?,
                abs_third_exact: false,
            })
        }
    }
}
