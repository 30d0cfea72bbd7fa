//! Products `∏ X_i^alpha` of iid `N(0, sigma^2)` variables and their
//! log-normal surrogate.
//!
//! The product splits into a sign and a magnitude, `∏ S_i · ∏ |X_i|`, with the
//! sign independent of the magnitude and fair whenever `alpha` is odd. The
//! log-magnitude `alpha Σ log|X_i|` is a sum of iid terms, so the iid
//! Berry-Esseen theorem compares it with `Z_alpha ~ N(l alpha E log|X|,
//! l alpha^2 pi^2/8)` uniformly in the threshold. The signed comparison
//! inherits the same bound: with a fair sign `S` independent of both
//! magnitudes, `P(S M <= t) = 1/2 + 1/2 P(M <= t)` for `t > 0` (and the
//! mirror for `t < 0`), so signed CDF gaps are half the unsigned ones.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Result};
use crate::logmoments::{self, sigma_log_cubed, VAR_LOG_ABS};
use crate::rng::{self, Executor};
use crate::signed::{Sign, SignedLog};
use crate::specfun::{normal_cdf, SeriesTruncation};

/// `(layers, sigma, alpha)` of a product `∏_{i<=layers} X_i^alpha`, `X_i ~ N(0, sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductConfig {
    layers: u32,
    sigma: f64,
    alpha: u32,
}

impl ProductConfig {
    pub fn new(layers: u32, sigma: f64, alpha: u32) -> Result<Self> {
        if layers < 1 {
            return Err(domain("layers must be >= 1"));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(domain("sigma must be finite and > 0"));
        }
        if alpha < 1 {
            return Err(domain("alpha must be >= 1"));
        }
        Ok(Self { layers, sigma, alpha })
    }

    pub fn layers(&self) -> u32 {
        self.layers
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// Products with odd `alpha` carry a fair random sign; even ones are positive.
    pub fn is_signed(&self) -> bool {
        self.alpha % 2 == 1
    }
}

/// A normal law `N(mu, var)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLaw {
    pub mu: f64,
    pub var: f64,
}

impl GaussianLaw {
    pub fn new(mu: f64, var: f64) -> Result<Self> {
        if var < 0.0 || !mu.is_finite() || !var.is_finite() {
            return Err(domain("Gaussian law needs finite mu and var >= 0"));
        }
        Ok(Self { mu, var })
    }

    pub fn sd(&self) -> f64 {
        libm::sqrt(self.var)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        normal_cdf((x - self.mu) / self.sd())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        self.mu + self.sd() * z
    }
}

/// Draws `∏ X_i^alpha` in sign/log-magnitude form without forming the raw product.
pub fn sample_product<R: Rng + ?Sized>(cfg: &ProductConfig, rng: &mut R) -> SignedLog {
    let mut negatives = 0u32;
    let mut log_sum = 0.0;
    for _ in 0..cfg.layers {
        let z: f64 = rng.sample(StandardNormal);
        let x = cfg.sigma * z;
        if x < 0.0 {
            negatives += 1;
        }
        log_sum += libm::log(x.abs());
    }
    let sign = if cfg.is_signed() && negatives % 2 == 1 { Sign::Minus } else { Sign::Plus };
    SignedLog::new(sign, cfg.alpha as f64 * log_sum)
}

/// `Z_alpha ~ N(l alpha E log|X|, l alpha^2 pi^2/8)`.
pub fn surrogate_product_law(cfg: &ProductConfig) -> GaussianLaw {
    let l = cfg.layers as f64;
    let a = cfg.alpha as f64;
    GaussianLaw { mu: l * a * logmoments::mean_unchecked(cfg.sigma), var: l * a * a * VAR_LOG_ABS }
}

/// Draws the surrogate `S e^{Z_alpha}` (`S` fair when `alpha` is odd, else `+1`).
pub fn sample_surrogate_product<R: Rng + ?Sized>(cfg: &ProductConfig, law: &GaussianLaw, rng: &mut R) -> SignedLog {
    let sign = if cfg.is_signed() && rng.random::<bool>() { Sign::Minus } else { Sign::Plus };
    SignedLog::new(sign, law.sample(rng))
}

/// Berry-Esseen bound `0.336 (rho + 0.415 sigma_log^3) / (sigma_log^3 sqrt(l))`;
/// `alpha` cancels.
pub fn be_bound_iid(cfg: &ProductConfig) -> Result<f64> {
    let (rho, _) = logmoments::abs_third_moment(cfg.sigma, SeriesTruncation::default())?;
    Ok(be_bound_iid_from_rho(rho, cfg.layers))
}

pub fn be_bound_iid_from_rho(rho: f64, layers: u32) -> f64 {
    let s3 = sigma_log_cubed();
    0.336 * (rho + 0.415 * s3) / (s3 * libm::sqrt(layers as f64))
}

/// CDF of the surrogate `e^Z` (unsigned) or `S e^Z` (signed) at `t`.
pub fn surrogate_cdf(law: &GaussianLaw, signed: bool, t: f64) -> f64 {
    surrogate_cdf_at(law, signed, SignedLog::from_real(t))
}

/// [`surrogate_cdf`] at a sign/log-magnitude point.
pub fn surrogate_cdf_at(law: &GaussianLaw, signed: bool, t: SignedLog) -> f64 {
    if t.is_zero() {
        return if signed { 0.5 } else { 0.0 };
    }
    let z = (t.log_mag() - law.mu) / law.sd();
    match (signed, t.sign()) {
        (false, Sign::Minus) => 0.0,
        (false, Sign::Plus) => normal_cdf(z),
        (true, Sign::Plus) => 1.0 - 0.5 * normal_cdf(-z),
        (true, Sign::Minus) => 0.5 * normal_cdf(-z),
    }
}

/// Median of `e^{Z_alpha}`: `exp(l alpha (log sigma - (gamma + log 2)/2))`.
pub fn median_surrogate(cfg: &ProductConfig) -> f64 {
    libm::exp(surrogate_product_law(cfg).mu)
}

/// `n` product draws following the chunked substream contract.
pub fn sample_products<E: Executor + ?Sized>(exec: &E, cfg: &ProductConfig, seed: u64, n: usize) -> Vec<SignedLog> {
    rng::sample_batch(exec, seed, n, |r| sample_product(cfg, r))
}

/// `n` surrogate draws following the chunked substream contract.
pub fn sample_surrogates<E: Executor + ?Sized>(exec: &E, cfg: &ProductConfig, seed: u64, n: usize) -> Vec<SignedLog> {
    let law = surrogate_product_law(cfg);
    rng::sample_batch(exec, seed, n, |r| sample_surrogate_product(cfg, &law, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn config_validation() {
        assert!(ProductConfig::new(0, 1.0, 1).is_err());
        assert!(ProductConfig::new(1, 0.0, 1).is_err());
        assert!(ProductConfig::new(1, 1.0, 0).is_err());
        assert!(ProductConfig::new(1, f64::INFINITY, 1).is_err());
    }

    #[test]
    fn even_alpha_is_positive() {
        let cfg = ProductConfig::new(3, 1.0, 2).unwrap();
        let mut rng = substream(1, 0);
        for _ in 0..1000 {
            assert_eq!(sample_product(&cfg, &mut rng).sign(), Sign::Plus);
        }
    }

    #[test]
    fn surrogate_law_values() {
        let law = surrogate_product_law(&ProductConfig::new(10, 1.0, 1).unwrap());
        assert!((law.mu + 6.351_814_227_307_39).abs() < 1e-12);
        assert!((law.var - 10.0 * core::f64::consts::PI * core::f64::consts::PI / 8.0).abs() < 1e-12);
        // alpha and layers enter the mean only through their product
        let a = surrogate_product_law(&ProductConfig::new(10, 1.3, 5).unwrap());
        let b = surrogate_product_law(&ProductConfig::new(50, 1.3, 1).unwrap());
        assert!((a.mu - b.mu).abs() < 1e-12);
    }

    #[test]
    fn be_bound_alpha_free_and_sqrt_scaling() {
        let b1 = be_bound_iid(&ProductConfig::new(10, 1.0, 1).unwrap()).unwrap();
        let b7 = be_bound_iid(&ProductConfig::new(10, 1.0, 7).unwrap()).unwrap();
        let b40 = be_bound_iid(&ProductConfig::new(40, 1.0, 7).unwrap()).unwrap();
        assert_eq!(b1, b7);
        assert!((b40 - b1 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn surrogate_cdf_landmarks() {
        let law = GaussianLaw::new(-2.0, 3.0).unwrap();
        assert_eq!(surrogate_cdf(&law, true, 0.0), 0.5);
        assert_eq!(surrogate_cdf(&law, false, 0.0), 0.0);
        assert!((surrogate_cdf(&law, false, libm::exp(-2.0)) - 0.5).abs() < 1e-15);
        assert_eq!(surrogate_cdf(&law, false, f64::INFINITY), 1.0);
        assert_eq!(surrogate_cdf(&law, true, f64::INFINITY), 1.0);
        for &t in &[1e-3, 0.2, 1.0, 7.0] {
            let s = surrogate_cdf(&law, true, t) + surrogate_cdf(&law, true, -t);
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn median_values() {
        let thr = crate::surrogate::threshold_sigma();
        for &(l, a) in &[(1, 1), (7, 3), (30, 2)] {
            let m = median_surrogate(&ProductConfig::new(l, thr, a).unwrap());
            assert!((m - 1.0).abs() < 1e-12);
        }
        let m = median_surrogate(&ProductConfig::new(10, 1.0, 1).unwrap());
        assert!((m - libm::exp(-6.351_814_227_307_39)).abs() < 1e-15);
        assert!((m - 1.744e-3).abs() < 1e-6);
    }
}
