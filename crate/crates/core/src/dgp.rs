//! Polynomial-kernel DGPs on the real line.
//!
//! A GP with kernel `scale^2 (xy + c)^d` is `g_1(x) = <Z, phi(x)>` with
//! `Z ~ N(0, I_{d+1})` and the binomial feature map `phi`. A GP with kernel
//! `sigma^2 (xy)^d` is `g(x) = Y x^d` with `Y ~ N(0, sigma^2)`. The DGP
//! `g_l ∘ … ∘ g_1` is therefore a product of the layer draws raised to the
//! composition exponents `c_i`, times `g_1(x)^{c_1}`.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Error, Result};
use crate::rng::{self, Executor};
use crate::signed::{Sign, SignedLog};

/// First layer kernel `scale^2 (xy + c)^degree`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstLayerKernel {
    c: f64,
    degree: u32,
    scale: f64,
}

impl FirstLayerKernel {
    pub fn new(c: f64, degree: u32, scale: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(domain("first layer offset c must be finite and >= 0"));
        }
        if degree < 1 {
            return Err(domain("first layer degree must be >= 1"));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(domain("first layer scale must be finite and > 0"));
        }
        Ok(Self { c, degree, scale })
    }

    /// `sigma^2 x y`, the linear kernel.
    pub fn linear(sigma: f64) -> Result<Self> {
        Self::new(0.0, 1, sigma)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn kernel(&self, x: f64, y: f64) -> f64 {
        self.scale * self.scale * libm::pow(x * y + self.c, self.degree as f64)
    }
}

/// Later layer kernel `sigma^2 (xy)^degree`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerKernel {
    sigma: f64,
    degree: u32,
}

impl LayerKernel {
    pub fn new(sigma: f64, degree: u32) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(domain("layer sigma must be finite and > 0"));
        }
        if degree < 1 {
            return Err(domain("layer degree must be >= 1"));
        }
        Ok(Self { sigma, degree })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// How composition exponents are formed from the layer degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentPolicy {
    /// `c_i = ∏_{j>i} d_j`, what literal composition produces.
    #[default]
    Multiplicative,
    /// `c_i = Σ_{j>i} d_j` (for `i < l`), the sum form stated with the
    /// approximation theorem. Kept for comparison.
    PaperAdditive,
}

impl ExponentPolicy {
    pub fn name(self) -> &'static str {
        match self {
            ExponentPolicy::Multiplicative => "multiplicative",
            ExponentPolicy::PaperAdditive => "paper_additive",
        }
    }
}

impl core::str::FromStr for ExponentPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multiplicative" => Ok(ExponentPolicy::Multiplicative),
            "paper_additive" => Ok(ExponentPolicy::PaperAdditive),
            other => Err(domain(alloc::format!("unknown exponent policy `{other}`"))),
        }
    }
}

/// A DGP `g_l ∘ … ∘ g_1` with its composition exponents `c_1..c_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct DgpSpec {
    first: FirstLayerKernel,
    layers: Vec<LayerKernel>,
    policy: ExponentPolicy,
    exponents: Vec<u64>,
}

impl DgpSpec {
    /// Fails with [`Error::ExponentOverflow`] when an exponent exceeds `u64`.
    pub fn new(first: FirstLayerKernel, layers: Vec<LayerKernel>, policy: ExponentPolicy) -> Result<Self> {
        let exponents = compute_exponents(&layers, policy)?;
        Ok(Self { first, layers, policy, exponents })
    }

    /// `depth` layers all with kernel `sigma^2 xy` (first layer scale `sigma`).
    pub fn linear(depth: usize, sigma: f64) -> Result<Self> {
        if depth < 1 {
            return Err(domain("depth must be >= 1"));
        }
        let layers = (1..depth).map(|_| LayerKernel::new(sigma, 1)).collect::<Result<Vec<_>>>()?;
        Self::new(FirstLayerKernel::linear(sigma)?, layers, ExponentPolicy::Multiplicative)
    }

    pub fn first(&self) -> &FirstLayerKernel {
        &self.first
    }

    /// Layers `2..=l`.
    pub fn layers(&self) -> &[LayerKernel] {
        &self.layers
    }

    pub fn policy(&self) -> ExponentPolicy {
        self.policy
    }

    /// Total depth `l`.
    pub fn depth(&self) -> usize {
        1 + self.layers.len()
    }

    /// `(c_1, ..., c_l)`.
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn with_policy(&self, policy: ExponentPolicy) -> Result<Self> {
        Self::new(self.first, self.layers.clone(), policy)
    }
}

fn compute_exponents(layers: &[LayerKernel], policy: ExponentPolicy) -> Result<Vec<u64>> {
    let depth = layers.len() + 1;
    let mut exps = alloc::vec![0u64; depth];
    exps[depth - 1] = 1;
    // layers[k] is layer k + 2, i.e. exps index k + 1.
    let mut acc: u64 = match policy {
        ExponentPolicy::Multiplicative => 1,
        ExponentPolicy::PaperAdditive => 0,
    };
    for i in (0..depth - 1).rev() {
        let d = layers[i].degree as u64;
        acc = match policy {
            ExponentPolicy::Multiplicative => acc.checked_mul(d),
            ExponentPolicy::PaperAdditive => acc.checked_add(d),
        }
        .ok_or(Error::ExponentOverflow)?;
        exps[i] = acc;
    }
    Ok(exps)
}

/// `(c_1, ..., c_l)` of `spec` under its exponent policy.
pub fn composition_exponents(spec: &DgpSpec) -> Vec<u64> {
    spec.exponents.clone()
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `scale * (sqrt(C(d, i)) x^{d-i} c^{i/2})_{i=0..=d}`.
pub fn feature_map(first: &FirstLayerKernel, x: f64) -> Vec<f64> {
    let d = first.degree;
    let sqrt_c = libm::sqrt(first.c);
    (0..=d)
        .map(|i| first.scale * libm::sqrt(binomial(d, i)) * libm::pow(x, (d - i) as f64) * libm::pow(sqrt_c, i as f64))
        .collect()
}

/// `g_1(x) = <z, phi(x)>`.
pub fn eval_first_layer(first: &FirstLayerKernel, z: &[f64], x: f64) -> Result<f64> {
    let expected = first.degree as usize + 1;
    if z.len() != expected {
        return Err(Error::LengthMismatch { expected, got: z.len() });
    }
    Ok(feature_map(first, x).iter().zip(z).map(|(p, z)| p * z).sum())
}

/// Raw draws behind one DGP sample path.
#[derive(Debug, Clone, PartialEq)]
pub struct DgpPath {
    /// First-layer coefficients, `N(0, 1)`.
    pub z: Vec<f64>,
    /// Draws `Y_2..Y_l`, `Y_i ~ N(0, sigma_i^2)`.
    pub y: Vec<f64>,
}

pub fn sample_path<R: Rng + ?Sized>(spec: &DgpSpec, rng: &mut R) -> DgpPath {
    let z = (0..=spec.first.degree).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let y = spec.layers.iter().map(|l| l.sigma * rng.sample::<f64, _>(StandardNormal)).collect();
    DgpPath { z, y }
}

fn check_path(spec: &DgpSpec, path: &DgpPath) -> Result<()> {
    if path.y.len() != spec.layers.len() {
        return Err(Error::LengthMismatch { expected: spec.layers.len(), got: path.y.len() });
    }
    let expected = spec.first.degree as usize + 1;
    if path.z.len() != expected {
        return Err(Error::LengthMismatch { expected, got: path.z.len() });
    }
    Ok(())
}

/// The DGP value as the flattened product `∏ Y_i^{c_i} · g_1(x)^{c_1}`.
pub fn eval_path_product(spec: &DgpSpec, path: &DgpPath, x: f64) -> Result<SignedLog> {
    check_path(spec, path)?;
    let g1 = SignedLog::from_real(eval_first_layer(&spec.first, &path.z, x)?);
    let mut sign = g1.sign().pow(spec.exponents[0]);
    let mut log_mag = spec.exponents[0] as f64 * g1.log_mag();
    for (&y, &c) in path.y.iter().zip(&spec.exponents[1..]) {
        sign = sign * Sign::of(y).pow(c);
        log_mag += c as f64 * libm::log(y.abs());
    }
    Ok(SignedLog::new(sign, log_mag))
}

/// Literal composition `v <- g_1(x)`, then `v <- Y_i v^{d_i}` layer by layer.
pub fn eval_path_recursive(spec: &DgpSpec, path: &DgpPath, x: f64) -> Result<SignedLog> {
    check_path(spec, path)?;
    let mut v = SignedLog::from_real(eval_first_layer(&spec.first, &path.z, x)?);
    for (layer, &y) in spec.layers.iter().zip(&path.y) {
        v = SignedLog::from_real(y) * v.powu(layer.degree as u64);
    }
    Ok(v)
}

/// `n` independent DGP values at `x` following the chunked substream contract.
pub fn sample_values<E: Executor + ?Sized>(exec: &E, spec: &DgpSpec, x: f64, seed: u64, n: usize) -> Vec<SignedLog> {
    rng::sample_batch(exec, seed, n, |r| {
        eval_path_product(spec, &sample_path(spec, r), x).expect("sampled path matches its spec")
    })
}

/// One path evaluated on every point of `xs`.
pub fn sample_path_on_grid<R: Rng + ?Sized>(spec: &DgpSpec, xs: &[f64], rng: &mut R) -> Vec<SignedLog> {
    let path = sample_path(spec, rng);
    xs.iter().map(|&x| eval_path_product(spec, &path, x).expect("sampled path matches its spec")).collect()
}
