//! The log-normal surrogate `S e^Y g_1(x)^{c_1}` for a polynomial-kernel DGP.
//!
//! The DGP value is `g_1(x)^{c_1} ∏_{i>=2} Y_i^{c_i}`. Its `Y`-part splits into
//! a fair sign `S` and `exp(Σ c_i log|Y_i|)`, and the non-iid Berry-Esseen
//! theorem compares the exponent with `Y ~ N(Σ c_i E log|Y_i|, Σ c_i^2 pi^2/8)`.
//! Multiplying both sides by the independent `g_1(x)^{c_1}` does not increase
//! the sup-distance (condition on `g_1`), so the bound holds uniformly in `x`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::dgp::{eval_first_layer, DgpSpec, ExponentPolicy, FirstLayerKernel, LayerKernel};
use crate::error::{domain, Error, Result};
use crate::logmoments::{self, sigma_log_cubed, VAR_LOG_ABS};
use crate::products::GaussianLaw;
use crate::rng::{self, Executor};
use crate::signed::{Sign, SignedLog};
use crate::specfun::{SeriesTruncation, EULER_GAMMA};

/// Parameters of `S e^Y g_1(x)^{c_1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateLaw {
    /// `Σ_{i>=2} c_i E log|Y_i|`
    pub mu_y: f64,
    /// `Σ_{i>=2} c_i^2 Var log|Y_i|`
    pub var_y: f64,
    pub c1: u64,
    pub first: FirstLayerKernel,
    /// `(c_2, ..., c_l)`
    pub exponents: Vec<u64>,
}

impl SurrogateLaw {
    pub fn y_law(&self) -> GaussianLaw {
        GaussianLaw { mu: self.mu_y, var: self.var_y }
    }

    /// One draw of `S e^Y g_1(x)^{c_1}` with a fresh first layer.
    pub fn sample<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> SignedLog {
        let s = if rng.random::<bool>() { Sign::Minus } else { Sign::Plus };
        let y = self.y_law().sample(rng);
        let z: Vec<f64> = (0..=self.first.degree()).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let g1 = SignedLog::from_real(eval_first_layer(&self.first, &z, x).expect("z has degree + 1 entries"));
        SignedLog::new(s * g1.sign().pow(self.c1), y + self.c1 as f64 * g1.log_mag())
    }
}

fn require_depth(spec: &DgpSpec) -> Result<()> {
    if spec.depth() < 2 {
        return Err(Error::Depth { needed: 2, got: spec.depth() });
    }
    Ok(())
}

pub fn surrogate_params(spec: &DgpSpec) -> Result<SurrogateLaw> {
    require_depth(spec)?;
    let c = spec.exponents();
    let mut mu_y = 0.0;
    let mut sum_c2 = 0.0;
    for (layer, &ci) in spec.layers().iter().zip(&c[1..]) {
        let ci = ci as f64;
        mu_y += ci * logmoments::mean_unchecked(layer.sigma());
        sum_c2 += ci * ci;
    }
    Ok(SurrogateLaw { mu_y, var_y: VAR_LOG_ABS * sum_c2, c1: c[0], first: *spec.first(), exponents: c[1..].to_vec() })
}

/// How `E|log|Y_i||^3` enters the non-iid bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RhoMode {
    /// The exact third absolute moment (quadrature when `sigma^2 <= 1/2`).
    #[default]
    Moment,
    /// Hölder's upper bound `(E log^4|Y|)^{3/4}`.
    Holder,
}

/// `0.56 Σ rho_i / (Σ var_i)^{3/2}` with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeBound {
    pub value: f64,
    pub sum_var: f64,
    pub sum_rho: f64,
    /// Every `rho_i` came from the closed form.
    pub rho_exact: bool,
}

pub fn be_bound_noniid(spec: &DgpSpec) -> Result<BeBound> {
    be_bound_noniid_with(spec, RhoMode::Moment)
}

pub fn be_bound_noniid_with(spec: &DgpSpec, mode: RhoMode) -> Result<BeBound> {
    require_depth(spec)?;
    let mut sum_var = 0.0;
    let mut sum_rho = 0.0;
    let mut rho_exact = true;
    for (layer, &ci) in spec.layers().iter().zip(&spec.exponents()[1..]) {
        let ci = ci as f64;
        let rho = match mode {
            RhoMode::Moment => {
                let (rho, exact) = logmoments::abs_third_moment(layer.sigma(), SeriesTruncation::default())?;
                rho_exact &= exact;
                rho
            }
            RhoMode::Holder => {
                rho_exact = false;
                logmoments::holder_bound(layer.sigma())?
            }
        };
        sum_var += ci * ci * VAR_LOG_ABS;
        sum_rho += ci * ci * ci * rho;
    }
    let value = 0.56 * sum_rho / (sum_var * libm::sqrt(sum_var));
    Ok(BeBound { value, sum_var, sum_rho, rho_exact })
}

pub fn sample_surrogate<R: Rng + ?Sized>(spec: &DgpSpec, x: f64, rng: &mut R) -> Result<SignedLog> {
    Ok(surrogate_params(spec)?.sample(x, rng))
}

/// `n` surrogate draws at `x` following the chunked substream contract.
pub fn sample_surrogates<E: Executor + ?Sized>(
    exec: &E,
    spec: &DgpSpec,
    x: f64,
    seed: u64,
    n: usize,
) -> Result<Vec<SignedLog>> {
    let law = surrogate_params(spec)?;
    Ok(rng::sample_batch(exec, seed, n, |r| law.sample(x, r)))
}

/// Median of `e^Y`, i.e. `exp(mu_y)`.
pub fn median_dgp_surrogate(spec: &DgpSpec) -> Result<f64> {
    Ok(libm::exp(surrogate_params(spec)?.mu_y))
}

/// `exp((gamma + log 2) / 2)`: `E log|X| = 0` exactly at this `sigma`.
pub fn threshold_sigma() -> f64 {
    libm::exp(0.5 * (EULER_GAMMA + core::f64::consts::LN_2))
}

/// Power sums of an exponent vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSums {
    pub sum_c: f64,
    pub sum_c2: f64,
    pub sum_c3: f64,
}

impl CoefficientSums {
    pub fn of<I: IntoIterator<Item = u64>>(c: I) -> Self {
        let mut s = CoefficientSums { sum_c: 0.0, sum_c2: 0.0, sum_c3: 0.0 };
        for ci in c {
            let ci = ci as f64;
            s.sum_c += ci;
            s.sum_c2 += ci * ci;
            s.sum_c3 += ci * ci * ci;
        }
        s
    }
}

/// Sums over `c_2..c_l` and the surrogate/bound values they imply.
#[derive(Debug, Clone, PartialEq)]
pub struct D2Block {
    pub exponents: Vec<u64>,
    pub sums: CoefficientSums,
    pub mu_y: f64,
    pub var_y: f64,
    pub be_bound: f64,
}

impl D2Block {
    fn new(exponents: Vec<u64>, mean: f64, rho: f64) -> Self {
        let sums = CoefficientSums::of(exponents.iter().copied());
        let be_bound = 0.56 * rho * sums.sum_c3 / (sigma_log_cubed() * libm::pow(sums.sum_c2, 1.5));
        D2Block { exponents, sums, mu_y: mean * sums.sum_c, var_y: VAR_LOG_ABS * sums.sum_c2, be_bound }
    }
}

/// The published closed forms for `d_i = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct D2ClosedForm {
    /// `l(l-1) - 1`
    pub sum_c: f64,
    /// `2l(l-1)(2l-1)/3 - 3`
    pub sum_c2: f64,
    /// `2l^2(l-1)^2 - 7`
    pub sum_c3: f64,
    pub mu_y: f64,
    pub var_y: f64,
    /// `0.56 rho/sigma_log^3 (2l^2(l-1)^2-7) 3^{3/2} / (2l(l-1)(2l-1)-9)^{3/2}`
    pub be_bound: f64,
    /// `3 l^{-1/2} rho / sigma_log^3`
    pub be_upper: f64,
}

/// Direct sums for the `d_i = 2` DGP set beside the published closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct D2Report {
    pub ell: usize,
    pub sigma: f64,
    pub policy: ExponentPolicy,
    pub rho: f64,
    /// The full composition vector `(c_1, ..., c_l)` under `policy`.
    pub full_exponents: Vec<u64>,
    pub full_sums: CoefficientSums,
    /// `c_2..c_l` under `policy`.
    pub direct: D2Block,
    /// `c_j = 2(l-j)` for `2 <= j < l`, `c_l = 1`.
    pub stated_vector: D2Block,
    pub paper_closed_form: D2ClosedForm,
    /// Human-readable disagreements beyond `D2_REL_TOL`.
    pub flags: Vec<String>,
}

pub const D2_REL_TOL: f64 = 1e-9;

fn disagrees(a: f64, b: f64) -> bool {
    (a - b).abs() > D2_REL_TOL * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn d2_report(ell: usize, sigma: f64, policy: ExponentPolicy) -> Result<D2Report> {
    if ell < 3 {
        return Err(domain("d2_report needs ell >= 3"));
    }
    let layers = (1..ell).map(|_| LayerKernel::new(sigma, 2)).collect::<Result<Vec<_>>>()?;
    let spec = DgpSpec::new(FirstLayerKernel::linear(1.0)?, layers, policy)?;
    let mean = logmoments::mean_log_abs(sigma)?;
    let (rho, _) = logmoments::abs_third_moment(sigma, SeriesTruncation::default())?;

    let full_exponents = spec.exponents().to_vec();
    let full_sums = CoefficientSums::of(full_exponents.iter().copied());
    let direct = D2Block::new(full_exponents[1..].to_vec(), mean, rho);
    let stated: Vec<u64> = (2..ell).map(|j| 2 * (ell - j) as u64).chain(core::iter::once(1)).collect();
    let stated_vector = D2Block::new(stated, mean, rho);

    let l = ell as f64;
    let s3 = sigma_log_cubed();
    let closed_c = l * (l - 1.0) - 1.0;
    let closed_c2 = 2.0 * l * (l - 1.0) * (2.0 * l - 1.0) / 3.0 - 3.0;
    let closed_c3 = 2.0 * l * l * (l - 1.0) * (l - 1.0) - 7.0;
    let paper_closed_form = D2ClosedForm {
        sum_c: closed_c,
        sum_c2: closed_c2,
        sum_c3: closed_c3,
        mu_y: closed_c * mean,
        var_y: VAR_LOG_ABS * closed_c2,
        be_bound: 0.56 * rho / s3 * closed_c3 * libm::pow(3.0, 1.5)
            / libm::pow(2.0 * l * (l - 1.0) * (2.0 * l - 1.0) - 9.0, 1.5),
        be_upper: 3.0 / libm::sqrt(l) * rho / s3,
    };

    let mut flags = Vec::new();
    let closed =
        [("sum_c", closed_c), ("sum_c2", closed_c2), ("sum_c3", closed_c3), ("be_bound", paper_closed_form.be_bound)];
    for (label, block) in [("full", None), ("direct", Some(&direct)), ("stated_vector", Some(&stated_vector))] {
        let sums = block.map_or(full_sums, |b| b.sums);
        let values = [sums.sum_c, sums.sum_c2, sums.sum_c3, block.map_or(f64::NAN, |b| b.be_bound)];
        for ((name, c), v) in closed.iter().zip(values) {
            if v.is_nan() {
                continue;
            }
            if disagrees(v, *c) {
                flags.push(format!("{label}.{name} = {v} but closed form gives {c}"));
            }
        }
    }
    if paper_closed_form.be_bound > paper_closed_form.be_upper * (1.0 + D2_REL_TOL) {
        flags.push(format!(
            "closed-form bound {} exceeds its stated upper bound {}",
            paper_closed_form.be_bound, paper_closed_form.be_upper
        ));
    }

    Ok(D2Report { ell, sigma, policy, rho, full_exponents, full_sums, direct, stated_vector, paper_closed_form, flags })
}
