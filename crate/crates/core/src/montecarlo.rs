//! Empirical CDFs, grid sup-distances with DKW slack, probability estimates,
//! and the data behind the product and DGP figures.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::dgp::{sample_path_on_grid, DgpSpec, ExponentPolicy, FirstLayerKernel, LayerKernel};
use crate::error::{Error, Result};
use crate::logmoments::{self, VAR_LOG_ABS};
use crate::products::{self, ProductConfig};
use crate::rng::{self, derive_seed, substream, Executor};
use crate::signed::SignedLog;
use crate::specfun::normal_cdf;

/// Confidence parameter of the DKW slack.
pub const DKW_DELTA: f64 = 0.001;
/// Smallest sample accepted by the estimators.
pub const MIN_SAMPLES: usize = 1000;
/// Default grid size for sup-distances.
pub const DEFAULT_GRID: usize = 512;
/// Default figure sample size.
pub const DEFAULT_FIGURE_SAMPLES: usize = 1_000_000;

fn require(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::InsufficientSamples { needed: MIN_SAMPLES, got: n });
    }
    Ok(())
}

fn sort_values(v: &mut [SignedLog]) {
    v.sort_unstable_by(|a, b| a.cmp_value(b));
}

/// Right-continuous empirical CDF over [`SignedLog`] values.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<SignedLog>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<SignedLog>) -> Self {
        sort_values(&mut samples);
        EmpiricalCdf { sorted: samples }
    }

    pub fn from_reals(samples: &[f64]) -> Self {
        Self::new(samples.iter().map(|&x| SignedLog::from_real(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[SignedLog] {
        &self.sorted
    }

    /// Number of samples `<= t`.
    pub fn count_le(&self, t: &SignedLog) -> usize {
        self.sorted.partition_point(|v| v.le_value(t))
    }

    /// `#{x_i <= t} / n`.
    pub fn eval(&self, t: &SignedLog) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.count_le(t) as f64 / self.sorted.len() as f64
    }

    /// Lower empirical quantile, `p` clamped to `[0, 1]`.
    pub fn quantile(&self, p: f64) -> SignedLog {
        let n = self.sorted.len();
        let i = (p.clamp(0.0, 1.0) * (n - 1) as f64) as usize;
        self.sorted[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// Grid sup-distance between two CDFs, compared with `bound + slack`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsReport {
    pub distance: f64,
    pub bound: f64,
    pub slack: f64,
    pub n_a: usize,
    /// `0` for a one-sample comparison.
    pub n_b: usize,
    pub grid_points: usize,
    pub verdict: Verdict,
}

impl KsReport {
    fn new(distance: f64, bound: f64, slack: f64, n_a: usize, n_b: usize, grid_points: usize) -> Self {
        let verdict = if distance <= bound + slack { Verdict::Pass } else { Verdict::Fail };
        KsReport { distance, bound, slack, n_a, n_b, grid_points, verdict }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// `sqrt(log(2/delta) / (2n))`.
pub fn dkw_slack(n: usize) -> f64 {
    libm::sqrt(libm::log(2.0 / DKW_DELTA) / (2.0 * n as f64))
}

/// Pooled-sample quantiles of two sorted samples, found by a merge walk.
fn pooled_grid(a: &[SignedLog], b: &[SignedLog], grid: usize) -> Vec<SignedLog> {
    let total = a.len() + b.len();
    let mut targets = (0..grid).map(|k| ((2 * k + 1) * total) / (2 * grid)).peekable();
    let mut out = Vec::with_capacity(grid);
    let (mut i, mut j) = (0, 0);
    for rank in 0..total {
        let take_a = j == b.len() || (i < a.len() && a[i].cmp_value(&b[j]) != Ordering::Greater);
        let v = if take_a {
            i += 1;
            a[i - 1]
        } else {
            j += 1;
            b[j - 1]
        };
        while targets.peek() == Some(&rank) {
            targets.next();
            out.push(v);
        }
    }
    out.dedup_by(|x, y| x.cmp_value(y) == Ordering::Equal);
    out
}

/// Sup of `|F_a - F_b|` over `grid` pooled quantiles; passes iff it is within
/// `bound` plus the two-sample DKW slack.
pub fn ks_two_sample(a: &[SignedLog], b: &[SignedLog], grid: usize, bound: f64) -> Result<KsReport> {
    require(a.len())?;
    require(b.len())?;
    let fa = EmpiricalCdf::new(a.to_vec());
    let fb = EmpiricalCdf::new(b.to_vec());
    Ok(ks_two_sample_cdfs(&fa, &fb, grid, bound))
}

/// [`ks_two_sample`] on already-built CDFs.
pub fn ks_two_sample_cdfs(fa: &EmpiricalCdf, fb: &EmpiricalCdf, grid: usize, bound: f64) -> KsReport {
    let points = pooled_grid(fa.sorted(), fb.sorted(), grid.max(1));
    let distance = points.iter().map(|t| (fa.eval(t) - fb.eval(t)).abs()).fold(0.0, f64::max);
    let slack = dkw_slack(fa.len()) + dkw_slack(fb.len());
    KsReport::new(distance, bound, slack, fa.len(), fb.len(), points.len())
}

/// Sup of `|F_a - cdf|` over `grid` sample quantiles.
pub fn ks_one_sample<F: Fn(&SignedLog) -> f64>(a: &[SignedLog], cdf: F, grid: usize, bound: f64) -> Result<KsReport> {
    require(a.len())?;
    let fa = EmpiricalCdf::new(a.to_vec());
    let grid = grid.max(1);
    let n = fa.len();
    let mut points: Vec<SignedLog> = (0..grid).map(|k| fa.sorted()[((2 * k + 1) * n) / (2 * grid)]).collect();
    points.dedup_by(|x, y| x.cmp_value(y) == Ordering::Equal);
    let distance = points.iter().map(|t| (fa.eval(t) - cdf(t)).abs()).fold(0.0, f64::max);
    Ok(KsReport::new(distance, bound, dkw_slack(n), n, 0, points.len()))
}

/// Fraction of samples satisfying `event` and its binomial standard error.
pub fn prob_estimate<T, P: Fn(&T) -> bool>(samples: &[T], event: P) -> Result<(f64, f64)> {
    require(samples.len())?;
    let n = samples.len() as f64;
    let p = samples.iter().filter(|s| event(s)).count() as f64 / n;
    Ok((p, libm::sqrt(p * (1.0 - p) / n)))
}

/// The reproduced figure panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    F1a,
    F1b,
    F2a,
    F2b,
    F3a,
    F3b,
    F4a,
    F4b,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::F1a,
        FigureId::F1b,
        FigureId::F2a,
        FigureId::F2b,
        FigureId::F3a,
        FigureId::F3b,
        FigureId::F4a,
        FigureId::F4b,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::F1a => "1a",
            FigureId::F1b => "1b",
            FigureId::F2a => "2a",
            FigureId::F2b => "2b",
            FigureId::F3a => "3a",
            FigureId::F3b => "3b",
            FigureId::F4a => "4a",
            FigureId::F4b => "4b",
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Real(Vec<f64>),
    Signed(Vec<SignedLog>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Real(v) => v.len(),
            ColumnData::Signed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

fn real(name: impl Into<String>, v: Vec<f64>) -> Column {
    Column { name: name.into(), data: ColumnData::Real(v) }
}

fn signed(name: impl Into<String>, v: Vec<SignedLog>) -> Column {
    Column { name: name.into(), data: ColumnData::Signed(v) }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureMeta {
    pub seed: u64,
    /// Monte Carlo samples per series (paths for the DGP panels).
    pub n: usize,
    pub params: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub id: FigureId,
    pub columns: Vec<Column>,
    pub meta: FigureMeta,
}

impl FigureData {
    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn real(&self, name: &str) -> Option<&[f64]> {
        match &self.column(name)?.data {
            ColumnData::Real(v) => Some(v),
            ColumnData::Signed(_) => None,
        }
    }

    pub fn signed(&self, name: &str) -> Option<&[SignedLog]> {
        match &self.column(name)?.data {
            ColumnData::Signed(v) => Some(v),
            ColumnData::Real(_) => None,
        }
    }

    /// Number of rows; every column has this length.
    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.data.len())
    }
}

/// Optional settings for [`figure_data`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FigureOverrides {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

/// Deepest product in the depth-indexed panels.
pub const MAX_DEPTH: usize = 30;
pub const HIST_BINS: usize = 200;
pub const FIG4_PATHS: usize = 5;
pub const FIG4_GRID: usize = 401;

pub fn figure_data<E: Executor + ?Sized>(id: FigureId, overrides: FigureOverrides, exec: &E) -> Result<FigureData> {
    let seed = overrides.seed.unwrap_or(0);
    let n = overrides.samples.unwrap_or(DEFAULT_FIGURE_SAMPLES);
    let fseed = derive_seed(seed, id.tag());
    let (columns, n_meta, params) = match id {
        FigureId::F1a => {
            require(n)?;
            fig_histograms(exec, fseed, n, 1.0, false)?
        }
        FigureId::F3a => {
            require(n)?;
            fig_histograms(exec, fseed, n, 3.0, true)?
        }
        FigureId::F1b => {
            require(n)?;
            fig_1b(exec, fseed, n)
        }
        FigureId::F2a => {
            require(n)?;
            fig_2(exec, fseed, n, false)?
        }
        FigureId::F2b => {
            require(n)?;
            fig_2(exec, fseed, n, true)?
        }
        FigureId::F3b => {
            require(n)?;
            fig_3b(exec, fseed, n)?
        }
        FigureId::F4a => fig_4(fseed, 1.0)?,
        FigureId::F4b => fig_4(fseed, 2.5)?,
    };
    Ok(FigureData { id, columns, meta: FigureMeta { seed, n: n_meta, params } })
}

type Panel = (Vec<Column>, usize, Vec<(String, String)>);

fn param(k: &str, v: impl fmt::Display) -> (String, String) {
    (k.to_string(), format!("{v}"))
}

const DEPTHS: [u32; 3] = [1, 10, 30];

/// 1a: densities of signed products; 3a: densities of their log-magnitudes.
fn fig_histograms<E: Executor + ?Sized>(exec: &E, seed: u64, n: usize, sigma: f64, log_scale: bool) -> Result<Panel> {
    let mut series = Vec::new();
    for (k, &l) in DEPTHS.iter().enumerate() {
        let cfg = ProductConfig::new(l, sigma, 1)?;
        let draws = products::sample_products(exec, &cfg, derive_seed(seed, k as u64), n);
        let mut v: Vec<f64> = if log_scale {
            draws.iter().map(|d| d.log_mag()).collect()
        } else {
            draws.iter().map(|d| d.to_real()).collect()
        };
        v.sort_unstable_by(f64::total_cmp);
        series.push(v);
    }
    let q = |v: &[f64], p: f64| v[(p * (v.len() - 1) as f64) as usize];
    let (lo, hi) = if log_scale {
        let lo = series.iter().map(|v| q(v, 0.005)).fold(f64::INFINITY, f64::min);
        let hi = series.iter().map(|v| q(v, 0.995)).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    } else {
        let r = q(&series[0], 0.005).abs().max(q(&series[0], 0.995).abs());
        (-r, r)
    };
    let width = (hi - lo) / HIST_BINS as f64;
    let edges: Vec<f64> = (0..=HIST_BINS).map(|i| lo + i as f64 * width).collect();
    let mut cols = vec![
        real("bin_lo", edges[..HIST_BINS].to_vec()),
        real("bin_hi", edges[1..].to_vec()),
        real("bin_center", (0..HIST_BINS).map(|i| 0.5 * (edges[i] + edges[i + 1])).collect()),
    ];
    for (v, &l) in series.iter().zip(&DEPTHS) {
        let mut counts = vec![0u64; HIST_BINS];
        for &x in v {
            if x >= lo && x < hi {
                let b = (((x - lo) / width) as usize).min(HIST_BINS - 1);
                counts[b] += 1;
            }
        }
        let dens = counts.iter().map(|&c| c as f64 / (n as f64 * width)).collect();
        cols.push(real(format!("density_l{l}"), dens));
    }
    let variable = if log_scale { "log|prod X_i|" } else { "prod X_i" };
    let params = vec![
        param("sigma", sigma),
        param("layers", "1,10,30"),
        param("bins", HIST_BINS),
        param("variable", variable),
        param("range", format!("[{lo}, {hi}]")),
    ];
    Ok((cols, n, params))
}

/// Per-depth event counts for `l = 1..=MAX_DEPTH` from nested partial sums of
/// `log|X_i|`; `event(l, Σ_{i<=l} log|X_i|)` returns `K` indicators.
fn nested_counts<E, F, const K: usize>(exec: &E, seed: u64, n: usize, sigma: f64, event: F) -> Vec<[u64; K]>
where
    E: Executor + ?Sized,
    F: Fn(usize, f64) -> [bool; K] + Sync + Send,
{
    let ln_sigma = libm::log(sigma);
    let per_chunk = exec.map_chunks(rng::chunk_count(n), |c| {
        let mut r = substream(seed, c as u64);
        let mut counts = vec![[0u64; K]; MAX_DEPTH];
        for _ in 0..rng::chunk_len(n, c) {
            let mut s = 0.0;
            for (l, row) in counts.iter_mut().enumerate() {
                let z: f64 = r.sample(StandardNormal);
                s += ln_sigma + libm::log(z.abs());
                for (cnt, hit) in row.iter_mut().zip(event(l + 1, s)) {
                    *cnt += hit as u64;
                }
            }
        }
        counts
    });
    let mut total = vec![[0u64; K]; MAX_DEPTH];
    for chunk in per_chunk {
        for (t, c) in total.iter_mut().zip(chunk) {
            for k in 0..K {
                t[k] += c[k];
            }
        }
    }
    total
}

fn depth_column() -> Column {
    real("layers", (1..=MAX_DEPTH).map(|l| l as f64).collect())
}

fn se(p: f64, n: usize) -> f64 {
    libm::sqrt(p * (1.0 - p) / n as f64)
}

/// `Pr(e^{Z} <= 1/2)` for `Z ~ N(l E log|X|, l pi^2/8)`.
fn surrogate_le_half(l: usize, sigma: f64) -> f64 {
    let mu = l as f64 * logmoments::mean_unchecked(sigma);
    normal_cdf((-core::f64::consts::LN_2 - mu) / libm::sqrt(l as f64 * VAR_LOG_ABS))
}

const FIG1B_SIGMAS: [f64; 3] = [2.0, 2.5, 3.0];

fn fig_1b<E: Executor + ?Sized>(exec: &E, seed: u64, n: usize) -> Panel {
    let threshold = -core::f64::consts::LN_2;
    let mut cols = vec![depth_column()];
    for (k, &sigma) in FIG1B_SIGMAS.iter().enumerate() {
        let counts = nested_counts(exec, derive_seed(seed, k as u64), n, sigma, |_, s| [s <= threshold]);
        let p: Vec<f64> = counts.iter().map(|c| c[0] as f64 / n as f64).collect();
        cols.push(real(format!("se_sigma{sigma}"), p.iter().map(|&p| se(p, n)).collect()));
        cols.push(real(
            format!("surrogate_sigma{sigma}"),
            (1..=MAX_DEPTH).map(|l| surrogate_le_half(l, sigma)).collect(),
        ));
        cols.push(real(format!("p_sigma{sigma}"), p));
    }
    let params = vec![param("sigmas", "2,2.5,3"), param("event", "prod |X_i| <= 1/2")];
    (cols, n, params)
}

fn bound_column(sigma: f64) -> Result<Vec<f64>> {
    (1..=MAX_DEPTH).map(|l| products::be_bound_iid(&ProductConfig::new(l as u32, sigma, 1)?)).collect()
}

/// 2a/2b: `Pr(scaled product > 1/2)` at `sigma = 1`. The centred scaling
/// `exp(l^{-1/2} Σ (log|X_i| - E log|X_i|))` has the `l`-free limit
/// `e^Z`, `Z ~ N(0, pi^2/8)`; the uncentred `∏|X_i|^{1/sqrt(l)}` is compared
/// with `N(sqrt(l) E log|X|, pi^2/8)`.
fn fig_2<E: Executor + ?Sized>(exec: &E, seed: u64, n: usize, log10: bool) -> Result<Panel> {
    let sigma = 1.0;
    let mu = logmoments::mean_unchecked(sigma);
    let half = -core::f64::consts::LN_2;
    let counts = nested_counts(exec, seed, n, sigma, |l, s| {
        let rl = libm::sqrt(l as f64);
        [(s - l as f64 * mu) / rl > half, s / rl > half]
    });
    let sd = libm::sqrt(VAR_LOG_ABS);
    let p_c: Vec<f64> = counts.iter().map(|c| c[0] as f64 / n as f64).collect();
    let p_u: Vec<f64> = counts.iter().map(|c| c[1] as f64 / n as f64).collect();
    let s_c: Vec<f64> = (1..=MAX_DEPTH).map(|_| 1.0 - normal_cdf(half / sd)).collect();
    let s_u: Vec<f64> = (1..=MAX_DEPTH).map(|l| 1.0 - normal_cdf((half - libm::sqrt(l as f64) * mu) / sd)).collect();
    let mut cols = vec![depth_column()];
    if log10 {
        let lg = |v: &[f64]| v.iter().map(|&p| libm::log10(p)).collect::<Vec<_>>();
        cols.push(real("log10_empirical", lg(&p_c)));
        cols.push(real("log10_surrogate", lg(&s_c)));
        cols.push(real("log10_empirical_uncentred", lg(&p_u)));
        cols.push(real("log10_surrogate_uncentred", lg(&s_u)));
    } else {
        let bound = bound_column(sigma)?;
        cols.push(real("empirical_se", p_c.iter().map(|&p| se(p, n)).collect()));
        cols.push(real("band_lo", s_c.iter().zip(&bound).map(|(s, b)| s - b).collect()));
        cols.push(real("band_hi", s_c.iter().zip(&bound).map(|(s, b)| s + b).collect()));
        cols.push(real("empirical", p_c));
        cols.push(real("surrogate", s_c));
        cols.push(real("bound", bound));
        cols.push(real("empirical_uncentred", p_u));
        cols.push(real("surrogate_uncentred", s_u));
    }
    let params = vec![param("sigma", sigma), param("event", "scaled product > 1/2")];
    Ok((cols, n, params))
}

fn fig_3b<E: Executor + ?Sized>(exec: &E, seed: u64, n: usize) -> Result<Panel> {
    let sigma = 3.0;
    let half = -core::f64::consts::LN_2;
    let counts = nested_counts(exec, seed, n, sigma, |_, s| [s > half]);
    let p: Vec<f64> = counts.iter().map(|c| c[0] as f64 / n as f64).collect();
    let cols = vec![
        depth_column(),
        real("empirical_se", p.iter().map(|&p| se(p, n)).collect()),
        real("surrogate", (1..=MAX_DEPTH).map(|l| 1.0 - surrogate_le_half(l, sigma)).collect()),
        real("bound", bound_column(sigma)?),
        real("empirical", p),
    ];
    let params = vec![param("sigma", sigma), param("event", "prod |X_i| > 1/2")];
    Ok((cols, n, params))
}

/// Five paths of the depth-30 linear-kernel DGP on `[-2, 2]`.
fn fig_4(seed: u64, sigma: f64) -> Result<Panel> {
    let layers = vec![LayerKernel::new(sigma, 1)?; MAX_DEPTH - 1];
    let spec = DgpSpec::new(FirstLayerKernel::linear(sigma)?, layers, ExponentPolicy::Multiplicative)?;
    let xs: Vec<f64> = (0..FIG4_GRID).map(|i| -2.0 + 4.0 * i as f64 / (FIG4_GRID - 1) as f64).collect();
    let mut cols = vec![real("x", xs.clone())];
    for k in 0..FIG4_PATHS {
        let vals = sample_path_on_grid(&spec, &xs, &mut substream(seed, k as u64));
        cols.push(real(format!("path{k}_value"), vals.iter().map(|v| v.to_real_clipped()).collect()));
        cols.push(signed(format!("path{k}"), vals));
    }
    let params = vec![param("sigma", sigma), param("layers", MAX_DEPTH), param("kernel", "linear")];
    Ok((cols, FIG4_PATHS, params))
}
