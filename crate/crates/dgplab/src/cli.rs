//! The `dgplab` command line.
//!
//! Exit codes: 0 success, 1 I/O or numerical failure, 2 usage error, 3 domain
//! error (including out-of-range flag values), 4 a compare run whose sup-distance
//! exceeded bound plus slack.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dgplab_core::dgp::{self, DgpSpec, ExponentPolicy};
use dgplab_core::logmoments::{self, Method};
use dgplab_core::montecarlo::{self, Column, ColumnData, FigureId, FigureOverrides, KsReport};
use dgplab_core::products::{self, ProductConfig};
use dgplab_core::rng::{derive_seed, substream};
use dgplab_core::specfun::SeriesTruncation;
use dgplab_core::surrogate::{self, CoefficientSums, D2Block};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exec::RayonExecutor;
use crate::output::{self, num, Format};
use crate::specfile::{load_spec, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dgplab_core::Error),
    #[error("{0}")]
    Range(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Thread(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(dgplab_core::Error::Quadrature { .. }) => EXIT_FAILURE,
            CliError::Core(_) | CliError::Range(_) => EXIT_DOMAIN,
            CliError::Spec(SpecError::Json(_)) => EXIT_USAGE,
            CliError::Spec(SpecError::Invalid(_)) => EXIT_DOMAIN,
            CliError::Spec(SpecError::Io { .. }) | CliError::Io(_) | CliError::Thread(_) => EXIT_FAILURE,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "dgplab", version, about = "Gaussian products, deep-GP priors and their log-normal surrogates")]
pub struct Cli {
    /// Cap on worker threads; results do not depend on it.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub threads: Option<i64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments of log|X| for X ~ N(0, sigma^2).
    Moments(MomentsArgs),
    /// Berry-Esseen bound for a product of iid Gaussians.
    BeBound(BeBoundArgs),
    /// Sample products of Gaussians or compare them with the surrogate.
    Product {
        #[command(subcommand)]
        action: ProductAction,
    },
    /// Sample a DGP from a spec file or compare it with its surrogate.
    Dgp {
        #[command(subcommand)]
        action: DgpAction,
    },
    /// Surrogate parameters of a DGP spec.
    Surrogate {
        #[command(subcommand)]
        action: SurrogateAction,
    },
    /// Direct sums for the degree-2 DGP beside the closed forms.
    D2Report(D2Args),
    /// The sigma where E log|X| = 0.
    Threshold(OutArgs),
    /// Data behind one figure panel.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Closed,
    Quadrature,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value = "closed")]
    pub method: MethodArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct BeBoundArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub layers: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
    pub alpha: i64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    #[arg(long, env = "DGPLAB_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub layers: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
    pub alpha: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub samples: i64,
    #[command(flatten)]
    pub seed: SeedArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Subcommand)]
pub enum ProductAction {
    /// Draw products (or surrogate draws with --surrogate).
    Sample {
        #[command(flatten)]
        args: ProductArgs,
        #[arg(long)]
        surrogate: bool,
    },
    /// Two-sample sup-distance between products and surrogate draws.
    Compare {
        #[command(flatten)]
        args: ProductArgs,
        #[arg(long, allow_negative_numbers = true, default_value_t = montecarlo::DEFAULT_GRID as i64)]
        grid: i64,
    },
}

/// `A:B:STEP`, inclusive of `B` when `(B - A) / STEP` is integral within 1e-9.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XGrid {
    pub a: f64,
    pub b: f64,
    pub step: f64,
}

impl FromStr for XGrid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err("expected A:B:STEP".into());
        }
        let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        Ok(XGrid { a: p(parts[0])?, b: p(parts[1])?, step: p(parts[2])? })
    }
}

impl XGrid {
    pub fn points(&self) -> CliResult<Vec<f64>> {
        let XGrid { a, b, step } = *self;
        if !(a.is_finite() && b.is_finite() && step.is_finite()) || step <= 0.0 || b < a {
            return Err(CliError::Range("--x-grid needs finite A <= B and STEP > 0".into()));
        }
        let ratio = (b - a) / step;
        if ratio > 1e7 {
            return Err(CliError::Range("--x-grid has more than 10^7 points".into()));
        }
        let whole = ratio.round();
        let n = if (ratio - whole).abs() <= 1e-9 { whole as usize } else { ratio.floor() as usize };
        Ok((0..=n).map(|i| if (ratio - whole).abs() <= 1e-9 && i == n { b } else { a + i as f64 * step }).collect())
    }
}

#[derive(Debug, Args)]
#[group(id = "xsel", required = true, multiple = false, args = ["x", "x_grid"])]
pub struct DgpArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long = "x-grid", allow_hyphen_values = true)]
    pub x_grid: Option<XGrid>,
    #[command(flatten)]
    pub seed: SeedArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Subcommand)]
pub enum DgpAction {
    /// Independent draws at --x, or whole paths over --x-grid.
    Sample {
        #[command(flatten)]
        args: DgpArgs,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1000)]
        samples: i64,
    },
    /// Sup-distance between DGP and surrogate draws at each x.
    Compare {
        #[command(flatten)]
        args: DgpArgs,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1_000_000)]
        samples: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = montecarlo::DEFAULT_GRID as i64)]
        grid: i64,
    },
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Subcommand)]
pub enum SurrogateAction {
    Params(SpecArgs),
    Median(SpecArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PolicyArg {
    Multiplicative,
    PaperAdditive,
}

impl From<PolicyArg> for ExponentPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Multiplicative => ExponentPolicy::Multiplicative,
            PolicyArg::PaperAdditive => ExponentPolicy::PaperAdditive,
        }
    }
}

#[derive(Debug, Args)]
pub struct D2Args {
    #[arg(long, allow_negative_numbers = true)]
    pub layers: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value = "multiplicative")]
    pub policy: PolicyArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long)]
    pub id: String,
    /// Output directory; receives `figure_<id>.csv` and `figure_<id>.json`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub samples: Option<i64>,
    #[command(flatten)]
    pub seed: SeedArg,
}

fn check_sigma(sigma: f64) -> CliResult<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(CliError::Range(format!("--sigma must be finite and > 0, got {sigma}")))
    }
}

fn check_count(name: &str, v: i64, min: i64, max: i64) -> CliResult<()> {
    if (min..=max).contains(&v) {
        Ok(())
    } else {
        Err(CliError::Range(format!("--{name} must be in {min}..={max}, got {v}")))
    }
}

const MAX_SAMPLES: i64 = 1 << 32;
const MAX_LAYERS: i64 = 1 << 20;
const MAX_THREADS: i64 = 4096;

/// Parses `argv` and runs the command, writing results to `stdout` and
/// diagnostics to `stderr`. Returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let checked = match cli.threads {
        Some(t) if !(1..=MAX_THREADS).contains(&t) => {
            Err(CliError::Range(format!("--threads must be in 1..={MAX_THREADS}, got {t}")))
        }
        _ => Ok(()),
    };
    match checked.and_then(|_| execute(&cli, stdout)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn executor(threads: Option<i64>) -> CliResult<RayonExecutor> {
    match threads {
        None => Ok(RayonExecutor::new()),
        Some(t) => RayonExecutor::with_threads(t as usize).map_err(|e| CliError::Thread(e.to_string())),
    }
}

fn emit(v: &Value, out: &OutArgs, default: Format, stdout: &mut dyn Write) -> CliResult<()> {
    let format = out.format.unwrap_or(default);
    match &out.out {
        Some(path) => {
            let mut f = std::io::BufWriter::new(fs::File::create(path)?);
            output::write_report(v, format, &mut f)?;
            f.flush()?;
        }
        None => output::write_report(v, format, stdout)?,
    }
    Ok(())
}

fn emit_columns(columns: &[Column], meta: Value, out: &OutArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let format = out.format.unwrap_or(Format::Csv);
    let write = |w: &mut dyn Write| -> std::io::Result<()> {
        match format {
            Format::Csv => output::write_columns_csv(columns, w),
            Format::Json => {
                let v = json!({ "columns": output::columns_json(columns), "meta": meta });
                serde_json::to_writer_pretty(&mut *w, &v)?;
                writeln!(w)
            }
        }
    };
    match &out.out {
        Some(path) => {
            let mut f = std::io::BufWriter::new(fs::File::create(path)?);
            write(&mut f)?;
            f.flush()?;
        }
        None => write(stdout)?,
    }
    Ok(())
}

fn ks_json(r: &KsReport) -> Value {
    json!({
        "distance": num(r.distance),
        "bound": num(r.bound),
        "slack": num(r.slack),
        "n_a": r.n_a,
        "n_b": r.n_b,
        "grid_points": r.grid_points,
        "verdict": r.verdict.as_str(),
    })
}

fn sums_json(s: &CoefficientSums) -> Value {
    json!({ "sum_c": num(s.sum_c), "sum_c2": num(s.sum_c2), "sum_c3": num(s.sum_c3) })
}

fn block_json(b: &D2Block) -> Value {
    json!({
        "exponents": b.exponents,
        "sums": sums_json(&b.sums),
        "mu_y": num(b.mu_y),
        "var_y": num(b.var_y),
        "be_bound": num(b.be_bound),
    })
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    match &cli.command {
        Command::Threshold(out) => {
            emit(&json!({ "threshold_sigma": surrogate::threshold_sigma() }), out, Format::Json, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Moments(a) => {
            check_sigma(a.sigma)?;
            let method = match a.method {
                MethodArg::Closed => Method::Closed,
                MethodArg::Quadrature => Method::Quadrature,
            };
            let m = logmoments::moments_with(a.sigma, method)?;
            let v = json!({
                "sigma": num(m.sigma),
                "method": match a.method { MethodArg::Closed => "closed", MethodArg::Quadrature => "quadrature" },
                "mean": num(m.mean),
                "second": num(m.second),
                "variance": num(m.variance),
                "abs_third": num(m.abs_third),
                "abs_third_exact": m.abs_third_exact,
                "fourth": num(m.fourth),
                "holder_bound": num(logmoments::holder_bound(a.sigma)?),
            });
            emit(&v, &a.out, Format::Json, stdout)?;
            Ok(EXIT_OK)
        }
        Command::BeBound(a) => {
            check_sigma(a.sigma)?;
            check_count("layers", a.layers, 1, MAX_LAYERS)?;
            check_count("alpha", a.alpha, 1, u32::MAX as i64)?;
            let cfg = ProductConfig::new(a.layers as u32, a.sigma, a.alpha as u32)?;
            let (rho, exact) = logmoments::abs_third_moment(a.sigma, SeriesTruncation::default())?;
            let v = json!({
                "layers": a.layers,
                "sigma": num(a.sigma),
                "alpha": a.alpha,
                "rho": num(rho),
                "rho_exact": exact,
                "bound": num(products::be_bound_iid(&cfg)?),
            });
            emit(&v, &a.out, Format::Json, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Product { action } => product(cli, action, stdout),
        Command::Dgp { action } => dgp_cmd(cli, action, stdout),
        Command::Surrogate { action } => {
            let (args, median_only) = match action {
                SurrogateAction::Params(a) => (a, false),
                SurrogateAction::Median(a) => (a, true),
            };
            let spec = load_spec(&args.spec)?;
            let law = surrogate::surrogate_params(&spec)?;
            let median = surrogate::median_dgp_surrogate(&spec)?;
            let v = if median_only {
                json!({ "median": num(median), "mu_y": num(law.mu_y) })
            } else {
                let b = surrogate::be_bound_noniid(&spec)?;
                json!({
                    "mu_y": num(law.mu_y),
                    "var_y": num(law.var_y),
                    "c1": law.c1,
                    "exponents": law.exponents,
                    "policy": spec.policy().name(),
                    "first": { "c": num(law.first.c()), "degree": law.first.degree(), "scale": num(law.first.scale()) },
                    "median": num(median),
                    "be_bound": {
                        "value": num(b.value),
                        "sum_var": num(b.sum_var),
                        "sum_rho": num(b.sum_rho),
                        "rho_exact": b.rho_exact,
                    },
                })
            };
            emit(&v, &args.out, Format::Json, stdout)?;
            Ok(EXIT_OK)
        }
        Command::D2Report(a) => {
            check_sigma(a.sigma)?;
            check_count("layers", a.layers, 3, 63)?;
            let r = surrogate::d2_report(a.layers as usize, a.sigma, a.policy.into())?;
            let c = &r.paper_closed_form;
            let v = json!({
                "ell": r.ell,
                "sigma": num(r.sigma),
                "policy": r.policy.name(),
                "rho": num(r.rho),
                "full_vector": { "exponents": r.full_exponents, "sums": sums_json(&r.full_sums) },
                "direct": block_json(&r.direct),
                "stated_vector": block_json(&r.stated_vector),
                "paper_closed_form": {
                    "sums": { "sum_c": num(c.sum_c), "sum_c2": num(c.sum_c2), "sum_c3": num(c.sum_c3) },
                    "mu_y": num(c.mu_y),
                    "var_y": num(c.var_y),
                    "be_bound": num(c.be_bound),
                    "be_upper": num(c.be_upper),
                },
                "flags": r.flags,
            });
            emit(&v, &a.out, Format::Json, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Figure(a) => {
            let id: FigureId = a.id.parse()?;
            if let Some(n) = a.samples {
                check_count("samples", n, montecarlo::MIN_SAMPLES as i64, MAX_SAMPLES)?;
            }
            let exec = executor(cli.threads)?;
            let o = FigureOverrides { samples: a.samples.map(|n| n as usize), seed: Some(a.seed.seed) };
            let fig = montecarlo::figure_data(id, o, &exec)?;
            fs::create_dir_all(&a.out)?;
            let csv = a.out.join(format!("figure_{id}.csv"));
            let jsn = a.out.join(format!("figure_{id}.json"));
            let mut f = std::io::BufWriter::new(fs::File::create(&csv)?);
            output::write_columns_csv(&fig.columns, &mut f)?;
            f.flush()?;
            let mut f = std::io::BufWriter::new(fs::File::create(&jsn)?);
            serde_json::to_writer_pretty(&mut f, &output::figure_json(&fig)).map_err(std::io::Error::from)?;
            writeln!(f)?;
            f.flush()?;
            writeln!(stdout, "{}", csv.display())?;
            writeln!(stdout, "{}", jsn.display())?;
            Ok(EXIT_OK)
        }
    }
}

fn product(cli: &Cli, action: &ProductAction, stdout: &mut dyn Write) -> CliResult<i32> {
    let (a, min_samples) = match action {
        ProductAction::Sample { args, .. } => (args, 1),
        ProductAction::Compare { args, .. } => (args, montecarlo::MIN_SAMPLES as i64),
    };
    check_sigma(a.sigma)?;
    check_count("layers", a.layers, 1, MAX_LAYERS)?;
    check_count("alpha", a.alpha, 1, u32::MAX as i64)?;
    check_count("samples", a.samples, min_samples, MAX_SAMPLES)?;
    if let ProductAction::Compare { grid, .. } = action {
        check_count("grid", *grid, 1, 1 << 20)?;
    }
    let exec = executor(cli.threads)?;
    let cfg = ProductConfig::new(a.layers as u32, a.sigma, a.alpha as u32)?;
    let n = a.samples as usize;
    let seed = a.seed.seed;
    let params = vec![
        ("layers".to_string(), a.layers.to_string()),
        ("sigma".to_string(), a.sigma.to_string()),
        ("alpha".to_string(), a.alpha.to_string()),
    ];
    match action {
        ProductAction::Sample { surrogate, .. } => {
            let draws = if *surrogate {
                products::sample_surrogates(&exec, &cfg, seed, n)
            } else {
                products::sample_products(&exec, &cfg, seed, n)
            };
            let name = if *surrogate { "surrogate" } else { "product" };
            let cols = vec![
                Column {
                    name: format!("{name}_value"),
                    data: ColumnData::Real(draws.iter().map(|d| d.to_real()).collect()),
                },
                Column { name: name.to_string(), data: ColumnData::Signed(draws) },
            ];
            emit_columns(&cols, output::meta_json(seed, n, &params), &a.out, stdout)?;
            Ok(EXIT_OK)
        }
        ProductAction::Compare { grid, .. } => {
            let x = products::sample_products(&exec, &cfg, derive_seed(seed, 1), n);
            let z = products::sample_surrogates(&exec, &cfg, derive_seed(seed, 2), n);
            let bound = products::be_bound_iid(&cfg)?;
            let r = montecarlo::ks_two_sample(&x, &z, *grid as usize, bound)?;
            let mut v = ks_json(&r);
            let m = v.as_object_mut().expect("object");
            m.insert("layers".into(), json!(a.layers));
            m.insert("sigma".into(), num(a.sigma));
            m.insert("alpha".into(), json!(a.alpha));
            m.insert("seed".into(), json!(seed));
            emit(&v, &a.out, Format::Json, stdout)?;
            Ok(if r.passed() { EXIT_OK } else { EXIT_VERIFICATION })
        }
    }
}

fn dgp_cmd(cli: &Cli, action: &DgpAction, stdout: &mut dyn Write) -> CliResult<i32> {
    let (a, samples, min_samples) = match action {
        DgpAction::Sample { args, samples } => (args, *samples, 1),
        DgpAction::Compare { args, samples, grid } => {
            check_count("grid", *grid, 1, 1 << 20)?;
            (args, *samples, montecarlo::MIN_SAMPLES as i64)
        }
    };
    check_count("samples", samples, min_samples, MAX_SAMPLES)?;
    let xs = match (a.x, a.x_grid) {
        (Some(x), _) if x.is_finite() => vec![x],
        (Some(x), _) => return Err(CliError::Range(format!("--x must be finite, got {x}"))),
        (None, Some(g)) => g.points()?,
        (None, None) => unreachable!("clap requires one of --x, --x-grid"),
    };
    let spec = load_spec(&a.spec)?;
    let exec = executor(cli.threads)?;
    let seed = a.seed.seed;
    let n = samples as usize;
    match action {
        DgpAction::Sample { .. } => {
            let params = vec![("depth".to_string(), spec.depth().to_string())];
            let cols = if a.x.is_some() {
                let v = dgp::sample_values(&exec, &spec, xs[0], seed, n);
                vec![
                    Column {
                        name: "dgp_value".into(),
                        data: ColumnData::Real(v.iter().map(|d| d.to_real()).collect()),
                    },
                    Column { name: "dgp".into(), data: ColumnData::Signed(v) },
                ]
            } else {
                let mut cols = vec![Column { name: "x".into(), data: ColumnData::Real(xs.clone()) }];
                for k in 0..n {
                    let v = dgp::sample_path_on_grid(&spec, &xs, &mut substream(seed, k as u64));
                    cols.push(Column {
                        name: format!("path{k}_value"),
                        data: ColumnData::Real(v.iter().map(|d| d.to_real_clipped()).collect()),
                    });
                    cols.push(Column { name: format!("path{k}"), data: ColumnData::Signed(v) });
                }
                cols
            };
            emit_columns(&cols, output::meta_json(seed, n, &params), &a.out, stdout)?;
            Ok(EXIT_OK)
        }
        DgpAction::Compare { grid, .. } => compare_dgp(&spec, &xs, n, *grid as usize, seed, &exec, &a.out, stdout),
    }
}

#[allow(clippy::too_many_arguments)]
fn compare_dgp(
    spec: &DgpSpec,
    xs: &[f64],
    n: usize,
    grid: usize,
    seed: u64,
    exec: &RayonExecutor,
    out: &OutArgs,
    stdout: &mut dyn Write,
) -> CliResult<i32> {
    let bound = surrogate::be_bound_noniid(spec)?;
    let mut rows = Vec::new();
    let mut all_pass = true;
    for (i, &x) in xs.iter().enumerate() {
        let a = dgp::sample_values(exec, spec, x, derive_seed(seed, 2 * i as u64), n);
        let b = surrogate::sample_surrogates(exec, spec, x, derive_seed(seed, 2 * i as u64 + 1), n)?;
        let r = montecarlo::ks_two_sample(&a, &b, grid, bound.value)?;
        all_pass &= r.passed();
        let mut v = ks_json(&r);
        v.as_object_mut().expect("object").insert("x".into(), num(x));
        rows.push(v);
    }
    let format = out.format.unwrap_or(Format::Json);
    let v = match format {
        Format::Csv => Value::Array(rows),
        Format::Json => json!({
            "seed": seed,
            "samples": n,
            "be_bound": num(bound.value),
            "rho_exact": bound.rho_exact,
            "reports": rows,
            "verdict": if all_pass { "pass" } else { "fail" },
        }),
    };
    emit(&v, out, format, stdout)?;
    Ok(if all_pass { EXIT_OK } else { EXIT_VERIFICATION })
}
