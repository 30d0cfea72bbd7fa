use dgplab_core::montecarlo::{
    dkw_slack, figure_data, ks_one_sample, ks_two_sample, prob_estimate, ColumnData, EmpiricalCdf, FigureId,
    FigureOverrides, DEFAULT_GRID,
};
use dgplab_core::products::{sample_products, surrogate_cdf_at, surrogate_product_law, ProductConfig};
use dgplab_core::rng::{sample_batch, Executor, Sequential};
use dgplab_core::{Sign, SignedLog};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

/// Runs chunks on scoped threads in reverse order of submission.
struct Threaded;

impl Executor for Threaded {
    fn map_chunks<T, F>(&self, n_chunks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..n_chunks)
                .rev()
                .map(|c| {
                    let job = &job;
                    (c, s.spawn(move || job(c)))
                })
                .collect();
            let mut out: Vec<(usize, T)> = handles.into_iter().map(|(c, h)| (c, h.join().unwrap())).collect();
            out.sort_by_key(|(c, _)| *c);
            out.into_iter().map(|(_, t)| t).collect()
        })
    }
}

fn normals(seed: u64, n: usize) -> Vec<SignedLog> {
    sample_batch(&Sequential, seed, n, |r| SignedLog::from_real(r.sample::<f64, _>(StandardNormal)))
}

#[test]
fn executors_agree() {
    let cfg = ProductConfig::new(7, 1.2, 1).unwrap();
    let n = 100_003;
    assert_eq!(sample_products(&Sequential, &cfg, 3, n), sample_products(&Threaded, &cfg, 3, n));
    let o = FigureOverrides { samples: Some(40_000), seed: Some(1) };
    assert_eq!(figure_data(FigureId::F1b, o, &Sequential).unwrap(), figure_data(FigureId::F1b, o, &Threaded).unwrap());
}

#[test]
fn same_distribution_within_slack() {
    let a = normals(1, 1_000_000);
    let b = normals(2, 1_000_000);
    let r = ks_two_sample(&a, &b, DEFAULT_GRID, 0.0).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!((r.slack - 2.0 * dkw_slack(1_000_000)).abs() < 1e-15);
}

#[test]
fn symmetric_in_arguments() {
    let a = normals(3, 5000);
    let b: Vec<SignedLog> = normals(4, 7000).into_iter().map(|v| SignedLog::new(v.sign(), v.log_mag() + 0.1)).collect();
    let ab = ks_two_sample(&a, &b, 256, 0.0).unwrap();
    let ba = ks_two_sample(&b, &a, 256, 0.0).unwrap();
    assert_eq!(ab.distance, ba.distance);
}

#[test]
fn invariant_under_monotone_transform() {
    // positive-sign subsets; exp on the log-magnitude is strictly increasing
    let pos = |s: u64| -> Vec<SignedLog> { normals(s, 8000).into_iter().filter(|v| v.sign() == Sign::Plus).collect() };
    let (a, b) = (pos(5), pos(6));
    let t = |v: &SignedLog| SignedLog::new(Sign::Plus, v.log_mag().exp());
    let ta: Vec<SignedLog> = a.iter().map(t).collect();
    let tb: Vec<SignedLog> = b.iter().map(t).collect();
    let r1 = ks_two_sample(&a, &b, 128, 0.0).unwrap();
    let r2 = ks_two_sample(&ta, &tb, 128, 0.0).unwrap();
    assert_eq!(r1.distance, r2.distance);
}

#[test]
fn one_sample_against_exact_law() {
    let cfg = ProductConfig::new(1, 2.0, 1).unwrap();
    let a = sample_products(&Sequential, &cfg, 8, 200_000);
    // a single Gaussian factor: exact CDF
    let cdf = |t: &SignedLog| dgplab_core::specfun::normal_cdf(t.to_real() / 2.0);
    let r = ks_one_sample(&a, cdf, DEFAULT_GRID, 0.0).unwrap();
    assert!(r.passed(), "{r:?}");
    // against the surrogate at depth 1 the distance is visible but bounded
    let law = surrogate_product_law(&cfg);
    let r = ks_one_sample(&a, |t| surrogate_cdf_at(&law, true, *t), DEFAULT_GRID, 0.0).unwrap();
    assert!(r.distance > 0.005 && r.distance < 0.2);
}

#[test]
fn nested_estimates_converge() {
    let cfg = ProductConfig::new(3, 1.5, 1).unwrap();
    let half = SignedLog::from_real(0.5);
    let xs = sample_products(&Sequential, &cfg, 21, 1_000_000);
    let (p_full, _) = prob_estimate(&xs, |x| x.abs().le_value(&half)).unwrap();
    for n in [10_000, 100_000] {
        let (p, se) = prob_estimate(&xs[..n], |x| x.abs().le_value(&half)).unwrap();
        assert!((p - p_full).abs() < 3.0 * se, "n={n}");
    }
}

#[test]
fn figures_are_reproducible() {
    let o = FigureOverrides { samples: Some(20_000), seed: Some(77) };
    for id in FigureId::ALL {
        assert_eq!(figure_data(id, o, &Sequential).unwrap(), figure_data(id, o, &Sequential).unwrap());
    }
}

#[test]
fn histogram_densities_integrate_to_at_most_one() {
    let o = FigureOverrides { samples: Some(50_000), seed: Some(2) };
    for id in [FigureId::F1a, FigureId::F3a] {
        let f = figure_data(id, o, &Sequential).unwrap();
        let lo = f.real("bin_lo").unwrap();
        let hi = f.real("bin_hi").unwrap();
        for name in ["density_l1", "density_l10", "density_l30"] {
            let d = f.real(name).unwrap();
            let mass: f64 = d.iter().zip(lo.iter().zip(hi)).map(|(d, (a, b))| d * (b - a)).sum();
            assert!(mass <= 1.0 + 1e-9 && mass > 0.0, "{id} {name}: {mass}");
        }
    }
}

#[test]
fn figure_2a_band_covers_difference() {
    let o = FigureOverrides { samples: Some(200_000), seed: Some(0) };
    let f = figure_data(FigureId::F2a, o, &Sequential).unwrap();
    let (e, s, b) = (f.real("empirical").unwrap(), f.real("surrogate").unwrap(), f.real("bound").unwrap());
    for i in 0..f.rows() {
        assert!((s[i] - e[i]).abs() <= b[i]);
    }
}

#[test]
fn fig4_signed_columns_present() {
    let f = figure_data(FigureId::F4b, FigureOverrides::default(), &Sequential).unwrap();
    assert_eq!(f.meta.n, 5);
    let signed = f.columns.iter().filter(|c| matches!(c.data, ColumnData::Signed(_))).count();
    assert_eq!(signed, 5);
}

#[test]
fn fig_1b_against_exact_and_surrogate_laws() {
    use dgplab_core::logmoments::{mean_log_abs, VAR_LOG_ABS};
    use dgplab_core::specfun::normal_cdf;
    let n = 400_000;
    let f = figure_data(FigureId::F1b, FigureOverrides { samples: Some(n), seed: Some(4) }, &Sequential).unwrap();
    for sigma in [2.0, 2.5, 3.0] {
        let p = f.real(&format!("p_sigma{sigma}")).unwrap();
        let se = f.real(&format!("se_sigma{sigma}")).unwrap();
        // depth 1: Pr(|X| <= 1/2) exactly
        let exact = 2.0 * normal_cdf(0.5 / sigma) - 1.0;
        assert!((p[0] - exact).abs() < 4.0 * se[0], "sigma={sigma}: {} vs {exact}", p[0]);
        // the surrogate column peaks where l * E log|X| = log 2, not at l = 1
        let s = f.real(&format!("surrogate_sigma{sigma}")).unwrap();
        let mu = mean_log_abs(sigma).unwrap();
        let z = |l: f64| (-std::f64::consts::LN_2 - l * mu) / (l * VAR_LOG_ABS).sqrt();
        for l in 1..=30 {
            assert!((s[l - 1] - normal_cdf(z(l as f64))).abs() < 1e-12);
        }
        let peak = (1..=30).max_by(|&a, &b| s[a - 1].total_cmp(&s[b - 1])).unwrap() as f64;
        let l_star = std::f64::consts::LN_2 / mu;
        assert!((peak - l_star).abs() <= 1.0, "sigma={sigma}: peak {peak}, l* {l_star}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ecdf_monotone_with_extremes(xs in prop::collection::vec(-1e3f64..1e3, 1..200), a in -2e3f64..2e3, b in -2e3f64..2e3) {
        let f = EmpiricalCdf::from_reals(&xs);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(f.eval(&SignedLog::from_real(lo)) <= f.eval(&SignedLog::from_real(hi)));
        prop_assert_eq!(f.eval(&SignedLog::from_real(-1e4)), 0.0);
        prop_assert_eq!(f.eval(&SignedLog::from_real(1e4)), 1.0);
    }
}
