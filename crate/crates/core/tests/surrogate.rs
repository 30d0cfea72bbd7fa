mod common;

use common::log_abs_expectation;
use dgplab_core::dgp::{sample_values, DgpSpec, ExponentPolicy, FirstLayerKernel, LayerKernel};
use dgplab_core::logmoments::VAR_LOG_ABS;
use dgplab_core::montecarlo::{ks_two_sample, DEFAULT_GRID};
use dgplab_core::rng::{substream, Sequential};
use dgplab_core::surrogate::{
    be_bound_noniid, d2_report, median_dgp_surrogate, sample_surrogates, surrogate_params, threshold_sigma,
};
use proptest::prelude::*;

fn uniform(depth: usize, degree: u32, sigma: f64, policy: ExponentPolicy) -> DgpSpec {
    let layers = vec![LayerKernel::new(sigma, degree).unwrap(); depth - 1];
    DgpSpec::new(FirstLayerKernel::linear(1.0).unwrap(), layers, policy).unwrap()
}

#[test]
fn ten_layer_bound_against_reverse_sum() {
    let spec = uniform(10, 2, 1.0, ExponentPolicy::Multiplicative);
    let b = be_bound_noniid(&spec).unwrap();
    let rho = log_abs_expectation(1.0, |v| v.abs().powi(3));
    let c: Vec<f64> = (2..=10).map(|i| 2f64.powi(10 - i)).collect();
    let (mut s2, mut s3) = (0.0, 0.0);
    for ci in c.iter().rev() {
        s2 += ci * ci * VAR_LOG_ABS;
        s3 += ci * ci * ci * rho;
    }
    let want = 0.56 * s3 / s2.powf(1.5);
    assert!((b.value - want).abs() < 1e-9 * want);
    assert!((b.sum_var - s2).abs() < 1e-9 * s2);
}

#[test]
fn medians_move_with_threshold() {
    for policy in [ExponentPolicy::Multiplicative, ExponentPolicy::PaperAdditive] {
        let m = |l: usize, s: f64| median_dgp_surrogate(&uniform(l, 2, s, policy)).unwrap();
        for l in 3..10 {
            assert!(m(l + 1, 1.0) < m(l, 1.0));
            assert!(m(l + 1, 3.0) > m(l, 3.0));
        }
        assert!((m(6, threshold_sigma()) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn d2_flags_closed_forms() {
    let r = d2_report(3, 1.0, ExponentPolicy::PaperAdditive).unwrap();
    assert_eq!(r.full_sums.sum_c2, 21.0);
    assert_eq!(r.paper_closed_form.sum_c2, 17.0);
    assert_eq!(r.stated_vector.sums.sum_c2, 5.0);
    assert!(!r.flags.is_empty());
    // the direct and stated-vector bounds coincide when the vectors do
    let m = d2_report(3, 1.0, ExponentPolicy::Multiplicative).unwrap();
    assert_eq!(m.direct.exponents, m.stated_vector.exponents);
}

#[test]
fn surrogate_median_of_magnitude() {
    // l = 10, d_i = 2, sigma = 1, x = 1, g_1(1) = Z_1
    let spec = uniform(10, 2, 1.0, ExponentPolicy::Multiplicative);
    let law = surrogate_params(&spec).unwrap();
    let n = 200_000;
    let mut a: Vec<f64> =
        sample_surrogates(&Sequential, &spec, 1.0, 3, n).unwrap().iter().map(|v| v.log_mag()).collect();
    // oracle: log|Z|^{c1} + Y with independent draws
    use rand::Rng;
    use rand_distr::StandardNormal;
    let mut r = substream(99, 0);
    let mut b: Vec<f64> = (0..n)
        .map(|_| {
            let z: f64 = r.sample(StandardNormal);
            let y: f64 = r.sample(StandardNormal);
            law.c1 as f64 * z.abs().ln() + law.mu_y + law.var_y.sqrt() * y
        })
        .collect();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (ma, mb) = (a[n / 2], b[n / 2]);
    // both sample medians carry O(1/sqrt n) error in units of the spread
    let spread = b[(0.75 * n as f64) as usize] - b[(0.25 * n as f64) as usize];
    assert!((ma - mb).abs() < 0.02 * spread, "{ma} vs {mb}");
}

#[test]
fn uniformity_in_x_small_run() {
    let spec = uniform(10, 1, 1.0, ExponentPolicy::Multiplicative);
    let bound = be_bound_noniid(&spec).unwrap().value;
    for (k, &x) in [-2.0, 0.5, 1.0].iter().enumerate() {
        let a = sample_values(&Sequential, &spec, x, 2 * k as u64, 50_000);
        let b = sample_surrogates(&Sequential, &spec, x, 2 * k as u64 + 1, 50_000).unwrap();
        let r = ks_two_sample(&a, &b, DEFAULT_GRID, bound).unwrap();
        assert!(r.passed(), "x={x}: {r:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn var_factorises(degrees in prop::collection::vec(1u32..=3, 1..6), sigmas in prop::collection::vec(0.2f64..4.0, 6)) {
        let layers = degrees.iter().zip(&sigmas).map(|(&d, &s)| LayerKernel::new(s, d).unwrap()).collect();
        let spec = DgpSpec::new(FirstLayerKernel::linear(1.0).unwrap(), layers, ExponentPolicy::Multiplicative).unwrap();
        let law = surrogate_params(&spec).unwrap();
        let sum_c2: f64 = law.exponents.iter().map(|&c| (c as f64).powi(2)).sum();
        prop_assert!(law.var_y > 0.0);
        prop_assert!((law.var_y - VAR_LOG_ABS * sum_c2).abs() < 1e-10 * law.var_y.max(1.0));
        prop_assert!((median_dgp_surrogate(&spec).unwrap() - law.mu_y.exp()).abs() <= 1e-15 * law.mu_y.exp());
    }

    #[test]
    fn bound_is_homogeneous(depth in 2usize..7, k in 1u32..=3, sigma in 0.8f64..3.0) {
        // c_l = 1 always, so no spec scales the whole vector; scale it by hand
        let base = uniform(depth, 2, sigma, ExponentPolicy::PaperAdditive);
        let b = be_bound_noniid(&base).unwrap();
        let c: Vec<f64> = base.exponents()[1..].iter().map(|&c| c as f64).collect();
        let rho = dgplab_core::logmoments::abs_third_moment(sigma, Default::default()).unwrap().0;
        let f = |m: f64| {
            let s2: f64 = c.iter().map(|ci| (m * ci).powi(2) * VAR_LOG_ABS).sum();
            let s3: f64 = c.iter().map(|ci| (m * ci).powi(3) * rho).sum();
            0.56 * s3 / s2.powf(1.5)
        };
        prop_assert!((f(k as f64) - b.value).abs() < 1e-12 * b.value);
    }
}
