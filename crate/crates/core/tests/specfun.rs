mod common;

use common::{gamma_half_derivative_oracle, rel_err, t_oracle, upper_gamma, upper_gamma_fd};
use dgplab_core::specfun::{
    gamma_half_derivative, incomplete_gamma_s_derivative, lower_incomplete_gamma_s_derivative, t_function,
    t_series_coefficient, t_series_term, upper_gamma_half, SeriesTruncation,
};

#[test]
fn oracle_sanity() {
    // Gamma(1/2, x) = sqrt(pi) erfc(sqrt x); Gamma(1, x) = e^{-x}
    assert!(rel_err(upper_gamma(1.0, 0.3), (-0.3f64).exp()) < 1e-13);
    assert!(rel_err(upper_gamma(0.5, 0.0001), std::f64::consts::PI.sqrt() - 2.0 * 0.01) < 1e-4);
    assert!(rel_err(gamma_half_derivative_oracle(0), std::f64::consts::PI.sqrt()) < 1e-13);
}

#[test]
fn gamma_half_derivatives_match_quadrature() {
    for n in 0..=4 {
        let got = gamma_half_derivative(n).unwrap();
        let want = gamma_half_derivative_oracle(n);
        assert!(rel_err(got, want) < 1e-11, "n={n}: {got} vs {want}");
    }
    assert!(gamma_half_derivative(5).is_err());
}

#[test]
fn upper_gamma_half_matches_quadrature() {
    for &x in &[0.05, 0.2, 0.5, 0.9, 2.0] {
        assert!(rel_err(upper_gamma_half(x), upper_gamma(0.5, x)) < 1e-12, "x={x}");
    }
}

#[test]
fn t_function_matches_finite_differences() {
    let trunc = SeriesTruncation::default();
    for &sigma in &[1.0, 1.5, 2.0, 2.5, 3.0] {
        for n in 3..=5 {
            let got = t_function(n, sigma, trunc).unwrap();
            let want = t_oracle(n, sigma);
            assert!(rel_err(got, want) < 1e-3, "n={n} sigma={sigma}: {got} vs {want}");
            // the real agreement is far tighter than the acceptance tolerance
            assert!(rel_err(got, want) < 1e-6, "n={n} sigma={sigma}: {got} vs {want}");
        }
    }
}

#[test]
fn incomplete_gamma_derivatives_match_finite_differences() {
    let trunc = SeriesTruncation::default();
    for &sigma in &[0.8, 1.0, 2.0, 3.0] {
        let x = 1.0 / (2f64.sqrt() * sigma);
        for order in 1..=3 {
            let got = incomplete_gamma_s_derivative(order, sigma, trunc).unwrap();
            let want = upper_gamma_fd(order, 0.5, x);
            assert!((got - want).abs() < 1e-7 * want.abs().max(1.0), "order={order} sigma={sigma}");
            let lower = lower_incomplete_gamma_s_derivative(order, sigma, trunc).unwrap();
            let complete = gamma_half_derivative(order).unwrap();
            assert!((lower + got - complete).abs() < 1e-12 * complete.abs().max(1.0));
        }
    }
}

#[test]
fn leading_coefficient() {
    let c = (4.0 / 9.0) * 2f64.powf(-0.25);
    assert!((c - 0.3737).abs() < 1e-4);
    assert!((t_series_coefficient(3, 1).abs() - c).abs() < 1e-15);
    // the sigma^{-1/2} term of T(3)
    let term = t_series_term(3, 2.0, 1);
    assert!((term.abs() - c / 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn truncation_converges() {
    let sigma = 0.8;
    let exact = t_oracle(5, sigma);
    let mut prev = f64::INFINITY;
    for k in [2, 4, 6, 8, 10, 14] {
        let err = (t_function(5, sigma, SeriesTruncation::new(k).unwrap()).unwrap() - exact).abs();
        assert!(err <= prev + 1e-12, "k={k}");
        prev = err;
    }
    assert!(prev < 1e-8);
}

#[test]
fn domain_checks() {
    let trunc = SeriesTruncation::default();
    assert!(t_function(2, 1.0, trunc).is_err());
    assert!(t_function(6, 1.0, trunc).is_err());
    assert!(t_function(3, 0.7, trunc).is_err());
    assert!(incomplete_gamma_s_derivative(4, 1.0, trunc).is_err());
    assert!(SeriesTruncation::new(0).is_err());
}
