//! Checks against independent computations that share no code with the library.

mod common;

use std::collections::HashMap;

use approx::assert_abs_diff_eq;
use cimd::citest::critical_value;
use cimd::fscid::subsample;
use cimd::gaussian::information_from_correlation;
use cimd::{gaussian_kl, partial_correlation, three_node_preset, CiTest, Dataset, LabeledCovariance};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

/// Residual of `y` after simple least squares on `x`.
fn residual(y: &[f64], x: &[f64]) -> Vec<f64> {
    let n = y.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    x.iter().zip(y).map(|(a, b)| (b - my) - slope * (a - mx)).collect()
}

fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

#[test]
fn partial_correlation_matches_regression_residuals() {
    let sem = three_node_preset(0.5, 0.3, -0.4).unwrap();
    let data = sem.sample(200_000, 3).unwrap();
    let col = |j: usize| data.rows().column(j).iter().copied().collect::<Vec<_>>();
    let (a, b, c) = (col(0), col(1), col(2));
    let mc = correlation(&residual(&a, &b), &residual(&c, &b));
    let exact = partial_correlation(&sem.covariance(), &"A,C|B".parse().unwrap()).unwrap();
    assert_abs_diff_eq!(mc, exact, epsilon = 0.01);
}

#[test]
fn mutual_information_matches_monte_carlo() {
    let rho: f64 = 0.6;
    let mut rng = common::rng(5);
    let n = 200_000;
    let mut total = 0.0;
    for _ in 0..n {
        let x: f64 = rng.sample(StandardNormal);
        let e: f64 = rng.sample(StandardNormal);
        let y = rho * x + (1.0 - rho * rho).sqrt() * e;
        // log p(x, y) − log p(x) − log p(y) for unit-variance margins.
        let q = (x * x - 2.0 * rho * x * y + y * y) / (1.0 - rho * rho);
        total += -0.5 * (1.0 - rho * rho).ln() - 0.5 * q + 0.5 * (x * x + y * y);
    }
    let exact = information_from_correlation(rho, String::new).unwrap();
    assert_abs_diff_eq!(total / n as f64, exact, epsilon = 0.01);
}

#[test]
fn scalar_kl_matches_quadrature() {
    let (p, q) = (1.0f64, 2.0f64);
    let density = |x: f64, v: f64| (-x * x / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt();
    // Composite Simpson on [−12, 12].
    let (lo, hi, m) = (-12.0, 12.0, 20_000);
    let h = (hi - lo) / m as f64;
    let f = |x: f64| density(x, p) * (density(x, p) / density(x, q)).ln();
    let mut s = f(lo) + f(hi);
    for i in 1..m {
        s += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let quad = s * h / 3.0;
    let lp = LabeledCovariance::from_rows(&["X"], &[p]).unwrap();
    let lq = LabeledCovariance::from_rows(&["X"], &[q]).unwrap();
    let kl = gaussian_kl(&lp, &lq).unwrap();
    assert_abs_diff_eq!(kl, quad, epsilon = 1e-9);
    assert_abs_diff_eq!(kl, 0.09657, epsilon = 1e-5);
}

/// Maclaurin series; accurate to ~1e-15 for |x| < 3.
fn erf(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term.abs() > 1e-17 {
        n += 1.0;
        term *= -x * x / n;
        sum += term / (2.0 * n + 1.0);
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

#[test]
fn critical_value_matches_bisection() {
    for alpha in [0.01, 0.05, 0.1, 0.2] {
        let target = 1.0 - alpha / 2.0;
        let phi = |z: f64| 0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2));
        let (mut lo, mut hi) = (0.0, 5.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if phi(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_abs_diff_eq!(critical_value(alpha).unwrap(), lo, epsilon = 1e-9);
    }
}

#[test]
fn subsamples_are_uniform_over_subsets() {
    let data = Dataset::new(vec!["i".into()], DMatrix::from_fn(6, 1, |i, _| i as f64)).unwrap();
    let draws = 20_000;
    let mut counts: HashMap<Vec<u64>, usize> = HashMap::new();
    for s in 0..draws {
        let sub = subsample(&data, 3, 17, s).unwrap();
        let mut key: Vec<u64> = sub.rows().iter().map(|v| *v as u64).collect();
        key.sort_unstable();
        key.dedup();
        assert_eq!(key.len(), 3, "drawn with replacement");
        *counts.entry(key).or_default() += 1;
    }
    assert_eq!(counts.len(), 20);
    let expected = draws as f64 / 20.0;
    let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 0.999 quantile of chi-square with 19 degrees of freedom.
    assert!(chi2 < 43.82, "chi2 = {chi2}");
}

#[test]
fn chain_conditional_independence_is_exact() {
    let cov = three_node_preset(0.7, 0.0, -0.4).unwrap().covariance();
    let test = CiTest::new("A", "C", ["B"]).unwrap();
    assert!(partial_correlation(&cov, &test).unwrap().abs() < 1e-15);
}
