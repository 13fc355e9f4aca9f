mod common;

use cimd::fscid::{run_fs_cid, ReplicateSource, Resampling};
use cimd::sem::Edge;
use cimd::sweep::{run_grid, GridSpec, Measure};
use cimd::{CiTest, LinearSem};

fn t(s: &str) -> CiTest {
    s.parse().unwrap()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let mut r = vec![0.0; v.len()];
    for (rank, i) in idx.into_iter().enumerate() {
        r[i] = rank as f64;
    }
    r
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

#[test]
fn independent_tests_have_no_dependence() {
    let vars: Vec<String> = ["A", "B", "C", "D"].iter().map(|s| s.to_string()).collect();
    let sem = LinearSem::standardized(vars, Vec::<Edge>::new()).unwrap();
    let src = ReplicateSource::from_sem(sem, 20, 4000, 1).unwrap();
    let r = run_fs_cid(&src, &t("A,B|"), &t("C,D|"), 0.05).unwrap();
    assert!(r.fs_cid.abs() <= 0.03, "{r}");
    assert!((r.p_t1 - 0.95).abs() < 0.02);
    assert_eq!(r.attrition, 0);
}

#[test]
fn subsampling_modes_both_run() {
    let sem = cimd::three_node_preset(0.5, 0.2, 0.3).unwrap();
    let data = sem.sample(400, 2).unwrap();
    let base = ReplicateSource::from_data(data, 50, 300, 4).unwrap();
    let without = run_fs_cid(&base, &t("A,C|"), &t("B,C|"), 0.05).unwrap();
    let with = run_fs_cid(&base.with_resampling(Resampling::WithReplacement), &t("A,C|"), &t("B,C|"), 0.05)
        .unwrap();
    assert_eq!(without.replicate_count, 300);
    assert_ne!(without, with);
}

#[test]
fn fscid_ranks_follow_cimd() {
    let exact = run_grid(&GridSpec::fig1(Measure::Cimd, 11)).unwrap();
    let mut spec = GridSpec::fig1(Measure::FsCid, 11);
    spec.replication.count = 400;
    spec.replication.seed = 21;
    let sampled = run_grid(&spec).unwrap();
    let x: Vec<f64> = exact.cells.iter().map(|c| c.value).collect();
    let y: Vec<f64> = sampled.cells.iter().map(|c| c.value).collect();
    let rho = pearson(&ranks(&x), &ranks(&y));
    assert!(rho > 0.3, "Spearman {rho}");
}

#[test]
fn same_seed_same_report() {
    let sem = cimd::three_node_preset(0.5, -0.2, 0.3).unwrap();
    let src = ReplicateSource::from_sem(sem, 20, 500, 99).unwrap();
    let a = run_fs_cid(&src, &t("A,C|"), &t("B,C|"), 0.05).unwrap();
    let b = run_fs_cid(&src, &t("A,C|"), &t("B,C|"), 0.05).unwrap();
    assert_eq!(a, b);
}
