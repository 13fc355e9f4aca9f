use std::process::{Command, Output};

fn cimd(args: &[&str], dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cimd"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(cimd(&["--help"], p).status.code(), Some(0));
    assert_eq!(cimd(&["cimd", "--bogus"], p).status.code(), Some(1));
    assert_eq!(cimd(&["cimd", "--preset", "0.5,0.2", "--t1", "A,C|", "--t2", "B,C|"], p).status.code(), Some(1));
    assert_eq!(cimd(&["citest", "--data", "missing.csv", "--test", "A,B|"], p).status.code(), Some(1));
    // Needs a negative noise variance for C.
    let infeasible = cimd(&["cimd", "--preset", "1,0.8,0.5", "--t1", "A,C|", "--t2", "B,C|"], p);
    assert_eq!(infeasible.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&infeasible.stderr).contains("C"));
}

#[test]
fn simulate_then_test_then_project() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let sim = cimd(&["simulate", "--preset", "0.5,0,0.5", "-n", "300", "--seed", "1", "--out", "d.csv"], p);
    assert!(sim.status.success());
    let text = std::fs::read_to_string(p.join("d.csv")).unwrap();
    assert!(text.starts_with("A,B,C\n"));
    assert_eq!(text.lines().count(), 301);

    let ci = cimd(&["citest", "--data", "d.csv", "--test", "A,C|B", "--csv"], p);
    assert!(ci.status.success());
    let out = String::from_utf8_lossy(&ci.stdout);
    assert!(out.starts_with("test,r,z,n_effective,reject,alpha\nA_C|B,"), "{out}");

    let proj = cimd(&["project", "--data", "d.csv", "--test", "A,C|", "--mle", "--out", "p.csv"], p);
    assert!(proj.status.success());
    let cov = cimd::dataset::read_covariance_csv(std::fs::File::open(p.join("p.csv")).unwrap()).unwrap();
    assert!(cov.get("A", "C").unwrap().abs() < 1e-12);
}

#[test]
fn sweep_writes_grids_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(
        p.join("spec.txt"),
        "alpha1 = 0.5\naxis1 = beta -0.5 0.5 3\naxis2 = alpha2 -0.5 0.5 3\nmeasure = cimd_lim\nt1 = A,C|\nt2 = B,C|\n",
    )
    .unwrap();
    let out = cimd(&["sweep", "--spec", "spec.txt", "--seed", "4", "--out", "res"], p);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let grid = std::fs::read_to_string(p.join("res/grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 10);
    let meta = std::fs::read_to_string(p.join("res/sweep.meta")).unwrap();
    assert!(meta.contains("seed = 4"));
    let hash = meta.lines().find_map(|l| l.strip_prefix("spec_sha256 = ")).unwrap();
    assert_eq!(hash.len(), 64);

    let bad = cimd(&["sweep", "--spec", "missing.txt"], p);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn pairs_and_faithfulness() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let out = cimd(&["pairs", "--preset", "0.5,0.2,0.3", "--max-cond", "1", "--out", "pairs.csv"], p);
    assert!(out.status.success());
    let text = std::fs::read_to_string(p.join("pairs.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 36);
    assert!(p.join("pairs.csv.meta").exists());

    let cov_input = cimd(&["pairs", "--preset", "0.5,0.2,0.3", "--measure", "fs-cid", "--replicates", "50"], p);
    assert!(cov_input.status.success());

    std::fs::write(p.join("chain.dag"), "A -> B\nB -> C\n").unwrap();
    let f = cimd(&["faithfulness", "--preset", "0.5,0,0.5", "--dag", "chain.dag", "--lambda", "0.3"], p);
    assert!(f.status.success());
    assert!(String::from_utf8_lossy(&f.stdout).contains("A_C|"));
}
