//! Finite-sample CI dependence (FS-CID).
//!
//! Draw many small datasets (fresh SEM samples or subsamples of one dataset), run two
//! Fisher-Z tests on each, and report the covariance of the two failure-to-reject
//! indicators: `P̂(t₁, t₂) − P̂(t₁) P̂(t₂)`.

use std::fmt;

use rayon::prelude::*;

use crate::citest::{empirical_covariance, fisher_z_from_covariance};
use crate::dataset::{format_value, Dataset};
use crate::error::{Error, Result};
use crate::gaussian::CiTest;
use crate::rng::{self, Rng};
use crate::sem::LinearSem;

pub const DEFAULT_REPLICATES: usize = 1000;
pub const DEFAULT_SYNTHETIC_SIZE: usize = 20;
pub const DEFAULT_SUBSAMPLE_SIZE: usize = 50;

/// Where replicate datasets come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    /// Fresh draws from a generative model.
    Sem(LinearSem),
    /// Row subsamples of an observed dataset.
    Data(Dataset),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Resampling {
    #[default]
    WithoutReplacement,
    /// Classic bootstrap; for sensitivity analysis only.
    WithReplacement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateSource {
    pub origin: Origin,
    pub replicate_size: usize,
    pub replicate_count: usize,
    pub seed: u64,
    pub resampling: Resampling,
}

impl ReplicateSource {
    pub fn from_sem(sem: LinearSem, replicate_size: usize, replicate_count: usize, seed: u64) -> Result<Self> {
        let s = Self {
            origin: Origin::Sem(sem),
            replicate_size,
            replicate_count,
            seed,
            resampling: Resampling::WithoutReplacement,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn from_data(data: Dataset, replicate_size: usize, replicate_count: usize, seed: u64) -> Result<Self> {
        let s = Self {
            origin: Origin::Data(data),
            replicate_size,
            replicate_count,
            seed,
            resampling: Resampling::WithoutReplacement,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_resampling(mut self, resampling: Resampling) -> Self {
        self.resampling = resampling;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicate_count < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 replicates, got {}",
                self.replicate_count
            )));
        }
        if self.replicate_size < 2 {
            return Err(Error::InvalidSubsampleSize {
                k: self.replicate_size,
                n: self.source_rows().unwrap_or(0),
            });
        }
        if let Origin::Data(data) = &self.origin {
            if self.resampling == Resampling::WithoutReplacement && self.replicate_size > data.n_rows() {
                return Err(Error::InvalidSubsampleSize {
                    k: self.replicate_size,
                    n: data.n_rows(),
                });
            }
        }
        Ok(())
    }

    fn source_rows(&self) -> Option<usize> {
        match &self.origin {
            Origin::Data(d) => Some(d.n_rows()),
            Origin::Sem(_) => None,
        }
    }

    pub fn variables(&self) -> &[String] {
        match &self.origin {
            Origin::Sem(s) => s.variables(),
            Origin::Data(d) => d.columns(),
        }
    }

    /// Replicate dataset number `replicate`, drawn from its own random stream.
    pub fn draw(&self, replicate: usize) -> Dataset {
        let mut rng = rng::stream_rng(self.seed, replicate as u64);
        match &self.origin {
            Origin::Sem(sem) => sem.sample_with(self.replicate_size, &mut rng),
            Origin::Data(data) => match self.resampling {
                Resampling::WithoutReplacement => {
                    let idx = rand::seq::index::sample(&mut rng, data.n_rows(), self.replicate_size);
                    data.select_rows(&idx.into_vec())
                }
                Resampling::WithReplacement => resample(data, self.replicate_size, &mut rng),
            },
        }
    }
}

fn resample(data: &Dataset, k: usize, rng: &mut Rng) -> Dataset {
    use rand::Rng as _;
    let idx: Vec<usize> = (0..k).map(|_| rng.random_range(0..data.n_rows())).collect();
    data.select_rows(&idx)
}

/// `k` distinct rows chosen uniformly without replacement using stream `stream` of `seed`.
pub fn subsample(data: &Dataset, k: usize, seed: u64, stream: u64) -> Result<Dataset> {
    if k < 2 || k > data.n_rows() {
        return Err(Error::InvalidSubsampleSize { k, n: data.n_rows() });
    }
    let mut rng = rng::stream_rng(seed, stream);
    let idx = rand::seq::index::sample(&mut rng, data.n_rows(), k);
    Ok(data.select_rows(&idx.into_vec()))
}

/// Per-replicate failure-to-reject indicators for a list of tests.
/// `None` marks a test that could not be evaluated on that replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutcomes {
    pub tests: Vec<CiTest>,
    pub accepted: Vec<Vec<Option<bool>>>,
}

/// Runs every test on every replicate of `source`.
pub fn evaluate_replicates(source: &ReplicateSource, tests: &[CiTest], alpha_level: f64) -> Result<ReplicateOutcomes> {
    source.validate()?;
    crate::citest::critical_value(alpha_level)?;
    let vars = source.variables();
    for t in tests {
        for v in t.variables() {
            if !vars.iter().any(|c| c == v) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
        }
        let effective = source.replicate_size as i64 - t.cond.len() as i64 - 3;
        if effective < 1 {
            return Err(Error::InsufficientSamples {
                test: t.to_string(),
                effective,
            });
        }
    }
    let accepted = (0..source.replicate_count)
        .into_par_iter()
        .map(|i| {
            let data = source.draw(i);
            match empirical_covariance(&data) {
                Ok(cov) => tests
                    .iter()
                    .map(|t| {
                        fisher_z_from_covariance(&cov, data.n_rows(), t, alpha_level)
                            .ok()
                            .map(|o| !o.reject)
                    })
                    .collect(),
                Err(_) => vec![None; tests.len()],
            }
        })
        .collect();
    Ok(ReplicateOutcomes {
        tests: tests.to_vec(),
        accepted,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FsCidReport {
    pub t1: CiTest,
    pub t2: CiTest,
    /// `P̂(t₁)`: fraction of replicates failing to reject test 1.
    pub p_t1: f64,
    pub p_t2: f64,
    pub p_joint: f64,
    pub fs_cid: f64,
    /// Replicates that entered the frequencies.
    pub replicate_count: usize,
    /// Replicates dropped because either test was degenerate.
    pub attrition: usize,
}

impl ReplicateOutcomes {
    /// FS-CID between tests `i` and `j` of this outcome table.
    pub fn report(&self, i: usize, j: usize) -> Result<FsCidReport> {
        let (mut n1, mut n2, mut nj, mut valid) = (0u64, 0u64, 0u64, 0u64);
        for row in &self.accepted {
            if let (Some(x), Some(y)) = (row[i], row[j]) {
                valid += 1;
                n1 += x as u64;
                n2 += y as u64;
                nj += (x && y) as u64;
            }
        }
        let total = self.accepted.len();
        if valid == 0 {
            return Err(Error::AllReplicatesDegenerate(total));
        }
        let v = valid as f64;
        let (p_t1, p_t2, p_joint) = (n1 as f64 / v, n2 as f64 / v, nj as f64 / v);
        Ok(FsCidReport {
            t1: self.tests[i].clone(),
            t2: self.tests[j].clone(),
            p_t1,
            p_t2,
            p_joint,
            fs_cid: p_joint - p_t1 * p_t2,
            replicate_count: valid as usize,
            attrition: total - valid as usize,
        })
    }
}

/// FS-CID between `t1` and `t2` over the replicates of `source`.
pub fn run_fs_cid(source: &ReplicateSource, t1: &CiTest, t2: &CiTest, alpha_level: f64) -> Result<FsCidReport> {
    let outcomes = evaluate_replicates(source, &[t1.clone(), t2.clone()], alpha_level)?;
    outcomes.report(0, 1)
}

impl FsCidReport {
    pub const CSV_HEADER: [&'static str; 8] =
        ["t1", "t2", "p_t1", "p_t2", "p_joint", "fs_cid", "attrition", "replicates"];

    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.t1.to_string(),
            self.t2.to_string(),
            format_value(self.p_t1),
            format_value(self.p_t2),
            format_value(self.p_joint),
            format_value(self.fs_cid),
            self.attrition.to_string(),
            self.replicate_count.to_string(),
        ]
    }
}

impl fmt::Display for FsCidReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "t1          {}", self.t1)?;
        writeln!(f, "t2          {}", self.t2)?;
        writeln!(f, "P(t1)       {:.4}", self.p_t1)?;
        writeln!(f, "P(t2)       {:.4}", self.p_t2)?;
        writeln!(f, "P(t1,t2)    {:.4}", self.p_joint)?;
        writeln!(f, "FS-CID      {:.6}", self.fs_cid)?;
        write!(
            f,
            "replicates  {} used, {} dropped",
            self.replicate_count, self.attrition
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sem::three_node_preset;
    use nalgebra::DMatrix;

    fn small_data(n: usize) -> Dataset {
        Dataset::new(
            vec!["X".into(), "Y".into()],
            DMatrix::from_fn(n, 2, |i, j| (i * 2 + j) as f64),
        )
        .unwrap()
    }

    #[test]
    fn full_subsample_is_permutation() {
        let d = small_data(7);
        let s = subsample(&d, 7, 3, 0).unwrap();
        let mut got: Vec<f64> = s.rows().column(0).iter().copied().collect();
        got.sort_by(f64::total_cmp);
        let want: Vec<f64> = d.rows().column(0).iter().copied().collect();
        assert_eq!(got, want);
        assert_eq!(subsample(&d, 4, 3, 2).unwrap(), subsample(&d, 4, 3, 2).unwrap());
        assert!(matches!(subsample(&d, 8, 3, 0), Err(Error::InvalidSubsampleSize { .. })));
        assert!(subsample(&d, 1, 3, 0).is_err());
    }

    #[test]
    fn identical_tests_give_maximal_cooccurrence() {
        let sem = three_node_preset(0.3, 0.0, 0.3).unwrap();
        let src = ReplicateSource::from_sem(sem, 20, 200, 5).unwrap();
        let t = CiTest::marginal("A", "B").unwrap();
        let r = run_fs_cid(&src, &t, &t, 0.05).unwrap();
        assert_eq!(r.p_joint, r.p_t1);
        assert_eq!(r.fs_cid, r.p_t1 - r.p_t1 * r.p_t1);
    }

    #[test]
    fn source_validation() {
        let sem = three_node_preset(0.3, 0.0, 0.3).unwrap();
        assert!(ReplicateSource::from_sem(sem.clone(), 20, 1, 0).is_err());
        assert!(ReplicateSource::from_data(small_data(5), 6, 10, 0).is_err());
        let src = ReplicateSource {
            origin: Origin::Data(small_data(5)),
            replicate_size: 6,
            replicate_count: 10,
            seed: 0,
            resampling: Resampling::WithReplacement,
        };
        assert!(src.validate().is_ok());
        assert_eq!(src.draw(3).n_rows(), 6);

        let src = ReplicateSource::from_sem(sem, 4, 10, 0).unwrap();
        let t = CiTest::new("A", "B", ["C"]).unwrap();
        assert!(matches!(
            run_fs_cid(&src, &t, &t, 0.05),
            Err(Error::InsufficientSamples { .. })
        ));
        let u = CiTest::marginal("A", "Q").unwrap();
        assert!(matches!(run_fs_cid(&src, &u, &u, 0.05), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn constant_data_is_all_degenerate() {
        let d = Dataset::new(
            vec!["X".into(), "Y".into()],
            DMatrix::from_element(30, 2, 1.0),
        )
        .unwrap();
        let src = ReplicateSource::from_data(d, 10, 20, 1).unwrap();
        let t = CiTest::marginal("X", "Y").unwrap();
        assert!(matches!(
            run_fs_cid(&src, &t, &t, 0.05),
            Err(Error::AllReplicatesDegenerate(20))
        ));
    }

    #[test]
    fn report_csv_shape() {
        let sem = three_node_preset(0.3, 0.0, 0.3).unwrap();
        let src = ReplicateSource::from_sem(sem, 20, 50, 5).unwrap();
        let t1 = CiTest::marginal("A", "B").unwrap();
        let t2 = CiTest::marginal("A", "C").unwrap();
        let r = run_fs_cid(&src, &t1, &t2, 0.05).unwrap();
        assert_eq!(r.csv_record().len(), FsCidReport::CSV_HEADER.len());
        assert_eq!(r.replicate_count + r.attrition, 50);
        assert!(r.to_string().contains("FS-CID"));
    }
}
