#![allow(dead_code)]

use cimd::{CiTest, LabeledCovariance};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn labels(d: usize) -> Vec<String> {
    (0..d).map(|i| format!("X{i}")).collect()
}

/// `G Gᵀ + ridge·I` with standard normal `G`.
pub fn random_psd(rng: &mut ChaCha8Rng, d: usize, ridge: f64) -> LabeledCovariance {
    let g = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let m = &g * g.transpose() + DMatrix::identity(d, d) * ridge;
    let m = (&m + m.transpose()) * 0.5;
    LabeledCovariance::new(labels(d), m).unwrap()
}

/// A test over `d ≥ 2` variables with a random conditioning subset.
pub fn random_test(rng: &mut ChaCha8Rng, d: usize) -> CiTest {
    let names = labels(d);
    let mut idx: Vec<usize> = (0..d).collect();
    idx.shuffle(rng);
    let k = rng.random_range(0..=d - 2);
    CiTest::new(
        names[idx[0]].clone(),
        names[idx[1]].clone(),
        idx[2..2 + k].iter().map(|&i| names[i].clone()),
    )
    .unwrap()
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}
