mod common;

use cimd::gaussian::partial_correlation;
use cimd::{cimd, conditional_mutual_information, gaussian_kl, project_ci, CiTest};
use proptest::prelude::*;

fn instance(seed: u64, d: usize) -> (cimd::LabeledCovariance, CiTest) {
    let mut rng = common::rng(seed);
    let cov = common::random_psd(&mut rng, d, 0.05);
    let test = common::random_test(&mut rng, d);
    (cov, test)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partial_correlation_is_bit_symmetric(seed in any::<u64>(), d in 2usize..7) {
        let (cov, t) = instance(seed, d);
        let swapped = CiTest::new(t.b.clone(), t.a.clone(), t.cond.clone()).unwrap();
        prop_assert_eq!(
            partial_correlation(&cov, &t).unwrap().to_bits(),
            partial_correlation(&cov, &swapped).unwrap().to_bits()
        );
    }

    #[test]
    fn kl_is_nonnegative_and_zero_on_self(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = common::rng(seed);
        let p = common::random_psd(&mut rng, d, 0.05);
        let q = common::random_psd(&mut rng, d, 0.05);
        prop_assert!(gaussian_kl(&p, &q).unwrap() >= 0.0);
        prop_assert!(gaussian_kl(&p, &p).unwrap().abs() < 1e-9);
    }

    #[test]
    fn divergence_equals_information(seed in any::<u64>(), d in 2usize..7) {
        let (cov, t) = instance(seed, d);
        let r = project_ci(&cov, &t).unwrap();
        let i = conditional_mutual_information(&cov, &t).unwrap();
        prop_assert!((gaussian_kl(&cov, &r.projected).unwrap() - i).abs() < 1e-8);
        prop_assert_eq!(r.divergence, i);
    }

    #[test]
    fn projection_is_idempotent_and_on_manifold(seed in any::<u64>(), d in 2usize..7) {
        let (cov, t) = instance(seed, d);
        let once = project_ci(&cov, &t).unwrap().projected;
        prop_assert!(conditional_mutual_information(&once, &t).unwrap() < 1e-12);
        let twice = project_ci(&once, &t).unwrap().projected;
        prop_assert!(common::max_abs_diff(once.matrix(), twice.matrix()) <= 1e-10 * cov.matrix().amax());
    }

    #[test]
    fn projection_is_closest_member(seed in any::<u64>(), d in 3usize..6) {
        let (p, t) = instance(seed, d);
        let mut rng = common::rng(seed ^ 0x5eed);
        let q = project_ci(&common::random_psd(&mut rng, d, 0.05), &t).unwrap().projected;
        let best = gaussian_kl(&p, &project_ci(&p, &t).unwrap().projected).unwrap();
        prop_assert!(best <= gaussian_kl(&p, &q).unwrap() + 1e-12);
    }

    #[test]
    fn self_cimd_is_full_information(seed in any::<u64>(), d in 2usize..6) {
        let (cov, t) = instance(seed, d);
        let v = cimd(&cov, &t, &t).unwrap();
        prop_assert!((v.raw - v.i_p_t1).abs() < 1e-10);
    }
}
