//! CIMD and FS-CID over every ordered pair of tests on three variables.

use cimd::enumerate_tests;
use cimd::fscid::ReplicateSource;
use cimd::sweep::{run_pair_matrix, PairInput, PairMeasure};

fn main() -> cimd::Result<()> {
    let sem = cimd::three_node_preset(0.5, 0.3, -0.3)?;
    let tests = enumerate_tests(sem.variables(), 1)?;
    let exact = run_pair_matrix(&PairInput::Covariance(sem.covariance()), &tests, PairMeasure::Cimd)?;
    let source = ReplicateSource::from_sem(sem, 20, 1000, 5)?;
    let sampled = run_pair_matrix(&PairInput::Replicates(source), &tests, PairMeasure::FsCid { alpha: 0.05 })?;

    for (name, m) in [("CIMD", &exact), ("FS-CID", &sampled)] {
        println!("{name}");
        print!("{:>8}", "");
        for t in &tests {
            print!("{:>9}", t.to_string());
        }
        println!();
        for (i, t) in tests.iter().enumerate() {
            print!("{:>8}", t.to_string());
            for j in 0..tests.len() {
                print!("{:>+9.4}", m.values[(i, j)]);
            }
            println!();
        }
    }
    Ok(())
}
