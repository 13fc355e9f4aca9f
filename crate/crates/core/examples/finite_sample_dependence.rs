//! FS-CID from fresh SEM replicates and from subsamples of one observed dataset.

use cimd::fscid::{run_fs_cid, ReplicateSource, Resampling};
use cimd::{three_node_preset, CiTest};

fn main() -> cimd::Result<()> {
    let t1: CiTest = "A,C|".parse()?;
    let t2: CiTest = "B,C|".parse()?;
    let sem = three_node_preset(0.5, 0.3, -0.3)?;

    let synthetic = ReplicateSource::from_sem(sem.clone(), 20, 1000, 1)?;
    println!("fresh replicates of size 20\n{}", run_fs_cid(&synthetic, &t1, &t2, 0.05)?);

    let observed = sem.sample(2000, 2)?;
    let sub = ReplicateSource::from_data(observed, 50, 1000, 3)?;
    println!("subsamples of size 50\n{}", run_fs_cid(&sub, &t1, &t2, 0.05)?);
    let boot = sub.with_resampling(Resampling::WithReplacement);
    println!("bootstrap of size 50\n{}", run_fs_cid(&boot, &t1, &t2, 0.05)?);
    Ok(())
}
