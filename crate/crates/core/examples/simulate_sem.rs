//! Sample from a standardized three-node SEM and compare the empirical covariance with
//! the exact one.

use cimd::citest::empirical_covariance;
use cimd::three_node_preset;

fn main() -> cimd::Result<()> {
    let sem = three_node_preset(0.5, 0.3, -0.3)?;
    println!("noise variances {:?}", sem.noise_variances());
    let data = sem.sample(5000, 42)?;
    let exact = sem.covariance();
    let emp = empirical_covariance(&data)?;
    for (x, y) in [("A", "B"), ("A", "C"), ("B", "C")] {
        println!("rho_{x}{y}  exact {:+.3}  sampled {:+.3}", exact.get(x, y)?, emp.get(x, y)?);
    }
    let mut head = Vec::new();
    data.select_rows(&[0, 1, 2]).write_csv(&mut head)?;
    print!("{}", String::from_utf8_lossy(&head));
    Ok(())
}
