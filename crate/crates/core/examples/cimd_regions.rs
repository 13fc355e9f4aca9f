//! Text map of the sign of CIMD((A,C|∅), (B,C|∅)) with α₁ = 0.5.
//! `-` negative, `+` positive, `.` below 1e-4 in magnitude.

use cimd::{cimd, three_node_preset, CiTest};

fn main() -> cimd::Result<()> {
    let t1 = CiTest::marginal("A", "C")?;
    let t2 = CiTest::marginal("B", "C")?;
    let steps = 21;
    let at = |i: usize| -0.5 + (i as f64 + 0.5) / steps as f64;
    println!("rows: alpha2 from +0.5 down to -0.5; columns: beta from -0.5 to +0.5");
    for r in (0..steps).rev() {
        let line: String = (0..steps)
            .map(|c| {
                let cov = three_node_preset(0.5, at(r), at(c)).map(|s| s.covariance());
                match cov.and_then(|cov| cimd(&cov, &t1, &t2)) {
                    Ok(v) if v.raw.abs() < 1e-4 => '.',
                    Ok(v) if v.raw < 0.0 => '-',
                    Ok(_) => '+',
                    Err(_) => '?',
                }
            })
            .collect();
        println!("{line}");
    }
    let v = cimd(&three_node_preset(0.5, 0.3, -0.3)?.covariance(), &t1, &t2)?;
    println!("at (0.5, 0.3, -0.3): CIMD {:+.5}, I(A:C) {:.5}, after projection {:.5}", v.raw, v.i_p_t1, v.i_proj_t1);
    Ok(())
}
