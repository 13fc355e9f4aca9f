//! Project a four-variable Gaussian onto A ⊥ B | C and check what the projection keeps.

use cimd::projection::projection_preserves_conditionals;
use cimd::{conditional_mutual_information, gaussian_kl, partial_correlation, project_ci, CiTest, LabeledCovariance};

fn main() -> cimd::Result<()> {
    #[rustfmt::skip]
    let cov = LabeledCovariance::from_rows(&["A", "B", "C", "X"], &[
        1.0, 0.5, 0.3, 0.4,
        0.5, 1.0, 0.2, 0.6,
        0.3, 0.2, 1.0, 0.1,
        0.4, 0.6, 0.1, 1.0,
    ])?;
    let test = CiTest::new("A", "B", ["C"])?;
    let r = project_ci(&cov, &test)?;
    println!("projected covariance:\n{}", r.projected.matrix());
    println!("rho(A,B|C) before {:+.4}, after {:+.1e}", partial_correlation(&cov, &test)?, partial_correlation(&r.projected, &test)?);
    println!("I(A:B|C)  {:.6}", conditional_mutual_information(&cov, &test)?);
    println!("D(P||P⊥)  {:.6}", gaussian_kl(&cov, &r.projected)?);
    println!("largest change to a kept conditional {:.1e}", projection_preserves_conditionals(&cov, &r).max());
    Ok(())
}
