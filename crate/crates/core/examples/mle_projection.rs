//! The projection of an empirical distribution equals the composition of per-variable
//! maximum-likelihood fits over a DAG whose Markov class is the CI statement.

use cimd::citest::mle_covariance;
use cimd::mle::{ci_projection_via_mle, ci_structure};
use cimd::sem::Edge;
use cimd::{project_ci, CiTest, LinearSem};

fn main() -> cimd::Result<()> {
    let vars: Vec<String> = ["A", "B", "C", "X"].iter().map(|s| s.to_string()).collect();
    let edges = vec![
        Edge::new("A", "B", 0.4),
        Edge::new("A", "C", 0.3),
        Edge::new("B", "C", -0.2),
        Edge::new("B", "X", 0.5),
        Edge::new("C", "X", 0.3),
    ];
    let sem = LinearSem::standardized(vars, edges)?;
    let data = sem.sample(20_000, 7)?;
    let test = CiTest::new("A", "B", ["C"])?;

    println!("structure: {:?}", ci_structure(data.columns(), &test)?.parent_map());
    let via_fits = ci_projection_via_mle(&data, &test)?;
    let closed = project_ci(&mle_covariance(&data)?, &test)?.projected;
    println!("composed fits:\n{}", via_fits.matrix());
    println!("largest difference from the closed form {:.1e}", (via_fits.matrix() - closed.matrix()).amax());
    Ok(())
}
