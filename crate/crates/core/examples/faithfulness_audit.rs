//! λ-strong faithfulness: perturbing α₂ from 0.3 to 0.25 pushes ρ_AC down to λ = 0.1.

use cimd::config::parse_dag;
use cimd::faithfulness::audit;
use cimd::three_node_preset;

fn main() -> cimd::Result<()> {
    let dag = parse_dag("A -> B\nA -> C\nB -> C\n")?;
    for alpha2 in [0.3, 0.25] {
        let cov = three_node_preset(0.5, alpha2, -0.3)?.covariance();
        let found = audit(&cov, &dag, 0.1, 1)?;
        let list: Vec<String> = found
            .iter()
            .map(|v| format!("{} ({:+.3})", v.test, v.partial_correlation))
            .collect();
        println!("alpha2 = {alpha2}: {}", if list.is_empty() { "none".into() } else { list.join(", ") });
    }
    Ok(())
}
