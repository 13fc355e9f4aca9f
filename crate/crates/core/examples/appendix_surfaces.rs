//! CIMD surfaces for the Markov chain (α₂ = 0) and the collider (α₁ = 0).

use cimd::sweep::{run_grid, GridSpec, SURFACE_STEPS};

fn main() -> cimd::Result<()> {
    for (name, spec) in [
        ("chain A->B->C, CIMD(A,C|B ; A,C)", GridSpec::markov_chain_surface(SURFACE_STEPS)),
        ("collider A->C<-B, CIMD(A,B ; A,B|C)", GridSpec::collider_surface(SURFACE_STEPS)),
    ] {
        let grid = run_grid(&spec)?;
        let values: Vec<f64> = grid.ok_cells().map(|c| c.value).collect();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let infeasible = grid.cells.len() - values.len();
        println!("{name}: min {min:+.4}, max {max:+.2e}, {infeasible} infeasible cells");
    }
    Ok(())
}
