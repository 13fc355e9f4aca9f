//! Writes the three α₁ = 0.5 grids (correlation-product sign map, CIMD, FS-CID) as CSV.
//!
//!     cargo run --release --example fig1_sweep -- [out_dir] [steps]

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use cimd::config::SweepPlan;
use cimd::sweep::run_grid;

fn main() -> cimd::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "fig1".into()));
    let steps = args.next().and_then(|s| s.parse().ok()).unwrap_or(21);
    std::fs::create_dir_all(&dir)?;
    for (name, spec) in SweepPlan::fig1(steps).grids {
        let grid = run_grid(&spec)?;
        let ok = grid.ok_cells().count();
        let negative = grid.ok_cells().filter(|c| c.value < 0.0).count();
        let path = dir.join(format!("{name}.csv"));
        grid.write_csv(BufWriter::new(File::create(&path)?))?;
        println!("{}: {ok} cells, {negative} negative", path.display());
    }
    Ok(())
}
