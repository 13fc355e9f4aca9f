//! Read observations from CSV and run Fisher-Z tests on them.
//!
//!     cargo run --example csv_dataset -- data.csv
//!
//! Without an argument a small dataset is simulated and round-tripped through CSV.

use cimd::{enumerate_tests, fisher_z_test, three_node_preset, Dataset};

fn main() -> cimd::Result<()> {
    let data = match std::env::args().nth(1) {
        Some(path) => Dataset::from_csv_path(path)?,
        None => {
            let mut buf = Vec::new();
            three_node_preset(0.5, 0.0, 0.5)?.sample(200, 11)?.write_csv(&mut buf)?;
            Dataset::read_csv(buf.as_slice())?
        }
    };
    println!("{} rows over {:?}", data.n_rows(), data.columns());
    for test in enumerate_tests(data.columns(), data.n_cols().saturating_sub(2).min(2))? {
        let o = fisher_z_test(&data, &test, 0.05)?;
        println!("{:<10} r {:+.3}  z {:+.3}  {}", test.to_string(), o.r, o.z_stat, if o.reject { "reject" } else { "accept" });
    }
    Ok(())
}
