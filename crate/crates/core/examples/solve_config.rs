//! Library equivalent of `dfsl solve`: read a JSON config, solve, write CSVs.
//!
//!     cargo run --example solve_config -- configs/gl_half.json /tmp/dfsl-out

use std::path::PathBuf;

use dfsl::cli::{load_config, solve};

fn main() -> Result<(), dfsl::Error> {
    let mut args = std::env::args().skip(1);
    let config = args.next().map(PathBuf::from).unwrap_or_else(|| "configs/gl_half.json".into());
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("dfsl-solve"));
    let spec = load_config(&config)?;
    solve(&spec, &out)?;
    println!("form {} mu {} on {} points -> {}", spec.form, spec.mu, spec.grid.size(), out.display());
    Ok(())
}
