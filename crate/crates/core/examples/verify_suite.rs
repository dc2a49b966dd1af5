//! Runs the default verification sweep and prints a per-check summary.
//! Pass an output path to also write the JSON report.

use dfsl::verify::{run_suite, SuiteConfig};

fn main() -> Result<(), dfsl::Error> {
    let report = run_suite(&SuiteConfig::default())?;
    let mut by_name = std::collections::BTreeMap::<&str, (usize, usize, f64)>::new();
    for r in &report.results {
        let entry = by_name.entry(r.name.as_str()).or_default();
        entry.0 += 1;
        entry.1 += usize::from(r.passed());
        entry.2 = entry.2.max(r.observed);
    }
    for (name, (total, passed, worst)) in by_name {
        println!("{name:<22} {passed:>4}/{total:<4} worst observed {worst:.3e}");
    }
    println!("{} checks, {} failed", report.summary.total, report.summary.failed);
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, report.to_json()?)?;
        println!("report written to {path}");
    }
    Ok(())
}
