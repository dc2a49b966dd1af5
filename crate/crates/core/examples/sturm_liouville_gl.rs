//! Delta (Grünwald-Letnikov) Sturm-Liouville problem on a grid with step h.
//! Prints the lowest eigenvalues as the order varies.

use dfsl::assembly::assemble_l2;
use dfsl::eigensolve::solve_problem;
use dfsl::{Coefficients, FractionalOrder, Grid};

fn main() -> Result<(), dfsl::Error> {
    let n = 63;
    let grid = Grid::delta(n, 1.0 / n as f64)?;
    let coeffs = Coefficients::constant(grid.size(), 1.0, 0.0, 1.0)?;

    println!("{:>6} {:>14} {:>14} {:>14}", "mu", "lambda_1", "lambda_2", "lambda_3");
    for i in 1..=10 {
        let mu = FractionalOrder::new(f64::from(i) / 10.0)?;
        let d = solve_problem(&assemble_l2(&coeffs, &grid, mu)?)?;
        let v = d.values();
        println!("{:>6} {:>14.6} {:>14.6} {:>14.6}", mu, v[0], v[1], v[2]);
    }
    Ok(())
}
