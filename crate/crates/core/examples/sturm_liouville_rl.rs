//! Nabla (Riemann-Liouville) Sturm-Liouville problem with variable
//! coefficients: assemble, solve, and inspect the eigenpairs.

use dfsl::assembly::{assemble_l1, sample_coefficients, weighted_inner, CoefficientSpec, Profile};
use dfsl::eigensolve::{residual_check, solve_problem};
use dfsl::{FractionalOrder, Grid};

fn main() -> Result<(), dfsl::Error> {
    let grid = Grid::nabla(0, 33)?;
    let n = grid.size();
    let ts: Vec<f64> = grid.points().map(|t| t as f64 / n as f64).collect();
    let spec = CoefficientSpec {
        p: Profile::Values(ts.iter().map(|t| 1.0 + t).collect()),
        q: Profile::Values(ts.iter().map(|t| 0.5 * (6.0 * t).sin()).collect()),
        r: Profile::Values(ts.iter().map(|t| 2.0 - t).collect()),
    };
    let coeffs = sample_coefficients(&spec, &grid)?;

    for mu in [0.3, 0.6, 0.9, 1.0] {
        let problem = assemble_l1(&coeffs, &grid, FractionalOrder::new(mu)?)?;
        let d = solve_problem(&problem)?;
        let r = problem.weight();
        let mut ortho: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                ortho = ortho.max(weighted_inner(&d.vector(i), &d.vector(j), r)?.abs());
            }
        }
        println!(
            "mu = {mu:<4} lowest eigenvalues {:?}  residual {:.1e}  max |<x_i,x_j>_r| {:.1e}",
            d.values()[..4].iter().map(|v| (v * 1e6).round() / 1e6).collect::<Vec<_>>(),
            residual_check(&problem, &d)?,
            ortho,
        );
    }
    Ok(())
}
