//! At integer order the operators reduce to the classical second difference;
//! the spectrum then has the closed form 2 - 2cos((2k-1)π/(2N+1)).

use dfsl::assembly::{assemble_l1, assemble_l2};
use dfsl::eigensolve::solve_problem;
use dfsl::verify::classical_spectrum;
use dfsl::{Coefficients, FractionalOrder, Grid, GridFamily};

fn main() -> Result<(), dfsl::Error> {
    let n = 16;
    let coeffs = Coefficients::constant(n, 1.0, 0.0, 1.0)?;
    let grid = Grid::with_size(GridFamily::Delta, n, 1.0)?;
    let d = solve_problem(&assemble_l2(&coeffs, &grid, FractionalOrder::ONE)?)?;
    let exact = classical_spectrum(n);
    for (k, (got, want)) in d.values().iter().zip(&exact).enumerate() {
        println!("k = {:>2}  computed {got:.15}  closed form {want:.15}  diff {:.1e}", k + 1, (got - want).abs());
    }

    // Approaching integer order from below.
    let grid = Grid::with_size(GridFamily::Nabla, n, 1.0)?;
    for eps in [1e-1, 1e-2, 1e-4, 1e-8] {
        let d = solve_problem(&assemble_l1(&coeffs, &grid, FractionalOrder::new(1.0 - eps)?)?)?;
        let gap = d.values().iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("mu = 1 - {eps:e}: max spectral distance to integer order {gap:.3e}");
    }
    Ok(())
}
