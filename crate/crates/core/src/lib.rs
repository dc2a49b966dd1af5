//! Discrete fractional Sturm-Liouville operators as finite matrices.
//!
//! The crate builds the Riemann-Liouville nabla and Grünwald-Letnikov delta
//! fractional differences as triangular Toeplitz matrices, assembles the two
//! Sturm-Liouville operators
//!
//! ```text
//! L1 x = ∇_a^μ (p · _b∇^μ x) + q x        on {a+1, …, b-1}
//! L2 x = Δ_-^μ (p · Δ_+^μ x) + q x        on {0, …, N}
//! ```
//!
//! solves `L x = λ r x`, and checks self-adjointness, orthogonality of
//! eigenfunctions and reality of eigenvalues as numeric residuals.
//!
//! ```
//! use dfsl::{assembly, eigensolve, Coefficients, FractionalOrder, Grid};
//!
//! let grid = Grid::delta(15, 1.0)?;
//! let coeffs = Coefficients::constant(grid.size(), 1.0, 0.0, 1.0)?;
//! let problem = assembly::assemble_l2(&coeffs, &grid, FractionalOrder::new(0.5)?)?;
//! let decomp = eigensolve::solve_problem(&problem)?;
//! assert!(decomp.values().iter().all(|&l| l > 0.0));
//! # Ok::<(), dfsl::Error>(())
//! ```
//!
//! Runnable walkthroughs live in `examples/`; the `dfsl` binary wraps the
//! same API for config-driven runs.

pub mod assembly;
pub mod cli;
pub mod eigensolve;
mod error;
pub mod fracops;
pub mod kernels;
pub mod verify;

pub use assembly::{Coefficients, Form, SlProblem};
pub use eigensolve::EigenDecomposition;
pub use error::{Error, Result};
pub use fracops::{Grid, GridFamily, OperatorMatrix};
pub use kernels::{FractionalOrder, KernelKind, ToeplitzKernel};

/// Version string recorded in manifests and reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
