//! Left and right fractional differences as Toeplitz matrices, summation by
//! parts, and matrix-free application.

use dfsl::fracops::{
    apply_operator, delta_left_diff_matrix, delta_right_diff_matrix, nabla_left_diff_matrix,
    nabla_left_sum_matrix, nabla_right_diff_matrix, sbp_residual,
};
use dfsl::kernels::gl_weights;
use dfsl::{FractionalOrder, Grid};

fn main() -> Result<(), dfsl::Error> {
    let mu = FractionalOrder::new(0.5)?;

    let nabla = Grid::nabla(0, 6)?;
    println!("nabla grid points: {:?}", nabla.points().collect::<Vec<_>>());
    println!("left fractional sum:{:.4}", nabla_left_sum_matrix(&nabla, mu)?.entries());
    let left = nabla_left_diff_matrix(&nabla, mu)?;
    let right = nabla_right_diff_matrix(&nabla, mu)?;
    println!("left difference:{:.4}", left.entries());
    println!("right difference (transpose):{:.4}", right.entries());

    let u: Vec<f64> = nabla.points().map(|t| (t as f64).sin()).collect();
    let v: Vec<f64> = nabla.points().map(|t| 1.0 / (1.0 + t as f64)).collect();
    println!("nabla summation-by-parts residual: {:.3e}", sbp_residual(&left, &right, &u, &v)?);

    let delta = Grid::delta(40, 0.05)?;
    let left = delta_left_diff_matrix(&delta, mu)?;
    let right = delta_right_diff_matrix(&delta, mu)?;
    let x: Vec<f64> = delta.points().map(|t| (t as f64 * delta.h).powi(2)).collect();
    let y: Vec<f64> = delta.points().map(|t| (t as f64 * delta.h).cos()).collect();
    println!("delta summation-by-parts residual: {:.3e}", sbp_residual(&left, &right, &x, &y)?);

    // Matrix-free: same numbers without forming the matrix.
    let w = gl_weights(mu, delta.size() - 1);
    let free = apply_operator(w.coeffs(), delta.h.powf(-mu.get()), &x)?;
    let dense = left.apply(&x)?;
    let diff = free.iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("matrix-free vs dense: {diff:.3e}");
    println!("half-derivative of t^2 at t = 2: {:.6}", dense[40]);
    Ok(())
}
