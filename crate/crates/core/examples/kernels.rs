//! The three coefficient sequences behind every operator, and the identity
//! linking the R-L nabla difference to the G-L weights.
//!
//!     cargo run --example kernels -- 0.4 12

use dfsl::kernels::{gamma, gl_weights, rising, rl_diff_kernel, rl_sum_kernel};
use dfsl::FractionalOrder;

fn main() -> Result<(), dfsl::Error> {
    let mut args = std::env::args().skip(1);
    let mu: f64 = args.next().map_or(0.4, |s| s.parse().expect("mu"));
    let m: usize = args.next().map_or(12, |s| s.parse().expect("m"));
    let order = FractionalOrder::new(mu)?;

    let w = gl_weights(order, m);
    let c = rl_sum_kernel(order, m);
    let e = rl_diff_kernel(order, m);
    let g = gamma(mu)?;

    println!("mu = {mu}");
    println!("{:>4} {:>22} {:>22} {:>22} {:>22}", "k", "gl_weight", "rl_sum", "rl_diff", "Γ(k+μ)/(Γ(μ)k!)");
    for k in 0..=m {
        let direct = rising(k as f64 + 1.0, mu - 1.0)? / g;
        println!("{k:>4} {:>22.15e} {:>22.15e} {:>22.15e} {:>22.15e}", w[k], c[k], e[k], direct);
    }

    let worst = w
        .coeffs()
        .iter()
        .zip(e.coeffs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("max |rl_diff - gl_weight| = {worst:.3e}");
    Ok(())
}
