//! Property tests over the public API.

use dfsl::assembly::{assemble, weighted_inner};
use dfsl::eigensolve::{generalized_symmetric_eigen, residual_check};
use dfsl::fracops::{apply_operator, delta_left_diff_matrix, delta_right_diff_matrix, sbp_residual};
use dfsl::kernels::gl_weights;
use dfsl::{Coefficients, Form, FractionalOrder, Grid, GridFamily};
use proptest::prelude::*;

fn coeff_vectors(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(0.2f64..3.0, n),
        prop::collection::vec(-2.0f64..2.0, n),
        prop::collection::vec(0.2f64..3.0, n),
    )
}

fn problem() -> impl Strategy<Value = (Form, f64, f64, Vec<f64>, Vec<f64>, Vec<f64>)> {
    (1usize..24, prop_oneof![Just(Form::Rl), Just(Form::Gl)], 0.01f64..=1.0, 0.2f64..2.0)
        .prop_flat_map(|(n, form, mu, h)| {
            coeff_vectors(n).prop_map(move |(p, q, r)| (form, mu, h, p, q, r))
        })
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_is_certified((form, mu, h, p, q, r) in problem()) {
        let n = p.len();
        let family = if form == Form::Rl { GridFamily::Nabla } else { GridFamily::Delta };
        let grid = Grid::with_size(family, n, h).unwrap();
        let c = Coefficients::new(p, q, r.clone()).unwrap();
        let prob = assemble(form, &c, &grid, FractionalOrder::new(mu).unwrap()).unwrap();
        let m = prob.matrix.entries();
        prop_assert_eq!(m, &m.transpose());

        let d = generalized_symmetric_eigen(m, &r).unwrap();
        prop_assert!(residual_check(&prob, &d).unwrap() <= 1e-9);
        prop_assert!(d.values().windows(2).all(|w| w[0] <= w[1]));
        for i in 0..n {
            for j in 0..n {
                let g = weighted_inner(&d.vector(i), &d.vector(j), &r).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g - want).abs() <= 1e-10);
            }
        }
        let trace: f64 = (0..n).map(|i| m[(i, i)] / r[i]).sum();
        let sum: f64 = d.values().iter().sum();
        prop_assert!((sum - trace).abs() <= 1e-9 * trace.abs().max(1.0));
    }

    #[test]
    fn summation_by_parts_holds(
        n in 1usize..64,
        mu in 0.01f64..=1.0,
        h in 0.1f64..3.0,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let grid = Grid::delta(n as i64 - 1, h).unwrap();
        let mu = FractionalOrder::new(mu).unwrap();
        let left = delta_left_diff_matrix(&grid, mu).unwrap();
        let right = delta_right_diff_matrix(&grid, mu).unwrap();
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let bound = 1e-12 * norm(&u) * norm(&v) * left.norm_inf();
        prop_assert!(sbp_residual(&left, &right, &u, &v).unwrap() <= bound);

        let w = gl_weights(mu, n - 1);
        let free = apply_operator(w.coeffs(), h.powf(-mu.get()), &u).unwrap();
        let dense = left.apply(&u).unwrap();
        let scale = dense.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300);
        for (a, b) in free.iter().zip(&dense) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
    }
}
