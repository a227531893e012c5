use l2p_core::norms::l2p_power;
use l2p_core::regression::{build_constrained, objective, residual, solve_regression};
use l2p_core::synthetic::{gaussian_matrix, rng};
use l2p_core::{DenseMatrix, Exponent, RegressionProblem, SolverConfig};
use proptest::prelude::*;

const PS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

fn instance(seed: u64, d: usize, n: usize, c: usize, gamma: f64, pv: f64) -> RegressionProblem {
    let mut r = rng(seed);
    let a = gaussian_matrix(&mut r, d, n);
    let b = gaussian_matrix(&mut r, n, c);
    RegressionProblem::new(a, b, gamma, Exponent::new(pv).unwrap(), false).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn objective_is_the_scaled_stacked_norm(seed in any::<u64>(), d in 1usize..12, n in 1usize..12, c in 1usize..4,
                                            gamma in 0.05f64..20.0, pi in 0usize..4) {
        let rp = instance(seed, d, n, c, gamma, PS[pi]);
        let x = gaussian_matrix(&mut rng(seed ^ 0x5eed), d, c);
        let e = residual(&rp, &x).unwrap().scale(1.0 / gamma);
        let y = DenseMatrix::vstack(&x, &e).unwrap();
        let stacked = rp.alpha() * l2p_power(&y, rp.exponent());
        let direct = objective(&rp, &x).unwrap();
        prop_assert!((stacked - direct).abs() <= 1e-10 * direct.abs().max(1e-300));
        // the stacked point is feasible for the constrained form
        let gap = build_constrained(&rp).feasibility_gap(&y).unwrap();
        prop_assert!(gap <= 1e-10 * (1.0 + rp.targets().frobenius_norm()));
    }

    #[test]
    fn regression_objective_never_increases(seed in any::<u64>(), d in 2usize..30, n in 2usize..20, c in 1usize..3,
                                            gamma in 0.1f64..10.0, pi in 0usize..4) {
        let rp = instance(seed, d, n, c, gamma, PS[pi]);
        let sol = solve_regression(&rp, &SolverConfig::default()).unwrap();
        let history = sol.objective_history(rp.alpha()).unwrap();
        for w in history.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-10));
        }
    }
}
