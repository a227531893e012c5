use l2p_core::synthetic::{gaussian_matrix, rng};
use l2p_core::{solve, ConstrainedProblem, Exponent, SolverConfig};
use l2p_oracle::{convex_reference, local_descent_check, OracleConfig};
use proptest::prelude::*;

const PS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

fn problem(seed: u64, n: usize, m: usize, c: usize, pv: f64) -> ConstrainedProblem {
    let mut r = rng(seed);
    let mm = gaussian_matrix(&mut r, n, m);
    let b = gaussian_matrix(&mut r, n, c);
    ConstrainedProblem::new(mm, b, Exponent::new(pv).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reference_agrees_with_converged_solver(seed in any::<u64>(), n in 1usize..=6, extra in 0usize..=6, c in 1usize..=2) {
        let m = (n + extra).min(12);
        let prob = problem(seed, n, m, c, 1.0);
        let cfg = SolverConfig { max_iters: 100_000, ..SolverConfig::default() };
        let sol = solve(&prob, &cfg).unwrap();
        prop_assert!(sol.converged);
        let ours = sol.objective(Exponent::ONE);
        let (_, reference) = convex_reference(&prob, &OracleConfig::default()).unwrap();
        prop_assert!((ours - reference).abs() <= 1e-3 * reference, "{} vs {}", ours, reference);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn converged_outputs_pass_the_local_check(seed in any::<u64>(), n in 2usize..10, extra in 1usize..20, c in 1usize..=3, pi in 0usize..4) {
        let pv = PS[pi];
        let prob = problem(seed, n, n + extra, c, pv);
        let cfg = SolverConfig::default();
        let sol = solve(&prob, &cfg).unwrap();
        prop_assume!(sol.converged);
        let oc = OracleConfig { epsilon: cfg.effective_epsilon(prob.exponent()), seed, ..OracleConfig::default() };
        prop_assert!(local_descent_check(&prob, &sol.y, 1e-3, 200, &oc));
    }
}
