//! The unified reweighting iteration for `min ‖Y‖₂,ₚᵖ s.t. MY = B`.
//!
//! Starting from `D₀ = I`, each step solves the weighted least-norm problem
//! `Y_k = D⁻¹Mᵀ(MD⁻¹Mᵀ)⁻¹B` and rebuilds `D` from the rows of `Y_k`. The
//! same loop serves every `p ∈ (0, 1]`; at `p = 1` it is the classical l2,1
//! reweighting. The objective is non-increasing along the iterates.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Exponent};
use crate::norms::{l2p_power, row_sq_norms};
use crate::weights::{build_weights, InvertZero, ScaledSmoothed, WeightDiagonal, WeightPolicy, DEFAULT_EPSILON};

/// `min ‖Y‖₂,ₚᵖ` subject to `MY = B` with `M` of full row rank.
#[derive(Debug, Clone)]
pub struct ConstrainedProblem {
    m: DenseMatrix,
    m_t: DenseMatrix,
    b: DenseMatrix,
    p: Exponent,
}

impl ConstrainedProblem {
    /// Validates shapes and checks that `M` has full row rank with an SVD.
    pub fn new(m: DenseMatrix, b: DenseMatrix, p: Exponent) -> Result<Self> {
        let problem = Self::with_assumed_rank(m, b, p)?;
        let (rows, _) = problem.m.shape();
        let rank = numerical_rank(&problem.m);
        if rank < rows {
            return Err(Error::RankDeficient { rank, rows });
        }
        Ok(problem)
    }

    /// Shape checks only; for callers that know `M` has full row rank by
    /// construction.
    pub(crate) fn with_assumed_rank(m: DenseMatrix, b: DenseMatrix, p: Exponent) -> Result<Self> {
        let (rows, cols) = m.shape();
        if cols < rows {
            return Err(Error::Overdetermined { rows, cols });
        }
        if b.rows() != rows {
            return Err(Error::ShapeMismatch {
                context: "constrained problem right-hand side",
                expected: format!("{rows} rows"),
                actual: format!("{} rows", b.rows()),
            });
        }
        let m_t = m.transpose();
        Ok(Self { m, m_t, b, p })
    }

    /// Constraint matrix `M` (n×m).
    pub fn constraint(&self) -> &DenseMatrix {
        &self.m
    }

    /// Right-hand side `B` (n×c).
    pub fn rhs(&self) -> &DenseMatrix {
        &self.b
    }

    pub fn exponent(&self) -> Exponent {
        self.p
    }

    /// Number of constraints `n`.
    pub fn constraints(&self) -> usize {
        self.m.rows()
    }

    /// Number of unknown rows `m`.
    pub fn unknowns(&self) -> usize {
        self.m.cols()
    }

    /// Number of right-hand-side columns `c`.
    pub fn outputs(&self) -> usize {
        self.b.cols()
    }

    /// Same constraints with another exponent.
    pub fn with_exponent(&self, p: Exponent) -> Self {
        Self { p, ..self.clone() }
    }

    /// Same constraints with another right-hand side.
    pub fn with_rhs(&self, b: DenseMatrix) -> Result<Self> {
        Self::with_assumed_rank(self.m.clone(), b, self.p)
    }

    /// `‖MY − B‖_F`.
    pub fn feasibility_gap(&self, y: &DenseMatrix) -> Result<f64> {
        Ok(self.m.matmul(y)?.sub(&self.b)?.frobenius_norm())
    }

    /// `Mᵀ Λ`.
    pub fn adjoint(&self, lambda: &DenseMatrix) -> Result<DenseMatrix> {
        self.m_t.matmul(lambda)
    }
}

fn numerical_rank(m: &DenseMatrix) -> usize {
    let svd = m.to_nalgebra().svd(false, false);
    let sigma_max = svd.singular_values.max();
    let tol = m.rows().max(m.cols()) as f64 * f64::EPSILON * sigma_max;
    svd.singular_values.iter().filter(|&&s| s > tol).count()
}

/// Stopping rule and degenerate-row handling for [`solve`].
#[derive(Clone)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop once the relative objective reduction drops to this value.
    pub tol_rho: f64,
    /// Weight smoothing; the policy decides how it perturbs squared row norms
    /// (see [`SolverConfig::effective_epsilon`]).
    pub epsilon: f64,
    pub policy: Arc<dyn WeightPolicy>,
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 100,
            tol_rho: 1e-8,
            epsilon: DEFAULT_EPSILON,
            policy: Arc::new(ScaledSmoothed),
            record_trace: true,
        }
    }
}

impl fmt::Debug for SolverConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolverConfig")
            .field("max_iters", &self.max_iters)
            .field("tol_rho", &self.tol_rho)
            .field("epsilon", &self.epsilon)
            .field("policy", &self.policy.name())
            .field("record_trace", &self.record_trace)
            .finish()
    }
}

impl SolverConfig {
    /// Perturbation added to squared row norms at exponent `p`.
    pub fn effective_epsilon(&self, p: Exponent) -> f64 {
        self.policy.effective_epsilon(self.epsilon, p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if !(self.tol_rho > 0.0 && self.tol_rho.is_finite()) {
            return Err(Error::Config(format!("tol_rho must be positive, got {}", self.tol_rho)));
        }
        self.policy.validate_epsilon(self.epsilon)
    }
}

/// One weighted least-norm solve.
#[derive(Debug, Clone)]
pub struct Step {
    pub y: DenseMatrix,
    /// Multiplier `Λ = 2(MD⁻¹Mᵀ)⁻¹B`.
    pub lambda: DenseMatrix,
}

/// `Y = D⁻¹Mᵀ(MD⁻¹Mᵀ)⁻¹B` and `Λ = 2(MD⁻¹Mᵀ)⁻¹B`.
///
/// `Y` is the minimizer of `Tr(YᵀDY)` over `MY = B`. `SingularSystem` means
/// `M` is (numerically) rank deficient on the rows that are not pinned.
pub fn iterate_step(problem: &ConstrainedProblem, weights: &WeightDiagonal) -> Result<Step> {
    let m = problem.constraint();
    if weights.len() != m.cols() {
        return Err(Error::ShapeMismatch {
            context: "iterate_step weights",
            expected: format!("{} entries", m.cols()),
            actual: format!("{} entries", weights.len()),
        });
    }
    let inv = weights.inverse();
    let (n, cols) = m.shape();
    // R from a thin QR of W = D^{-1/2} Mᵀ rather than a Cholesky of WᵀW: once
    // rows collapse the Gram matrix is too ill conditioned to factor directly.
    let root: Vec<f64> = inv.iter().map(|v| v.sqrt()).collect();
    let w = DMatrix::<f64>::from_fn(cols, n, |j, i| root[j] * m.get(i, j));
    let qr = w.qr();
    let r = qr.r();
    let diag_max = r.diagonal().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let floor = n as f64 * f64::EPSILON * diag_max;
    if diag_max == 0.0 || r.diagonal().iter().any(|v| v.abs() <= floor) {
        return Err(Error::SingularSystem);
    }
    let u = r
        .transpose()
        .solve_lower_triangular(&problem.rhs().to_nalgebra())
        .ok_or(Error::SingularSystem)?;
    let z = r.solve_upper_triangular(&u).ok_or(Error::SingularSystem)?;
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem);
    }
    let z = DenseMatrix::from_nalgebra(&z).map_err(|_| Error::SingularSystem)?;
    // Y from D⁻¹Mᵀz rather than D^{-1/2}Qu keeps rows that are collapsing
    // toward zero accurate relative to their own size
    let y = problem.adjoint(&z)?.scale_rows(inv);
    let lambda = z.scale(2.0);
    Ok(Step { y, lambda })
}

/// `‖2D(Y)Y − MᵀΛ‖_F` with `D(Y)` built from `Y` using smoothing `epsilon`.
///
/// Rows whose smoothed norm is exactly zero have no defined weight and are
/// left out.
pub fn kkt_residual(problem: &ConstrainedProblem, y: &DenseMatrix, lambda: &DenseMatrix, epsilon: f64) -> Result<f64> {
    let weights = build_weights(y, problem.exponent(), epsilon.max(0.0), &InvertZero)?;
    kkt_residual_with(problem, y, lambda, &weights)
}

fn kkt_residual_with(
    problem: &ConstrainedProblem,
    y: &DenseMatrix,
    lambda: &DenseMatrix,
    weights: &WeightDiagonal,
) -> Result<f64> {
    let mtl = problem.adjoint(lambda)?;
    if mtl.shape() != y.shape() {
        return Err(Error::ShapeMismatch {
            context: "kkt_residual",
            expected: format!("{}x{}", mtl.rows(), mtl.cols()),
            actual: format!("{}x{}", y.rows(), y.cols()),
        });
    }
    let mut acc = 0.0;
    for (i, &inv) in weights.inverse().iter().enumerate() {
        if inv == 0.0 {
            continue;
        }
        for (yv, gv) in y.row(i).iter().zip(mtl.row(i)) {
            let r = 2.0 * yv / inv - gv;
            acc += r * r;
        }
    }
    Ok(acc.sqrt())
}

/// `(prev − next) / prev`.
pub fn relative_reduction(obj_prev: f64, obj_next: f64) -> Result<f64> {
    if obj_prev.is_nan() || obj_prev <= 0.0 {
        return Err(Error::Domain {
            name: "obj_prev",
            value: obj_prev,
            requirement: "previous objective must be positive",
        });
    }
    Ok((obj_prev - obj_next) / obj_prev)
}

/// Telemetry for one iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    /// Iterate index, starting at 1 for the solve with `D₀ = I`.
    pub k: usize,
    /// `‖Y_k‖₂,ₚᵖ`.
    pub objective: f64,
    /// Relative reduction from iterate `k−1` to `k`; `None` at `k = 1`.
    pub rho: Option<f64>,
    /// `‖2D(Y_k)Y_k − MᵀΛ_k‖_F`.
    pub kkt_residual: f64,
    /// Rows with `‖yⁱ‖²` at or below the effective smoothing (exactly zero
    /// when it is 0).
    pub zero_rows: usize,
    /// `‖MY_k − B‖_F`.
    pub feasibility: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverTrace {
    pub records: Vec<TraceRecord>,
}

impl SolverTrace {
    pub fn objectives(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.objective)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub y: DenseMatrix,
    pub lambda: DenseMatrix,
    pub converged: bool,
    pub iterations: usize,
    pub trace: Option<SolverTrace>,
}

impl Solution {
    pub fn objective(&self, p: Exponent) -> f64 {
        l2p_power(&self.y, p)
    }
}

/// Everything produced by one pass of the loop, including the weights that
/// generated the iterate. Exposed for diagnostics that need consecutive
/// iterates rather than scalar telemetry.
#[derive(Debug, Clone)]
pub struct Iterate {
    pub k: usize,
    pub y: DenseMatrix,
    pub lambda: DenseMatrix,
    /// `D_{k−1}`, the weights this iterate was solved with.
    pub weights: WeightDiagonal,
    pub record: TraceRecord,
}

/// Lazily runs the iteration; stops after `max_iters` items or the first
/// converged iterate (which is yielded). Errors end the sequence.
pub struct Iterates<'a> {
    problem: &'a ConstrainedProblem,
    config: &'a SolverConfig,
    weights: Option<WeightDiagonal>,
    prev_objective: Option<f64>,
    k: usize,
    done: bool,
}

impl Iterates<'_> {
    fn advance(&mut self) -> Result<(Iterate, bool)> {
        let p = self.problem.exponent();
        let weights = match self.weights.take() {
            Some(w) => w,
            None => WeightDiagonal::identity(self.problem.unknowns()),
        };
        self.k += 1;
        let Step { y, lambda } = iterate_step(self.problem, &weights)?;
        let objective = l2p_power(&y, p);
        let rho = match self.prev_objective {
            None => None,
            Some(prev) if prev > 0.0 => Some(relative_reduction(prev, objective)?),
            // Y = 0 is the global minimum; nothing left to reduce.
            Some(_) => Some(0.0),
        };
        let eps = self.config.effective_epsilon(p);
        let kkt = kkt_residual(self.problem, &y, &lambda, eps)?;
        let zero_rows = row_sq_norms(&y).into_iter().filter(|&s| s <= eps).count();
        let feasibility = self.problem.feasibility_gap(&y)?;
        let converged = rho.is_some_and(|r| r <= self.config.tol_rho);
        let record = TraceRecord {
            k: self.k,
            objective,
            rho,
            kkt_residual: kkt,
            zero_rows,
            feasibility,
        };
        if !converged && self.k < self.config.max_iters {
            self.weights = Some(build_weights(&y, p, self.config.epsilon, self.config.policy.as_ref())?);
        }
        self.prev_objective = Some(objective);
        Ok((
            Iterate {
                k: self.k,
                y,
                lambda,
                weights,
                record,
            },
            converged,
        ))
    }
}

impl Iterator for Iterates<'_> {
    type Item = Result<(Iterate, bool)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done || self.k >= self.config.max_iters {
            return None;
        }
        let out = self.advance();
        match &out {
            Ok((_, converged)) => self.done = *converged,
            Err(_) => self.done = true,
        }
        Some(out)
    }
}

/// Iterator over the iterates of [`solve`]. Each item carries a flag that is
/// true on the converged iterate.
pub fn iterates<'a>(problem: &'a ConstrainedProblem, config: &'a SolverConfig) -> Result<Iterates<'a>> {
    config.validate()?;
    Ok(Iterates {
        problem,
        config,
        weights: None,
        prev_objective: None,
        k: 0,
        done: false,
    })
}

/// Runs the iteration until `ρ_k ≤ tol_rho` or `max_iters` solves.
pub fn solve(problem: &ConstrainedProblem, config: &SolverConfig) -> Result<Solution> {
    let mut trace = config.record_trace.then(SolverTrace::default);
    let mut last = None;
    for item in iterates(problem, config)? {
        let (it, converged) = item?;
        if let Some(t) = trace.as_mut() {
            t.records.push(it.record.clone());
        }
        last = Some((it, converged));
    }
    let (it, converged) = last.expect("max_iters >= 1 yields at least one iterate");
    Ok(Solution {
        y: it.y,
        lambda: it.lambda,
        converged,
        iterations: it.k,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::Strict;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn p(v: f64) -> Exponent {
        Exponent::new(v).unwrap()
    }

    fn row(v: &[f64]) -> DenseMatrix {
        DenseMatrix::from_rows(&[v]).unwrap()
    }

    fn gaussian(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DenseMatrix {
        DenseMatrix::from_fn(r, c, |_, _| StandardNormal.sample(rng)).unwrap()
    }

    #[test]
    fn step_single_constraint() {
        let prob = ConstrainedProblem::new(row(&[1.0, 0.0]), row(&[1.0]), p(0.5)).unwrap();
        let s = iterate_step(&prob, &WeightDiagonal::identity(2)).unwrap();
        assert_eq!(s.y.data(), &[1.0, 0.0]);
        assert_eq!(s.lambda.data(), &[2.0]);
    }

    #[test]
    fn step_symmetric_and_weighted_split() {
        let prob = ConstrainedProblem::new(row(&[1.0, 1.0]), row(&[2.0]), p(0.5)).unwrap();
        let s = iterate_step(&prob, &WeightDiagonal::identity(2)).unwrap();
        assert!((s.y.get(0, 0) - 1.0).abs() < 1e-15 && (s.y.get(1, 0) - 1.0).abs() < 1e-15);

        // Closed form for min y1² + 3y2² s.t. y1 + y2 = 2: y = (3/2, 1/2).
        let w = WeightDiagonal::from_entries(&[1.0, 3.0]).unwrap();
        let s = iterate_step(&prob, &w).unwrap();
        assert!((s.y.get(0, 0) - 1.5).abs() < 1e-14);
        assert!((s.y.get(1, 0) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn construction_checks() {
        let p5 = p(0.5);
        assert!(matches!(
            ConstrainedProblem::new(DenseMatrix::zeros(3, 2), DenseMatrix::zeros(3, 1), p5),
            Err(Error::Overdetermined { .. })
        ));
        let dup = DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]]).unwrap();
        assert_eq!(
            ConstrainedProblem::new(dup, DenseMatrix::zeros(2, 1), p5).unwrap_err(),
            Error::RankDeficient { rank: 1, rows: 2 }
        );
        assert!(ConstrainedProblem::new(row(&[1.0, 1.0]), DenseMatrix::zeros(2, 1), p5).is_err());
    }

    #[test]
    fn pinned_rows_can_make_the_system_singular() {
        let prob = ConstrainedProblem::new(row(&[1.0, 0.0]), row(&[1.0]), p(0.5)).unwrap();
        let y = DenseMatrix::zeros(2, 1);
        let w = build_weights(&y, p(0.5), 0.0, &InvertZero).unwrap();
        assert_eq!(iterate_step(&prob, &w).unwrap_err(), Error::SingularSystem);
    }

    #[test]
    fn forced_feasible_set_is_a_fixed_point() {
        let prob = ConstrainedProblem::new(row(&[1.0, 0.0]), row(&[1.0]), p(0.5)).unwrap();
        let sol = solve(&prob, &SolverConfig::default()).unwrap();
        assert!(sol.converged);
        assert_eq!(sol.iterations, 2);
        assert!((sol.y.get(0, 0) - 1.0).abs() < 1e-15);
        assert!(sol.y.get(1, 0).abs() < 1e-15);
        let trace = sol.trace.unwrap();
        assert_eq!(trace.records[0].rho, None);
        assert_eq!(trace.records[1].rho, Some(0.0));
    }

    #[test]
    fn strict_policy_fails_on_exact_zero_row() {
        let prob = ConstrainedProblem::new(row(&[1.0, 0.0]), row(&[1.0]), p(0.5)).unwrap();
        let cfg = SolverConfig {
            epsilon: 0.0,
            policy: Arc::new(Strict),
            ..SolverConfig::default()
        };
        assert_eq!(solve(&prob, &cfg).unwrap_err(), Error::DegenerateRow { row: 1 });
    }

    #[test]
    fn zero_rhs_converges_at_zero() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0, 0.5]]).unwrap();
        let prob = ConstrainedProblem::new(m, DenseMatrix::zeros(1, 2), p(0.5)).unwrap();
        let sol = solve(&prob, &SolverConfig::default()).unwrap();
        assert!(sol.converged);
        assert_eq!(sol.y.frobenius_norm(), 0.0);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.max_iters = 0;
        assert!(cfg.validate().is_err());
        cfg = SolverConfig {
            tol_rho: 0.0,
            ..SolverConfig::default()
        };
        assert!(cfg.validate().is_err());
        cfg = SolverConfig {
            epsilon: 0.0,
            ..SolverConfig::default()
        };
        assert!(cfg.validate().is_err(), "smoothed needs epsilon > 0");
    }

    #[test]
    fn relative_reduction_examples() {
        assert!((relative_reduction(10.0, 9.0).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(relative_reduction(5.0, 5.0).unwrap(), 0.0);
        assert!(relative_reduction(0.0, 1.0).is_err());
        assert!(relative_reduction(-1.0, 1.0).is_err());
    }

    #[test]
    fn kkt_residual_positive_before_convergence() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let prob = ConstrainedProblem::new(gaussian(&mut rng, 4, 10), gaussian(&mut rng, 4, 2), p(0.5)).unwrap();
        let first = iterate_step(&prob, &WeightDiagonal::identity(10)).unwrap();
        let r = kkt_residual(&prob, &first.y, &first.lambda, 1e-12).unwrap();
        assert!(r > 1e-3, "minimum-norm point is not stationary, residual {r}");

        let cfg = SolverConfig {
            tol_rho: 1e-12,
            max_iters: 500,
            ..SolverConfig::default()
        };
        let sol = solve(&prob, &cfg).unwrap();
        let r = kkt_residual(&prob, &sol.y, &sol.lambda, cfg.effective_epsilon(prob.exponent())).unwrap();
        assert!(
            r <= 1e-6 * (1.0 + prob.adjoint(&sol.lambda).unwrap().frobenius_norm()),
            "{r}"
        );
    }

    #[test]
    fn objective_monotone_and_iterates_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for pv in [0.25, 0.5, 0.75, 1.0] {
            let prob = ConstrainedProblem::new(gaussian(&mut rng, 5, 12), gaussian(&mut rng, 5, 2), p(pv)).unwrap();
            let sol = solve(&prob, &SolverConfig::default()).unwrap();
            let trace = sol.trace.unwrap();
            for w in trace.records.windows(2) {
                assert!(w[1].objective <= w[0].objective * (1.0 + 1e-10), "p={pv}: {:?}", w);
            }
            let bnorm = prob.rhs().frobenius_norm();
            assert!(trace.records.iter().all(|r| r.feasibility <= 1e-8 * (1.0 + bnorm)));
        }
    }
}
