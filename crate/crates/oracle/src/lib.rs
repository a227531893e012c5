//! Independent checks for solver output on small problems.
//!
//! Nothing here is used by the solve path. The convex reference runs a
//! projected subgradient method on the feasible affine set, and the local
//! check samples feasible perturbations around a candidate point.

use l2p_core::synthetic::rng;
use l2p_core::{ConstrainedProblem, DenseMatrix, Exponent};
use nalgebra::{DMatrix, LU};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("convex reference needs p = 1, got p = {0}")]
    NotConvex(f64),
    #[error("objective did not stabilize within {evals} evaluations (last window improved by {improvement:e})")]
    NonConvergence { evals: usize, improvement: f64 },
    #[error("invalid oracle configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] l2p_core::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Subgradient iterations allowed in total.
    pub max_evals: usize,
    /// Multiplies the stage radius in the step size.
    pub step_scale: f64,
    /// Subgradient steps per stage.
    pub window: usize,
    /// Stop once a stage improves the best objective by less than this
    /// fraction.
    pub stabilization_tol: f64,
    /// Smoothing added to squared row norms in the local check.
    pub epsilon: f64,
    /// A perturbation counts as descent only if it lowers the smoothed
    /// objective by more than `descent_tol · (1 + f(Y))`.
    pub descent_tol: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_evals: 2_000_000,
            step_scale: 0.5,
            window: 20_000,
            stabilization_tol: 1e-10,
            epsilon: 0.0,
            descent_tol: 1e-9,
            seed: 0x0ac1e,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.max_evals == 0 || self.window == 0 {
            return Err(OracleError::Config("counts must be positive".into()));
        }
        if self.window > self.max_evals {
            return Err(OracleError::Config("window exceeds max_evals".into()));
        }
        for (name, v) in [
            ("step_scale", self.step_scale),
            ("stabilization_tol", self.stabilization_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(OracleError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("epsilon", self.epsilon), ("descent_tol", self.descent_tol)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(OracleError::Config(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }
}

/// Orthogonal projection onto `{Y : MY = B}` and onto the null space of `M`.
struct AffineProjector {
    m: DMatrix<f64>,
    b: DMatrix<f64>,
    gram: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl AffineProjector {
    fn new(problem: &ConstrainedProblem) -> Self {
        let m = problem.constraint().to_nalgebra();
        let gram = (&m * m.transpose()).lu();
        Self {
            m,
            b: problem.rhs().to_nalgebra(),
            gram,
        }
    }

    /// `Z − Mᵀ(MMᵀ)⁻¹MZ`
    fn null(&self, z: &DMatrix<f64>) -> DMatrix<f64> {
        let w = self
            .gram
            .solve(&(&self.m * z))
            .expect("constraint matrix has full row rank");
        z - self.m.transpose() * w
    }

    /// Minimum-norm correction of `Z` back onto the feasible set.
    fn feasible(&self, z: &DMatrix<f64>) -> DMatrix<f64> {
        let w = self
            .gram
            .solve(&(&self.m * z - &self.b))
            .expect("constraint matrix has full row rank");
        z - self.m.transpose() * w
    }
}

fn l21(y: &DMatrix<f64>) -> f64 {
    y.row_iter().map(|r| r.norm()).sum()
}

fn smoothed(y: &DMatrix<f64>, p: f64, eps: f64) -> f64 {
    y.row_iter().map(|r| (r.norm_squared() + eps).powf(p / 2.0)).sum()
}

/// Global minimizer of `‖Y‖₂,₁` subject to `MY = B` by projected
/// subgradient descent.
///
/// Runs in stages of `window` steps. Within a stage the step is
/// `step_scale · R / √(k + 1)`; each new stage restarts from the best point so
/// far with `R` halved, starting from the norm of the minimum-norm feasible
/// point. Stops when a stage improves the best objective by less than
/// `stabilization_tol` relative. Returns the best point and its objective.
pub fn convex_reference(problem: &ConstrainedProblem, cfg: &OracleConfig) -> Result<(DenseMatrix, f64), OracleError> {
    cfg.validate()?;
    if problem.exponent() != Exponent::ONE {
        return Err(OracleError::NotConvex(problem.exponent().value()));
    }
    let proj = AffineProjector::new(problem);
    let mut best = proj.feasible(&DMatrix::zeros(problem.unknowns(), problem.outputs()));
    let mut best_obj = l21(&best);
    let mut radius = best.norm().max(f64::MIN_POSITIVE);
    let mut improvement = f64::INFINITY;
    let mut evals = 0;

    while evals + cfg.window <= cfg.max_evals {
        let stage_start = best_obj;
        let mut y = best.clone();
        for k in 0..cfg.window {
            let mut g = y.clone();
            for mut row in g.row_iter_mut() {
                let n = row.norm();
                if n > 0.0 {
                    row /= n;
                }
            }
            let g = proj.null(&g);
            let gn = g.norm();
            if gn <= 1e-14 {
                // zero projected subgradient: y is optimal
                return Ok((DenseMatrix::from_nalgebra(&y)?, l21(&y)));
            }
            let step = cfg.step_scale * radius / ((k + 1) as f64).sqrt();
            y = proj.feasible(&(y - g * (step / gn)));
            let obj = l21(&y);
            if obj < best_obj {
                best_obj = obj;
                best = y.clone();
            }
        }
        evals += cfg.window;
        improvement = (stage_start - best_obj) / stage_start.max(f64::MIN_POSITIVE);
        if improvement < cfg.stabilization_tol {
            return Ok((DenseMatrix::from_nalgebra(&best)?, best_obj));
        }
        radius /= 2.0;
    }
    Err(OracleError::NonConvergence { evals, improvement })
}

/// Samples `samples` feasible directions `N` (null space of `M`, random
/// length up to `radius`) and tests `Y ± N` against `Y` on the smoothed
/// objective `Σ (‖yⁱ‖² + ε)^{p/2}`.
///
/// True when no sample lowers the objective by more than the configured
/// tolerance. A trivial null space makes the check vacuously true.
pub fn local_descent_check(
    problem: &ConstrainedProblem,
    y: &DenseMatrix,
    radius: f64,
    samples: usize,
    cfg: &OracleConfig,
) -> bool {
    let p = problem.exponent().value();
    let proj = AffineProjector::new(problem);
    let y = y.to_nalgebra();
    let base = smoothed(&y, p, cfg.epsilon);
    let slack = cfg.descent_tol * (1.0 + base);
    let mut rng = rng(cfg.seed);
    let lengths = Uniform::new_inclusive(0.0, radius).expect("radius is a finite non-negative length");
    for _ in 0..samples {
        let z = DMatrix::from_fn(y.nrows(), y.ncols(), |_, _| StandardNormal.sample(&mut rng));
        let n = proj.null(&z);
        let norm = n.norm();
        if norm <= 1e-12 * z.norm() {
            return true;
        }
        let n = n * (rng.sample(lengths) / norm);
        for cand in [&y + &n, &y - &n] {
            if smoothed(&cand, p, cfg.epsilon) < base - slack {
                return false;
            }
        }
    }
    true
}
