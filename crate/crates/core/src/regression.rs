//! Robust joint-sparse regression reduced to the constrained form.
//!
//! `J(X) = ‖AᵀX − B‖₂,ₚᵖ + γᵖ‖X‖₂,ₚᵖ` is minimized by substituting
//! `E = (AᵀX − B)/γ`, stacking `Y = [X; E]` and solving
//! `min ‖Y‖₂,ₚᵖ s.t. [Aᵀ  −γI] Y = B`. Then `J(X) = γᵖ ‖Y‖₂,ₚᵖ`.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Exponent};
use crate::norms::l2p_power;
use crate::solver::{solve, ConstrainedProblem, Solution, SolverConfig};

/// Data `A` (d×n, one column per sample), targets `B` (n×c), the
/// regularization scale `γ > 0` and the exponent.
#[derive(Debug, Clone)]
pub struct RegressionProblem {
    a: DenseMatrix,
    b: DenseMatrix,
    gamma: f64,
    p: Exponent,
    include_bias: bool,
}

impl RegressionProblem {
    /// With `include_bias`, the last row of `a` must be the all-ones bias
    /// feature (see [`with_bias_row`]). The bias row is regularized like
    /// every other row.
    pub fn new(a: DenseMatrix, b: DenseMatrix, gamma: f64, p: Exponent, include_bias: bool) -> Result<Self> {
        if a.cols() != b.rows() {
            return Err(Error::ShapeMismatch {
                context: "regression samples",
                expected: format!("{} target rows (one per column of A)", a.cols()),
                actual: format!("{} target rows", b.rows()),
            });
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Domain {
                name: "gamma",
                value: gamma,
                requirement: "gamma > 0",
            });
        }
        if include_bias && a.row(a.rows() - 1).iter().any(|&v| v != 1.0) {
            return Err(Error::ShapeMismatch {
                context: "bias row",
                expected: "last row of A all ones".into(),
                actual: "a row with other values".into(),
            });
        }
        Ok(Self {
            a,
            b,
            gamma,
            p,
            include_bias,
        })
    }

    pub fn data(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn targets(&self) -> &DenseMatrix {
        &self.b
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn exponent(&self) -> Exponent {
        self.p
    }

    /// `α = γᵖ`, the weight on the regularizer.
    pub fn alpha(&self) -> f64 {
        self.gamma.powf(self.p.value())
    }

    /// Feature count `d` (including the bias row if present).
    pub fn features(&self) -> usize {
        self.a.rows()
    }

    /// Sample count `n`.
    pub fn samples(&self) -> usize {
        self.a.cols()
    }

    pub fn include_bias(&self) -> bool {
        self.include_bias
    }

    /// Index of the bias row of `X`, if any.
    pub fn bias_row(&self) -> Option<usize> {
        self.include_bias.then(|| self.a.rows() - 1)
    }

    pub fn with_exponent(&self, p: Exponent) -> Self {
        Self { p, ..self.clone() }
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), gamma, self.p, self.include_bias)
    }
}

/// Appends a constant-1 row to `a` (one more feature for every sample).
pub fn with_bias_row(a: &DenseMatrix) -> DenseMatrix {
    let ones = DenseMatrix::new(1, a.cols(), vec![1.0; a.cols()]).expect("non-empty");
    DenseMatrix::vstack(a, &ones).expect("same column count")
}

/// `M = [Aᵀ  −γIₙ]` (n × (d+n)) with the same `B` and `p`.
pub fn build_constrained(rp: &RegressionProblem) -> ConstrainedProblem {
    let n = rp.samples();
    let m = DenseMatrix::hstack(&rp.a.transpose(), &DenseMatrix::identity(n).scale(-rp.gamma)).expect("Aᵀ has n rows");
    // the −γI block gives full row rank for any A
    ConstrainedProblem::with_assumed_rank(m, rp.b.clone(), rp.p).expect("n <= d + n and B has n rows")
}

/// Splits `Y = [X; E]` into its first `d` and last `n` rows.
pub fn split_solution(y: &DenseMatrix, d: usize, n: usize) -> Result<(DenseMatrix, DenseMatrix)> {
    if y.rows() != d + n {
        return Err(Error::ShapeMismatch {
            context: "split_solution",
            expected: format!("{} rows (d + n)", d + n),
            actual: format!("{} rows", y.rows()),
        });
    }
    y.split_rows(d)
}

/// `AᵀX − B`.
pub fn residual(rp: &RegressionProblem, x: &DenseMatrix) -> Result<DenseMatrix> {
    rp.a.transpose().matmul(x)?.sub(&rp.b)
}

/// `J(X) = ‖AᵀX − B‖₂,ₚᵖ + γᵖ‖X‖₂,ₚᵖ`.
pub fn objective(rp: &RegressionProblem, x: &DenseMatrix) -> Result<f64> {
    Ok(l2p_power(&residual(rp, x)?, rp.p) + rp.alpha() * l2p_power(x, rp.p))
}

#[derive(Debug, Clone)]
pub struct RegressionSolution {
    /// Coefficients, d×c.
    pub x: DenseMatrix,
    /// Scaled residual `(AᵀX − B)/γ` as carried by the solver, n×c.
    pub e: DenseMatrix,
    /// `J(X)`.
    pub objective: f64,
    pub solution: Solution,
}

impl RegressionSolution {
    /// `J(X_k) = γᵖ ‖Y_k‖₂,ₚᵖ` along the solver trace, when one was recorded.
    pub fn objective_history(&self, alpha: f64) -> Option<Vec<f64>> {
        self.solution
            .trace
            .as_ref()
            .map(|t| t.objectives().map(|o| alpha * o).collect())
    }
}

pub fn solve_regression(rp: &RegressionProblem, config: &SolverConfig) -> Result<RegressionSolution> {
    let problem = build_constrained(rp);
    let solution = solve(&problem, config)?;
    let (x, e) = split_solution(&solution.y, rp.features(), rp.samples())?;
    let objective = objective(rp, &x)?;
    Ok(RegressionSolution {
        x,
        e,
        objective,
        solution,
    })
}
