//! Iteratively reweighted minimization of the mixed l2,p pseudo-norm
//! (`0 < p ≤ 1`) for joint row-sparse regression and feature selection.
//!
//! The solver handles `min ‖Y‖₂,ₚᵖ s.t. MY = B` for every `p ∈ (0, 1]` with
//! one loop; [`regression`] reduces robust l2,p-loss regression to that form
//! and [`selection`] ranks features by the learned coefficient rows.

pub mod data;
pub mod error;
pub mod matrix;
pub mod norms;
pub mod regression;
pub mod selection;
pub mod solver;
pub mod synthetic;
pub mod weights;

pub use error::{Error, Result};
pub use matrix::{DenseMatrix, Exponent};
pub use regression::{solve_regression, RegressionProblem, RegressionSolution};
pub use selection::{rank_features, select_top_k, support_recovery_rate, FeatureRanking};
pub use solver::{solve, ConstrainedProblem, Solution, SolverConfig, SolverTrace, TraceRecord};
pub use weights::{build_weights, PolicyRegistry, WeightDiagonal, WeightPolicy};
