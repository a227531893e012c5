//! Row norms and the l2,p pseudo-norm.
//!
//! `‖Y‖₂,ₚ = (Σᵢ ‖yⁱ‖₂ᵖ)^{1/p}` is a norm only at `p = 1`; for `p < 1` it
//! violates the triangle inequality. Everything here works with the p-th
//! power `Σᵢ ‖yⁱ‖₂ᵖ`, which is what the solver minimizes.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Exponent};

/// Euclidean norm of every row.
pub fn row_l2_norms(y: &DenseMatrix) -> Vec<f64> {
    y.row_iter()
        .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect()
}

/// Squared Euclidean norm of every row.
pub fn row_sq_norms(y: &DenseMatrix) -> Vec<f64> {
    y.row_iter().map(|r| r.iter().map(|v| v * v).sum::<f64>()).collect()
}

/// `Σᵢ ‖yⁱ‖₂ᵖ`. At `p = 1` this is exactly the l2,1 norm.
pub fn l2p_power(y: &DenseMatrix, p: Exponent) -> f64 {
    let p = p.value();
    row_l2_norms(y)
        .into_iter()
        .map(|r| if p == 1.0 { r } else { r.powf(p) })
        .sum()
}

/// `Σᵢ (‖yⁱ‖₂² + ε)^{p/2}`, the objective whose majorizer the smoothed
/// weights describe. Equals [`l2p_power`] at `ε = 0`.
pub fn smoothed_l2p_power(y: &DenseMatrix, p: Exponent, epsilon: f64) -> f64 {
    let half_p = p.value() / 2.0;
    row_sq_norms(y).into_iter().map(|s| (s + epsilon).powf(half_p)).sum()
}

/// `φ(t) = 2t/(2−p) − p·t^{2/p}/(2−p) − 1`.
///
/// Non-positive on `t > 0` with its only zero at `t = 1`; this is the scalar
/// fact behind the per-row descent inequality of the reweighting iteration.
pub fn phi(t: f64, p: Exponent) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain {
            name: "t",
            value: t,
            requirement: "t > 0",
        });
    }
    let p = p.value();
    Ok((2.0 * t - p * t.powf(2.0 / p)) / (2.0 - p) - 1.0)
}
