//! Diagonal reweighting matrices and the strategies for degenerate rows.
//!
//! The iteration reweights row `i` by `p / (2‖yⁱ‖^{2−p})`, which is undefined
//! when a row is exactly zero. How that case is handled is a pluggable
//! [`WeightPolicy`]; the built-in policies are registered by name in a
//! [`PolicyRegistry`] so callers (and the CLI) pick one at runtime.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Exponent};
use crate::norms::row_sq_norms;

/// Default smoothing used by [`Smoothed`].
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Strategy turning a row's squared norm into an inverse weight `1/dᵢ`.
///
/// Implementations work with the inverse because that is what enters
/// `D⁻¹Mᵀ(MD⁻¹Mᵀ)⁻¹B`, and because a zero inverse weight (a pinned row) is
/// representable while an infinite weight is not.
pub trait WeightPolicy: Send + Sync + fmt::Debug {
    /// Registry key.
    fn name(&self) -> &'static str;

    /// One-line description for help output.
    fn summary(&self) -> &'static str;

    /// Rejects smoothing values the policy cannot work with.
    fn validate_epsilon(&self, epsilon: f64) -> Result<()> {
        if epsilon >= 0.0 && epsilon.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain {
                name: "epsilon",
                value: epsilon,
                requirement: "epsilon >= 0",
            })
        }
    }

    /// Perturbation actually added to squared row norms for a configured
    /// `epsilon`.
    fn effective_epsilon(&self, epsilon: f64, _p: Exponent) -> f64 {
        epsilon
    }

    /// Inverse weight `1/dᵢ` for row `row` with squared norm `sq_norm`, given
    /// the effective perturbation. Must be finite and non-negative; zero pins
    /// the row at zero.
    fn inverse_weight(&self, row: usize, sq_norm: f64, p: Exponent, epsilon: f64) -> Result<f64>;
}

/// `2 (s + ε)^{(2−p)/2} / p`, the inverse of the smoothed weight.
fn smoothed_inverse(sq_norm: f64, p: Exponent, epsilon: f64) -> f64 {
    let p = p.value();
    let base = sq_norm + epsilon;
    if p == 1.0 {
        2.0 * base.sqrt()
    } else {
        2.0 * base.powf((2.0 - p) / 2.0) / p
    }
}

/// Exact weights; a zero row with `ε = 0` is an error.
#[derive(Debug, Clone, Copy, Default)]
pub struct Strict;

impl WeightPolicy for Strict {
    fn name(&self) -> &'static str {
        "strict"
    }

    fn summary(&self) -> &'static str {
        "exact weights, fail on a zero row when epsilon is 0"
    }

    fn inverse_weight(&self, row: usize, sq_norm: f64, p: Exponent, epsilon: f64) -> Result<f64> {
        if sq_norm + epsilon == 0.0 {
            return Err(Error::DegenerateRow { row });
        }
        Ok(smoothed_inverse(sq_norm, p, epsilon))
    }
}

/// Perturbed weights `p / (2(‖yⁱ‖² + ε)^{(2−p)/2})` with `ε > 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Smoothed;

impl WeightPolicy for Smoothed {
    fn name(&self) -> &'static str {
        "smoothed"
    }

    fn summary(&self) -> &'static str {
        "perturb every squared row norm by epsilon (requires epsilon > 0)"
    }

    fn validate_epsilon(&self, epsilon: f64) -> Result<()> {
        if epsilon > 0.0 && epsilon.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain {
                name: "epsilon",
                value: epsilon,
                requirement: "epsilon > 0 for the smoothed policy",
            })
        }
    }

    fn inverse_weight(&self, row: usize, sq_norm: f64, p: Exponent, epsilon: f64) -> Result<f64> {
        self.validate_epsilon(epsilon)?;
        let inv = smoothed_inverse(sq_norm, p, epsilon);
        if inv > 0.0 {
            Ok(inv)
        } else {
            // epsilon underflowed against the power
            Err(Error::DegenerateRow { row })
        }
    }
}

/// [`Smoothed`] with the perturbation raised to `1/p`, i.e. `ε^{1/p}` is added
/// to every squared row norm.
///
/// The extra mass a zero row contributes to the smoothed objective is then
/// `ε^{1/2}` for every `p`, instead of `ε^{p/2}`, which for small `p` is large
/// enough to make the unsmoothed objective drift upward near convergence.
/// Identical to [`Smoothed`] at `p = 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScaledSmoothed;

impl WeightPolicy for ScaledSmoothed {
    fn name(&self) -> &'static str {
        "smoothed-scaled"
    }

    fn summary(&self) -> &'static str {
        "perturb every squared row norm by epsilon^(1/p) (requires epsilon > 0)"
    }

    fn validate_epsilon(&self, epsilon: f64) -> Result<()> {
        Smoothed.validate_epsilon(epsilon)
    }

    fn effective_epsilon(&self, epsilon: f64, p: Exponent) -> f64 {
        epsilon.powf(1.0 / p.value()).max(f64::MIN_POSITIVE)
    }

    fn inverse_weight(&self, row: usize, sq_norm: f64, p: Exponent, epsilon: f64) -> Result<f64> {
        Smoothed.inverse_weight(row, sq_norm, p, epsilon)
    }
}

/// Sets the inverse weight of a zero row to `2‖yⁱ‖^{2−p}/p = 0`, freezing the
/// row at zero for the rest of the run.
#[derive(Debug, Clone, Copy, Default)]
pub struct InvertZero;

impl WeightPolicy for InvertZero {
    fn name(&self) -> &'static str {
        "invert-zero"
    }

    fn summary(&self) -> &'static str {
        "evaluate the inverse weight directly; zero rows stay pinned at zero"
    }

    fn inverse_weight(&self, _row: usize, sq_norm: f64, p: Exponent, epsilon: f64) -> Result<f64> {
        Ok(smoothed_inverse(sq_norm, p, epsilon))
    }
}

/// Name-keyed collection of weight policies.
#[derive(Clone)]
pub struct PolicyRegistry {
    policies: BTreeMap<&'static str, Arc<dyn WeightPolicy>>,
}

impl PolicyRegistry {
    pub fn empty() -> Self {
        Self {
            policies: BTreeMap::new(),
        }
    }

    /// Registry holding `strict`, `smoothed`, `smoothed-scaled` and
    /// `invert-zero`.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register(Arc::new(Strict));
        reg.register(Arc::new(Smoothed));
        reg.register(Arc::new(ScaledSmoothed));
        reg.register(Arc::new(InvertZero));
        reg
    }

    /// Adds a policy, replacing any previous one with the same name.
    pub fn register(&mut self, policy: Arc<dyn WeightPolicy>) -> Option<Arc<dyn WeightPolicy>> {
        self.policies.insert(policy.name(), policy)
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn WeightPolicy>> {
        self.policies
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownPolicy(name.to_owned()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.policies.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn WeightPolicy>> {
        self.policies.values()
    }
}

impl Default for PolicyRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl fmt::Debug for PolicyRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.policies.keys()).finish()
    }
}

/// Diagonal weight matrix `D`, stored through its inverse.
///
/// Every weight `dᵢ` is positive; rows pinned by [`InvertZero`] carry an
/// infinite weight and a zero inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDiagonal {
    inverse: Vec<f64>,
    epsilon: f64,
}

impl WeightDiagonal {
    /// `D = I`, the starting weights of the iteration.
    pub fn identity(m: usize) -> Self {
        Self {
            inverse: vec![1.0; m],
            epsilon: 0.0,
        }
    }

    /// Builds from explicit positive weights `dᵢ`.
    pub fn from_entries(entries: &[f64]) -> Result<Self> {
        let inverse = entries
            .iter()
            .map(|&d| {
                if d > 0.0 && d.is_finite() {
                    Ok(1.0 / d)
                } else {
                    Err(Error::Domain {
                        name: "weight",
                        value: d,
                        requirement: "weights must be positive and finite",
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { inverse, epsilon: 0.0 })
    }

    pub fn len(&self) -> usize {
        self.inverse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inverse.is_empty()
    }

    /// Effective perturbation the weights were built with.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Diagonal of `D⁻¹`.
    pub fn inverse(&self) -> &[f64] {
        &self.inverse
    }

    /// Diagonal of `D`; pinned rows report `f64::INFINITY`.
    pub fn entries(&self) -> Vec<f64> {
        self.inverse
            .iter()
            .map(|&v| if v == 0.0 { f64::INFINITY } else { 1.0 / v })
            .collect()
    }

    /// Number of rows pinned at zero.
    pub fn pinned(&self) -> usize {
        self.inverse.iter().filter(|&&v| v == 0.0).count()
    }

    /// `Tr(Yᵀ D Y) = Σᵢ dᵢ ‖yⁱ‖²`, skipping pinned rows (which are zero).
    pub fn quadratic_form(&self, y: &DenseMatrix) -> f64 {
        assert_eq!(y.rows(), self.len());
        row_sq_norms(y)
            .into_iter()
            .zip(&self.inverse)
            .filter(|(_, &inv)| inv > 0.0)
            .map(|(s, &inv)| s / inv)
            .sum()
    }
}

/// Builds `D` from the rows of `y` under `policy`. `epsilon` is the
/// configured smoothing; the policy maps it to the perturbation it applies.
pub fn build_weights(y: &DenseMatrix, p: Exponent, epsilon: f64, policy: &dyn WeightPolicy) -> Result<WeightDiagonal> {
    policy.validate_epsilon(epsilon)?;
    let epsilon = policy.effective_epsilon(epsilon, p);
    let inverse = row_sq_norms(y)
        .into_iter()
        .enumerate()
        .map(|(i, s)| policy.inverse_weight(i, s, p, epsilon))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightDiagonal { inverse, epsilon })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> Exponent {
        Exponent::new(v).unwrap()
    }

    #[test]
    fn direct_formula() {
        // row norms 4 and 1
        let y = DenseMatrix::from_rows(&[[4.0, 0.0], [0.0, 1.0]]).unwrap();
        let w = build_weights(&y, p(0.5), 0.0, &Strict).unwrap();
        let d = w.entries();
        assert!((d[0] - 0.03125).abs() < 1e-15);
        assert!((d[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn p_one_gives_l21_weights() {
        let y = DenseMatrix::from_rows(&[[3.0, 4.0], [0.0, 2.0], [0.1, 0.0]]).unwrap();
        let d = build_weights(&y, Exponent::ONE, 0.0, &Strict).unwrap().entries();
        for (di, r) in d.iter().zip([5.0, 2.0, 0.1]) {
            assert!((di - 1.0 / (2.0 * r)).abs() <= 1e-12 * di);
        }
    }

    #[test]
    fn zero_row_per_policy() {
        let y = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 0.0]]).unwrap();
        assert_eq!(
            build_weights(&y, p(0.5), 0.0, &Strict).unwrap_err(),
            Error::DegenerateRow { row: 1 }
        );
        assert!(build_weights(&y, p(0.5), 0.0, &Smoothed).is_err());

        let w = build_weights(&y, p(0.5), 1e-8, &Smoothed).unwrap();
        let expect = 0.5 / (2.0 * 1e-8f64.powf(0.75));
        let got = w.entries()[1];
        assert!(got.is_finite() && got > 0.0);
        assert!((got - expect).abs() <= 1e-12 * expect);
        // strict with positive epsilon is just the smoothed formula
        assert_eq!(build_weights(&y, p(0.5), 1e-8, &Strict).unwrap(), w);

        let pinned = build_weights(&y, p(0.5), 0.0, &InvertZero).unwrap();
        assert_eq!(pinned.inverse()[1], 0.0);
        assert_eq!(pinned.pinned(), 1);
        assert_eq!(pinned.entries()[1], f64::INFINITY);
    }

    #[test]
    fn smoothing_vanishes_as_epsilon_shrinks() {
        let y = DenseMatrix::from_rows(&[[0.3, 0.4]]).unwrap();
        let exact = build_weights(&y, p(0.25), 0.0, &Strict).unwrap().entries()[0];
        let near = build_weights(&y, p(0.25), 1e-14, &Smoothed).unwrap().entries()[0];
        assert!((exact - near).abs() <= 1e-11 * exact);
    }

    #[test]
    fn trace_identity_exact_weights() {
        let y = DenseMatrix::from_rows(&[[1.0, -2.0], [0.5, 0.25], [3.0, 0.0]]).unwrap();
        for pv in [0.1, 0.5, 0.9, 1.0] {
            let w = build_weights(&y, p(pv), 0.0, &Strict).unwrap();
            let lhs = w.quadratic_form(&y);
            let rhs = pv / 2.0 * crate::norms::l2p_power(&y, p(pv));
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        }
    }

    #[test]
    fn scaled_smoothing() {
        let y = DenseMatrix::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        let at_one = build_weights(&y, Exponent::ONE, 1e-12, &ScaledSmoothed).unwrap();
        assert_eq!(at_one, build_weights(&y, Exponent::ONE, 1e-12, &Smoothed).unwrap());
        let w = build_weights(&y, p(0.25), 1e-12, &ScaledSmoothed).unwrap();
        assert!((w.epsilon() - 1e-48).abs() <= 1e-60);
        assert!(w.inverse()[0] > 0.0);
        // underflow clamps to the smallest normal instead of zero
        let w = build_weights(&y, p(0.01), 1e-12, &ScaledSmoothed).unwrap();
        assert_eq!(w.epsilon(), f64::MIN_POSITIVE);
        assert!(w.inverse()[0] > 0.0);
        assert!(build_weights(&y, p(0.5), 0.0, &ScaledSmoothed).is_err());
    }

    #[test]
    fn registry_lookup() {
        let reg = PolicyRegistry::with_builtins();
        assert_eq!(
            reg.names().collect::<Vec<_>>(),
            ["invert-zero", "smoothed", "smoothed-scaled", "strict"]
        );
        assert_eq!(reg.get("smoothed").unwrap().name(), "smoothed");
        assert_eq!(reg.get("nope").unwrap_err(), Error::UnknownPolicy("nope".into()));
    }

    #[test]
    fn from_entries_rejects_nonpositive() {
        assert!(WeightDiagonal::from_entries(&[1.0, 0.0]).is_err());
        assert_eq!(
            WeightDiagonal::from_entries(&[2.0, 4.0]).unwrap().inverse(),
            &[0.5, 0.25]
        );
    }
}
