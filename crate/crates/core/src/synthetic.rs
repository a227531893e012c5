//! Seeded synthetic instances with planted row-sparse structure.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::data::Dataset;
use crate::matrix::DenseMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of independent standard normal draws.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng)).expect("normal draws are finite")
}

/// Regression data generated by a coefficient matrix with few nonzero rows.
#[derive(Debug, Clone)]
pub struct PlantedRegression {
    /// d×n, columns are samples.
    pub a: DenseMatrix,
    /// n×c, `AᵀX_true + noise`.
    pub b: DenseMatrix,
    pub x_true: DenseMatrix,
    /// Sorted indices of the nonzero rows of `x_true`.
    pub support: Vec<usize>,
}

/// `A` standard normal, `support` random rows of `X_true` with entries of
/// magnitude in `[1, 2]` and random sign, Gaussian noise of std `noise_std`.
pub fn planted_regression(
    d: usize,
    n: usize,
    c: usize,
    support: usize,
    noise_std: f64,
    seed: u64,
) -> PlantedRegression {
    assert!(support <= d, "support larger than feature count");
    let mut rng = rng(seed);
    let a = gaussian_matrix(&mut rng, d, n);
    let mut rows = sample(&mut rng, d, support).into_vec();
    rows.sort_unstable();
    let mut x = vec![0.0; d * c];
    for &i in &rows {
        for v in &mut x[i * c..(i + 1) * c] {
            let magnitude = rng.random_range(1.0..2.0);
            *v = if rng.random_bool(0.5) { magnitude } else { -magnitude };
        }
    }
    let x_true = DenseMatrix::new(d, c, x).expect("finite");
    let noise = gaussian_matrix(&mut rng, n, c).scale(noise_std);
    let b = a
        .transpose()
        .matmul(&x_true)
        .expect("shapes")
        .add(&noise)
        .expect("shapes");
    PlantedRegression {
        a,
        b,
        x_true,
        support: rows,
    }
}

/// Classification data in which only `informative` features depend on the
/// class.
#[derive(Debug, Clone)]
pub struct PlantedClassification {
    pub dataset: Dataset,
    pub support: Vec<usize>,
}

/// `n` samples over `classes` balanced classes and `d` features. Feature `j`
/// in the support has class-conditional mean `±separation` (sign drawn per
/// class and feature, never the same for all classes) plus unit Gaussian
/// noise; all other features are pure noise.
pub fn planted_classification(
    n: usize,
    d: usize,
    classes: usize,
    informative: usize,
    separation: f64,
    seed: u64,
) -> PlantedClassification {
    assert!(classes >= 1 && n >= classes && informative <= d);
    let mut rng = rng(seed);
    let mut support = sample(&mut rng, d, informative).into_vec();
    support.sort_unstable();
    // signs per feature across classes; a constant pattern would only shift
    // the feature and carry no class information, so it is redrawn
    let patterns: Vec<Vec<bool>> = (0..informative)
        .map(|_| loop {
            let signs: Vec<bool> = (0..classes).map(|_| rng.random_bool(0.5)).collect();
            if classes < 2 || signs.iter().any(|&s| s != signs[0]) {
                break signs;
            }
        })
        .collect();
    let means: Vec<Vec<f64>> = (0..classes)
        .map(|class| {
            patterns
                .iter()
                .map(|signs| if signs[class] { separation } else { -separation })
                .collect()
        })
        .collect();
    let mut labels: Vec<usize> = (0..n).map(|i| i % classes).collect();
    // Fisher-Yates so the classes are interleaved but every one is present
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        labels.swap(i, j);
    }
    let mut x = gaussian_matrix(&mut rng, n, d);
    let mut data = x.data().to_vec();
    for (i, &label) in labels.iter().enumerate() {
        for (slot, &j) in support.iter().enumerate() {
            data[i * d + j] += means[label][slot];
        }
    }
    x = DenseMatrix::new(n, d, data).expect("finite");
    let mut dataset = Dataset::new(x, labels, classes).expect("every class present");
    dataset.feature_names = Some((0..d).map(|j| format!("f{j}")).collect());
    PlantedClassification { dataset, support }
}
