//! Gaussian kernel ridge regression tuned by 10-fold cross validation.
//!
//! The two optimization variables are exponents: `sigma = 10^{x_1}` is the
//! kernel bandwidth and `lambda = 10^{x_2}` the ridge weight, searched over
//! `[-2, 4] x [-5, 5]`. The objective is the negated average over folds of
//! the held-out sum of squared errors, so maximizing it minimizes the
//! cross-validation error.

use nalgebra::{DMatrix, DVector};

use super::{Dataset, ObjectiveSpec};
use crate::error::{Error, Result};
use crate::geometry::{BoxDomain, Point};
use crate::rng::{stable_hash, RandomStream};

/// Search domain for `(x_1, x_2)`.
pub const KRR_DOMAIN: ([f64; 2], [f64; 2]) = ([-2.0, -5.0], [4.0, 5.0]);

const FOLDS: usize = 10;

/// Deterministic fold id per row.
///
/// Rows are put in a canonical order (lexicographic by feature values, then
/// target), shuffled with a stream seeded from the dataset name, and dealt
/// round-robin into ten folds. Keying on the canonical order makes the
/// assignment invariant under row permutations of the input.
pub fn fold_assignment(dataset: &Dataset) -> Vec<usize> {
    let n = dataset.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let ra = (&dataset.features()[a], dataset.targets()[a]);
        let rb = (&dataset.features()[b], dataset.targets()[b]);
        ra.0.iter()
            .zip(rb.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| ra.1.total_cmp(&rb.1))
    });
    let mut rng = RandomStream::from_seed(stable_hash(dataset.name()));
    rng.shuffle(&mut order);
    let mut folds = vec![0usize; n];
    for (pos, &row) in order.iter().enumerate() {
        folds[row] = pos % FOLDS;
    }
    folds
}

fn gaussian_kernel(a: &[f64], b: &[f64], sigma: f64) -> f64 {
    let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-sq / (2.0 * sigma * sigma)).exp()
}

/// Negated 10-fold cross-validation error of Gaussian kernel ridge
/// regression with bandwidth `10^{x_1}` and ridge weight `10^{x_2}`.
///
/// Each fold fits `alpha = (K + lambda * m * I)^{-1} y` on the `m` training
/// rows and accumulates the squared prediction errors on the held-out rows.
pub fn krr_cv_objective(dataset: &Dataset, x: &Point) -> Result<f64> {
    if x.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: x.dim(),
        });
    }
    let (lo, hi) = KRR_DOMAIN;
    let c = x.coords();
    if c[0] < lo[0] || c[0] > hi[0] || c[1] < lo[1] || c[1] > hi[1] {
        return Err(Error::OutOfDomain(c.to_vec()));
    }
    if dataset.len() < FOLDS {
        return Err(Error::Dataset(format!(
            "need at least {FOLDS} rows for {FOLDS}-fold cross validation, got {}",
            dataset.len()
        )));
    }
    let sigma = 10f64.powf(c[0]);
    let lambda = 10f64.powf(c[1]);
    let folds = fold_assignment(dataset);

    let mut total = 0.0;
    for fold in 0..FOLDS {
        let train: Vec<usize> = (0..dataset.len()).filter(|i| folds[*i] != fold).collect();
        let test: Vec<usize> = (0..dataset.len()).filter(|i| folds[*i] == fold).collect();
        let m = train.len();
        let mut gram = DMatrix::zeros(m, m);
        for (a, &i) in train.iter().enumerate() {
            for (b, &j) in train.iter().enumerate().take(a + 1) {
                let k = gaussian_kernel(&dataset.features()[i], &dataset.features()[j], sigma);
                gram[(a, b)] = k;
                gram[(b, a)] = k;
            }
        }
        for a in 0..m {
            gram[(a, a)] += lambda * m as f64;
        }
        let y = DVector::from_iterator(m, train.iter().map(|&i| dataset.targets()[i]));
        let alpha = gram
            .cholesky()
            .ok_or_else(|| {
                Error::SolveFailure(format!(
                    "kernel system not positive definite (sigma={sigma}, lambda={lambda})"
                ))
            })?
            .solve(&y);
        for &i in &test {
            let pred: f64 = train
                .iter()
                .enumerate()
                .map(|(b, &j)| {
                    alpha[b] * gaussian_kernel(&dataset.features()[i], &dataset.features()[j], sigma)
                })
                .sum();
            let err = pred - dataset.targets()[i];
            total += err * err;
        }
    }
    Ok(-total / FOLDS as f64)
}

/// Wraps a dataset into an objective over the `(x_1, x_2)` exponent box.
pub fn krr_objective_spec(dataset: Dataset) -> Result<ObjectiveSpec> {
    if dataset.len() < FOLDS {
        return Err(Error::Dataset(format!(
            "need at least {FOLDS} rows for {FOLDS}-fold cross validation, got {}",
            dataset.len()
        )));
    }
    let (lo, hi) = KRR_DOMAIN;
    let domain = BoxDomain::new(lo.to_vec(), hi.to_vec())?;
    let name = format!("krr_cv:{}", dataset.name());
    Ok(ObjectiveSpec::new(name, domain, move |coords| {
        let point = Point::new(coords.to_vec()).expect("finite in-domain coordinates");
        // Solve failures surface as NaN and abort the surrounding run.
        krr_cv_objective(&dataset, &point).unwrap_or(f64::NAN)
    }))
}
