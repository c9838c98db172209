//! Box domains over `R^d`, uniform sampling, and the metric quantities
//! (diameter, inner radius, distances) used throughout the crate.

use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// A point of `R^d`, `d >= 1`, with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("zero-dimensional point".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!(
                "non-finite coordinate in {coords:?}"
            )));
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &Point) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(euclidean(&self.coords, &other.coords))
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.coords
    }
}

/// `l2` distance between equal-length slices.
pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Axis-aligned compact box `[lower_1, upper_1] x ... x [lower_d, upper_d]`
/// with non-empty interior.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidDomain("zero-dimensional domain".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (lo, hi) in lower.iter().zip(&upper) {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidDomain(
                    "bounds must be finite".into(),
                ));
            }
            if lo >= hi {
                return Err(Error::InvalidDomain(format!(
                    "empty interior: lower bound {lo} >= upper bound {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The cube `[lo, hi]^d`.
    pub fn cube(lo: f64, hi: f64, d: usize) -> Result<Self> {
        Self::new(vec![lo; d], vec![hi; d])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.coords()
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(c, (lo, hi))| *c >= *lo && *c <= *hi)
    }

    /// Lebesgue volume of the box.
    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .product()
    }

    /// `l2` length of the main diagonal.
    pub fn diameter(&self) -> f64 {
        euclidean(&self.lower, &self.upper)
    }

    /// Radius of the largest enclosed ball: half the shortest side.
    pub fn inradius(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (hi - lo) / 2.0)
            .fold(f64::INFINITY, f64::min)
    }

    /// Uniform sample over the box. Consumes exactly `d` draws.
    pub fn uniform_sample(&self, rng: &mut RandomStream) -> Point {
        let mut coords = Vec::with_capacity(self.dim());
        self.sample_into(rng, &mut coords);
        Point { coords }
    }

    /// Uniform sample written into `buf` (cleared first). Consumes exactly
    /// `d` draws; avoids an allocation per candidate in rejection loops.
    pub(crate) fn sample_into(&self, rng: &mut RandomStream, buf: &mut Vec<f64>) {
        buf.clear();
        for (lo, hi) in self.lower.iter().zip(&self.upper) {
            buf.push(rng.uniform(*lo, *hi));
        }
    }
}
