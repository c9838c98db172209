//! Evaluation histories, the Lipschitz upper-bound envelope, the decision
//! rule over potential maximizers, the incremental max-slope statistic, and
//! the geometric constant mesh used by the adaptive optimizer.

use crate::error::{Error, Result};
use crate::geometry::{euclidean, Point};

/// One objective evaluation: a point and its (finite) value.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub point: Point,
    pub value: f64,
}

impl Evaluation {
    pub fn new(point: Point, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFiniteValue {
                value,
                point: point.coords().to_vec(),
            });
        }
        Ok(Self { point, value })
    }
}

/// Ordered sequence of evaluations with cached running maximum, minimum and
/// maximum pairwise slope `max_{i != j} |f_i - f_j| / ||x_i - x_j||`.
///
/// Insertion updates all caches by scanning only the pairs formed with the
/// new entry, so a run of `t` insertions costs `O(t^2)` total.
#[derive(Clone, Debug)]
pub struct EvaluationHistory {
    entries: Vec<Evaluation>,
    best: f64,
    best_index: usize,
    worst: f64,
    max_slope: f64,
    /// Pairs skipped from the slope statistic because both points coincide.
    degenerate_pairs: usize,
    /// Set when two coincident points reported different values.
    inconsistent: bool,
}

impl Default for EvaluationHistory {
    fn default() -> Self {
        Self::new()
    }
}

impl EvaluationHistory {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
            best: f64::NEG_INFINITY,
            best_index: 0,
            worst: f64::INFINITY,
            max_slope: 0.0,
            degenerate_pairs: 0,
            inconsistent: false,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Evaluation] {
        &self.entries
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.value)
    }

    /// Largest value observed so far.
    pub fn best(&self) -> f64 {
        self.best
    }

    /// Index of the first entry attaining [`best`](Self::best).
    pub fn best_index(&self) -> usize {
        self.best_index
    }

    pub fn worst(&self) -> f64 {
        self.worst
    }

    /// Maximum pairwise slope over all distinct-point pairs seen so far.
    pub fn max_slope(&self) -> f64 {
        self.max_slope
    }

    pub fn degenerate_pairs(&self) -> usize {
        self.degenerate_pairs
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Appends an evaluation, updating the cached extrema and max slope by
    /// scanning the pairs formed with the new point.
    ///
    /// A pair at zero distance is excluded from the slope maximum (the ratio
    /// is undefined there) and counted as degenerate; if the values differ
    /// too, the history is additionally flagged inconsistent.
    pub fn push(&mut self, e: Evaluation) -> Result<()> {
        if let Some(first) = self.entries.first() {
            if first.point.dim() != e.point.dim() {
                return Err(Error::DimensionMismatch {
                    expected: first.point.dim(),
                    got: e.point.dim(),
                });
            }
        }
        for prev in &self.entries {
            let dist = euclidean(prev.point.coords(), e.point.coords());
            if dist == 0.0 {
                self.degenerate_pairs += 1;
                if prev.value != e.value {
                    self.inconsistent = true;
                }
                continue;
            }
            let slope = (prev.value - e.value).abs() / dist;
            if slope > self.max_slope {
                self.max_slope = slope;
            }
        }
        if e.value > self.best {
            self.best = e.value;
            self.best_index = self.entries.len();
        }
        if e.value < self.worst {
            self.worst = e.value;
        }
        self.entries.push(e);
        Ok(())
    }

    /// The tightest upper envelope consistent with `k`-Lipschitzness and the
    /// recorded values: `min_i f(x_i) + k * ||x - x_i||`.
    pub fn upper_bound(&self, k: f64, x: &Point) -> Result<f64> {
        if self.entries.is_empty() {
            return Err(Error::EmptyHistory);
        }
        if self.entries[0].point.dim() != x.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.entries[0].point.dim(),
                got: x.dim(),
            });
        }
        Ok(self.upper_bound_slice(k, x.coords()))
    }

    pub(crate) fn upper_bound_slice(&self, k: f64, x: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|e| e.value + k * euclidean(e.point.coords(), x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Decision rule: `x` is a potential maximizer for constant `k` iff the
    /// upper envelope at `x` reaches the best value observed so far. The
    /// comparison is an exact `>=`, no epsilon.
    ///
    /// With no evaluations every point is trivially a potential maximizer.
    pub fn accepts(&self, k: f64, x: &Point) -> bool {
        if self.entries.is_empty() {
            return true;
        }
        self.upper_bound_slice(k, x.coords()) >= self.best
    }

    /// Upper envelope scan over a raw coordinate slice that aborts as soon
    /// as the running minimum drops below `cutoff`. Returns the full value
    /// when it stays at or above `cutoff`, `None` otherwise.
    ///
    /// Rejection loops call this with the cutoff at their current fallback
    /// envelope value, which keeps the per-candidate cost close to constant.
    pub(crate) fn upper_bound_above(&self, k: f64, x: &[f64], cutoff: f64) -> Option<f64> {
        let mut min = f64::INFINITY;
        for e in &self.entries {
            let term = e.value + k * euclidean(e.point.coords(), x);
            if term < min {
                min = term;
                if min < cutoff {
                    return None;
                }
            }
        }
        Some(min)
    }
}

/// Geometric mesh `{ (1+alpha)^i : i in Z }` of Lipschitz constants, with
/// relative density `alpha > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LipschitzMesh {
    alpha: f64,
}

impl LipschitzMesh {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mesh density alpha must be positive and finite, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Smallest mesh value `>= slope`; `0` when `slope` is `0` (the mesh
    /// accumulates at zero). Guarantees
    /// `slope <= round_up(slope) <= slope * (1 + alpha)` for positive slopes.
    pub fn round_up(&self, slope: f64) -> f64 {
        debug_assert!(slope >= 0.0);
        if slope == 0.0 {
            return 0.0;
        }
        let base = 1.0 + self.alpha;
        let mut i = (slope.ln() / base.ln()).ceil();
        // Guard the ceil against round-off in the log ratio: step down while
        // the previous mesh value still dominates, then up until we do.
        while base.powf(i - 1.0) >= slope {
            i -= 1.0;
        }
        while base.powf(i) < slope {
            i += 1.0;
        }
        base.powf(i)
    }
}
