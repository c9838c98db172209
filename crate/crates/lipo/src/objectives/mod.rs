//! Benchmark objective functions and their metadata.
//!
//! The registry holds the synthetic benchmark suite plus the analysis
//! functions with known smoothness constants; CSV-backed datasets feed the
//! kernel ridge regression cross-validation objective in [`krr`].

mod dataset;
mod krr;

pub use dataset::{load_dataset, Dataset};
pub use krr::{fold_assignment, krr_cv_objective, krr_objective_spec, KRR_DOMAIN};

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{BoxDomain, Point};

/// Local lower envelope around a unique maximizer:
/// `f(x*) - f(x) >= c_kappa * ||x - x*||^kappa`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecreasingCondition {
    pub kappa: f64,
    pub c_kappa: f64,
}

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// An objective together with its domain and whatever ground truth is known
/// about it (maximum, maximizer, best Lipschitz constant, decrease rate).
#[derive(Clone)]
pub struct ObjectiveSpec {
    name: String,
    domain: BoxDomain,
    evaluator: Evaluator,
    known_max: Option<f64>,
    known_argmax: Option<Point>,
    known_lipschitz: Option<f64>,
    condition: Option<DecreasingCondition>,
}

impl std::fmt::Debug for ObjectiveSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ObjectiveSpec")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("known_max", &self.known_max)
            .field("known_lipschitz", &self.known_lipschitz)
            .finish_non_exhaustive()
    }
}

impl ObjectiveSpec {
    pub fn new(
        name: impl Into<String>,
        domain: BoxDomain,
        evaluator: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain,
            evaluator: Arc::new(evaluator),
            known_max: None,
            known_argmax: None,
            known_lipschitz: None,
            condition: None,
        }
    }

    pub fn with_known_max(mut self, value: f64) -> Self {
        self.known_max = Some(value);
        self
    }

    pub fn with_known_argmax(mut self, point: Point) -> Self {
        self.known_argmax = Some(point);
        self
    }

    pub fn with_known_lipschitz(mut self, k: f64) -> Self {
        self.known_lipschitz = Some(k);
        self
    }

    pub fn with_condition(mut self, kappa: f64, c_kappa: f64) -> Self {
        self.condition = Some(DecreasingCondition { kappa, c_kappa });
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn known_max(&self) -> Option<f64> {
        self.known_max
    }

    pub fn known_argmax(&self) -> Option<&Point> {
        self.known_argmax.as_ref()
    }

    pub fn known_lipschitz(&self) -> Option<f64> {
        self.known_lipschitz
    }

    pub fn condition(&self) -> Option<DecreasingCondition> {
        self.condition
    }

    /// Exact formula value at `x`. Out-of-domain points are an error; no
    /// clamping is performed.
    pub fn evaluate(&self, x: &Point) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(Error::OutOfDomain(x.coords().to_vec()));
        }
        Ok((self.evaluator)(x.coords()))
    }

    /// Formula value without the domain check. Callers must pass coordinates
    /// inside the domain (optimizer proposals always are).
    pub fn evaluate_raw(&self, coords: &[f64]) -> f64 {
        (self.evaluator)(coords)
    }
}

/// Names accepted by [`registry_lookup`].
pub const PROBLEM_NAMES: [&str; 8] = [
    "holder_table",
    "rosenbrock",
    "sphere",
    "linear_slope",
    "deb_n1",
    "sphere_norm",
    "largest_coordinate",
    "linear_1d",
];

/// Maximum of the Holder table function on `[-10,10]^2`, fixed by a dense
/// grid search (4001 points per axis) polished with a local refinement.
const HOLDER_TABLE_MAX: f64 = 19.208502567886747;

/// Linear slope weights `10^((i-1)/4)`, `i = 1..4`.
fn linear_slope_weights() -> [f64; 4] {
    [
        1.0,
        10f64.powf(0.25),
        10f64.powf(0.5),
        10f64.powf(0.75),
    ]
}

/// Looks up a benchmark objective by name.
pub fn registry_lookup(name: &str) -> Result<ObjectiveSpec> {
    let spec = match name {
        "holder_table" => ObjectiveSpec::new(
            name,
            BoxDomain::cube(-10.0, 10.0, 2)?,
            |x| {
                x[0].sin().abs()
                    * x[1].cos().abs()
                    * (1.0 - (x[0] * x[0] + x[1] * x[1]).sqrt() / PI).abs().exp()
            },
        )
        .with_known_max(HOLDER_TABLE_MAX),
        "rosenbrock" => ObjectiveSpec::new(
            name,
            BoxDomain::cube(-2.048, 2.048, 3)?,
            |x| {
                -(0..2)
                    .map(|i| {
                        100.0 * (x[i + 1] - x[i] * x[i]).powi(2) + (x[i] - 1.0).powi(2)
                    })
                    .sum::<f64>()
            },
        )
        .with_known_max(0.0)
        .with_known_argmax(Point::new(vec![1.0; 3])?),
        "sphere" => {
            let center = PI / 16.0;
            ObjectiveSpec::new(name, BoxDomain::cube(0.0, 1.0, 4)?, move |x| {
                -x.iter().map(|c| (c - center) * (c - center)).sum::<f64>().sqrt()
            })
            .with_known_max(0.0)
            .with_known_argmax(Point::new(vec![center; 4])?)
            .with_known_lipschitz(1.0)
            .with_condition(1.0, 1.0)
        }
        "linear_slope" => {
            let w = linear_slope_weights();
            let norm = w.iter().map(|c| c * c).sum::<f64>().sqrt();
            ObjectiveSpec::new(name, BoxDomain::cube(-5.0, 5.0, 4)?, move |x| {
                w.iter().zip(x).map(|(wi, xi)| wi * (xi - 5.0)).sum()
            })
            .with_known_max(0.0)
            .with_known_argmax(Point::new(vec![5.0; 4])?)
            .with_known_lipschitz(norm)
            .with_condition(1.0, 1.0)
        }
        "deb_n1" => ObjectiveSpec::new(
            name,
            BoxDomain::cube(-5.0, 5.0, 5)?,
            |x| {
                x.iter().map(|c| (5.0 * PI * c).sin().powi(6)).sum::<f64>() / 5.0
            },
        )
        .with_known_max(1.0),
        "sphere_norm" => ObjectiveSpec::new(
            name,
            BoxDomain::cube(-0.5, 0.5, 2)?,
            |x| 1.0 - x.iter().map(|c| c * c).sum::<f64>().sqrt(),
        )
        .with_known_max(1.0)
        .with_known_argmax(Point::new(vec![0.0; 2])?)
        .with_known_lipschitz(1.0)
        .with_condition(1.0, 1.0),
        "largest_coordinate" => ObjectiveSpec::new(
            name,
            BoxDomain::cube(-0.5, 0.5, 2)?,
            |x| 1.0 - x.iter().fold(0.0f64, |m, c| m.max(c.abs())),
        )
        .with_known_max(1.0)
        .with_known_argmax(Point::new(vec![0.0; 2])?)
        .with_known_lipschitz(1.0)
        .with_condition(1.0, 1.0 / 2f64.sqrt()),
        "linear_1d" => ObjectiveSpec::new(name, BoxDomain::cube(0.0, 1.0, 1)?, |x| x[0])
            .with_known_max(1.0)
            .with_known_argmax(Point::new(vec![1.0])?)
            .with_known_lipschitz(1.0)
            .with_condition(1.0, 1.0),
        other => return Err(Error::UnknownObjective(other.to_string())),
    };
    Ok(spec)
}
