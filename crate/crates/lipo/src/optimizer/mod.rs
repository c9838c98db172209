//! Ask/tell optimization strategies.
//!
//! Every algorithm sits behind the [`Optimizer`] trait: `ask` proposes the
//! next evaluation point, `tell` feeds the observed value back. Strategies
//! are selected by name ([`AlgorithmSpec`] parses `prs`, `lipo:K`,
//! `adalipo[:p[,alpha]]`) and built into trait objects via
//! [`OptimizerConfig::build`], so drivers and the CLI treat them uniformly.

mod adalipo;
mod lipo_strategy;
mod prs;

pub use adalipo::AdaLipo;
pub use lipo_strategy::Lipo;
pub use prs::PureRandomSearch;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{BoxDomain, Point};
use crate::lipschitz::{EvaluationHistory, LipschitzMesh};
use crate::rng::RandomStream;

/// Default cap on rejected candidates per exploitation step.
pub const DEFAULT_MAX_REJECTS: u64 = 100_000;

/// Default exploration probability for the adaptive strategy.
pub const DEFAULT_EXPLORATION_P: f64 = 0.1;

/// Names accepted by the algorithm registry.
pub const ALGORITHM_NAMES: [&str; 3] = ["prs", "lipo", "adalipo"];

/// Per-step trace record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    /// Whether the point came from uniform exploration (always true for the
    /// initial point and for pure random search).
    pub explored: bool,
    /// Lipschitz constant in effect after this step's update: `0` for pure
    /// random search, the fixed `k` for LIPO, the running estimate for
    /// AdaLIPO.
    pub k_hat: f64,
    /// Candidates rejected by the decision rule before this point.
    pub rejects: u64,
    /// Set when the rejection cap was exhausted and the best rejected
    /// candidate was evaluated instead.
    pub fallback: bool,
}

/// Ask-side metadata carried until the matching `tell` completes the step.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct AskMeta {
    pub explored: bool,
    pub rejects: u64,
    pub fallback: bool,
}

/// A sequential ask/tell optimization strategy.
///
/// The protocol is strict alternation: each `ask` proposes a point, the
/// caller evaluates the objective there and reports it with `tell`. The
/// point passed to `tell` is trusted to be the one returned by the matching
/// `ask`; it is not checked numerically.
pub trait Optimizer {
    /// Canonical label, e.g. `lipo:1` or `adalipo:0.1,0.0025`.
    fn label(&self) -> &str;

    fn domain(&self) -> &BoxDomain;

    /// Proposes the next evaluation point. The first ask always returns a
    /// uniform sample.
    fn ask(&mut self) -> Point;

    /// Records an evaluation. Errors on dimension mismatch or a non-finite
    /// value.
    fn tell(&mut self, point: Point, value: f64) -> Result<()>;

    fn history(&self) -> &EvaluationHistory;

    fn trace(&self) -> &[StepRecord];
}

/// A fully resolved algorithm choice.
#[derive(Clone, Debug, PartialEq)]
pub enum Algorithm {
    /// Uniform i.i.d. sampling.
    PureRandom,
    /// Decision-rule sampling with a known Lipschitz constant.
    Lipo { k: f64 },
    /// Exploration/exploitation mix with an online constant estimate rounded
    /// up to a geometric mesh.
    AdaLipo { p: f64, mesh: LipschitzMesh },
}

impl Algorithm {
    pub fn label(&self) -> String {
        match self {
            Algorithm::PureRandom => "prs".to_string(),
            Algorithm::Lipo { k } => format!("lipo:{k}"),
            Algorithm::AdaLipo { p, mesh } => format!("adalipo:{p},{}", mesh.alpha()),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Algorithm::PureRandom => Ok(()),
            Algorithm::Lipo { k } => {
                if k.is_finite() && *k >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "lipo requires k >= 0, got {k}"
                    )))
                }
            }
            Algorithm::AdaLipo { p, .. } => {
                if p.is_finite() && *p > 0.0 && *p < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "adalipo requires 0 < p < 1, got {p}"
                    )))
                }
            }
        }
    }
}

/// An algorithm selection as written on a command line, with optional
/// parameters resolved against the problem dimension at build time
/// (`p = 0.1`, `alpha = 0.01/d`).
#[derive(Clone, Debug, PartialEq)]
pub enum AlgorithmSpec {
    PureRandom,
    Lipo { k: f64 },
    AdaLipo { p: Option<f64>, alpha: Option<f64> },
}

impl AlgorithmSpec {
    pub fn resolve(&self, dim: usize) -> Result<Algorithm> {
        let algorithm = match self {
            AlgorithmSpec::PureRandom => Algorithm::PureRandom,
            AlgorithmSpec::Lipo { k } => Algorithm::Lipo { k: *k },
            AlgorithmSpec::AdaLipo { p, alpha } => Algorithm::AdaLipo {
                p: p.unwrap_or(DEFAULT_EXPLORATION_P),
                mesh: LipschitzMesh::new(alpha.unwrap_or(0.01 / dim as f64))?,
            },
        };
        algorithm.validate()?;
        Ok(algorithm)
    }
}

impl FromStr for AlgorithmSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidAlgorithmSpec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let (name, args) = match s.split_once(':') {
            Some((name, args)) => (name, Some(args)),
            None => (s, None),
        };
        match (name, args) {
            ("prs", None) => Ok(AlgorithmSpec::PureRandom),
            ("prs", Some(_)) => Err(invalid("prs takes no parameters")),
            ("lipo", Some(args)) => {
                let k: f64 = args.parse().map_err(|_| invalid("expected lipo:K"))?;
                if !k.is_finite() || k < 0.0 {
                    return Err(invalid("k must be a finite value >= 0"));
                }
                Ok(AlgorithmSpec::Lipo { k })
            }
            ("lipo", None) => Err(invalid("lipo requires a constant, e.g. lipo:1.5")),
            ("adalipo", None) => Ok(AlgorithmSpec::AdaLipo {
                p: None,
                alpha: None,
            }),
            ("adalipo", Some(args)) => {
                let mut parts = args.split(',');
                let p: f64 = parts
                    .next()
                    .unwrap()
                    .parse()
                    .map_err(|_| invalid("expected adalipo:p[,alpha]"))?;
                if !(p.is_finite() && p > 0.0 && p < 1.0) {
                    return Err(invalid("p must lie strictly between 0 and 1"));
                }
                let alpha = match parts.next() {
                    Some(a) => {
                        let alpha: f64 =
                            a.parse().map_err(|_| invalid("expected adalipo:p,alpha"))?;
                        if !(alpha.is_finite() && alpha > 0.0) {
                            return Err(invalid("alpha must be positive"));
                        }
                        Some(alpha)
                    }
                    None => None,
                };
                if parts.next().is_some() {
                    return Err(invalid("too many parameters"));
                }
                Ok(AlgorithmSpec::AdaLipo { p: Some(p), alpha })
            }
            _ => Err(invalid("known algorithms: prs, lipo:K, adalipo[:p[,alpha]]")),
        }
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmSpec::PureRandom => write!(f, "prs"),
            AlgorithmSpec::Lipo { k } => write!(f, "lipo:{k}"),
            AlgorithmSpec::AdaLipo { p: None, alpha: None } => write!(f, "adalipo"),
            AlgorithmSpec::AdaLipo { p: Some(p), alpha: None } => write!(f, "adalipo:{p}"),
            AlgorithmSpec::AdaLipo { p: Some(p), alpha: Some(a) } => {
                write!(f, "adalipo:{p},{a}")
            }
            AlgorithmSpec::AdaLipo { p: None, alpha: Some(a) } => {
                write!(f, "adalipo:{DEFAULT_EXPLORATION_P},{a}")
            }
        }
    }
}

/// Algorithm plus run parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub algorithm: Algorithm,
    /// Candidate rejection cap per exploitation step.
    pub max_rejects: u64,
    /// Seed of the strategy's private random stream.
    pub seed: u64,
}

impl OptimizerConfig {
    pub fn new(algorithm: Algorithm, seed: u64) -> Self {
        Self {
            algorithm,
            max_rejects: DEFAULT_MAX_REJECTS,
            seed,
        }
    }

    pub fn with_max_rejects(mut self, max_rejects: u64) -> Self {
        self.max_rejects = max_rejects;
        self
    }

    /// Instantiates the strategy over `domain`.
    pub fn build(&self, domain: BoxDomain) -> Result<Box<dyn Optimizer>> {
        self.algorithm.validate()?;
        if self.max_rejects == 0 {
            return Err(Error::InvalidParameter(
                "max_rejects must be at least 1".into(),
            ));
        }
        let rng = RandomStream::from_seed(self.seed);
        Ok(match &self.algorithm {
            Algorithm::PureRandom => Box::new(PureRandomSearch::new(domain, rng)),
            Algorithm::Lipo { k } => Box::new(Lipo::new(domain, *k, self.max_rejects, rng)),
            Algorithm::AdaLipo { p, mesh } => {
                Box::new(AdaLipo::new(domain, *p, *mesh, self.max_rejects, rng))
            }
        })
    }
}

/// Outcome of the shared rejection sampler.
pub(crate) struct Proposal {
    pub point: Point,
    pub rejects: u64,
    pub fallback: bool,
}

/// Draws uniform candidates until one satisfies the decision rule for `k`.
///
/// If `max_rejects` candidates are rejected, the rejected candidate with the
/// highest upper envelope value is returned instead and flagged as a
/// fallback; this bounds the step's runtime while still picking the most
/// optimistic point seen.
pub(crate) fn rejection_sample(
    history: &EvaluationHistory,
    domain: &BoxDomain,
    k: f64,
    max_rejects: u64,
    rng: &mut RandomStream,
) -> Proposal {
    debug_assert!(!history.is_empty());
    debug_assert!(max_rejects >= 1);
    let best = history.best();
    let mut buf = Vec::with_capacity(domain.dim());
    let mut fallback: Option<(Vec<f64>, f64)> = None;
    for attempt in 0..max_rejects {
        domain.sample_into(rng, &mut buf);
        let cutoff = fallback.as_ref().map_or(f64::NEG_INFINITY, |f| f.1);
        if let Some(ub) = history.upper_bound_above(k, &buf, cutoff) {
            if ub >= best {
                let point = Point::new(std::mem::take(&mut buf))
                    .expect("uniform samples are finite");
                return Proposal {
                    point,
                    rejects: attempt,
                    fallback: false,
                };
            }
            if fallback.as_ref().is_none_or(|f| ub > f.1) {
                fallback = Some((buf.clone(), ub));
            }
        }
    }
    let (coords, _) = fallback.expect("at least one candidate was drawn");
    Proposal {
        point: Point::new(coords).expect("uniform samples are finite"),
        rejects: max_rejects,
        fallback: true,
    }
}

/// Result of a budgeted run: the full history, per-step trace, and the first
/// index attaining the best value.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub history: EvaluationHistory,
    pub trace: Vec<StepRecord>,
    pub best_index: usize,
    pub best_value: f64,
}

impl RunResult {
    pub fn best_point(&self) -> &Point {
        &self.history.entries()[self.best_index].point
    }

    pub fn fallback_count(&self) -> usize {
        self.trace.iter().filter(|s| s.fallback).count()
    }
}

/// Runs `config` against `objective` for exactly `n` evaluations.
///
/// Deterministic given the config seed. Aborts with a diagnostic if the
/// objective produces a non-finite value.
pub fn run(
    config: &OptimizerConfig,
    objective: &(dyn Fn(&Point) -> f64 + Sync),
    domain: &BoxDomain,
    n: usize,
) -> Result<RunResult> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "evaluation budget must be at least 1".into(),
        ));
    }
    let mut optimizer = config.build(domain.clone())?;
    for _ in 0..n {
        let point = optimizer.ask();
        let value = objective(&point);
        if !value.is_finite() {
            return Err(Error::NonFiniteValue {
                value,
                point: point.coords().to_vec(),
            });
        }
        optimizer.tell(point, value)?;
    }
    let history = optimizer.history();
    let best_index = history.best_index();
    let best_value = history.best();
    Ok(RunResult {
        history: history.clone(),
        trace: optimizer.trace().to_vec(),
        best_index,
        best_value,
    })
}

#[cfg(test)]
mod tests;
