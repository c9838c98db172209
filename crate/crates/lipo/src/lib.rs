//! Global optimization of Lipschitz functions.
//!
//! This crate implements sequential maximization of black-box objectives
//! over box domains under a Lipschitz-smoothness assumption:
//!
//! * **LIPO** evaluates only uniform candidates whose Lipschitz upper
//!   envelope (for a known constant `k`) reaches the best value observed so
//!   far — the set of points that can still be a maximizer.
//! * **AdaLIPO** drops the known-constant requirement: it estimates the
//!   constant online from the maximum pairwise slope of the evaluations,
//!   rounded up to a geometric mesh, and mixes uniform exploration
//!   (probability `p`) with decision-rule exploitation.
//! * **Pure random search** is the space-filling baseline.
//!
//! All three sit behind the ask/tell [`Optimizer`] trait and are selected by
//! name, so drivers treat them interchangeably. The crate also ships the
//! standard objective suite used to benchmark them ([`objectives`]), the
//! closed-form convergence bound evaluators ([`analysis`]), and a
//! reproducible stopping-time benchmark harness ([`protocol`]) backing the
//! `bench` command-line tool.
//!
//! ```
//! use lipo::{run, Algorithm, OptimizerConfig, Point};
//!
//! let spec = lipo::registry_lookup("sphere_norm")?;
//! let config = OptimizerConfig::new(Algorithm::Lipo { k: 1.0 }, 42);
//! let objective = |p: &Point| spec.evaluate_raw(p.coords());
//! let result = run(&config, &objective, spec.domain(), 200)?;
//! assert!(1.0 - result.best_value < 0.2);
//! # Ok::<(), lipo::Error>(())
//! ```

pub mod analysis;
mod error;
pub mod geometry;
pub mod lipschitz;
pub mod objectives;
pub mod optimizer;
pub mod protocol;
pub mod rng;

pub use error::{Error, Result};
pub use geometry::{BoxDomain, Point};
pub use lipschitz::{Evaluation, EvaluationHistory, LipschitzMesh};
pub use objectives::{registry_lookup, ObjectiveSpec, PROBLEM_NAMES};
pub use optimizer::{
    run, Algorithm, AlgorithmSpec, Optimizer, OptimizerConfig, RunResult, StepRecord,
};
pub use protocol::{
    emit_report, f_target, run_protocol, stopping_time, ProtocolConfig, ReportFormat,
    TargetReport,
};
pub use rng::RandomStream;
