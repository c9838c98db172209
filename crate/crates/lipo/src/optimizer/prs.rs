//! Pure random search: i.i.d. uniform evaluation points.

use super::{AskMeta, Optimizer, StepRecord};
use crate::error::{Error, Result};
use crate::geometry::{BoxDomain, Point};
use crate::lipschitz::{Evaluation, EvaluationHistory};
use crate::rng::RandomStream;

pub struct PureRandomSearch {
    domain: BoxDomain,
    rng: RandomStream,
    history: EvaluationHistory,
    trace: Vec<StepRecord>,
    pending: AskMeta,
}

impl PureRandomSearch {
    pub fn new(domain: BoxDomain, rng: RandomStream) -> Self {
        Self {
            domain,
            rng,
            history: EvaluationHistory::new(),
            trace: Vec::new(),
            pending: AskMeta::default(),
        }
    }
}

impl Optimizer for PureRandomSearch {
    fn label(&self) -> &str {
        "prs"
    }

    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn ask(&mut self) -> Point {
        self.pending = AskMeta {
            explored: true,
            rejects: 0,
            fallback: false,
        };
        self.domain.uniform_sample(&mut self.rng)
    }

    fn tell(&mut self, point: Point, value: f64) -> Result<()> {
        if point.dim() != self.domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain.dim(),
                got: point.dim(),
            });
        }
        self.history.push(Evaluation::new(point, value)?)?;
        self.trace.push(StepRecord {
            explored: self.pending.explored,
            k_hat: 0.0,
            rejects: self.pending.rejects,
            fallback: self.pending.fallback,
        });
        self.pending = AskMeta::default();
        Ok(())
    }

    fn history(&self) -> &EvaluationHistory {
        &self.history
    }

    fn trace(&self) -> &[StepRecord] {
        &self.trace
    }
}
