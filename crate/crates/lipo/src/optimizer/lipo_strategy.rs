//! The fixed-constant strategy: evaluate only candidates whose Lipschitz
//! upper envelope reaches the best value observed so far.

use super::{rejection_sample, AskMeta, Optimizer, StepRecord};
use crate::error::{Error, Result};
use crate::geometry::{BoxDomain, Point};
use crate::lipschitz::{Evaluation, EvaluationHistory};
use crate::rng::RandomStream;

pub struct Lipo {
    label: String,
    domain: BoxDomain,
    k: f64,
    max_rejects: u64,
    rng: RandomStream,
    history: EvaluationHistory,
    trace: Vec<StepRecord>,
    pending: AskMeta,
}

impl Lipo {
    pub fn new(domain: BoxDomain, k: f64, max_rejects: u64, rng: RandomStream) -> Self {
        Self {
            label: format!("lipo:{k}"),
            domain,
            k,
            max_rejects,
            rng,
            history: EvaluationHistory::new(),
            trace: Vec::new(),
            pending: AskMeta::default(),
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

impl Optimizer for Lipo {
    fn label(&self) -> &str {
        &self.label
    }

    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn ask(&mut self) -> Point {
        if self.history.is_empty() {
            self.pending = AskMeta {
                explored: true,
                rejects: 0,
                fallback: false,
            };
            return self.domain.uniform_sample(&mut self.rng);
        }
        let proposal = rejection_sample(
            &self.history,
            &self.domain,
            self.k,
            self.max_rejects,
            &mut self.rng,
        );
        self.pending = AskMeta {
            explored: false,
            rejects: proposal.rejects,
            fallback: proposal.fallback,
        };
        proposal.point
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
            k_hat: self.k,
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
