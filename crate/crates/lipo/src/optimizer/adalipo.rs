//! The adaptive strategy: a Bernoulli(p) coin decides between uniform
//! exploration and a decision-rule step with the current constant estimate,
//! which is the max pairwise slope rounded up to the mesh after every
//! evaluation.

use super::{rejection_sample, AskMeta, Optimizer, StepRecord};
use crate::error::{Error, Result};
use crate::geometry::{BoxDomain, Point};
use crate::lipschitz::{Evaluation, EvaluationHistory, LipschitzMesh};
use crate::rng::RandomStream;

pub struct AdaLipo {
    label: String,
    domain: BoxDomain,
    p: f64,
    mesh: LipschitzMesh,
    max_rejects: u64,
    rng: RandomStream,
    history: EvaluationHistory,
    k_hat: f64,
    trace: Vec<StepRecord>,
    pending: AskMeta,
}

impl AdaLipo {
    pub fn new(
        domain: BoxDomain,
        p: f64,
        mesh: LipschitzMesh,
        max_rejects: u64,
        rng: RandomStream,
    ) -> Self {
        Self {
            label: format!("adalipo:{p},{}", mesh.alpha()),
            domain,
            p,
            mesh,
            max_rejects,
            rng,
            history: EvaluationHistory::new(),
            k_hat: 0.0,
            trace: Vec::new(),
            pending: AskMeta::default(),
        }
    }

    /// Current Lipschitz constant estimate (zero until two distinct points
    /// have been told).
    pub fn k_hat(&self) -> f64 {
        self.k_hat
    }

    pub fn exploration_p(&self) -> f64 {
        self.p
    }
}

impl Optimizer for AdaLipo {
    fn label(&self) -> &str {
        &self.label
    }

    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn ask(&mut self) -> Point {
        if self.history.is_empty() {
            // Prescribed initialization, no coin flip.
            self.pending = AskMeta {
                explored: true,
                rejects: 0,
                fallback: false,
            };
            return self.domain.uniform_sample(&mut self.rng);
        }
        // Exactly one draw per iteration regardless of the branch, so paired
        // seeds stay aligned across configurations.
        let explore = self.rng.bernoulli(self.p);
        if explore {
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
            self.k_hat,
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
        self.k_hat = self.mesh.round_up(self.history.max_slope());
        self.trace.push(StepRecord {
            explored: self.pending.explored,
            k_hat: self.k_hat,
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
