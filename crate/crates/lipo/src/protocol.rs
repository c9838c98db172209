//! Benchmark protocol: normalized targets, stopping times, multi-seed
//! aggregation, and report emission.
//!
//! For each problem and algorithm the harness performs `K` independent runs
//! with a fixed evaluation budget `n`, records for every target level `t`
//! the first evaluation index reaching
//! `f_target(t) = f_max - (f_max - f_avg)(1 - t)` (with `n` standing in when
//! a run never reaches it), and reports the mean and standard deviation of
//! those stopping times.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::{krr_objective_spec, load_dataset, registry_lookup, ObjectiveSpec};
use crate::optimizer::{run, AlgorithmSpec, OptimizerConfig, RunResult, DEFAULT_MAX_REJECTS};
use crate::rng::RandomStream;

/// Output format for [`emit_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Full description of one harness invocation.
#[derive(Clone, Debug)]
pub struct ProtocolConfig {
    /// Registry name, or `csv:PATH` for a dataset-backed objective.
    pub problem: String,
    pub algorithms: Vec<AlgorithmSpec>,
    /// Independent runs per algorithm.
    pub runs: usize,
    /// Function evaluations per run.
    pub budget: usize,
    /// Target levels, each strictly in (0, 1).
    pub targets: Vec<f64>,
    /// Monte Carlo sample count for the domain average.
    pub mc_samples: usize,
    pub base_seed: u64,
    /// Rejection cap per exploitation step.
    pub max_rejects: u64,
    /// Worker threads for the runs (1 = sequential). Results do not depend
    /// on this value.
    pub jobs: usize,
    pub output_path: Option<PathBuf>,
    pub output_format: ReportFormat,
}

impl ProtocolConfig {
    pub fn new(problem: impl Into<String>, algorithms: Vec<AlgorithmSpec>) -> Self {
        Self {
            problem: problem.into(),
            algorithms,
            runs: 100,
            budget: 1000,
            targets: vec![0.90, 0.95, 0.99],
            mc_samples: 1_000_000,
            base_seed: 0,
            max_rejects: DEFAULT_MAX_REJECTS,
            jobs: 1,
            output_path: None,
            output_format: ReportFormat::Csv,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.into()));
        if self.algorithms.is_empty() {
            return bad("at least one algorithm is required");
        }
        if self.runs == 0 {
            return bad("runs must be at least 1");
        }
        if self.budget == 0 {
            return bad("budget must be at least 1");
        }
        if self.targets.is_empty() {
            return bad("at least one target is required");
        }
        if self.targets.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
            return bad("targets must lie strictly in (0, 1)");
        }
        if self.mc_samples == 0 {
            return bad("mc_samples must be at least 1");
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1");
        }
        Ok(())
    }
}

/// Stopping-time statistics for one (problem, algorithm, target) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetReport {
    pub problem: String,
    pub algorithm: String,
    pub target: f64,
    pub mean_tau: f64,
    pub std_tau: f64,
    pub fallback_rate: f64,
    pub f_target_value: f64,
    pub f_max_used: f64,
    pub f_avg_used: f64,
}

/// Resolves a problem string: a registry name, or `csv:PATH` for the
/// regression objective over a local dataset.
pub fn resolve_problem(problem: &str) -> Result<ObjectiveSpec> {
    match problem.strip_prefix("csv:") {
        Some(path) => krr_objective_spec(load_dataset(path)?),
        None => registry_lookup(problem),
    }
}

/// Monte Carlo estimate of the objective's uniform average over its domain.
pub fn estimate_average(spec: &ObjectiveSpec, m: usize, rng: &mut RandomStream) -> Result<f64> {
    debug_assert!(m >= 1);
    let mut sum = 0.0;
    for _ in 0..m {
        let p = spec.domain().uniform_sample(rng);
        let v = spec.evaluate_raw(p.coords());
        if !v.is_finite() {
            return Err(Error::NonFiniteValue {
                value: v,
                point: p.coords().to_vec(),
            });
        }
        sum += v;
    }
    Ok(sum / m as f64)
}

/// Normalized target value `f_max - (f_max - f_avg) * (1 - t)`.
pub fn f_target(f_max: f64, f_avg: f64, t: f64) -> Result<f64> {
    if f_max < f_avg {
        return Err(Error::TargetOrder { f_max, f_avg });
    }
    Ok(f_max - (f_max - f_avg) * (1.0 - t))
}

/// First 1-based index whose value reaches `target`; `n` when none does.
pub fn stopping_time(values: &[f64], target: f64, n: usize) -> usize {
    debug_assert_eq!(values.len(), n);
    values
        .iter()
        .position(|v| *v >= target)
        .map(|i| i + 1)
        .unwrap_or(n)
}

/// Runs the full protocol and returns one report row per
/// (algorithm, target), ordered by problem, algorithm label, target.
///
/// `f_max` is the spec's known maximum when available, otherwise the best
/// value observed across all runs of all algorithms in this invocation.
/// Runs are seeded `base_seed + run_index` (1-based), so the same seeds pair
/// up across algorithms, and the outcome is independent of `jobs`.
pub fn run_protocol(config: &ProtocolConfig) -> Result<Vec<TargetReport>> {
    config.validate()?;
    let spec = resolve_problem(&config.problem)?;

    let mut avg_rng = RandomStream::from_seed(config.base_seed);
    let f_avg = estimate_average(&spec, config.mc_samples, &mut avg_rng)?;

    struct AlgorithmOutcome {
        label: String,
        values: Vec<Vec<f64>>,
        fallback_steps: usize,
    }

    let mut outcomes = Vec::new();
    let mut pooled_best = f64::NEG_INFINITY;
    for algo_spec in &config.algorithms {
        let algorithm = algo_spec.resolve(spec.domain().dim())?;
        let label = algorithm.label();
        let objective = |p: &crate::geometry::Point| spec.evaluate_raw(p.coords());
        let do_run = |k: usize| -> Result<RunResult> {
            let cfg = OptimizerConfig::new(algorithm.clone(), config.base_seed + k as u64)
                .with_max_rejects(config.max_rejects);
            run(&cfg, &objective, spec.domain(), config.budget)
        };
        let results: Vec<RunResult> = if config.jobs > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(config.jobs)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            pool.install(|| {
                (1..=config.runs)
                    .into_par_iter()
                    .map(do_run)
                    .collect::<Result<Vec<_>>>()
            })?
        } else {
            (1..=config.runs).map(do_run).collect::<Result<Vec<_>>>()?
        };

        let mut values = Vec::with_capacity(config.runs);
        let mut fallback_steps = 0;
        for r in &results {
            pooled_best = pooled_best.max(r.best_value);
            fallback_steps += r.fallback_count();
            values.push(r.history.values().collect());
        }
        outcomes.push(AlgorithmOutcome {
            label,
            values,
            fallback_steps,
        });
    }

    let f_max = match spec.known_max() {
        Some(known) => {
            log::info!(
                "{}: using known maximum {known}; pooled best observed {pooled_best}",
                spec.name()
            );
            known
        }
        None => pooled_best,
    };

    let mut reports = Vec::new();
    for outcome in &outcomes {
        let total_steps = (config.runs * config.budget) as f64;
        let fallback_rate = outcome.fallback_steps as f64 / total_steps;
        for &target in &config.targets {
            let threshold = f_target(f_max, f_avg, target)?;
            let taus: Vec<f64> = outcome
                .values
                .iter()
                .map(|vals| stopping_time(vals, threshold, config.budget) as f64)
                .collect();
            let mean_tau = taus.iter().sum::<f64>() / taus.len() as f64;
            let var = taus.iter().map(|t| (t - mean_tau) * (t - mean_tau)).sum::<f64>()
                / taus.len() as f64;
            reports.push(TargetReport {
                problem: spec.name().to_string(),
                algorithm: outcome.label.clone(),
                target,
                mean_tau,
                std_tau: var.sqrt(),
                fallback_rate,
                f_target_value: threshold,
                f_max_used: f_max,
                f_avg_used: f_avg,
            });
        }
    }
    reports.sort_by(|a, b| {
        (a.problem.as_str(), a.algorithm.as_str())
            .cmp(&(b.problem.as_str(), b.algorithm.as_str()))
            .then(a.target.total_cmp(&b.target))
    });
    Ok(reports)
}

/// Formats with six significant digits (plain decimal notation in the
/// magnitude range the reports produce, scientific outside it).
fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=6).contains(&mag) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Writes reports to `writer` in the chosen format.
///
/// CSV columns are exactly
/// `problem,algorithm,target,mean_tau,std_tau,fallback_rate,f_target,f_max,f_avg`
/// with six significant digits; JSON mirrors the [`TargetReport`] field
/// names at full precision. Both end with a trailing newline.
pub fn write_report(
    reports: &[TargetReport],
    format: ReportFormat,
    writer: &mut dyn Write,
) -> Result<()> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(writer);
            w.write_record([
                "problem",
                "algorithm",
                "target",
                "mean_tau",
                "std_tau",
                "fallback_rate",
                "f_target",
                "f_max",
                "f_avg",
            ])?;
            for r in reports {
                w.write_record([
                    r.problem.as_str(),
                    r.algorithm.as_str(),
                    &sig6(r.target),
                    &sig6(r.mean_tau),
                    &sig6(r.std_tau),
                    &sig6(r.fallback_rate),
                    &sig6(r.f_target_value),
                    &sig6(r.f_max_used),
                    &sig6(r.f_avg_used),
                ])?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *writer, reports)?;
            writeln!(writer)?;
        }
    }
    Ok(())
}

/// Writes reports to a file (see [`write_report`]).
pub fn emit_report(reports: &[TargetReport], format: ReportFormat, path: &Path) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    write_report(reports, format, &mut file)?;
    file.flush()?;
    Ok(())
}
