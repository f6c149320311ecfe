//! Repeated seeded trials, median-cost statistics and report files.

pub mod commands;
mod output;
mod stats;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::planner::{plan, PlanResult, PlannerConfig};
use crate::scenarios::Scenario;

pub use output::{
    read_costs_csv, read_trials_csv, render_convergence_svg, render_map_svg, write_bench_report,
    write_costs_csv, write_times_csv, write_trials_csv, CostRow, TrialRow,
};
pub use stats::{
    aggregate, median, median_ci_ranks, percentile, sigma_reference, AggregateStats, SigmaReference,
};

/// Environment variable holding the number of worker threads for batches.
pub const WORKERS_ENV: &str = "DEVRRT_WORKERS";
pub const DEFAULT_CHECKPOINT_STEP: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    InformedBiased,
    InformedUnbiased,
    UninformedBiased,
    UninformedUnbiased,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::InformedBiased,
        Variant::InformedUnbiased,
        Variant::UninformedBiased,
        Variant::UninformedUnbiased,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::InformedBiased => "informed-biased",
            Variant::InformedUnbiased => "informed-unbiased",
            Variant::UninformedBiased => "uninformed-biased",
            Variant::UninformedUnbiased => "uninformed-unbiased",
        }
    }

    pub fn informed(self) -> bool {
        matches!(self, Variant::InformedBiased | Variant::InformedUnbiased)
    }

    pub fn biased(self) -> bool {
        matches!(self, Variant::InformedBiased | Variant::UninformedBiased)
    }

    /// `config` with sampling switched to this variant. Unbiased variants
    /// set the bias probability to zero; biased ones keep the configured one.
    pub fn apply(self, config: &PlannerConfig) -> PlannerConfig {
        let mut cfg = config.clone();
        cfg.informed_enabled = self.informed();
        if !self.biased() {
            cfg.bias.delta = 0.0;
        }
        cfg
    }

    /// Parses `all` or a comma-separated list of variant names.
    pub fn parse_list(s: &str) -> Result<Vec<Variant>> {
        if s.trim() == "all" {
            return Ok(Variant::ALL.to_vec());
        }
        s.split(',').map(|v| v.trim().parse()).collect()
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown variant {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct TrialBatch {
    pub scenario_name: String,
    pub variant: Variant,
    pub trials: Vec<PlanResult>,
    pub seeds: Vec<u64>,
}

impl TrialBatch {
    pub fn len(&self) -> usize {
        self.trials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trials.is_empty()
    }

    pub fn final_costs(&self) -> Vec<f64> {
        self.trials.iter().map(|t| t.best_cost).collect()
    }
}

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

/// Runs `trials` plans with seeds `base_seed..base_seed + trials`, using the
/// worker count from the environment.
pub fn run_batch(
    scenario: &Scenario,
    variant: Variant,
    trials: usize,
    base_seed: u64,
    config: &PlannerConfig,
) -> Result<TrialBatch> {
    run_batch_with_workers(scenario, variant, trials, base_seed, config, workers_from_env())
}

/// [`run_batch`] on an explicit number of worker threads; `None` uses the
/// global pool. Results do not depend on the worker count.
pub fn run_batch_with_workers(
    scenario: &Scenario,
    variant: Variant,
    trials: usize,
    base_seed: u64,
    config: &PlannerConfig,
    workers: Option<usize>,
) -> Result<TrialBatch> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let cfg = variant.apply(config);
    cfg.validate()?;
    let seeds: Vec<u64> = (0..trials as u64).map(|i| base_seed.wrapping_add(i)).collect();
    let run = || -> Result<Vec<PlanResult>> {
        seeds
            .par_iter()
            .map(|&seed| {
                plan(
                    scenario,
                    PlannerConfig {
                        rng_seed: seed,
                        ..cfg.clone()
                    },
                )
            })
            .collect()
    };
    let results = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    Ok(TrialBatch {
        scenario_name: scenario.name.clone(),
        variant,
        trials: results,
        seeds,
    })
}

/// Checkpoints every `step` iterations up to and including `max`.
pub fn default_checkpoints(max: usize, step: usize) -> Vec<usize> {
    let step = step.max(1);
    let mut out: Vec<usize> = (1..=max / step).map(|k| k * step).collect();
    if out.last() != Some(&max) && max > 0 {
        out.push(max);
    }
    out
}

/// Batches and statistics for several variants on one scenario.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub scenario_name: String,
    pub batches: Vec<TrialBatch>,
    pub stats: Vec<AggregateStats>,
    pub reference: SigmaReference,
}

/// Runs every variant and aggregates each against the reference variant's
/// time-to-3-sigma threshold. The reference variant is run even if it is
/// not among `variants`, but is then left out of the report.
pub fn run_bench(
    scenario: &Scenario,
    variants: &[Variant],
    trials: usize,
    base_seed: u64,
    config: &PlannerConfig,
    checkpoints: &[usize],
    reference: Variant,
) -> Result<BenchReport> {
    if let Some(&max) = checkpoints.iter().max() {
        if max > config.max_iterations {
            return Err(Error::InvalidConfig(format!(
                "checkpoint {max} exceeds the iteration budget {}",
                config.max_iterations
            )));
        }
    }
    let mut batches = Vec::with_capacity(variants.len());
    for &v in variants {
        batches.push(run_batch(scenario, v, trials, base_seed, config)?);
    }
    let reference_stats = match batches.iter().find(|b| b.variant == reference) {
        Some(b) => sigma_reference(b),
        None => sigma_reference(&run_batch(scenario, reference, trials, base_seed, config)?),
    };
    let stats = batches
        .iter()
        .map(|b| aggregate(b, checkpoints, &reference_stats))
        .collect();
    Ok(BenchReport {
        scenario_name: scenario.name.clone(),
        batches,
        stats,
        reference: reference_stats,
    })
}
