//! Command implementations behind the `devrrt` binary.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::informed::IntersectionMode;
use crate::planner::{plan, PlanResult, PlannerConfig};
use crate::scenarios::{fixture, fixture_names, Scenario};

use super::output::write_plan_outputs;
use super::{default_checkpoints, run_bench, write_bench_report, BenchReport, Variant, DEFAULT_CHECKPOINT_STEP};

/// Run options. Every flag can also be given in a JSON config file using
/// the flag name with underscores; flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunOptions {
    /// Scenario file, or the name of a bundled fixture.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Sampling variant for `plan`.
    #[arg(long)]
    pub variant: Option<String>,
    /// `all` or a comma-separated list of variants for `bench`.
    #[arg(long)]
    pub variants: Option<String>,
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Seed for `plan`; base seed for `bench`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Comma-separated iteration checkpoints.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Option<Vec<usize>>,
    /// Variant whose final costs define the time-to-3-sigma threshold.
    #[arg(long)]
    pub reference: Option<String>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// `zero` or `mc:<samples>`.
    #[arg(long)]
    pub intersection_mode: Option<String>,
    #[arg(long)]
    pub steer_eta: Option<f64>,
    #[arg(long)]
    pub rewire_gamma: Option<f64>,
    #[arg(long)]
    pub goal_tolerance: Option<f64>,
    #[arg(long)]
    pub rebuild_cadence: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $over:ident; $($f:ident),*) => {
        RunOptions { $($f: $over.$f.or($base.$f)),* }
    };
}

impl RunOptions {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| Error::parse(path, e.to_string()))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: RunOptions) -> RunOptions {
        let base = self;
        overlay!(base, over; scenario, variant, variants, iterations, seed, trials, checkpoints,
            reference, omega, epsilon, delta, intersection_mode, steer_eta, rewire_gamma,
            goal_tolerance, rebuild_cadence, out)
    }

    /// Flags layered over the optional config file.
    pub fn resolve(config: Option<&Path>, flags: RunOptions) -> Result<RunOptions> {
        match config {
            Some(p) => Ok(RunOptions::from_json_file(p)?.overlay(flags)),
            None => Ok(flags),
        }
    }

    pub fn load_scenario(&self) -> Result<Scenario> {
        let name = self
            .scenario
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("--scenario is required".into()))?;
        match fixture(name) {
            Some(fx) => Ok(fx.scenario),
            None => Scenario::load(name),
        }
    }

    /// Planner configuration: scenario defaults with any overrides applied.
    pub fn planner_config(&self, scenario: &Scenario) -> Result<PlannerConfig> {
        let mut cfg = PlannerConfig::for_scenario(scenario);
        cfg.max_iterations = self.iterations.unwrap_or(cfg.max_iterations);
        cfg.rng_seed = self.seed.unwrap_or(cfg.rng_seed);
        cfg.cost.omega = self.omega.unwrap_or(cfg.cost.omega);
        cfg.cost.epsilon = self.epsilon.unwrap_or(cfg.cost.epsilon);
        cfg.bias.delta = self.delta.unwrap_or(cfg.bias.delta);
        if let Some(m) = &self.intersection_mode {
            cfg.intersection_mode = m.parse::<IntersectionMode>()?;
        }
        cfg.steer_eta = self.steer_eta.unwrap_or(cfg.steer_eta);
        cfg.rewire_gamma = self.rewire_gamma.unwrap_or(cfg.rewire_gamma);
        cfg.goal_tolerance = self.goal_tolerance.unwrap_or(cfg.goal_tolerance);
        cfg.rebuild_cadence = self.rebuild_cadence.unwrap_or(cfg.rebuild_cadence);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Plans once and writes `path.csv`, `trace.csv`, `times.csv` and `map.svg`.
pub fn run_plan_command(opts: &RunOptions) -> Result<(PlanResult, PathBuf)> {
    let scenario = opts.load_scenario()?;
    let variant: Variant = opts.variant.as_deref().unwrap_or("informed-biased").parse()?;
    let cfg = variant.apply(&opts.planner_config(&scenario)?);
    let result = plan(&scenario, cfg)?;
    let out = opts.out.clone().unwrap_or_else(|| PathBuf::from("out/plan"));
    write_plan_outputs(&scenario, &result, &out)?;
    Ok((result, out))
}

/// Runs the requested variants and writes the report files.
pub fn run_bench_command(opts: &RunOptions) -> Result<(BenchReport, PathBuf)> {
    let scenario = opts.load_scenario()?;
    let cfg = opts.planner_config(&scenario)?;
    let variants = Variant::parse_list(opts.variants.as_deref().unwrap_or("all"))?;
    let reference: Variant = opts.reference.as_deref().unwrap_or("informed-biased").parse()?;
    let checkpoints = opts
        .checkpoints
        .clone()
        .unwrap_or_else(|| default_checkpoints(cfg.max_iterations, DEFAULT_CHECKPOINT_STEP));
    let trials = opts.trials.unwrap_or(50);
    let report = run_bench(
        &scenario,
        &variants,
        trials,
        opts.seed.unwrap_or(0),
        &cfg,
        &checkpoints,
        reference,
    )?;
    let out = opts.out.clone().unwrap_or_else(|| PathBuf::from("out/bench"));
    write_bench_report(&report, &scenario, &out)?;
    Ok((report, out))
}

/// Writes every bundled fixture as `<name>.json` into `dir`.
pub fn write_fixtures(dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    fixture_names()
        .iter()
        .map(|name| {
            let path = dir.join(format!("{name}.json"));
            fixture(name).expect("known fixture").scenario.save(&path)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let file = RunOptions {
            scenario: Some("fjord".into()),
            iterations: Some(300),
            delta: Some(0.2),
            ..Default::default()
        };
        let flags = RunOptions {
            iterations: Some(50),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.iterations, Some(50));
        assert_eq!(merged.delta, Some(0.2));
        assert_eq!(merged.scenario.as_deref(), Some("fjord"));
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("cfg.json");
        fs::write(&p, r#"{"iterations": 10, "sed": 3}"#).unwrap();
        let err = RunOptions::from_json_file(&p).unwrap_err().to_string();
        assert!(err.contains("sed"), "{err}");
        fs::write(&p, r#"{"iterations": 10, "checkpoints": [5, 10], "intersection_mode": "mc:100"}"#).unwrap();
        let o = RunOptions::from_json_file(&p).unwrap();
        assert_eq!(o.checkpoints, Some(vec![5, 10]));
    }

    #[test]
    fn planner_config_applies_overrides() {
        let o = RunOptions {
            scenario: Some("narrow_passage".into()),
            omega: Some(0.5),
            intersection_mode: Some("mc:1000".into()),
            ..Default::default()
        };
        let s = o.load_scenario().unwrap();
        let cfg = o.planner_config(&s).unwrap();
        assert_eq!(cfg.cost.omega, 0.5);
        assert_eq!(cfg.intersection_mode, IntersectionMode::MonteCarlo(1000));
        let bad = RunOptions { omega: Some(1.0), ..o };
        assert!(bad.planner_config(&s).is_err());
    }
}
