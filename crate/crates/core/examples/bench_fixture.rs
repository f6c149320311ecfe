//! Compares the four sampling variants on a fixture and writes the tables
//! and figures.
//!
//! cargo run --release --example bench_fixture -- inner_coastal 20 out/bench

use devrrt::bench::{default_checkpoints, run_bench, write_bench_report, Variant, DEFAULT_CHECKPOINT_STEP};
use devrrt::{fixture, PlannerConfig};

fn main() -> devrrt::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "narrow_passage".into());
    let trials: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);
    let out = args.next().unwrap_or_else(|| format!("out/{name}"));

    let scenario = fixture(&name).expect("unknown fixture").scenario;
    let cfg = PlannerConfig {
        max_iterations: 1000,
        ..PlannerConfig::for_scenario(&scenario)
    };
    let checkpoints = default_checkpoints(cfg.max_iterations, DEFAULT_CHECKPOINT_STEP);
    let report = run_bench(&scenario, &Variant::ALL, trials, 0, &cfg, &checkpoints, Variant::InformedBiased)?;

    println!("threshold {:.2} (median {:.2} + 3 x {:.2})", report.reference.threshold(), report.reference.median_final, report.reference.sigma);
    for s in &report.stats {
        println!(
            "{:<20} median @250 {:>9.1}  @1000 {:>9.1}  time-to-3sigma {:.4}s",
            s.variant.name(),
            s.median_cost[9],
            s.median_final(),
            s.median_time_to_3sigma()
        );
    }
    write_bench_report(&report, &scenario, std::path::Path::new(&out))?;
    println!("wrote {out}");
    Ok(())
}
