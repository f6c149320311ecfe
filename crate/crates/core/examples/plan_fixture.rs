//! Plans on a bundled fixture and prints the cost trace.
//!
//! cargo run --release --example plan_fixture -- fjord 2000 7

use devrrt::{costs::path_cost, fixture, plan, PlannerConfig};

fn main() -> devrrt::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "narrow_passage".into());
    let iterations: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let fx = fixture(&name).expect("unknown fixture");
    let cfg = PlannerConfig {
        max_iterations: iterations,
        rng_seed: seed,
        ..PlannerConfig::for_scenario(&fx.scenario)
    };
    let feasible = path_cost(&fx.feasible_path, &fx.scenario.nominal, &cfg.cost);
    let result = plan(&fx.scenario, cfg)?;

    println!("{name}: {} nodes, informed from {:?}", result.tree_size, result.informed_activated_at);
    println!("samples: {:?}", result.sample_counts);
    println!("hand-drawn path cost {feasible:.1}");
    for ((it, c), (_, t)) in result.cost_trace.iter().zip(&result.wall_time_trace) {
        println!("{it:>6} {c:>14.1} {t:>8.3}s");
    }
    println!("best path:");
    for s in &result.best_path {
        println!("  ({:.1}, {:.1})", s[0], s[1]);
    }
    Ok(())
}
