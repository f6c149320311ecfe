//! Plans through a scenario document with static and moving obstacles and
//! writes a map of the result.
//!
//! cargo run --release --example custom_scenario -- out/custom.svg

use devrrt::bench::render_map_svg;
use devrrt::{plan, PlannerConfig, Scenario};

const DOC: &str = r#"{
  "version": "1",
  "name": "harbour_exit",
  "bounds": { "min": [0, 0], "max": [1200, 800] },
  "nominal": [[60, 400], [600, 400], [1140, 500]],
  "own_speed": 4.0,
  "static_obstacles": [
    { "type": "polygon", "vertices": [[300, 0], [420, 0], [420, 330], [300, 300]] },
    { "type": "circle", "center": [600, 430], "radius": 45 },
    { "type": "box", "min": [800, 560], "max": [950, 800] }
  ],
  "moving_obstacles": [
    { "type": "ellipse", "semi_major": 40, "semi_minor": 14,
      "waypoints": [[880, 100], [880, 750]], "speed": 3.0 }
  ]
}"#;

fn main() -> devrrt::Result<()> {
    let scenario = Scenario::from_json(DOC)?;
    let cfg = PlannerConfig {
        max_iterations: 3000,
        rng_seed: 5,
        ..PlannerConfig::for_scenario(&scenario)
    };
    let result = plan(&scenario, cfg)?;
    println!(
        "{}: best cost {:.1} with {} waypoints, {} union rebuilds",
        scenario.name,
        result.best_cost,
        result.best_path.len(),
        result.union_snapshots.len()
    );
    let out = std::env::args().nth(1).unwrap_or_else(|| "harbour_exit.svg".into());
    std::fs::write(&out, render_map_svg(&scenario, Some(&result), 5)).expect("writable output");
    println!("wrote {out}");
    Ok(())
}
