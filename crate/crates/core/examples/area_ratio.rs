//! Statically free fraction of each bundled fixture.

use devrrt::{area_ratio, fixture, fixture_names};

fn main() -> devrrt::Result<()> {
    for name in fixture_names() {
        let fx = fixture(name).expect("bundled");
        let a = area_ratio(&fx.scenario, 1_000_000, 0)?;
        println!(
            "{name:<15} A_r {:.4} +- {:.4} (sized for {:.3})",
            a.value, a.std_error, fx.target_area_ratio
        );
    }
    Ok(())
}
