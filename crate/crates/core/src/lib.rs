//! Sampling-based local re-planning that stays close to a nominal route.
//!
//! A nominal path is a polyline of waypoints. The planner searches for a
//! collision-free path between its endpoints minimising the deviation cost:
//! the summed distance to the nominal over finely interpolated path states,
//! optionally blended with path length. Once a solution exists, samples can
//! be drawn from a union of prolate hyperspheroids, one per nominal segment,
//! whenever that union is smaller than the planning bounds.
//!
//! ```
//! use devrrt::{plan, PlannerConfig, fixture};
//!
//! let fx = fixture("fjord").unwrap();
//! let cfg = PlannerConfig { max_iterations: 200, ..PlannerConfig::for_scenario(&fx.scenario) };
//! let result = plan(&fx.scenario, cfg).unwrap();
//! assert_eq!(result.iterations, 200);
//! ```

pub mod bench;
pub mod costs;
pub mod error;
pub mod geometry;
pub mod informed;
pub mod kdtree;
pub mod nominal;
pub mod planner;
pub mod scenarios;

pub use costs::{deviation_cost, edge_cost, path_cost, path_length, CostConfig};
pub use error::{Error, Result};
pub use geometry::{Bounds, Obstacle, Segment, StateVec};
pub use informed::{
    biased_sample, build_union, should_switch, BiasConfig, InformedUnion, IntersectionMode,
    ProlateHyperspheroid,
};
pub use nominal::{interpolate, nearest_deviation_state, NominalPath};
pub use planner::{extract_best_path, plan, rrt_star_step, PlanResult, PlannerConfig, Tree};
pub use scenarios::{area_ratio, bundled_fixtures, fixture, fixture_names, Fixture, Scenario};
