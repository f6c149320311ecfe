//! On-disk scenario document, version "1".
//!
//! ```json
//! {
//!   "version": "1",
//!   "name": "narrow_passage",
//!   "bounds": { "min": [0, 0], "max": [2000, 1000] },
//!   "nominal": [[100, 400], [500, 400], [1900, 600]],
//!   "own_speed": 5.0,
//!   "static_obstacles": [
//!     { "type": "polygon", "vertices": [[0, 0], [10, 0], [10, 10]] },
//!     { "type": "circle", "center": [50, 50], "radius": 5 },
//!     { "type": "box", "min": [1, 1], "max": [2, 2] }
//!   ],
//!   "moving_obstacles": [
//!     { "type": "ellipse", "semi_major": 60, "semi_minor": 20,
//!       "waypoints": [[1950, 600], [50, 400]], "speed": 4.0 }
//!   ]
//! }
//! ```
//!
//! Unknown keys are rejected everywhere.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub version: String,
    pub name: String,
    pub bounds: BoundsDoc,
    pub nominal: Vec<Vec<f64>>,
    pub own_speed: f64,
    #[serde(default)]
    pub static_obstacles: Vec<StaticObstacleDoc>,
    #[serde(default)]
    pub moving_obstacles: Vec<MovingObstacleDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsDoc {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StaticObstacleDoc {
    Polygon { vertices: Vec<Vec<f64>> },
    Circle { center: Vec<f64>, radius: f64 },
    Box { min: Vec<f64>, max: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MovingObstacleDoc {
    Ellipse {
        semi_major: f64,
        semi_minor: f64,
        waypoints: Vec<Vec<f64>>,
        speed: f64,
    },
}
