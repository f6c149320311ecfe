//! Planning scenarios: bounds, nominal path, obstacles and own-ship speed.

mod fixtures;
pub mod schema;

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{polygon_is_simple, signed_area, Bounds, Obstacle, StateVec};
use crate::nominal::NominalPath;

pub use fixtures::{bundled_fixtures, fixture, fixture_names, Fixture};
use schema::{BoundsDoc, MovingObstacleDoc, ScenarioDoc, StaticObstacleDoc, SCHEMA_VERSION};

/// Fraction of the bounds diagonal used as the collision-check resolution.
pub const COLLISION_RESOLUTION_FRACTION: f64 = 1.0 / 200.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub bounds: Bounds,
    pub nominal: NominalPath,
    pub static_obstacles: Vec<Obstacle>,
    pub moving_obstacles: Vec<Obstacle>,
    pub own_speed: f64,
}

/// Monte Carlo estimate of the statically free fraction of the bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaRatio {
    pub value: f64,
    pub std_error: f64,
}

impl Scenario {
    /// Validates and assembles a scenario.
    pub fn new(
        name: impl Into<String>,
        bounds: Bounds,
        nominal: NominalPath,
        static_obstacles: Vec<Obstacle>,
        moving_obstacles: Vec<Obstacle>,
        own_speed: f64,
    ) -> Result<Self> {
        let s = Scenario {
            name: name.into(),
            bounds,
            nominal,
            static_obstacles,
            moving_obstacles,
            own_speed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    /// Measure of the sampling rectangle.
    pub fn rect_measure(&self) -> f64 {
        self.bounds.measure()
    }

    pub fn collision_resolution(&self) -> f64 {
        self.bounds.diagonal() * COLLISION_RESOLUTION_FRACTION
    }

    /// True if `p` is inside the bounds and outside every obstacle at time `t`.
    pub fn state_free(&self, p: &[f64], t: f64) -> bool {
        self.bounds.contains(p)
            && !self
                .static_obstacles
                .iter()
                .chain(&self.moving_obstacles)
                .any(|o| o.pose_at(t).contains(p))
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        let in_bounds = |p: &[f64], path: &str| -> Result<()> {
            if p.len() != n {
                return Err(Error::scenario(path, format!("expected {n} coordinates, got {}", p.len())));
            }
            if !self.bounds.contains(p) {
                return Err(Error::scenario(path, "lies outside bounds"));
            }
            Ok(())
        };
        if !(self.own_speed > 0.0) || !self.own_speed.is_finite() {
            return Err(Error::scenario("own_speed", "must be positive"));
        }
        if !(self.rect_measure() > 0.0) {
            return Err(Error::scenario("bounds", "must have positive measure"));
        }
        for (i, s) in self.nominal.states().iter().enumerate() {
            in_bounds(s, &format!("nominal[{i}]"))?;
        }
        for (i, o) in self.static_obstacles.iter().enumerate() {
            let path = format!("static_obstacles[{i}]");
            match o {
                Obstacle::Polygon { vertices } => {
                    if n != 2 {
                        return Err(Error::scenario(&path, "polygons are only supported in 2-D"));
                    }
                    if vertices.len() < 3 {
                        return Err(Error::scenario(
                            &path,
                            format!("polygon needs at least 3 vertices, got {}", vertices.len()),
                        ));
                    }
                    for (j, v) in vertices.iter().enumerate() {
                        in_bounds(v, &format!("{path}.vertices[{j}]"))?;
                    }
                    if !polygon_is_simple(vertices) {
                        return Err(Error::scenario(&path, "polygon is not simple"));
                    }
                    if signed_area(vertices) <= 0.0 {
                        return Err(Error::scenario(&path, "polygon must be counter-clockwise"));
                    }
                }
                Obstacle::Circle { center, radius } => {
                    if !(*radius > 0.0) || !radius.is_finite() {
                        return Err(Error::scenario(format!("{path}.radius"), "must be positive"));
                    }
                    in_bounds(center, &format!("{path}.center"))?;
                    for (k, c) in center.iter().enumerate() {
                        if c - radius < self.bounds.min[k] || c + radius > self.bounds.max[k] {
                            return Err(Error::scenario(&path, "circle extends outside bounds"));
                        }
                    }
                }
                Obstacle::Box { min, max } => {
                    in_bounds(min, &format!("{path}.min"))?;
                    in_bounds(max, &format!("{path}.max"))?;
                    if min.iter().zip(max.iter()).any(|(a, b)| b <= a) {
                        return Err(Error::scenario(&path, "box must have max > min on every axis"));
                    }
                }
                Obstacle::MovingEllipse { .. } => {
                    return Err(Error::scenario(&path, "moving obstacle in static list"));
                }
            }
        }
        for (i, o) in self.moving_obstacles.iter().enumerate() {
            let path = format!("moving_obstacles[{i}]");
            let Obstacle::MovingEllipse {
                semi_major,
                semi_minor,
                waypoints,
                speed,
            } = o
            else {
                return Err(Error::scenario(&path, "only moving ellipses are allowed here"));
            };
            if n != 2 {
                return Err(Error::scenario(&path, "moving ellipses are only supported in 2-D"));
            }
            if !(*semi_major > 0.0 && *semi_minor > 0.0) {
                return Err(Error::scenario(&path, "semi axes must be positive"));
            }
            if !(*speed >= 0.0) || !speed.is_finite() {
                return Err(Error::scenario(format!("{path}.speed"), "must be non-negative"));
            }
            if waypoints.is_empty() {
                return Err(Error::scenario(format!("{path}.waypoints"), "needs at least one waypoint"));
            }
            for (j, w) in waypoints.iter().enumerate() {
                if w.len() != 2 || w.iter().any(|c| !c.is_finite()) {
                    return Err(Error::scenario(format!("{path}.waypoints[{j}]"), "must be a finite 2-D point"));
                }
            }
        }
        Ok(())
    }

    /// Parses and validates a scenario document.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: ScenarioDoc = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::scenario(path, e.into_inner().to_string())
        })?;
        Self::from_doc(doc)
    }

    pub fn from_doc(doc: ScenarioDoc) -> Result<Self> {
        if doc.version != SCHEMA_VERSION {
            return Err(Error::scenario(
                "version",
                format!("unsupported version `{}`, expected `{SCHEMA_VERSION}`", doc.version),
            ));
        }
        let state = |v: Vec<f64>, path: String| {
            StateVec::new(v).map_err(|e| Error::scenario(path, e.to_string()))
        };
        let bounds = Bounds::new(
            state(doc.bounds.min, "bounds.min".into())?,
            state(doc.bounds.max, "bounds.max".into())?,
        )
        .map_err(|e| Error::scenario("bounds", e.to_string()))?;
        let nominal_states = doc
            .nominal
            .into_iter()
            .enumerate()
            .map(|(i, v)| state(v, format!("nominal[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let nominal = NominalPath::new(nominal_states).map_err(|e| Error::scenario("nominal", e.to_string()))?;
        let mut statics = Vec::with_capacity(doc.static_obstacles.len());
        for (i, o) in doc.static_obstacles.into_iter().enumerate() {
            let path = format!("static_obstacles[{i}]");
            statics.push(match o {
                StaticObstacleDoc::Polygon { vertices } => Obstacle::Polygon {
                    vertices: vertices
                        .into_iter()
                        .enumerate()
                        .map(|(j, v)| state(v, format!("{path}.vertices[{j}]")))
                        .collect::<Result<_>>()?,
                },
                StaticObstacleDoc::Circle { center, radius } => Obstacle::Circle {
                    center: state(center, format!("{path}.center"))?,
                    radius,
                },
                StaticObstacleDoc::Box { min, max } => Obstacle::Box {
                    min: state(min, format!("{path}.min"))?,
                    max: state(max, format!("{path}.max"))?,
                },
            });
        }
        let mut moving = Vec::with_capacity(doc.moving_obstacles.len());
        for (i, o) in doc.moving_obstacles.into_iter().enumerate() {
            let MovingObstacleDoc::Ellipse {
                semi_major,
                semi_minor,
                waypoints,
                speed,
            } = o;
            moving.push(Obstacle::MovingEllipse {
                semi_major,
                semi_minor,
                waypoints: waypoints
                    .into_iter()
                    .enumerate()
                    .map(|(j, v)| state(v, format!("moving_obstacles[{i}].waypoints[{j}]")))
                    .collect::<Result<_>>()?,
                speed,
            });
        }
        Scenario::new(doc.name, bounds, nominal, statics, moving, doc.own_speed)
    }

    pub fn to_doc(&self) -> ScenarioDoc {
        let pts = |v: &[StateVec]| v.iter().map(|s| s.to_vec()).collect::<Vec<_>>();
        ScenarioDoc {
            version: SCHEMA_VERSION.to_string(),
            name: self.name.clone(),
            bounds: BoundsDoc {
                min: self.bounds.min.to_vec(),
                max: self.bounds.max.to_vec(),
            },
            nominal: pts(self.nominal.states()),
            own_speed: self.own_speed,
            static_obstacles: self
                .static_obstacles
                .iter()
                .filter_map(|o| match o {
                    Obstacle::Polygon { vertices } => Some(StaticObstacleDoc::Polygon { vertices: pts(vertices) }),
                    Obstacle::Circle { center, radius } => Some(StaticObstacleDoc::Circle {
                        center: center.to_vec(),
                        radius: *radius,
                    }),
                    Obstacle::Box { min, max } => Some(StaticObstacleDoc::Box {
                        min: min.to_vec(),
                        max: max.to_vec(),
                    }),
                    Obstacle::MovingEllipse { .. } => None,
                })
                .collect(),
            moving_obstacles: self
                .moving_obstacles
                .iter()
                .filter_map(|o| match o {
                    Obstacle::MovingEllipse {
                        semi_major,
                        semi_minor,
                        waypoints,
                        speed,
                    } => Some(MovingObstacleDoc::Ellipse {
                        semi_major: *semi_major,
                        semi_minor: *semi_minor,
                        waypoints: pts(waypoints),
                        speed: *speed,
                    }),
                    _ => None,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("scenario document serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }
}

/// Free fraction of the bounds with respect to static obstacles only.
pub fn area_ratio(scenario: &Scenario, mc_samples: usize, seed: u64) -> Result<AreaRatio> {
    if mc_samples < 1000 {
        return Err(Error::InvalidConfig(format!(
            "area ratio needs at least 1000 samples, got {mc_samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = &scenario.bounds;
    let mut p = vec![0.0; scenario.dim()];
    let mut free = 0usize;
    for _ in 0..mc_samples {
        for (k, c) in p.iter_mut().enumerate() {
            *c = rng.random_range(b.min[k]..b.max[k]);
        }
        if !scenario.static_obstacles.iter().any(|o| o.pose_at(0.0).contains(&p)) {
            free += 1;
        }
    }
    let value = free as f64 / mc_samples as f64;
    Ok(AreaRatio {
        value,
        std_error: (value * (1.0 - value) / mc_samples as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "version": "1",
        "name": "minimal",
        "bounds": { "min": [0, 0], "max": [10, 10] },
        "nominal": [[1, 1], [9, 9]],
        "own_speed": 1.0
    }"#;

    #[test]
    fn minimal_document_loads() {
        let s = Scenario::from_json(MINIMAL).unwrap();
        assert!(s.static_obstacles.is_empty());
        assert!(s.moving_obstacles.is_empty());
        assert_eq!(s.nominal.len(), 2);
        assert_eq!(s.rect_measure(), 100.0);
    }

    fn expect_err(doc: &str) -> (String, String) {
        match Scenario::from_json(doc) {
            Err(Error::Scenario { path, message }) => (path, message),
            other => panic!("expected scenario error, got {other:?}"),
        }
    }

    #[test]
    fn two_vertex_polygon_names_index() {
        let doc = MINIMAL.replace(
            r#""own_speed": 1.0"#,
            r#""own_speed": 1.0, "static_obstacles": [
                {"type": "circle", "center": [5, 2], "radius": 1},
                {"type": "polygon", "vertices": [[2, 2], [3, 3]]}]"#,
        );
        let (path, msg) = expect_err(&doc);
        assert_eq!(path, "static_obstacles[1]");
        assert!(msg.contains("3 vertices"), "{msg}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let doc = MINIMAL.replace(r#""own_speed": 1.0"#, r#""own_speed": 1.0, "colour": "red""#);
        let (_, msg) = expect_err(&doc);
        assert!(msg.contains("colour"), "{msg}");

        let doc = MINIMAL.replace(
            r#""own_speed": 1.0"#,
            r#""own_speed": 1.0, "static_obstacles": [{"type": "circle", "center": [5, 2], "radius": 1, "fill": 1}]"#,
        );
        let (path, msg) = expect_err(&doc);
        assert!(path.starts_with("static_obstacles[0]"), "{path}");
        assert!(msg.contains("fill"), "{msg}");
    }

    #[test]
    fn nominal_outside_bounds_is_rejected() {
        let doc = MINIMAL.replace("[9, 9]", "[11, 9]");
        let (path, _) = expect_err(&doc);
        assert_eq!(path, "nominal[1]");
    }

    #[test]
    fn bad_version_and_orientation() {
        let (path, _) = expect_err(&MINIMAL.replace(r#""1""#, r#""2""#));
        assert_eq!(path, "version");
        let doc = MINIMAL.replace(
            r#""own_speed": 1.0"#,
            r#""own_speed": 1.0, "static_obstacles": [{"type": "polygon", "vertices": [[2, 2], [2, 4], [4, 4], [4, 2]]}]"#,
        );
        let (_, msg) = expect_err(&doc);
        assert!(msg.contains("counter-clockwise"));
        let doc = MINIMAL.replace(
            r#""own_speed": 1.0"#,
            r#""own_speed": 1.0, "static_obstacles": [{"type": "polygon", "vertices": [[2, 2], [4, 4], [4, 2], [2, 4]]}]"#,
        );
        let (_, msg) = expect_err(&doc);
        assert!(msg.contains("not simple"));
    }

    #[test]
    fn missing_field_reports_path() {
        let doc = r#"{"version": "1", "name": "x", "bounds": {"min": [0, 0]}, "nominal": [[1, 1], [2, 2]], "own_speed": 1}"#;
        let (path, msg) = expect_err(doc);
        assert!(path.starts_with("bounds"), "{path}");
        assert!(msg.contains("max"), "{msg}");
    }

    #[test]
    fn empty_scenario_area_ratio_is_one() {
        let s = Scenario::from_json(MINIMAL).unwrap();
        let a = area_ratio(&s, 10_000, 1).unwrap();
        assert_eq!(a.value, 1.0);
        assert!(area_ratio(&s, 999, 1).is_err());
    }

    #[test]
    fn half_area_circle() {
        let r = (50.0 / std::f64::consts::PI).sqrt();
        let doc = MINIMAL.replace(
            r#""own_speed": 1.0"#,
            &format!(r#""own_speed": 1.0, "static_obstacles": [{{"type": "circle", "center": [5, 5], "radius": {r}}}]"#),
        );
        let doc = doc.replace("[[1, 1], [9, 9]]", "[[0.5, 0.5], [9.5, 0.5]]");
        let s = Scenario::from_json(&doc).unwrap();
        let a = area_ratio(&s, 200_000, 2).unwrap();
        assert!((a.value - 0.5).abs() < 3.0 * a.std_error, "{a:?}");
    }
}
