//! Three procedurally built marine scenarios. Geometry is synthetic; the
//! static obstacles are disjoint and sized so the statically free fractions
//! are 0.265, 0.633 and 0.802 of the bounds.

use crate::geometry::{Bounds, Obstacle, StateVec};
use crate::nominal::NominalPath;

use super::Scenario;

/// A bundled scenario with a hand-authored collision-free path.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub scenario: Scenario,
    pub feasible_path: Vec<StateVec>,
    /// Statically free fraction of the bounds the geometry was sized for.
    pub target_area_ratio: f64,
}

fn pts(p: &[[f64; 2]]) -> Vec<StateVec> {
    p.iter().map(|&q| StateVec::from(q)).collect()
}

fn polygon(p: &[[f64; 2]]) -> Obstacle {
    Obstacle::Polygon { vertices: pts(p) }
}

fn circle(c: [f64; 2], radius: f64) -> Obstacle {
    Obstacle::Circle {
        center: c.into(),
        radius,
    }
}

fn ellipse(semi_major: f64, semi_minor: f64, waypoints: &[[f64; 2]], speed: f64) -> Obstacle {
    Obstacle::MovingEllipse {
        semi_major,
        semi_minor,
        waypoints: pts(waypoints),
        speed,
    }
}

fn bounds(w: f64, h: f64) -> Bounds {
    Bounds::new(StateVec::xy(0.0, 0.0), StateVec::xy(w, h)).expect("fixture bounds")
}

/// Dredged channel of constant vertical width 265 m across a 2000 m x 1000 m
/// chart, with a head-on vessel coming down the channel.
fn narrow_passage() -> Fixture {
    const HALF: f64 = 265.0 / 2.0;
    let north = polygon(&[
        [0.0, 400.0 + HALF],
        [500.0, 400.0 + HALF],
        [1000.0, 600.0 + HALF],
        [2000.0, 600.0 + HALF],
        [2000.0, 1000.0],
        [0.0, 1000.0],
    ]);
    let south = polygon(&[
        [0.0, 0.0],
        [2000.0, 0.0],
        [2000.0, 600.0 - HALF],
        [1000.0, 600.0 - HALF],
        [500.0, 400.0 - HALF],
        [0.0, 400.0 - HALF],
    ]);
    let head_on = ellipse(
        60.0,
        20.0,
        &[[1950.0, 600.0], [1000.0, 600.0], [500.0, 400.0], [50.0, 400.0]],
        4.0,
    );
    let nominal = NominalPath::new(pts(&[[100.0, 400.0], [500.0, 400.0], [1000.0, 600.0], [1900.0, 600.0]]))
        .expect("fixture nominal");
    let scenario = Scenario::new(
        "narrow_passage",
        bounds(2000.0, 1000.0),
        nominal,
        vec![north, south],
        vec![head_on],
        5.0,
    )
    .expect("narrow_passage fixture");
    Fixture {
        scenario,
        feasible_path: pts(&[
            [100.0, 400.0],
            [500.0, 400.0],
            [1000.0, 680.0],
            [1450.0, 680.0],
            [1650.0, 600.0],
            [1900.0, 600.0],
        ]),
        target_area_ratio: 0.265,
    }
}

/// Open coastal chart with islands, a starboard crossing ferry and a slower
/// vessel ahead on the nominal.
fn inner_coastal() -> Fixture {
    // Shorelines pulled back from their drafted positions to size the free area.
    const RECESS: f64 = 47.717;
    let north = polygon(&[
        [0.0, 950.0 + RECESS],
        [600.0, 1000.0 + RECESS],
        [1000.0, 920.0 + RECESS],
        [1400.0, 960.0 + RECESS],
        [2000.0, 1000.0 + RECESS],
        [2000.0, 1200.0],
        [0.0, 1200.0],
    ]);
    let south = polygon(&[
        [0.0, 0.0],
        [2000.0, 0.0],
        [2000.0, 280.0 - RECESS],
        [1500.0, 330.0 - RECESS],
        [900.0, 240.0 - RECESS],
        [400.0, 290.0 - RECESS],
        [0.0, 250.0 - RECESS],
    ]);
    let island = polygon(&[[1250.0, 430.0], [1430.0, 440.0], [1400.0, 520.0], [1280.0, 510.0]]);
    let nominal_pts = [
        [100.0, 600.0],
        [700.0, 600.0],
        [1100.0, 700.0],
        [1500.0, 700.0],
        [1900.0, 620.0],
    ];
    let slow_ahead = ellipse(
        40.0,
        15.0,
        &[[500.0, 600.0], [700.0, 600.0], [1100.0, 700.0], [1500.0, 700.0], [1900.0, 620.0]],
        2.5,
    );
    let ferry = ellipse(50.0, 18.0, &[[1000.0, 250.0], [1000.0, 1000.0]], 3.0);
    let scenario = Scenario::new(
        "inner_coastal",
        bounds(2000.0, 1200.0),
        NominalPath::new(pts(&nominal_pts)).expect("fixture nominal"),
        vec![
            north,
            south,
            island,
            circle([350.0, 820.0], 60.0),
            circle([800.0, 420.0], 55.0),
            circle([1700.0, 820.0], 50.0),
        ],
        vec![slow_ahead, ferry],
        6.0,
    )
    .expect("inner_coastal fixture");
    Fixture {
        scenario,
        feasible_path: pts(&[
            [100.0, 600.0],
            [500.0, 600.0],
            [700.0, 540.0],
            [1000.0, 540.0],
            [1300.0, 660.0],
            [1500.0, 700.0],
            [1900.0, 620.0],
        ]),
        target_area_ratio: 0.633,
    }
}

/// Leaving a fjord through a narrow exit while a fishing vessel works
/// slowly across the nominal.
fn fjord() -> Fixture {
    // Radii scale two drafted skerries of 60 m and 70 m to size the free area.
    const SKERRY_SCALE: f64 = 1.515_857_148_951_717;
    let west = polygon(&[[0.0, 650.0], [500.0, 690.0], [560.0, 800.0], [520.0, 900.0], [0.0, 920.0]]);
    let east = polygon(&[[1600.0, 600.0], [1600.0, 960.0], [980.0, 900.0], [860.0, 790.0], [920.0, 700.0]]);
    let fishing = ellipse(80.0, 45.0, &[[790.0, 330.0], [830.0, 360.0], [790.0, 390.0]], 0.3);
    let scenario = Scenario::new(
        "fjord",
        bounds(1600.0, 1200.0),
        NominalPath::new(pts(&[[800.0, 100.0], [800.0, 500.0], [710.0, 800.0], [700.0, 1100.0]]))
            .expect("fixture nominal"),
        vec![
            west,
            east,
            circle([250.0, 300.0], 60.0 * SKERRY_SCALE),
            circle([1350.0, 250.0], 70.0 * SKERRY_SCALE),
        ],
        vec![fishing],
        4.0,
    )
    .expect("fjord fixture");
    Fixture {
        scenario,
        feasible_path: pts(&[
            [800.0, 100.0],
            [800.0, 180.0],
            [960.0, 340.0],
            [800.0, 500.0],
            [710.0, 800.0],
            [700.0, 1100.0],
        ]),
        target_area_ratio: 0.802,
    }
}

pub fn fixture_names() -> [&'static str; 3] {
    ["narrow_passage", "inner_coastal", "fjord"]
}

/// Looks up a bundled fixture by name.
pub fn fixture(name: &str) -> Option<Fixture> {
    match name {
        "narrow_passage" => Some(narrow_passage()),
        "inner_coastal" => Some(inner_coastal()),
        "fjord" => Some(fjord()),
        _ => None,
    }
}

/// The three bundled scenarios, in case-study order.
pub fn bundled_fixtures() -> Vec<Scenario> {
    fixture_names()
        .iter()
        .map(|n| fixture(n).expect("known fixture").scenario)
        .collect()
}
