//! n-dimensional points and segments, obstacle shapes and the collision
//! predicates used by the planner and the scenario tooling.
//!
//! Hot paths work on `&[f64]` so that distance queries never allocate;
//! [`StateVec`] is the owned, validated carrier used at API boundaries.

use std::f64::consts::PI;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenarios::Scenario;

/// A point in the planning state space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateVec(Vec<f64>);

impl StateVec {
    /// Builds a state, rejecting fewer than two coordinates or non-finite entries.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidState(format!(
                "state needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite coordinate {bad}")));
        }
        Ok(StateVec(coords))
    }

    pub fn xy(x: f64, y: f64) -> Self {
        StateVec(vec![x, y])
    }

    /// Unchecked constructor for coordinates produced by internal arithmetic.
    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        StateVec(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for StateVec {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<[f64; 2]> for StateVec {
    fn from(p: [f64; 2]) -> Self {
        StateVec(p.to_vec())
    }
}

impl From<[f64; 3]> for StateVec {
    fn from(p: [f64; 3]) -> Self {
        StateVec(p.to_vec())
    }
}

/// A straight segment between two states of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub a: StateVec,
    pub b: StateVec,
}

impl Segment {
    pub fn new(a: StateVec, b: StateVec) -> Result<Self> {
        check_dim(a.dim(), b.dim())?;
        Ok(Segment { a, b })
    }

    pub fn length(&self) -> f64 {
        distance(&self.a, &self.b)
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[inline]
pub fn distance_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    distance_sq(a, b).sqrt()
}

/// `a + t (b - a)`
pub fn lerp(a: &[f64], b: &[f64], t: f64) -> StateVec {
    StateVec(a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect())
}

/// Exact Euclidean distance from `p` to the closed segment `[a, b]`.
#[inline]
pub fn point_segment_distance_raw(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut ab_ab = 0.0;
    let mut ap_ab = 0.0;
    for i in 0..p.len() {
        let ab = b[i] - a[i];
        ab_ab += ab * ab;
        ap_ab += (p[i] - a[i]) * ab;
    }
    let t = if ab_ab > 0.0 {
        (ap_ab / ab_ab).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut acc = 0.0;
    for i in 0..p.len() {
        let q = a[i] + t * (b[i] - a[i]);
        acc += (p[i] - q) * (p[i] - q);
    }
    acc.sqrt()
}

/// Distance from a point to a segment; errors on dimension mismatch.
pub fn point_segment_distance(p: &StateVec, s: &Segment) -> Result<f64> {
    check_dim(s.a.dim(), p.dim())?;
    Ok(point_segment_distance_raw(p, &s.a, &s.b))
}

/// Axis-aligned hyperrectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub min: StateVec,
    pub max: StateVec,
}

impl Bounds {
    pub fn new(min: StateVec, max: StateVec) -> Result<Self> {
        check_dim(min.dim(), max.dim())?;
        if min.iter().zip(max.iter()).any(|(lo, hi)| hi <= lo) {
            return Err(Error::InvalidState(
                "bounds must have max > min on every axis".into(),
            ));
        }
        Ok(Bounds { min, max })
    }

    pub fn dim(&self) -> usize {
        self.min.dim()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.min.iter().zip(self.max.iter()))
            .all(|(x, (lo, hi))| *x >= *lo && *x <= *hi)
    }

    /// Lebesgue measure of the box.
    pub fn measure(&self) -> f64 {
        self.min
            .iter()
            .zip(self.max.iter())
            .map(|(lo, hi)| hi - lo)
            .product()
    }

    pub fn diagonal(&self) -> f64 {
        distance(&self.min, &self.max)
    }
}

/// Obstacle shapes. Polygons and moving ellipses are planar; circles and
/// boxes work in any dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum Obstacle {
    /// Simple counter-clockwise polygon.
    Polygon { vertices: Vec<StateVec> },
    /// Closed ball.
    Circle { center: StateVec, radius: f64 },
    /// Closed axis-aligned box.
    Box { min: StateVec, max: StateVec },
    /// Ellipse travelling along a polyline at constant speed, major axis
    /// aligned with the active leg.
    MovingEllipse {
        semi_major: f64,
        semi_minor: f64,
        waypoints: Vec<StateVec>,
        speed: f64,
    },
}

/// An obstacle frozen at a particular time.
#[derive(Debug, Clone, Copy)]
pub enum PosedShape<'a> {
    Polygon(&'a [StateVec]),
    Circle { center: &'a [f64], radius: f64 },
    Box { min: &'a [f64], max: &'a [f64] },
    Ellipse {
        center: [f64; 2],
        heading: f64,
        semi_major: f64,
        semi_minor: f64,
    },
}

impl PosedShape<'_> {
    /// Closed-set membership.
    pub fn contains(&self, p: &[f64]) -> bool {
        match *self {
            PosedShape::Polygon(vertices) => point_in_polygon(p, vertices),
            PosedShape::Circle { center, radius } => distance_sq(p, center) <= radius * radius,
            PosedShape::Box { min, max } => p
                .iter()
                .zip(min.iter().zip(max))
                .all(|(x, (lo, hi))| *x >= *lo && *x <= *hi),
            PosedShape::Ellipse {
                center,
                heading,
                semi_major,
                semi_minor,
            } => {
                let (s, c) = heading.sin_cos();
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                let u = c * dx + s * dy;
                let v = -s * dx + c * dy;
                (u / semi_major).powi(2) + (v / semi_minor).powi(2) <= 1.0
            }
        }
    }

    /// Center and heading of the posed shape. Static shapes report heading 0.
    pub fn center_heading(&self) -> (StateVec, f64) {
        match *self {
            PosedShape::Polygon(vertices) => {
                let n = vertices.len() as f64;
                let cx = vertices.iter().map(|v| v[0]).sum::<f64>() / n;
                let cy = vertices.iter().map(|v| v[1]).sum::<f64>() / n;
                (StateVec::xy(cx, cy), 0.0)
            }
            PosedShape::Circle { center, .. } => (StateVec(center.to_vec()), 0.0),
            PosedShape::Box { min, max } => (
                StateVec(min.iter().zip(max).map(|(a, b)| 0.5 * (a + b)).collect()),
                0.0,
            ),
            PosedShape::Ellipse {
                center, heading, ..
            } => (StateVec(center.to_vec()), heading),
        }
    }
}

impl Obstacle {
    pub fn is_moving(&self) -> bool {
        matches!(self, Obstacle::MovingEllipse { .. })
    }

    /// Pose of the obstacle at time `t >= 0`. Moving ellipses advance
    /// `speed * t` along their waypoint polyline and freeze at the last
    /// waypoint afterwards.
    pub fn pose_at(&self, t: f64) -> PosedShape<'_> {
        match self {
            Obstacle::Polygon { vertices } => PosedShape::Polygon(vertices),
            Obstacle::Circle { center, radius } => PosedShape::Circle {
                center,
                radius: *radius,
            },
            Obstacle::Box { min, max } => PosedShape::Box { min, max },
            Obstacle::MovingEllipse {
                semi_major,
                semi_minor,
                waypoints,
                speed,
            } => {
                let (center, heading) = polyline_pose(waypoints, speed * t.max(0.0));
                PosedShape::Ellipse {
                    center,
                    heading,
                    semi_major: *semi_major,
                    semi_minor: *semi_minor,
                }
            }
        }
    }

    /// Exact test of a segment against a static shape. Moving obstacles are
    /// handled by [`edge_collision_free`] and always return `false` here.
    pub fn intersects_segment(&self, a: &[f64], b: &[f64]) -> bool {
        match self {
            Obstacle::Polygon { vertices } => segment_hits_polygon(a, b, vertices),
            Obstacle::Circle { center, radius } => {
                point_segment_distance_raw(center, a, b) <= *radius
            }
            Obstacle::Box { min, max } => segment_hits_box(a, b, min, max),
            Obstacle::MovingEllipse { .. } => false,
        }
    }

    /// Area (2-D) or volume of a static obstacle; zero for moving ones.
    pub fn measure(&self) -> f64 {
        match self {
            Obstacle::Polygon { vertices } => signed_area(vertices).abs(),
            Obstacle::Circle { center, radius } => {
                unit_ball_volume(center.dim()) * radius.powi(center.dim() as i32)
            }
            Obstacle::Box { min, max } => min.iter().zip(max.iter()).map(|(a, b)| b - a).product(),
            Obstacle::MovingEllipse { .. } => 0.0,
        }
    }
}

/// Position and heading after travelling arc length `s` along `waypoints`.
fn polyline_pose(waypoints: &[StateVec], s: f64) -> ([f64; 2], f64) {
    let mut heading = 0.0;
    let mut remaining = s;
    for w in waypoints.windows(2) {
        let len = distance(&w[0], &w[1]);
        if len == 0.0 {
            continue;
        }
        heading = (w[1][1] - w[0][1]).atan2(w[1][0] - w[0][0]);
        if remaining <= len {
            let t = remaining / len;
            return (
                [
                    w[0][0] + t * (w[1][0] - w[0][0]),
                    w[0][1] + t * (w[1][1] - w[0][1]),
                ],
                heading,
            );
        }
        remaining -= len;
    }
    let last = waypoints.last().expect("moving obstacle without waypoints");
    ([last[0], last[1]], heading)
}

/// Shoelace signed area; positive for counter-clockwise polygons.
pub fn signed_area(vertices: &[StateVec]) -> f64 {
    let n = vertices.len();
    let mut acc = 0.0;
    for i in 0..n {
        let p = &vertices[i];
        let q = &vertices[(i + 1) % n];
        acc += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * acc
}

fn orient(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: &[f64], b: &[f64], p: &[f64]) -> bool {
    p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

/// Closed 2-D segment intersection, including touching and collinear overlap.
pub fn segments_intersect(p1: &[f64], p2: &[f64], q1: &[f64], q2: &[f64]) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Winding-number test; points on the boundary count as inside.
pub fn point_in_polygon(p: &[f64], vertices: &[StateVec]) -> bool {
    let n = vertices.len();
    let mut winding = 0i32;
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        if point_segment_distance_raw(p, a, b) <= 1e-12 {
            return true;
        }
        if a[1] <= p[1] {
            if b[1] > p[1] && orient(a, b, p) > 0.0 {
                winding += 1;
            }
        } else if b[1] <= p[1] && orient(a, b, p) < 0.0 {
            winding -= 1;
        }
    }
    winding != 0
}

fn segment_hits_polygon(a: &[f64], b: &[f64], vertices: &[StateVec]) -> bool {
    if point_in_polygon(a, vertices) || point_in_polygon(b, vertices) {
        return true;
    }
    let n = vertices.len();
    (0..n).any(|i| segments_intersect(a, b, &vertices[i], &vertices[(i + 1) % n]))
}

fn segment_hits_box(a: &[f64], b: &[f64], min: &[f64], max: &[f64]) -> bool {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for i in 0..a.len() {
        let d = b[i] - a[i];
        if d == 0.0 {
            if a[i] < min[i] || a[i] > max[i] {
                return false;
            }
            continue;
        }
        let mut lo = (min[i] - a[i]) / d;
        let mut hi = (max[i] - a[i]) / d;
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
        t0 = t0.max(lo);
        t1 = t1.min(hi);
        if t0 > t1 {
            return false;
        }
    }
    true
}

/// True when the closed polygon has no two non-adjacent edges touching
/// and no repeated consecutive vertices.
pub fn polygon_is_simple(vertices: &[StateVec]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        if distance(&vertices[i], &vertices[(i + 1) % n]) == 0.0 {
            return false;
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_intersect(
                &vertices[i],
                &vertices[(i + 1) % n],
                &vertices[j],
                &vertices[(j + 1) % n],
            ) {
                return false;
            }
        }
    }
    true
}

/// Volume of the unit n-ball, `pi^(n/2) / Gamma(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> f64 {
    // Gamma(n/2 + 1) via the recurrence Gamma(x + 1) = x Gamma(x),
    // seeded at Gamma(1) = 1 or Gamma(3/2) = sqrt(pi)/2.
    let (mut g, mut x) = if n % 2 == 0 {
        (1.0, 1.0)
    } else {
        (PI.sqrt() / 2.0, 1.5)
    };
    let target = n as f64 / 2.0 + 1.0;
    while x < target - 0.25 {
        g *= x;
        x += 1.0;
    }
    PI.powf(n as f64 / 2.0) / g
}

/// Number of equal sub-intervals used to cover a length at resolution `eps`.
/// Zero-length spans get none; a small relative slack keeps the count stable
/// when re-subdividing already subdivided spans.
#[inline]
pub(crate) fn subdivisions(len: f64, eps: f64) -> usize {
    if len <= 0.0 {
        0
    } else {
        ((len / eps) * (1.0 - 1e-12)).ceil().max(1.0) as usize
    }
}

/// True iff the segment stays inside the scenario bounds and clear of every
/// obstacle. Static obstacles are tested exactly; moving obstacles are posed
/// at the time linearly interpolated (in arc length) between `window.0` at
/// `a` and `window.1` at `b`, at the scenario's collision resolution plus
/// both endpoints.
pub fn edge_collision_free(a: &[f64], b: &[f64], scenario: &Scenario, window: (f64, f64)) -> bool {
    if !scenario.bounds.contains(a) || !scenario.bounds.contains(b) {
        return false;
    }
    if scenario
        .static_obstacles
        .iter()
        .any(|o| o.intersects_segment(a, b))
    {
        return false;
    }
    if scenario.moving_obstacles.is_empty() {
        return true;
    }
    let len = distance(a, b);
    let k = subdivisions(len, scenario.collision_resolution()).max(1);
    let mut p = vec![0.0; a.len()];
    for j in 0..=k {
        let s = j as f64 / k as f64;
        for (i, c) in p.iter_mut().enumerate() {
            *c = a[i] + s * (b[i] - a[i]);
        }
        let t = window.0 + s * (window.1 - window.0);
        if scenario
            .moving_obstacles
            .iter()
            .any(|o| o.pose_at(t).contains(&p))
        {
            return false;
        }
    }
    true
}

/// Segment wrapper over [`edge_collision_free`].
pub fn segment_collision_free(s: &Segment, scenario: &Scenario, window: (f64, f64)) -> bool {
    edge_collision_free(&s.a, &s.b, scenario, window)
}
