//! Informed sampling along a multi-segment nominal path.
//!
//! Each nominal segment gets a prolate hyperspheroid whose foci are the
//! segment endpoints and whose transverse diameter is the length of the
//! part of the current best deviation assigned to it. Neighbouring parts
//! share one deviation state (the one nearest the common nominal vertex),
//! so the union of spheroids always covers the whole deviation.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::costs::path_length;
use crate::error::{Error, Result};
use crate::geometry::{check_dim, distance, unit_ball_volume, StateVec};
use crate::nominal::{nearest_deviation_state, NominalPath};

/// Slack applied to the focal-distance-sum membership test.
pub const MEMBERSHIP_SLACK: f64 = 1e-9;

/// Lebesgue measure of a prolate hyperspheroid with transverse diameter
/// `c_best` and focal distance `c_min` in `n` dimensions.
pub fn phs_measure(c_best: f64, c_min: f64, n: usize) -> f64 {
    let conj = (c_best * c_best - c_min * c_min).max(0.0);
    c_best * conj.powf((n as f64 - 1.0) / 2.0) / 2f64.powi(n as i32) * unit_ball_volume(n)
}

/// Uniform point in the closed unit n-ball.
pub fn sample_unit_ball<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let radius = rng.random::<f64>().powf(1.0 / n as f64);
        for x in &mut v {
            *x *= radius / norm;
        }
        return v;
    }
}

/// Rotation whose first column is `dir` (unit length), completed to a
/// right-handed orthonormal basis by Gram-Schmidt over the standard axes,
/// taken in order of increasing alignment with `dir`.
fn rotation_from_direction(dir: &[f64]) -> DMatrix<f64> {
    let n = dir.len();
    let mut axes: Vec<usize> = (0..n).collect();
    axes.sort_by(|&a, &b| dir[a].abs().total_cmp(&dir[b].abs()).then(a.cmp(&b)));
    let mut basis: Vec<DVector<f64>> = vec![DVector::from_column_slice(dir)];
    for axis in axes {
        if basis.len() == n {
            break;
        }
        let mut v = DVector::zeros(n);
        v[axis] = 1.0;
        for b in &basis {
            let proj = b.dot(&v);
            v -= b * proj;
        }
        let norm = v.norm();
        if norm > 1e-6 {
            basis.push(v / norm);
        }
    }
    let mut rot = DMatrix::from_columns(&basis);
    if rot.determinant() < 0.0 {
        let mut last = rot.column_mut(n - 1);
        last.neg_mut();
    }
    rot
}

/// `{x : |x - focus_a| + |x - focus_b| <= c_best}`
#[derive(Debug, Clone, PartialEq)]
pub struct ProlateHyperspheroid {
    focus_a: StateVec,
    focus_b: StateVec,
    c_min: f64,
    c_best: f64,
    center: StateVec,
    rotation: DMatrix<f64>,
}

impl ProlateHyperspheroid {
    /// `c_best` below the focal distance is clamped up to it when the gap is
    /// within rounding; larger gaps are rejected.
    pub fn new(focus_a: StateVec, focus_b: StateVec, c_best: f64) -> Result<Self> {
        check_dim(focus_a.dim(), focus_b.dim())?;
        let c_min = distance(&focus_a, &focus_b);
        if !c_best.is_finite() || c_best < c_min - 1e-9 * c_min.max(1.0) {
            return Err(Error::InvalidConfig(format!(
                "transverse diameter {c_best} is shorter than focal distance {c_min}"
            )));
        }
        let c_best = c_best.max(c_min);
        let n = focus_a.dim();
        let center = StateVec::from_vec(
            focus_a
                .iter()
                .zip(focus_b.iter())
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        );
        let rotation = if c_min > 0.0 {
            let dir: Vec<f64> = focus_a
                .iter()
                .zip(focus_b.iter())
                .map(|(a, b)| (b - a) / c_min)
                .collect();
            rotation_from_direction(&dir)
        } else {
            DMatrix::identity(n, n)
        };
        Ok(ProlateHyperspheroid {
            focus_a,
            focus_b,
            c_min,
            c_best,
            center,
            rotation,
        })
    }

    pub fn dim(&self) -> usize {
        self.focus_a.dim()
    }

    pub fn focus_a(&self) -> &StateVec {
        &self.focus_a
    }

    pub fn focus_b(&self) -> &StateVec {
        &self.focus_b
    }

    pub fn c_min(&self) -> f64 {
        self.c_min
    }

    pub fn c_best(&self) -> f64 {
        self.c_best
    }

    pub fn center(&self) -> &StateVec {
        &self.center
    }

    /// World-from-spheroid rotation; column 0 is the transverse axis.
    pub fn rotation(&self) -> &DMatrix<f64> {
        &self.rotation
    }

    pub fn transverse_radius(&self) -> f64 {
        0.5 * self.c_best
    }

    pub fn conjugate_radius(&self) -> f64 {
        0.5 * (self.c_best * self.c_best - self.c_min * self.c_min).max(0.0).sqrt()
    }

    pub fn measure(&self) -> f64 {
        phs_measure(self.c_best, self.c_min, self.dim())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        distance(&self.focus_a, x) + distance(x, &self.focus_b) <= self.c_best + MEMBERSHIP_SLACK
    }

    /// Uniform sample: unit ball, scaled per axis, rotated, translated.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> StateVec {
        let n = self.dim();
        let mut ball = sample_unit_ball(n, rng);
        ball[0] *= self.transverse_radius();
        let r2 = self.conjugate_radius();
        for v in &mut ball[1..] {
            *v *= r2;
        }
        let local = DVector::from_vec(ball);
        let world = &self.rotation * local;
        StateVec::from_vec(
            world
                .iter()
                .zip(self.center.iter())
                .map(|(w, c)| w + c)
                .collect(),
        )
    }
}

/// How the pairwise overlap of consecutive spheroids is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionMode {
    /// Overlaps are taken as empty, which over-estimates the union.
    Zero,
    /// Overlaps are estimated by sampling this many points in the smaller
    /// spheroid of each consecutive pair.
    MonteCarlo(usize),
}

impl std::str::FromStr for IntersectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "zero" {
            return Ok(IntersectionMode::Zero);
        }
        if let Some(n) = s.strip_prefix("mc:") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad sample count in `{s}`")))?;
            if n == 0 {
                return Err(Error::InvalidConfig("mc sample count must be positive".into()));
            }
            return Ok(IntersectionMode::MonteCarlo(n));
        }
        Err(Error::InvalidConfig(format!(
            "intersection mode must be `zero` or `mc:<N>`, got `{s}`"
        )))
    }
}

impl std::fmt::Display for IntersectionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntersectionMode::Zero => write!(f, "zero"),
            IntersectionMode::MonteCarlo(n) => write!(f, "mc:{n}"),
        }
    }
}

/// Union of per-segment spheroids built from the current best deviation.
#[derive(Debug, Clone)]
pub struct InformedUnion {
    spheroids: Vec<ProlateHyperspheroid>,
    measures: Vec<f64>,
    // Cumulative selection distribution, proportional to `measures`.
    cumulative: Vec<f64>,
    intersections: Vec<f64>,
    measure_estimate: f64,
    mode: IntersectionMode,
    shared: Vec<(StateVec, usize)>,
    nominal: Vec<StateVec>,
    nominal_cumulative: Vec<f64>,
}

/// Sub-paths of `dev` assigned to each nominal segment, plus the shared
/// states (deviation index per interior nominal vertex, repaired to be
/// non-decreasing).
pub fn assign_subpaths(nom: &NominalPath, dev: &[StateVec]) -> Result<(Vec<Vec<StateVec>>, Vec<(StateVec, usize)>)> {
    let states = nom.states();
    let m = states.len();
    let last = dev.len() - 1;
    if m == 2 {
        return Ok((vec![dev.to_vec()], Vec::new()));
    }
    let mut shared = Vec::with_capacity(m - 2);
    let mut prev = 0usize;
    for x_nom in &states[1..m - 1] {
        let (_, k) = nearest_deviation_state(x_nom, dev)?;
        let k = k.max(prev);
        shared.push((dev[k].clone(), k));
        prev = k;
    }
    let mut rhos = Vec::with_capacity(m - 1);
    for i in 0..m - 1 {
        let mut rho = Vec::new();
        let from = if i == 0 {
            0
        } else {
            rho.push(states[i].clone());
            shared[i - 1].1
        };
        let to = if i == m - 2 { last } else { shared[i].1 };
        rho.extend_from_slice(&dev[from..=to]);
        if i < m - 2 {
            rho.push(states[i + 1].clone());
        }
        rhos.push(rho);
    }
    Ok((rhos, shared))
}

/// Builds the informed union for `dev`, which must run from the nominal
/// start to the nominal end.
pub fn build_union<R: Rng + ?Sized>(
    nom: &NominalPath,
    dev: &[StateVec],
    mode: IntersectionMode,
    rng: &mut R,
) -> Result<InformedUnion> {
    let (Some(first), Some(last)) = (dev.first(), dev.last()) else {
        return Err(Error::EmptyDeviation);
    };
    let tol = 1e-9 * nom.total_length().max(1.0);
    if distance(first, nom.start()) > tol || distance(last, nom.end()) > tol {
        return Err(Error::Precondition(
            "deviation must start and end at the nominal endpoints".into(),
        ));
    }
    for x in dev {
        check_dim(nom.dim(), x.dim())?;
    }
    let (rhos, shared) = assign_subpaths(nom, dev)?;
    let states = nom.states();
    let spheroids = rhos
        .iter()
        .enumerate()
        .map(|(i, rho)| {
            let c_min = nom.segment_lengths()[i];
            ProlateHyperspheroid::new(
                states[i].clone(),
                states[i + 1].clone(),
                path_length(rho).max(c_min),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InformedUnion::from_spheroids(spheroids, mode, shared, nom, rng))
}

impl InformedUnion {
    fn from_spheroids<R: Rng + ?Sized>(
        spheroids: Vec<ProlateHyperspheroid>,
        mode: IntersectionMode,
        shared: Vec<(StateVec, usize)>,
        nom: &NominalPath,
        rng: &mut R,
    ) -> Self {
        let measures: Vec<f64> = spheroids.iter().map(|s| s.measure()).collect();
        let mut cumulative = Vec::with_capacity(measures.len());
        let mut acc = 0.0;
        for m in &measures {
            acc += m;
            cumulative.push(acc);
        }
        let intersections: Vec<f64> = (0..spheroids.len().saturating_sub(1))
            .map(|i| match mode {
                IntersectionMode::Zero => 0.0,
                IntersectionMode::MonteCarlo(n) => {
                    let (small, other) = if measures[i] <= measures[i + 1] {
                        (i, i + 1)
                    } else {
                        (i + 1, i)
                    };
                    if measures[small] == 0.0 {
                        return 0.0;
                    }
                    let hits = (0..n)
                        .filter(|_| spheroids[other].contains(&spheroids[small].sample(rng)))
                        .count();
                    measures[small] * hits as f64 / n as f64
                }
            })
            .collect();
        let measure_estimate = acc - intersections.iter().sum::<f64>();
        InformedUnion {
            spheroids,
            measures,
            cumulative,
            intersections,
            measure_estimate,
            mode,
            shared,
            nominal: nom.states().to_vec(),
            nominal_cumulative: nom.cumulative_length().to_vec(),
        }
    }

    /// Union of explicitly given spheroids (no deviation bookkeeping).
    pub fn from_parts<R: Rng + ?Sized>(
        spheroids: Vec<ProlateHyperspheroid>,
        mode: IntersectionMode,
        nom: &NominalPath,
        rng: &mut R,
    ) -> Self {
        Self::from_spheroids(spheroids, mode, Vec::new(), nom, rng)
    }

    pub fn spheroids(&self) -> &[ProlateHyperspheroid] {
        &self.spheroids
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn total_measure(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    /// Estimated overlap measure for each consecutive pair.
    pub fn intersection_estimates(&self) -> &[f64] {
        &self.intersections
    }

    pub fn mode(&self) -> IntersectionMode {
        self.mode
    }

    /// Shared deviation states and their indices, one per interior nominal vertex.
    pub fn shared_states(&self) -> &[(StateVec, usize)] {
        &self.shared
    }

    /// Sum of spheroid measures minus the estimated consecutive overlaps.
    pub fn measure_estimate(&self) -> f64 {
        self.measure_estimate
    }

    /// Number of spheroids containing `x`.
    pub fn membership(&self, x: &[f64]) -> usize {
        self.spheroids.iter().filter(|s| s.contains(x)).count()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.spheroids.iter().any(|s| s.contains(x))
    }

    /// True when every spheroid has zero measure, i.e. the deviation has
    /// collapsed onto the nominal.
    pub fn is_degenerate(&self) -> bool {
        !(self.total_measure() > 0.0)
    }

    /// Uniform sample over the union. A spheroid is picked in proportion to
    /// its measure and sampled; the draw is accepted with probability
    /// `1 / k` where `k` counts the spheroids containing it. A degenerate
    /// union falls back to uniform points along the nominal polyline.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> StateVec {
        if self.is_degenerate() {
            return self.sample_nominal_polyline(rng);
        }
        let total = self.total_measure();
        loop {
            let u = rng.random::<f64>() * total;
            let i = self
                .cumulative
                .partition_point(|c| *c <= u)
                .min(self.spheroids.len() - 1);
            let x = self.spheroids[i].sample(rng);
            let k = self.membership(&x).max(1);
            if k == 1 || rng.random::<f64>() * (k as f64) < 1.0 {
                return x;
            }
        }
    }

    fn sample_nominal_polyline<R: Rng + ?Sized>(&self, rng: &mut R) -> StateVec {
        let total = *self.nominal_cumulative.last().unwrap();
        let s = rng.random::<f64>() * total;
        let seg = self
            .nominal_cumulative
            .partition_point(|c| *c <= s)
            .clamp(1, self.nominal.len() - 1)
            - 1;
        let len = self.nominal_cumulative[seg + 1] - self.nominal_cumulative[seg];
        let t = ((s - self.nominal_cumulative[seg]) / len).clamp(0.0, 1.0);
        crate::geometry::lerp(&self.nominal[seg], &self.nominal[seg + 1], t)
    }
}

/// Switch to informed sampling only when the union is estimated to be
/// strictly smaller than the sampling rectangle.
pub fn should_switch(u: &InformedUnion, rect_measure: f64) -> bool {
    u.measure_estimate() < rect_measure
}

/// Probability of drawing a nominal state instead of a space sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasConfig {
    pub delta: f64,
}

impl BiasConfig {
    pub fn new(delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidConfig(format!(
                "bias probability must lie in [0, 1], got {delta}"
            )));
        }
        Ok(BiasConfig { delta })
    }
}

/// Where a biased draw came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSource {
    Space,
    Nominal,
}

/// Draws `u ~ U(0,1)`; returns a space sample when `delta < u`, otherwise a
/// uniformly chosen nominal state other than the start.
pub fn biased_sample<R, F>(
    space_sampler: F,
    nom: &NominalPath,
    bias: BiasConfig,
    rng: &mut R,
) -> (StateVec, SampleSource)
where
    R: Rng + ?Sized,
    F: FnOnce(&mut R) -> StateVec,
{
    let u: f64 = rng.random();
    if bias.delta < u {
        (space_sampler(rng), SampleSource::Space)
    } else {
        let states = nom.states();
        let i = rng.random_range(1..states.len());
        (states[i].clone(), SampleSource::Nominal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn phs(a: [f64; 2], b: [f64; 2], c_best: f64) -> ProlateHyperspheroid {
        ProlateHyperspheroid::new(a.into(), b.into(), c_best).unwrap()
    }

    fn path(pts: &[[f64; 2]]) -> Vec<StateVec> {
        pts.iter().map(|p| StateVec::from(*p)).collect()
    }

    #[test]
    fn measure_examples() {
        assert_eq!(phs_measure(3.0, 3.0, 2), 0.0);
        assert!((phs_measure(4.0, 0.0, 2) - PI * 4.0).abs() < 1e-12);
        assert!((phs_measure(5.0, 3.0, 2) - 5.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_proper_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=5 {
            for _ in 0..20 {
                let a: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
                let b: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
                let p = ProlateHyperspheroid::new(
                    StateVec::new(a.clone()).unwrap(),
                    StateVec::new(b.clone()).unwrap(),
                    distance(&a, &b) * 1.3,
                )
                .unwrap();
                let r = p.rotation();
                let err = (r.transpose() * r - DMatrix::<f64>::identity(n, n)).abs().max();
                assert!(err < 1e-9);
                assert!((r.determinant() - 1.0).abs() < 1e-9);
                for i in 0..n {
                    assert!((r[(i, 0)] - (b[i] - a[i]) / p.c_min()).abs() < 1e-12);
                }
                assert!(p.contains(p.focus_a()) && p.contains(p.focus_b()));
            }
        }
        // Axis-aligned directions, including negative ones.
        for dir in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]] {
            let p = phs([0.0, 0.0], dir, 1.5);
            assert!((p.rotation().determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn contains_examples() {
        let p = phs([0.0, 0.0], [4.0, 0.0], 6.0);
        assert!(p.contains(&[0.0, 0.0]));
        assert!(p.contains(&[4.0, 0.0]));
        assert!(p.contains(&[2.0, 0.0]));
        assert!(!p.contains(&[2.0 + 3.0 + 1.0, 0.0]));
        assert!(p.contains(&[5.0, 0.0]));
    }

    #[test]
    fn degenerate_sample_lies_on_segment() {
        let p = phs([1.0, 1.0], [4.0, 5.0], 5.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = p.sample(&mut rng);
            assert!(crate::geometry::point_segment_distance_raw(&x, p.focus_a(), p.focus_b()) < 1e-9);
            assert!(p.contains(&x));
        }
    }

    #[test]
    fn samples_are_members_and_centered() {
        let p = phs([10.0, -3.0], [16.0, 5.0], 12.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let (mut sx, mut sy) = (0.0, 0.0);
        for _ in 0..n {
            let x = p.sample(&mut rng);
            assert!(p.contains(&x));
            sx += x[0];
            sy += x[1];
        }
        let (mx, my) = (sx / n as f64, sy / n as f64);
        // Coordinate std is bounded by the transverse radius / 2 for a uniform ellipse.
        let sigma = p.transverse_radius() / 2.0 / (n as f64).sqrt();
        assert!((mx - p.center()[0]).abs() < 3.0 * sigma);
        assert!((my - p.center()[1]).abs() < 3.0 * sigma);
    }

    #[test]
    fn samples_are_uniform_by_quadrant() {
        // In the spheroid frame the four quadrants have equal area.
        let p = phs([0.0, 0.0], [3.0, 4.0], 7.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let mut counts = [0usize; 4];
        let r = p.rotation();
        for _ in 0..n {
            let x = p.sample(&mut rng);
            let dx = x[0] - p.center()[0];
            let dy = x[1] - p.center()[1];
            let u = r[(0, 0)] * dx + r[(1, 0)] * dy;
            let v = r[(0, 1)] * dx + r[(1, 1)] * dy;
            counts[(u >= 0.0) as usize * 2 + (v >= 0.0) as usize] += 1;
        }
        let expected = n as f64 / 4.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // chi-square, 3 dof, p = 0.001
        assert!(chi2 < 16.266, "chi2 = {chi2}, counts {counts:?}");
    }

    #[test]
    fn converged_deviation_collapses_union() {
        let states = path(&[[0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [20.0, 10.0]]);
        let nom = NominalPath::new(states.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let u = build_union(&nom, &states, IntersectionMode::Zero, &mut rng).unwrap();
        for (s, c_min) in u.spheroids().iter().zip(nom.segment_lengths()) {
            assert_eq!(s.c_best(), *c_min);
        }
        assert!(u.measures().iter().all(|m| *m == 0.0));
        assert!(u.is_degenerate());
        assert!(should_switch(&u, 1e-12));
        // Degenerate fallback samples lie on the nominal.
        for _ in 0..100 {
            let x = u.sample(&mut rng);
            assert!(nom.min_distance(&x) < 1e-9);
        }
    }

    #[test]
    fn two_state_nominal_uses_single_spheroid() {
        let nom = NominalPath::new(path(&[[0.0, 0.0], [10.0, 0.0]])).unwrap();
        let dev = path(&[[0.0, 0.0], [5.0, 3.0], [10.0, 0.0]]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let u = build_union(&nom, &dev, IntersectionMode::Zero, &mut rng).unwrap();
        assert_eq!(u.spheroids().len(), 1);
        assert_eq!(u.spheroids()[0].c_best(), path_length(&dev));
        assert_eq!(u.spheroids()[0].focus_a().coords(), &[0.0, 0.0]);
        assert_eq!(u.spheroids()[0].focus_b().coords(), &[10.0, 0.0]);
    }

    #[test]
    fn square_detour_subpaths() {
        // Nominal (0,0) -> (10,0) -> (10,10); deviation through (5,3) and (9,2).
        let nom = NominalPath::new(path(&[[0.0, 0.0], [10.0, 0.0], [10.0, 10.0]])).unwrap();
        let dev = path(&[[0.0, 0.0], [5.0, 3.0], [9.0, 2.0], [10.0, 10.0]]);
        let (rhos, shared) = assign_subpaths(&nom, &dev).unwrap();
        // (9,2) is nearest to (10,0).
        assert_eq!(shared, vec![(StateVec::xy(9.0, 2.0), 2)]);
        assert_eq!(rhos[0], path(&[[0.0, 0.0], [5.0, 3.0], [9.0, 2.0], [10.0, 0.0]]));
        assert_eq!(rhos[1], path(&[[10.0, 0.0], [9.0, 2.0], [10.0, 10.0]]));
        // Hand-computed lengths.
        let c0 = 34f64.sqrt() + 17f64.sqrt() + 5f64.sqrt();
        let c1 = 5f64.sqrt() + 65f64.sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let u = build_union(&nom, &dev, IntersectionMode::Zero, &mut rng).unwrap();
        assert!((u.spheroids()[0].c_best() - c0).abs() < 1e-12);
        assert!((u.spheroids()[1].c_best() - c1).abs() < 1e-12);
        for x in &dev {
            assert!(u.contains(x));
        }
    }

    #[test]
    fn non_monotone_shared_indices_are_repaired() {
        // Nominal zig-zag whose second interior vertex is closest to an early deviation state.
        let nom = NominalPath::new(path(&[[0.0, 0.0], [10.0, 0.0], [1.0, 1.0], [20.0, 0.0]])).unwrap();
        let dev = path(&[[0.0, 0.0], [1.0, 1.2], [10.0, 0.5], [20.0, 0.0]]);
        let (rhos, shared) = assign_subpaths(&nom, &dev).unwrap();
        let ks: Vec<usize> = shared.iter().map(|s| s.1).collect();
        assert_eq!(ks, vec![2, 2]);
        assert_eq!(rhos.len(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let u = build_union(&nom, &dev, IntersectionMode::Zero, &mut rng).unwrap();
        for x in crate::nominal::interpolate(&dev, 0.1).unwrap() {
            assert!(u.contains(&x));
        }
    }

    #[test]
    fn build_union_rejects_mismatched_endpoints() {
        let nom = NominalPath::new(path(&[[0.0, 0.0], [10.0, 0.0]])).unwrap();
        let dev = path(&[[0.0, 0.0], [9.0, 0.0]]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            build_union(&nom, &dev, IntersectionMode::Zero, &mut rng),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            build_union(&nom, &[], IntersectionMode::Zero, &mut rng),
            Err(Error::EmptyDeviation)
        ));
    }

    #[test]
    fn zero_mode_on_disjoint_is_exact_sum() {
        let nom = NominalPath::new(path(&[[0.0, 0.0], [100.0, 0.0]])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let a = phs([0.0, 0.0], [4.0, 0.0], 5.0);
        let b = phs([50.0, 0.0], [54.0, 0.0], 5.0);
        let u = InformedUnion::from_parts(vec![a.clone(), b.clone()], IntersectionMode::Zero, &nom, &mut rng);
        assert_eq!(u.measure_estimate(), a.measure() + b.measure());
        let mc = InformedUnion::from_parts(vec![a.clone(), b.clone()], IntersectionMode::MonteCarlo(10_000), &nom, &mut rng);
        assert_eq!(mc.measure_estimate(), a.measure() + b.measure());
    }

    #[test]
    fn coincident_spheroids_mc_estimate() {
        let nom = NominalPath::new(path(&[[0.0, 0.0], [100.0, 0.0]])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = phs([0.0, 0.0], [4.0, 0.0], 5.0);
        let u = InformedUnion::from_parts(vec![a.clone(), a.clone()], IntersectionMode::MonteCarlo(100_000), &nom, &mut rng);
        assert!((u.measure_estimate() / a.measure() - 1.0).abs() < 0.03);
        let z = InformedUnion::from_parts(vec![a.clone(), a.clone()], IntersectionMode::Zero, &nom, &mut rng);
        assert!(z.measure_estimate() >= u.measure_estimate());
    }

    #[test]
    fn switching_boundary_and_mode() {
        let nom = NominalPath::new(path(&[[0.0, 0.0], [100.0, 0.0]])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = phs([0.0, 0.0], [4.0, 0.0], 5.0);
        let b = phs([4.0, 0.0], [8.0, 0.0], 5.0);
        let zero = InformedUnion::from_parts(vec![a.clone(), b.clone()], IntersectionMode::Zero, &nom, &mut rng);
        assert!(!should_switch(&zero, zero.measure_estimate()));
        assert!(should_switch(&zero, 1e9));
        let mc = InformedUnion::from_parts(vec![a, b], IntersectionMode::MonteCarlo(50_000), &nom, &mut rng);
        let rect = 0.5 * (zero.measure_estimate() + mc.measure_estimate());
        assert!(!should_switch(&zero, rect));
        assert!(should_switch(&mc, rect));
    }

    #[test]
    fn single_spheroid_union_sample_is_member() {
        let nom = NominalPath::new(path(&[[0.0, 0.0], [4.0, 0.0]])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = phs([0.0, 0.0], [4.0, 0.0], 5.0);
        let u = InformedUnion::from_parts(vec![a.clone()], IntersectionMode::Zero, &nom, &mut rng);
        for _ in 0..10_000 {
            assert!(a.contains(&u.sample(&mut rng)));
        }
    }

    #[test]
    fn disjoint_union_splits_evenly() {
        let nom = NominalPath::new(path(&[[0.0, 0.0], [100.0, 0.0]])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = phs([0.0, 0.0], [4.0, 0.0], 5.0);
        let b = phs([50.0, 0.0], [54.0, 0.0], 5.0);
        let u = InformedUnion::from_parts(vec![a.clone(), b], IntersectionMode::Zero, &nom, &mut rng);
        let n = 100_000;
        let in_a = (0..n).filter(|_| a.contains(&u.sample(&mut rng))).count();
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((in_a as f64 - n as f64 / 2.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn bias_extremes_and_rate() {
        let nom = NominalPath::new(path(&[[0.0, 0.0], [10.0, 0.0], [10.0, 10.0]])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let space = |_: &mut ChaCha8Rng| StateVec::xy(-1.0, -1.0);
        for _ in 0..1000 {
            let (_, src) = biased_sample(space, &nom, BiasConfig::new(0.0).unwrap(), &mut rng);
            assert_eq!(src, SampleSource::Space);
            let (x, src) = biased_sample(space, &nom, BiasConfig::new(1.0).unwrap(), &mut rng);
            assert_eq!(src, SampleSource::Nominal);
            assert_ne!(&x, nom.start());
        }
        let n = 100_000;
        let hits = (0..n)
            .filter(|_| biased_sample(space, &nom, BiasConfig::new(0.5).unwrap(), &mut rng).1 == SampleSource::Nominal)
            .count();
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((hits as f64 - n as f64 * 0.5).abs() < 3.0 * sigma);
        assert!(BiasConfig::new(1.5).is_err());
    }

    #[test]
    fn intersection_mode_parsing() {
        assert_eq!("zero".parse::<IntersectionMode>().unwrap(), IntersectionMode::Zero);
        assert_eq!("mc:500".parse::<IntersectionMode>().unwrap(), IntersectionMode::MonteCarlo(500));
        assert!("mc:0".parse::<IntersectionMode>().is_err());
        assert!("hypervoxel".parse::<IntersectionMode>().is_err());
        assert_eq!(IntersectionMode::MonteCarlo(7).to_string(), "mc:7");
    }
}
