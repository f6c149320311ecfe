//! The nominal path: a piecewise-linear reference with arc-length tables,
//! an interpolated point cache and a k-d tree index that accelerates
//! exact point-to-polyline distance queries.

use crate::error::{Error, Result};
use crate::geometry::{check_dim, distance, distance_sq, lerp, point_segment_distance_raw, subdivisions, StateVec};
use crate::kdtree::KdTree;

/// Fraction of the total nominal length used as the default interpolation resolution.
pub const DEFAULT_EPSILON_FRACTION: f64 = 0.01;

/// Inserts evenly spaced points so that no gap along any segment exceeds
/// `epsilon`. Each segment of length `l` gets `ceil(l / epsilon)` equal
/// sub-intervals; original states are kept and shared vertices appear once.
pub fn interpolate(path: &[StateVec], epsilon: f64) -> Result<Vec<StateVec>> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let Some(first) = path.first() else {
        return Ok(Vec::new());
    };
    let mut out = vec![first.clone()];
    for w in path.windows(2) {
        check_dim(w[0].dim(), w[1].dim())?;
        let k = subdivisions(distance(&w[0], &w[1]), epsilon);
        for j in 1..k {
            out.push(lerp(&w[0], &w[1], j as f64 / k as f64));
        }
        if k > 0 {
            out.push(w[1].clone());
        }
    }
    Ok(out)
}

/// Deviation state closest to `x_nom`, with its index. Ties go to the
/// smallest index.
pub fn nearest_deviation_state(x_nom: &[f64], dev: &[StateVec]) -> Result<(StateVec, usize)> {
    let mut best: Option<(usize, f64)> = None;
    for (k, x) in dev.iter().enumerate() {
        check_dim(x_nom.len(), x.dim())?;
        let d = distance_sq(x, x_nom);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((k, d));
        }
    }
    let (k, _) = best.ok_or(Error::EmptyDeviation)?;
    Ok((dev[k].clone(), k))
}

/// Immutable nominal path with its distance index.
#[derive(Debug, Clone)]
pub struct NominalPath {
    states: Vec<StateVec>,
    segment_lengths: Vec<f64>,
    cumulative_length: Vec<f64>,
    epsilon: f64,
    interp_cache: Vec<StateVec>,
    index: KdTree,
    // Owning segment of every indexed point. Interior vertices are indexed
    // once per adjacent segment.
    index_segment: Vec<usize>,
    max_spacing: f64,
}

impl PartialEq for NominalPath {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states && self.epsilon == other.epsilon
    }
}

impl NominalPath {
    /// Builds the path with the default resolution (1% of total length).
    pub fn new(states: Vec<StateVec>) -> Result<Self> {
        Self::validate(&states)?;
        let total: f64 = states.windows(2).map(|w| distance(&w[0], &w[1])).sum();
        Self::with_epsilon(states, total * DEFAULT_EPSILON_FRACTION)
    }

    pub fn with_epsilon(states: Vec<StateVec>, epsilon: f64) -> Result<Self> {
        Self::validate(&states)?;
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidEpsilon(epsilon));
        }
        let segment_lengths: Vec<f64> = states.windows(2).map(|w| distance(&w[0], &w[1])).collect();
        let mut cumulative_length = Vec::with_capacity(states.len());
        let mut acc = 0.0;
        cumulative_length.push(0.0);
        for l in &segment_lengths {
            acc += l;
            cumulative_length.push(acc);
        }

        let mut points = Vec::new();
        let mut index_segment = Vec::new();
        let mut max_spacing: f64 = 0.0;
        for (s, w) in states.windows(2).enumerate() {
            let k = subdivisions(segment_lengths[s], epsilon);
            max_spacing = max_spacing.max(segment_lengths[s] / k as f64);
            for j in 0..=k {
                points.push(lerp(&w[0], &w[1], j as f64 / k as f64).into_inner());
                index_segment.push(s);
            }
        }
        let interp_cache = interpolate(&states, epsilon)?;
        Ok(NominalPath {
            states,
            segment_lengths,
            cumulative_length,
            epsilon,
            interp_cache,
            index: KdTree::build(points),
            index_segment,
            max_spacing,
        })
    }

    fn validate(states: &[StateVec]) -> Result<()> {
        if states.len() < 2 {
            return Err(Error::InvalidNominal(format!(
                "need at least 2 states, got {}",
                states.len()
            )));
        }
        let n = states[0].dim();
        for (i, s) in states.iter().enumerate() {
            check_dim(n, s.dim())?;
            if s.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidNominal(format!("state {i} is not finite")));
            }
        }
        for (i, w) in states.windows(2).enumerate() {
            if distance(&w[0], &w[1]) == 0.0 {
                return Err(Error::InvalidNominal(format!(
                    "states {i} and {} coincide",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn states(&self) -> &[StateVec] {
        &self.states
    }

    /// Number of nominal states `m`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn start(&self) -> &StateVec {
        &self.states[0]
    }

    pub fn end(&self) -> &StateVec {
        self.states.last().expect("nominal path has at least two states")
    }

    /// Segment lengths; entry `i` is the focal distance of the i-th segment.
    pub fn segment_lengths(&self) -> &[f64] {
        &self.segment_lengths
    }

    pub fn cumulative_length(&self) -> &[f64] {
        &self.cumulative_length
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative_length.last().unwrap()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn interp_cache(&self) -> &[StateVec] {
        &self.interp_cache
    }

    /// Point at arc length `s` from the start, clamped to the path.
    pub fn point_at(&self, s: f64) -> StateVec {
        let s = s.clamp(0.0, self.total_length());
        let seg = match self
            .cumulative_length
            .binary_search_by(|c| c.total_cmp(&s))
        {
            Ok(i) => return self.states[i].clone(),
            Err(i) => i - 1,
        };
        let t = (s - self.cumulative_length[seg]) / self.segment_lengths[seg];
        lerp(&self.states[seg], &self.states[seg + 1], t)
    }

    /// Exact distance from `p` to the nominal polyline.
    ///
    /// The nearest indexed point gives an upper bound `d`. The true closest
    /// point lies on some segment within half a spacing of one of that
    /// segment's indexed points, so only segments owning a point within
    /// `d + spacing / 2` can attain the minimum.
    pub fn min_distance(&self, p: &[f64]) -> f64 {
        let Some((_, upper)) = self.index.nearest(p) else {
            return f64::INFINITY;
        };
        let radius = upper + 0.5 * self.max_spacing + 1e-9 * (1.0 + upper);
        let mut best = f64::INFINITY;
        let mut last_seg = usize::MAX;
        self.index.within(p, radius, |i| {
            let s = self.index_segment[i];
            if s != last_seg {
                last_seg = s;
                let d = point_segment_distance_raw(p, &self.states[s], &self.states[s + 1]);
                if d < best {
                    best = d;
                }
            }
        });
        best
    }

    /// Dimension-checked wrapper over [`NominalPath::min_distance`].
    pub fn min_distance_to_nominal(&self, p: &StateVec) -> Result<f64> {
        check_dim(self.dim(), p.dim())?;
        Ok(self.min_distance(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path(pts: &[[f64; 2]]) -> Vec<StateVec> {
        pts.iter().map(|p| StateVec::from(*p)).collect()
    }

    #[test]
    fn interpolate_examples() {
        let out = interpolate(&path(&[[0.0, 0.0], [10.0, 0.0]]), 5.0).unwrap();
        assert_eq!(out, path(&[[0.0, 0.0], [5.0, 0.0], [10.0, 0.0]]));

        let out = interpolate(&path(&[[0.0, 0.0], [1.0, 0.0]]), 10.0).unwrap();
        assert_eq!(out, path(&[[0.0, 0.0], [1.0, 0.0]]));

        let out = interpolate(&path(&[[0.0, 0.0], [10.0, 0.0], [10.0, 10.0]]), 4.0).unwrap();
        // ceil(10/4) = 3 sub-intervals per segment: (3+1) + (3+1) - 1 shared vertex.
        assert_eq!(out.len(), 7);
        for w in out.windows(2) {
            assert!(distance(&w[0], &w[1]) <= 4.0);
        }
        assert_eq!(out[3].coords(), &[10.0, 0.0]);
    }

    #[test]
    fn interpolate_is_idempotent() {
        let p = path(&[[0.0, 0.0], [7.3, 1.1], [9.0, -4.2], [20.0, 3.0]]);
        let once = interpolate(&p, 1.7).unwrap();
        let twice = interpolate(&once, 1.7).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn interpolate_rejects_bad_epsilon() {
        let p = path(&[[0.0, 0.0], [1.0, 0.0]]);
        assert!(matches!(interpolate(&p, 0.0), Err(Error::InvalidEpsilon(_))));
        assert!(matches!(interpolate(&p, -1.0), Err(Error::InvalidEpsilon(_))));
    }

    #[test]
    fn min_distance_examples() {
        let nom = NominalPath::new(path(&[[0.0, 0.0], [10.0, 0.0]])).unwrap();
        assert_eq!(nom.min_distance(&[5.0, 3.0]), 3.0);
        assert_eq!(nom.min_distance(&[4.0, 0.0]), 0.0);
    }

    #[test]
    fn min_distance_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let states: Vec<StateVec> = (0..7)
                .map(|_| StateVec::xy(rng.random_range(0.0..100.0), rng.random_range(0.0..100.0)))
                .collect();
            let nom = NominalPath::new(states.clone()).unwrap();
            let p = [rng.random_range(-50.0..150.0), rng.random_range(-50.0..150.0)];
            let brute = states
                .windows(2)
                .map(|w| point_segment_distance_raw(&p, &w[0], &w[1]))
                .fold(f64::INFINITY, f64::min);
            assert!((nom.min_distance(&p) - brute).abs() <= 1e-9);
        }
    }

    #[test]
    fn index_never_over_reports() {
        let nom = NominalPath::new(path(&[[0.0, 0.0], [10.0, 0.0], [10.0, 10.0]])).unwrap();
        let p = [3.3, 4.4];
        let d = nom.min_distance(&p);
        for q in nom.interp_cache() {
            assert!(d <= distance(&p, q) + 1e-12);
        }
        // Interpolated points lie on the polyline.
        for q in nom.interp_cache() {
            assert!(nom.min_distance(q) <= 1e-12);
        }
    }

    #[test]
    fn nominal_validation() {
        assert!(NominalPath::new(path(&[[0.0, 0.0]])).is_err());
        assert!(NominalPath::new(path(&[[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]])).is_err());
        let nom = NominalPath::new(path(&[[0.0, 0.0], [3.0, 4.0], [3.0, 10.0]])).unwrap();
        assert_eq!(nom.segment_lengths(), &[5.0, 6.0]);
        assert!((nom.total_length() - 11.0).abs() < 1e-12);
        assert_eq!(nom.point_at(5.0).coords(), &[3.0, 4.0]);
        assert_eq!(nom.point_at(8.0).coords(), &[3.0, 7.0]);
    }

    #[test]
    fn nearest_deviation_examples() {
        let dev = path(&[[5.0, 0.0], [1.0, 1.0], [9.0, 9.0]]);
        let (x, k) = nearest_deviation_state(&[0.0, 0.0], &dev).unwrap();
        assert_eq!((x.coords(), k), (&[1.0, 1.0][..], 1));

        let dev = path(&[[9.0, 9.0], [8.0, 8.0], [1.0, 0.0], [4.0, 4.0], [5.0, 5.0], [0.0, 1.0]]);
        let (_, k) = nearest_deviation_state(&[0.0, 0.0], &dev).unwrap();
        assert_eq!(k, 2);

        let dev = path(&[[9.0, 9.0], [8.0, 8.0], [7.0, 7.0], [2.0, 2.0]]);
        let (_, k) = nearest_deviation_state(&[2.0, 2.0], &dev).unwrap();
        assert_eq!(k, 3);

        assert!(matches!(
            nearest_deviation_state(&[0.0, 0.0], &[]),
            Err(Error::EmptyDeviation)
        ));
    }
}
