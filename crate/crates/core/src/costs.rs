//! Path length, deviation cost and the additive edge costs the tree uses.
//!
//! Edges are sampled half-open: the parent is excluded and the child is
//! included, so summing edge costs along a path and adding the root's own
//! term reproduces the whole-path cost exactly.

use crate::error::{Error, Result};
use crate::geometry::{check_dim, distance, subdivisions, StateVec};
use crate::nominal::{interpolate, NominalPath};

/// Weighting between deviation and length, and the sampling resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostConfig {
    /// Weight on path length; `0` is pure deviation.
    pub omega: f64,
    /// Spacing of deviation samples along each edge.
    pub epsilon: f64,
    /// Weight each deviation sample by its spacing (a Riemann sum) instead
    /// of the raw sum. Costs are only comparable at identical `epsilon`
    /// when this is off.
    pub integral_mode: bool,
}

impl CostConfig {
    pub fn new(omega: f64, epsilon: f64) -> Result<Self> {
        let cfg = CostConfig {
            omega,
            epsilon,
            integral_mode: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.omega) {
            return Err(Error::InvalidConfig(format!(
                "omega must lie in [0, 1), got {}",
                self.omega
            )));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidEpsilon(self.epsilon));
        }
        Ok(())
    }
}

/// Euclidean length of a polyline; zero for a single state.
pub fn path_length(path: &[StateVec]) -> f64 {
    path.windows(2).map(|w| distance(&w[0], &w[1])).sum()
}

/// Sum of distances to the nominal polyline over the path interpolated at
/// `cfg.epsilon`.
pub fn deviation_cost(path: &[StateVec], nom: &NominalPath, cfg: &CostConfig) -> Result<f64> {
    let Some(first) = path.first() else {
        return Err(Error::EmptyDeviation);
    };
    check_dim(nom.dim(), first.dim())?;
    if cfg.integral_mode {
        let mut acc = root_deviation(first, nom, cfg);
        for w in path.windows(2) {
            check_dim(nom.dim(), w[1].dim())?;
            acc += edge_deviation(&w[0], &w[1], nom, cfg);
        }
        return Ok(acc);
    }
    let samples = interpolate(path, cfg.epsilon)?;
    for s in &samples {
        check_dim(nom.dim(), s.dim())?;
    }
    Ok(samples.iter().map(|s| nom.min_distance(s)).sum())
}

/// Deviation contribution of the root state itself.
pub fn root_deviation(root: &[f64], nom: &NominalPath, cfg: &CostConfig) -> f64 {
    if cfg.integral_mode {
        0.0
    } else {
        nom.min_distance(root)
    }
}

/// Deviation term of the half-open edge `(parent, child]`.
pub fn edge_deviation(parent: &[f64], child: &[f64], nom: &NominalPath, cfg: &CostConfig) -> f64 {
    let len = distance(parent, child);
    let k = subdivisions(len, cfg.epsilon);
    let mut p = vec![0.0; parent.len()];
    let mut acc = 0.0;
    for j in 1..=k {
        let t = j as f64 / k as f64;
        if j == k {
            p.copy_from_slice(child);
        } else {
            for (i, c) in p.iter_mut().enumerate() {
                *c = parent[i] + t * (child[i] - parent[i]);
            }
        }
        acc += nom.min_distance(&p);
    }
    if cfg.integral_mode && k > 0 {
        acc * (len / k as f64)
    } else {
        acc
    }
}

/// Combined cost of one edge: `(1 - omega) * deviation + omega * length`.
pub fn edge_cost(parent: &[f64], child: &[f64], nom: &NominalPath, cfg: &CostConfig) -> f64 {
    let dev = edge_deviation(parent, child, nom, cfg);
    (1.0 - cfg.omega) * dev + cfg.omega * distance(parent, child)
}

/// Combined cost of the root state.
pub fn root_cost(root: &[f64], nom: &NominalPath, cfg: &CostConfig) -> f64 {
    (1.0 - cfg.omega) * root_deviation(root, nom, cfg)
}

/// Combined cost of a whole path, accumulated edge by edge.
pub fn path_cost(path: &[StateVec], nom: &NominalPath, cfg: &CostConfig) -> f64 {
    let Some(first) = path.first() else {
        return 0.0;
    };
    root_cost(first, nom, cfg)
        + path
            .windows(2)
            .map(|w| edge_cost(&w[0], &w[1], nom, cfg))
            .sum::<f64>()
}
