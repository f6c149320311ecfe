//! Anytime RRT* over the deviation cost, with optional informed sampling
//! from the spheroid union and nominal-state biasing.
//!
//! Moving obstacles are checked against a time map: a node is reached at
//! `length_to_come / own_speed`, where `length_to_come` is the geometric
//! length of its tree branch. It is tracked separately from the weighted
//! planning cost.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::costs::{edge_cost, root_cost, CostConfig};
use crate::error::{Error, Result};
use crate::geometry::{distance, distance_sq, edge_collision_free, unit_ball_volume, StateVec};
use crate::informed::{
    biased_sample, build_union, should_switch, BiasConfig, InformedUnion, IntersectionMode,
    ProlateHyperspheroid, SampleSource,
};
use crate::scenarios::Scenario;

/// Fraction of the bounds diagonal used as the default steering distance.
pub const DEFAULT_STEER_FRACTION: f64 = 1.0 / 20.0;
/// Target mean near-set size at 1000 nodes for uniformly spread nodes.
pub const DEFAULT_NEAR_TARGET: f64 = 10.0;
pub const DEFAULT_DELTA: f64 = 0.1;
pub const DEFAULT_REBUILD_CADENCE: usize = 25;

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    pub max_iterations: usize,
    /// Maximum extension length.
    pub steer_eta: f64,
    /// Scale of the shrinking near radius `gamma * (ln N / N)^(1/n)`.
    pub rewire_gamma: f64,
    /// Nodes landing this close to the goal attempt a terminal connection.
    pub goal_tolerance: f64,
    pub bias: BiasConfig,
    pub cost: CostConfig,
    pub informed_enabled: bool,
    /// Keep nominal-state biasing active while sampling the union.
    pub bias_after_switch: bool,
    pub intersection_mode: IntersectionMode,
    /// Minimum iterations between union rebuilds.
    pub rebuild_cadence: usize,
    pub rng_seed: u64,
}

impl PlannerConfig {
    /// Defaults scaled to the scenario: steering at 1/20 of the bounds
    /// diagonal, deviation samples every 1% of the nominal length, and a
    /// near radius averaging about ten neighbours at 1000 uniform nodes.
    pub fn for_scenario(scenario: &Scenario) -> Self {
        let n = scenario.dim();
        let steer_eta = scenario.bounds.diagonal() * DEFAULT_STEER_FRACTION;
        let gamma = (DEFAULT_NEAR_TARGET * scenario.rect_measure()
            / (unit_ball_volume(n) * 1000f64.ln()))
        .powf(1.0 / n as f64);
        PlannerConfig {
            max_iterations: 1000,
            steer_eta,
            rewire_gamma: gamma,
            goal_tolerance: steer_eta,
            bias: BiasConfig { delta: DEFAULT_DELTA },
            cost: CostConfig {
                omega: 0.0,
                epsilon: scenario.nominal.epsilon(),
                integral_mode: false,
            },
            informed_enabled: true,
            bias_after_switch: true,
            intersection_mode: IntersectionMode::Zero,
            rebuild_cadence: DEFAULT_REBUILD_CADENCE,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, name: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")))
            }
        };
        positive(self.steer_eta, "steer_eta")?;
        positive(self.rewire_gamma, "rewire_gamma")?;
        if !(self.goal_tolerance >= 0.0) {
            return Err(Error::InvalidConfig("goal_tolerance must be non-negative".into()));
        }
        if self.rebuild_cadence == 0 {
            return Err(Error::InvalidConfig("rebuild_cadence must be positive".into()));
        }
        BiasConfig::new(self.bias.delta)?;
        self.cost.validate()
    }
}

/// Search tree rooted at the start state.
#[derive(Debug, Clone)]
pub struct Tree {
    nodes: Vec<StateVec>,
    parent: Vec<usize>,
    cost: Vec<f64>,
    edge_cost: Vec<f64>,
    length: Vec<f64>,
    edge_len: Vec<f64>,
    children: Vec<Vec<usize>>,
}

impl Tree {
    pub fn new(root: StateVec, root_cost: f64) -> Self {
        Tree {
            nodes: vec![root],
            parent: vec![0],
            cost: vec![root_cost],
            edge_cost: vec![0.0],
            length: vec![0.0],
            edge_len: vec![0.0],
            children: vec![Vec::new()],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &StateVec {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[StateVec] {
        &self.nodes
    }

    /// Parent index; the root is its own parent.
    pub fn parent(&self, i: usize) -> usize {
        self.parent[i]
    }

    pub fn cost_to_come(&self, i: usize) -> f64 {
        self.cost[i]
    }

    /// Geometric branch length from the root.
    pub fn length_to_come(&self, i: usize) -> f64 {
        self.length[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn add_node(&mut self, state: StateVec, parent: usize, edge_cost: f64) -> usize {
        let id = self.nodes.len();
        let edge_len = distance(&self.nodes[parent], &state);
        self.nodes.push(state);
        self.parent.push(parent);
        self.cost.push(self.cost[parent] + edge_cost);
        self.edge_cost.push(edge_cost);
        self.length.push(self.length[parent] + edge_len);
        self.edge_len.push(edge_len);
        self.children.push(Vec::new());
        self.children[parent].push(id);
        id
    }

    /// Moves `node` under `new_parent` and refreshes costs and lengths of
    /// its whole subtree.
    pub fn reparent(&mut self, node: usize, new_parent: usize, edge_cost: f64) {
        let old = self.parent[node];
        self.children[old].retain(|&c| c != node);
        self.children[new_parent].push(node);
        self.parent[node] = new_parent;
        self.edge_cost[node] = edge_cost;
        self.edge_len[node] = distance(&self.nodes[new_parent], &self.nodes[node]);
        let mut stack = vec![node];
        while let Some(v) = stack.pop() {
            let p = self.parent[v];
            self.cost[v] = self.cost[p] + self.edge_cost[v];
            self.length[v] = self.length[p] + self.edge_len[v];
            stack.extend_from_slice(&self.children[v]);
        }
    }

    /// Strict descendants of `node`, in depth-first order.
    pub fn descendants(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack: Vec<usize> = self.children[node].clone();
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend_from_slice(&self.children[v]);
        }
        out
    }

    /// States from the root to `node`.
    pub fn path_to(&self, node: usize) -> Vec<StateVec> {
        let mut chain = vec![node];
        let mut v = node;
        while v != 0 {
            v = self.parent[v];
            chain.push(v);
        }
        chain.iter().rev().map(|&i| self.nodes[i].clone()).collect()
    }

    /// Index of the node closest to `x`, ties to the smallest index.
    pub fn nearest(&self, x: &[f64]) -> usize {
        let mut best = (0, f64::INFINITY);
        for (i, n) in self.nodes.iter().enumerate() {
            let d = distance_sq(n, x);
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }

    pub fn within(&self, x: &[f64], radius: f64) -> Vec<usize> {
        let r2 = radius * radius;
        (0..self.nodes.len())
            .filter(|&i| distance_sq(&self.nodes[i], x) <= r2)
            .collect()
    }
}

/// Ball around the goal state.
#[derive(Debug, Clone)]
pub struct GoalRegion {
    pub center: StateVec,
    pub tolerance: f64,
}

/// Cheapest root-to-goal chain. Among nodes within the goal tolerance,
/// `terminal` returns the cost of connecting the node to the goal center,
/// or `None` if that connection is infeasible. The returned path ends at
/// the goal center; it is empty when no node qualifies.
pub fn extract_best_path<F>(tree: &Tree, goal: &GoalRegion, terminal: F) -> Vec<StateVec>
where
    F: Fn(usize) -> Option<f64>,
{
    let mut best: Option<(usize, f64)> = None;
    for i in 0..tree.len() {
        if distance(tree.node(i), &goal.center) > goal.tolerance {
            continue;
        }
        let Some(t) = terminal(i) else { continue };
        let total = tree.cost_to_come(i) + t;
        if best.is_none_or(|(_, c)| total < c) {
            best = Some((i, total));
        }
    }
    let Some((i, _)) = best else {
        return Vec::new();
    };
    let mut path = tree.path_to(i);
    if distance(tree.node(i), &goal.center) > 0.0 {
        path.push(goal.center.clone());
    }
    path
}

/// Collision check of the tree edge `parent -> child` under the time map.
fn edge_free_at(scenario: &Scenario, a: &[f64], b: &[f64], length_at_a: f64) -> bool {
    let len = distance(a, b);
    let v = scenario.own_speed;
    edge_collision_free(a, b, scenario, (length_at_a / v, (length_at_a + len) / v))
}

fn steer(from: &[f64], to: &[f64], eta: f64) -> StateVec {
    let d = distance(from, to);
    if d <= eta {
        StateVec::from_vec(to.to_vec())
    } else {
        crate::geometry::lerp(from, to, eta / d)
    }
}

/// Near radius `min(eta, gamma (ln N / N)^(1/n))` for a tree of `n_nodes`.
pub fn near_radius(config: &PlannerConfig, n_nodes: usize, dim: usize) -> f64 {
    let n = n_nodes.max(2) as f64;
    (config.rewire_gamma * (n.ln() / n).powf(1.0 / dim as f64)).min(config.steer_eta)
}

/// Would moving `node` so its branch length changes by `delta` keep every
/// edge below it clear of moving obstacles?
fn subtree_clear_after_shift(tree: &Tree, scenario: &Scenario, node: usize, delta: f64) -> bool {
    if scenario.moving_obstacles.is_empty() || delta == 0.0 {
        return true;
    }
    tree.descendants(node).into_iter().all(|d| {
        let p = tree.parent(d);
        edge_free_at(scenario, tree.node(p), tree.node(d), tree.length_to_come(p) + delta)
    })
}

/// One RRT* iteration toward `x_rand`: steer from the nearest node, pick
/// the cheapest collision-free parent in the near set, insert, then rewire
/// near nodes that become cheaper through the new node. Returns the new
/// node's index, or `None` if the sample was rejected.
pub fn insert_sample(
    tree: &mut Tree,
    x_rand: &[f64],
    scenario: &Scenario,
    config: &PlannerConfig,
) -> Option<usize> {
    let nom = &scenario.nominal;
    let nearest = tree.nearest(x_rand);
    let x_new = steer(tree.node(nearest), x_rand, config.steer_eta);
    if distance(tree.node(nearest), &x_new) == 0.0 {
        return None;
    }
    if !edge_free_at(scenario, tree.node(nearest), &x_new, tree.length_to_come(nearest)) {
        return None;
    }

    let radius = near_radius(config, tree.len() + 1, scenario.dim());
    let mut near = tree.within(&x_new, radius);
    if !near.contains(&nearest) {
        near.push(nearest);
    }
    let mut candidates: Vec<(usize, f64, f64)> = near
        .iter()
        .map(|&c| {
            let ec = edge_cost(tree.node(c), &x_new, nom, &config.cost);
            (c, tree.cost_to_come(c) + ec, ec)
        })
        .collect();
    candidates.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let (parent, _, parent_edge) = *candidates.iter().find(|&&(c, _, _)| {
        c == nearest || edge_free_at(scenario, tree.node(c), &x_new, tree.length_to_come(c))
    })?;
    let new = tree.add_node(x_new, parent, parent_edge);

    for &v in &near {
        if v == parent || v == 0 {
            continue;
        }
        let ec = edge_cost(tree.node(new), tree.node(v), nom, &config.cost);
        let through = tree.cost_to_come(new) + ec;
        if !(through < tree.cost_to_come(v)) {
            continue;
        }
        if !edge_free_at(scenario, tree.node(new), tree.node(v), tree.length_to_come(new)) {
            continue;
        }
        let new_len = tree.length_to_come(new) + distance(tree.node(new), tree.node(v));
        if !subtree_clear_after_shift(tree, scenario, v, new_len - tree.length_to_come(v)) {
            continue;
        }
        tree.reparent(v, new, ec);
    }
    Some(new)
}

/// [`insert_sample`] with the sample drawn from `sampler`.
pub fn rrt_star_step<F: FnMut() -> StateVec>(
    tree: &mut Tree,
    mut sampler: F,
    scenario: &Scenario,
    config: &PlannerConfig,
) -> Option<usize> {
    let x = sampler();
    insert_sample(tree, &x, scenario, config)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SampleCounts {
    pub rect: usize,
    pub informed: usize,
    pub bias: usize,
}

/// Spheroids of one union rebuild.
#[derive(Debug, Clone, PartialEq)]
pub struct UnionSnapshot {
    pub iteration: usize,
    pub spheroids: Vec<ProlateHyperspheroid>,
    pub measure_estimate: f64,
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub best_path: Vec<StateVec>,
    pub best_cost: f64,
    /// `(iteration, best cost)` at the start and at every improvement.
    pub cost_trace: Vec<(usize, f64)>,
    /// Wall-clock seconds matching each `cost_trace` entry.
    pub wall_time_trace: Vec<(usize, f64)>,
    pub informed_activated_at: Option<usize>,
    pub sample_counts: SampleCounts,
    pub union_snapshots: Vec<UnionSnapshot>,
    pub iterations: usize,
    pub tree_size: usize,
}

impl PlanResult {
    /// Best cost after `iteration` iterations.
    pub fn cost_at(&self, iteration: usize) -> f64 {
        self.cost_trace
            .iter()
            .take_while(|(i, _)| *i <= iteration)
            .last()
            .map_or(f64::INFINITY, |(_, c)| *c)
    }

    /// First trace entry at or below `threshold`: `(iteration, seconds)`.
    pub fn first_reaching(&self, threshold: f64) -> Option<(usize, f64)> {
        self.cost_trace
            .iter()
            .zip(&self.wall_time_trace)
            .find(|((_, c), _)| *c <= threshold)
            .map(|((i, _), (_, t))| (*i, *t))
    }

    /// Equality of everything except wall-clock measurements.
    pub fn same_outcome(&self, other: &PlanResult) -> bool {
        self.best_path == other.best_path
            && self.best_cost.to_bits() == other.best_cost.to_bits()
            && self.cost_trace.len() == other.cost_trace.len()
            && self
                .cost_trace
                .iter()
                .zip(&other.cost_trace)
                .all(|(a, b)| a.0 == b.0 && a.1.to_bits() == b.1.to_bits())
            && self.informed_activated_at == other.informed_activated_at
            && self.sample_counts == other.sample_counts
            && self.union_snapshots == other.union_snapshots
            && self.iterations == other.iterations
            && self.tree_size == other.tree_size
    }
}

/// Incremental planner; [`plan`] drives it to completion.
#[derive(Debug)]
pub struct Planner<'a> {
    scenario: &'a Scenario,
    config: PlannerConfig,
    tree: Tree,
    rng: ChaCha8Rng,
    goal: GoalRegion,
    goal_nodes: Vec<usize>,
    best: Option<(usize, f64)>,
    union: Option<InformedUnion>,
    informed_active: bool,
    last_rebuild: usize,
    cost_at_rebuild: f64,
    iteration: usize,
    counts: SampleCounts,
    cost_trace: Vec<(usize, f64)>,
    wall_time_trace: Vec<(usize, f64)>,
    informed_activated_at: Option<usize>,
    snapshots: Vec<UnionSnapshot>,
    started: Instant,
    trivial: bool,
}

impl<'a> Planner<'a> {
    pub fn new(scenario: &'a Scenario, config: PlannerConfig) -> Result<Self> {
        config.validate()?;
        let start = scenario.nominal.start().clone();
        let goal = scenario.nominal.end().clone();
        if !scenario.state_free(&start, 0.0) {
            return Err(Error::Precondition("start state is in collision".into()));
        }
        if !scenario.bounds.contains(&goal)
            || scenario
                .static_obstacles
                .iter()
                .any(|o| o.pose_at(0.0).contains(&goal))
        {
            return Err(Error::Precondition("goal state is in collision".into()));
        }
        let root = root_cost(&start, &scenario.nominal, &config.cost);
        let trivial = distance(&start, &goal) <= config.goal_tolerance;
        let mut planner = Planner {
            scenario,
            rng: ChaCha8Rng::seed_from_u64(config.rng_seed),
            tree: Tree::new(start, root),
            goal: GoalRegion {
                center: goal,
                tolerance: config.goal_tolerance,
            },
            config,
            goal_nodes: Vec::new(),
            best: None,
            union: None,
            informed_active: false,
            last_rebuild: 0,
            cost_at_rebuild: f64::INFINITY,
            iteration: 0,
            counts: SampleCounts::default(),
            cost_trace: vec![(0, f64::INFINITY)],
            wall_time_trace: vec![(0, 0.0)],
            informed_activated_at: None,
            snapshots: Vec::new(),
            started: Instant::now(),
            trivial,
        };
        if trivial {
            planner.goal_nodes.push(0);
            planner.best = Some((0, root));
            planner.cost_trace.push((0, root));
            planner.wall_time_trace.push((0, 0.0));
        }
        Ok(planner)
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn best_cost(&self) -> f64 {
        self.best.map_or(f64::INFINITY, |(_, c)| c)
    }

    pub fn informed_active(&self) -> bool {
        self.informed_active
    }

    pub fn union(&self) -> Option<&InformedUnion> {
        self.union.as_ref()
    }

    pub fn best_path(&self) -> Vec<StateVec> {
        match self.best {
            Some((i, _)) if self.trivial && i == 0 => vec![self.tree.node(0).clone()],
            Some(_) => {
                let goal_nodes = &self.goal_nodes;
                extract_best_path(&self.tree, &self.goal, |i| goal_nodes.contains(&i).then_some(0.0))
            }
            None => Vec::new(),
        }
    }

    fn maybe_rebuild_union(&mut self) -> Result<()> {
        if !self.config.informed_enabled {
            return Ok(());
        }
        let Some((_, best)) = self.best else {
            return Ok(());
        };
        let due = self.union.is_none()
            || (best < self.cost_at_rebuild
                && self.iteration - self.last_rebuild >= self.config.rebuild_cadence);
        if !due {
            return Ok(());
        }
        let dev = self.best_path();
        let union = build_union(
            &self.scenario.nominal,
            &dev,
            self.config.intersection_mode,
            &mut self.rng,
        )?;
        self.informed_active = should_switch(&union, self.scenario.rect_measure());
        if self.informed_active && self.informed_activated_at.is_none() {
            self.informed_activated_at = Some(self.iteration);
        }
        self.snapshots.push(UnionSnapshot {
            iteration: self.iteration,
            spheroids: union.spheroids().to_vec(),
            measure_estimate: union.measure_estimate(),
        });
        self.union = Some(union);
        self.last_rebuild = self.iteration;
        self.cost_at_rebuild = best;
        Ok(())
    }

    fn draw_sample(&mut self) -> StateVec {
        let informed = self.informed_active;
        let bias = if informed && !self.config.bias_after_switch {
            BiasConfig { delta: 0.0 }
        } else {
            self.config.bias
        };
        let bounds = &self.scenario.bounds;
        let union = self.union.as_ref();
        let (x, source) = biased_sample(
            |rng: &mut ChaCha8Rng| match union {
                Some(u) if informed => u.sample(rng),
                _ => StateVec::from_vec(
                    (0..bounds.dim())
                        .map(|k| rng.random_range(bounds.min[k]..=bounds.max[k]))
                        .collect(),
                ),
            },
            &self.scenario.nominal,
            bias,
            &mut self.rng,
        );
        match source {
            SampleSource::Nominal => self.counts.bias += 1,
            SampleSource::Space if informed => self.counts.informed += 1,
            SampleSource::Space => self.counts.rect += 1,
        }
        x
    }

    fn try_connect_goal(&mut self, node: usize) {
        let scenario = self.scenario;
        let d = distance(self.tree.node(node), &self.goal.center);
        if d == 0.0 {
            self.goal_nodes.push(node);
            return;
        }
        if d > self.goal.tolerance {
            return;
        }
        let ec = edge_cost(
            self.tree.node(node),
            &self.goal.center,
            &scenario.nominal,
            &self.config.cost,
        );
        if !(self.tree.cost_to_come(node) + ec < self.best_cost()) {
            return;
        }
        if !edge_free_at(
            scenario,
            self.tree.node(node),
            &self.goal.center,
            self.tree.length_to_come(node),
        ) {
            return;
        }
        let leaf = self.tree.add_node(self.goal.center.clone(), node, ec);
        self.goal_nodes.push(leaf);
    }

    /// Runs one iteration.
    pub fn step(&mut self) -> Result<()> {
        if self.trivial {
            self.iteration += 1;
            return Ok(());
        }
        self.maybe_rebuild_union()?;
        let x = self.draw_sample();
        if let Some(new) = insert_sample(&mut self.tree, &x, self.scenario, &self.config) {
            self.try_connect_goal(new);
        }
        self.iteration += 1;
        let best = self
            .goal_nodes
            .iter()
            .map(|&g| (g, self.tree.cost_to_come(g)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        if let Some((g, c)) = best {
            if c < self.best_cost() {
                self.cost_trace.push((self.iteration, c));
                self.wall_time_trace
                    .push((self.iteration, self.started.elapsed().as_secs_f64()));
            }
            self.best = Some((g, c));
        }
        Ok(())
    }

    pub fn finish(self) -> PlanResult {
        let best_path = self.best_path();
        PlanResult {
            best_cost: self.best_cost(),
            best_path,
            cost_trace: self.cost_trace,
            wall_time_trace: self.wall_time_trace,
            informed_activated_at: self.informed_activated_at,
            sample_counts: self.counts,
            union_snapshots: self.snapshots,
            iterations: self.iteration,
            tree_size: self.tree.len(),
        }
    }
}

/// Runs `config.max_iterations` iterations and returns the best deviation
/// found with its traces. Deterministic for a given seed, apart from the
/// wall-clock trace.
pub fn plan(scenario: &Scenario, config: PlannerConfig) -> Result<PlanResult> {
    let iterations = config.max_iterations;
    let mut planner = Planner::new(scenario, config)?;
    for _ in 0..iterations {
        planner.step()?;
    }
    Ok(planner.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::path_cost;
    use crate::nominal::NominalPath;

    fn open_scenario(nominal: &[[f64; 2]]) -> Scenario {
        let doc = format!(
            r#"{{"version": "1", "name": "open", "bounds": {{"min": [0, 0], "max": [100, 100]}},
                "nominal": {}, "own_speed": 1.0}}"#,
            serde_json::to_string(nominal).unwrap()
        );
        Scenario::from_json(&doc).unwrap()
    }

    #[test]
    fn colliding_sample_leaves_tree_unchanged() {
        let doc = r#"{"version": "1", "name": "wall", "bounds": {"min": [0, 0], "max": [100, 100]},
            "nominal": [[10, 50], [90, 50]], "own_speed": 1.0,
            "static_obstacles": [{"type": "box", "min": [12, 0], "max": [20, 100]}]}"#;
        let s = Scenario::from_json(doc).unwrap();
        let cfg = PlannerConfig::for_scenario(&s);
        let mut tree = Tree::new(s.nominal.start().clone(), 0.0);
        assert!(insert_sample(&mut tree, &[16.0, 50.0], &s, &cfg).is_none());
        assert!(insert_sample(&mut tree, &[30.0, 50.0], &s, &cfg).is_none());
        assert_eq!(tree.len(), 1);
    }

    #[test]
    fn rewire_reparents_through_cheaper_node() {
        // Nominal along y = 0. Root at the origin, a child at (4, 2) hung
        // directly off the root. Inserting (4, 0) makes the child cheaper
        // through the new node: edge (0,0)->(4,2) samples (1,0.5),(2,1),(3,1.5),(4,2)
        // cost 5; via (4,0): edge (4,0)->(4,2) samples (4,1),(4,2) cost 3.
        let s = open_scenario(&[[0.0, 50.0], [100.0, 50.0]]);
        let mut cfg = PlannerConfig::for_scenario(&s);
        cfg.cost.epsilon = 1.2;
        cfg.steer_eta = 10.0;
        cfg.rewire_gamma = 1e6;
        let nom = &s.nominal;
        let mut tree = Tree::new(StateVec::xy(0.0, 50.0), 0.0);
        let ec = edge_cost(&[0.0, 50.0], &[4.0, 52.0], nom, &cfg.cost);
        assert!((ec - 5.0).abs() < 1e-12);
        let child = tree.add_node(StateVec::xy(4.0, 52.0), 0, ec);
        let new = insert_sample(&mut tree, &[4.0, 50.0], &s, &cfg).unwrap();
        assert_eq!(tree.parent(new), 0);
        assert_eq!(tree.cost_to_come(new), 0.0);
        assert_eq!(tree.parent(child), new);
        assert!((tree.cost_to_come(child) - 3.0).abs() < 1e-12);
        assert_eq!(tree.children(0), &[new]);
    }

    #[test]
    fn reparent_propagates_to_descendants() {
        let mut tree = Tree::new(StateVec::xy(0.0, 0.0), 0.0);
        let a = tree.add_node(StateVec::xy(1.0, 0.0), 0, 1.0);
        let b = tree.add_node(StateVec::xy(2.0, 0.0), a, 2.0);
        let c = tree.add_node(StateVec::xy(3.0, 0.0), b, 3.0);
        let d = tree.add_node(StateVec::xy(0.0, 2.0), 0, 0.5);
        tree.reparent(b, d, 0.25);
        assert_eq!(tree.cost_to_come(b), 0.75);
        assert_eq!(tree.cost_to_come(c), 3.75);
        assert!((tree.length_to_come(c) - (2.0 + 8f64.sqrt() + 1.0)).abs() < 1e-12);
        assert_eq!(tree.descendants(d), vec![b, c]);
        assert!(tree.children(a).is_empty());
    }

    #[test]
    fn extract_best_path_cases() {
        let goal = GoalRegion {
            center: StateVec::xy(10.0, 0.0),
            tolerance: 0.5,
        };
        let mut tree = Tree::new(StateVec::xy(0.0, 0.0), 0.0);
        let a = tree.add_node(StateVec::xy(5.0, 0.0), 0, 1.0);
        assert!(extract_best_path(&tree, &goal, |_| Some(0.0)).is_empty());
        let g1 = tree.add_node(StateVec::xy(10.0, 0.0), a, 9.0);
        assert_eq!(
            extract_best_path(&tree, &goal, |_| Some(0.0)),
            vec![StateVec::xy(0.0, 0.0), StateVec::xy(5.0, 0.0), StateVec::xy(10.0, 0.0)]
        );
        let b = tree.add_node(StateVec::xy(5.0, 1.0), 0, 2.0);
        let g2 = tree.add_node(StateVec::xy(9.8, 0.0), b, 5.0);
        let path = extract_best_path(&tree, &goal, |i| (i == g1 || i == g2).then_some(0.0));
        assert_eq!(
            path,
            vec![
                StateVec::xy(0.0, 0.0),
                StateVec::xy(5.0, 1.0),
                StateVec::xy(9.8, 0.0),
                StateVec::xy(10.0, 0.0)
            ]
        );
    }

    #[test]
    fn trivial_start_equals_goal() {
        let s = open_scenario(&[[10.0, 10.0], [50.0, 50.0], [10.0, 10.5]]);
        let cfg = PlannerConfig::for_scenario(&s);
        let r = plan(&s, PlannerConfig { max_iterations: 5, ..cfg }).unwrap();
        assert_eq!(r.best_path, vec![StateVec::xy(10.0, 10.0)]);
        assert_eq!(r.best_cost, 0.0);
    }

    #[test]
    fn blocked_corridor_has_no_solution() {
        let doc = r#"{"version": "1", "name": "blocked", "bounds": {"min": [0, 0], "max": [100, 100]},
            "nominal": [[10, 50], [90, 50]], "own_speed": 1.0,
            "static_obstacles": [{"type": "box", "min": [40, 0], "max": [60, 100]}]}"#;
        let s = Scenario::from_json(doc).unwrap();
        let cfg = PlannerConfig {
            max_iterations: 300,
            ..PlannerConfig::for_scenario(&s)
        };
        let r = plan(&s, cfg).unwrap();
        assert!(r.best_path.is_empty());
        assert_eq!(r.best_cost, f64::INFINITY);
        assert_eq!(r.cost_trace, vec![(0, f64::INFINITY)]);
    }

    #[test]
    fn tree_costs_stay_consistent() {
        let s = open_scenario(&[[5.0, 5.0], [40.0, 60.0], [95.0, 90.0]]);
        let cfg = PlannerConfig {
            max_iterations: 1000,
            rng_seed: 3,
            ..PlannerConfig::for_scenario(&s)
        };
        let mut planner = Planner::new(&s, cfg.clone()).unwrap();
        for _ in 0..1000 {
            planner.step().unwrap();
        }
        let tree = planner.tree();
        for i in 1..tree.len() {
            let p = tree.parent(i);
            let ec = edge_cost(tree.node(p), tree.node(i), &s.nominal, &cfg.cost);
            assert!((tree.cost_to_come(i) - tree.cost_to_come(p) - ec).abs() <= 1e-9);
            // Every node reaches the root without revisiting.
            let mut v = i;
            let mut steps = 0;
            while v != 0 {
                v = tree.parent(v);
                steps += 1;
                assert!(steps <= tree.len());
            }
        }
        let best = planner.best_path();
        assert!(!best.is_empty());
        let recomputed = path_cost(&best, &s.nominal, &cfg.cost);
        assert!((recomputed - planner.best_cost()).abs() <= 1e-9 * recomputed.max(1.0));
    }

    #[test]
    fn uninformed_never_samples_union() {
        let s = open_scenario(&[[5.0, 5.0], [95.0, 95.0]]);
        let cfg = PlannerConfig {
            max_iterations: 400,
            informed_enabled: false,
            ..PlannerConfig::for_scenario(&s)
        };
        let r = plan(&s, cfg).unwrap();
        assert_eq!(r.sample_counts.informed, 0);
        assert!(r.union_snapshots.is_empty());
        assert_eq!(r.sample_counts.rect + r.sample_counts.bias, 400);
    }

    #[test]
    fn config_validation() {
        let s = open_scenario(&[[5.0, 5.0], [95.0, 95.0]]);
        let cfg = PlannerConfig::for_scenario(&s);
        assert!(cfg.validate().is_ok());
        assert!(PlannerConfig { steer_eta: 0.0, ..cfg.clone() }.validate().is_err());
        assert!(PlannerConfig { rebuild_cadence: 0, ..cfg.clone() }.validate().is_err());
        let _ = NominalPath::new(vec![StateVec::xy(0.0, 0.0), StateVec::xy(1.0, 0.0)]).unwrap();
    }
}
