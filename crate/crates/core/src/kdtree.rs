//! Static k-d tree over a fixed point set. Built once, queried many times.

use crate::geometry::distance_sq;

#[derive(Debug, Clone)]
struct Node {
    point: usize,
    axis: usize,
    left: Option<usize>,
    right: Option<usize>,
}

/// Balanced k-d tree storing indices into an owned point list.
#[derive(Debug, Clone)]
pub struct KdTree {
    dim: usize,
    points: Vec<Vec<f64>>,
    nodes: Vec<Node>,
    root: Option<usize>,
}

impl KdTree {
    pub fn build(points: Vec<Vec<f64>>) -> Self {
        let dim = points.first().map_or(0, Vec::len);
        let mut tree = KdTree {
            dim,
            points,
            nodes: Vec::new(),
            root: None,
        };
        let mut ids: Vec<usize> = (0..tree.points.len()).collect();
        tree.root = tree.build_rec(&mut ids, 0);
        tree
    }

    fn build_rec(&mut self, ids: &mut [usize], depth: usize) -> Option<usize> {
        if ids.is_empty() {
            return None;
        }
        let axis = depth % self.dim;
        let mid = ids.len() / 2;
        let pts = &self.points;
        ids.select_nth_unstable_by(mid, |a, b| pts[*a][axis].total_cmp(&pts[*b][axis]));
        let point = ids[mid];
        let slot = self.nodes.len();
        self.nodes.push(Node {
            point,
            axis,
            left: None,
            right: None,
        });
        let (lo, rest) = ids.split_at_mut(mid);
        let left = self.build_rec(lo, depth + 1);
        let right = self.build_rec(&mut rest[1..], depth + 1);
        self.nodes[slot].left = left;
        self.nodes[slot].right = right;
        Some(slot)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    /// Index and distance of the stored point closest to `q`.
    pub fn nearest(&self, q: &[f64]) -> Option<(usize, f64)> {
        let mut best = (usize::MAX, f64::INFINITY);
        self.nearest_rec(self.root, q, &mut best);
        (best.0 != usize::MAX).then(|| (best.0, best.1.sqrt()))
    }

    fn nearest_rec(&self, node: Option<usize>, q: &[f64], best: &mut (usize, f64)) {
        let Some(n) = node else { return };
        let node = &self.nodes[n];
        let p = &self.points[node.point];
        let d = distance_sq(p, q);
        if d < best.1 || (d == best.1 && node.point < best.0) {
            *best = (node.point, d);
        }
        let diff = q[node.axis] - p[node.axis];
        let (near, far) = if diff < 0.0 {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        self.nearest_rec(near, q, best);
        if diff * diff <= best.1 {
            self.nearest_rec(far, q, best);
        }
    }

    /// Calls `visit` with the index of every stored point within `radius` of `q`.
    pub fn within<F: FnMut(usize)>(&self, q: &[f64], radius: f64, mut visit: F) {
        let r2 = radius * radius;
        self.within_rec(self.root, q, radius, r2, &mut visit);
    }

    fn within_rec<F: FnMut(usize)>(
        &self,
        node: Option<usize>,
        q: &[f64],
        radius: f64,
        r2: f64,
        visit: &mut F,
    ) {
        let Some(n) = node else { return };
        let node = &self.nodes[n];
        let p = &self.points[node.point];
        if distance_sq(p, q) <= r2 {
            visit(node.point);
        }
        let diff = q[node.axis] - p[node.axis];
        if diff <= radius {
            self.within_rec(node.left, q, radius, r2, visit);
        }
        if diff >= -radius {
            self.within_rec(node.right, q, radius, r2, visit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| (0..dim).map(|_| rng.random_range(-50.0..50.0)).collect())
            .collect()
    }

    #[test]
    fn nearest_matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in [2, 3] {
            let pts = random_points(&mut rng, 300, dim);
            let tree = KdTree::build(pts.clone());
            for _ in 0..500 {
                let q: Vec<f64> = (0..dim).map(|_| rng.random_range(-60.0..60.0)).collect();
                let (idx, d) = tree.nearest(&q).unwrap();
                let brute = pts
                    .iter()
                    .map(|p| distance_sq(p, &q).sqrt())
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(d, brute);
                assert_eq!(distance_sq(&pts[idx], &q).sqrt(), brute);
            }
        }
    }

    #[test]
    fn within_matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts = random_points(&mut rng, 200, 2);
        let tree = KdTree::build(pts.clone());
        for _ in 0..200 {
            let q = vec![rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0)];
            let r = rng.random_range(0.0..20.0);
            let mut got = Vec::new();
            tree.within(&q, r, |i| got.push(i));
            got.sort_unstable();
            let want: Vec<usize> = (0..pts.len())
                .filter(|&i| distance_sq(&pts[i], &q) <= r * r)
                .collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn empty_tree() {
        let tree = KdTree::build(Vec::new());
        assert!(tree.is_empty());
        assert!(tree.nearest(&[0.0, 0.0]).is_none());
    }
}
