use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::geometry::Point2;

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: alloc::vec![0; n] }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            core::cmp::Ordering::Less => self.parent[ra] = rb,
            core::cmp::Ordering::Greater => self.parent[rb] = ra,
            core::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Radius-based nearest-neighbor clustering.
///
/// Points closer than `radius` are connected; clusters are the connected
/// components with at least `min_size` members. Each cluster lists point
/// indices in ascending order; clusters are ordered by their first index.
pub fn rbnn(points: &[Point2], radius: f64, min_size: usize) -> Vec<Vec<usize>> {
    if points.is_empty() || !(radius > 0.0) {
        return Vec::new();
    }
    let cell = |p: &Point2| ((p.x / radius).floor() as i64, (p.y / radius).floor() as i64);
    let mut grid: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        grid.entry(cell(p)).or_default().push(i);
    }
    let r2 = radius * radius;
    let mut sets = DisjointSet::new(points.len());
    for (i, p) in points.iter().enumerate() {
        let (cx, cy) = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(bucket) = grid.get(&(cx + dx, cy + dy)) else { continue };
                for &j in bucket {
                    if j > i {
                        let d = *p - points[j];
                        if d.dot(d) <= r2 {
                            sets.union(i, j);
                        }
                    }
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..points.len() {
        let root = sets.find(i);
        by_root.entry(root).or_default().push(i);
    }
    let mut clusters: Vec<Vec<usize>> = by_root.into_values().filter(|c| c.len() >= min_size).collect();
    clusters.sort_by_key(|c| c[0]);
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_separated_groups() {
        let mut pts = Vec::new();
        for k in 0..2 {
            for i in 0..10 {
                let t = i as f64 * 0.05;
                pts.push(Point2::new(20.0 * k as f64 + t, 0.3 * (i % 3) as f64 / 2.0));
            }
        }
        let c = rbnn(&pts, 1.5, 8);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0], (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn isolated_points_dropped() {
        let pts = [Point2::new(0.0, 0.0), Point2::new(10.0, 0.0), Point2::new(0.0, 10.0)];
        assert!(rbnn(&pts, 1.5, 8).is_empty());
        assert!(rbnn(&[], 1.5, 1).is_empty());
    }

    #[test]
    fn chain_is_one_cluster() {
        let pts: Vec<Point2> = (0..31).map(|i| Point2::new(i as f64, 0.0)).collect();
        let c = rbnn(&pts, 1.5, 8);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].len(), 31);
    }
}
