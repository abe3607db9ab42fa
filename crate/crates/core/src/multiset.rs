//! Finite multisets of complex points, the fibers of the symmetrization map.

use serde::{Deserialize, Serialize};

use crate::C64;

/// Unordered collection of complex points with multiplicities.
///
/// Representatives are kept pairwise distinct beyond the tolerance they were
/// clustered with. Entry order is canonical (lexicographic by real then
/// imaginary part) so equal multisets compare and serialize identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointMultiset {
    entries: Vec<(C64, usize)>,
}

impl PointMultiset {
    /// Clusters `points` by single linkage at `radius`; each cluster becomes
    /// its centroid with multiplicity equal to the cluster size.
    pub fn cluster(points: &[C64], radius: f64) -> Self {
        let groups = single_linkage(points, radius);
        let entries = groups
            .into_iter()
            .map(|g| {
                let sum: C64 = g.iter().map(|&i| points[i]).sum();
                (sum / g.len() as f64, g.len())
            })
            .collect();
        Self::from_entries(entries)
    }

    /// Builds a multiset from `(point, multiplicity)` pairs without clustering.
    /// Zero multiplicities are dropped.
    pub fn from_entries(mut entries: Vec<(C64, usize)>) -> Self {
        entries.retain(|&(_, m)| m > 0);
        entries.sort_by(|a, b| {
            a.0.re
                .total_cmp(&b.0.re)
                .then_with(|| a.0.im.total_cmp(&b.0.im))
        });
        Self { entries }
    }

    /// One entry of multiplicity one per point.
    pub fn simple(points: &[C64]) -> Self {
        Self::from_entries(points.iter().map(|&p| (p, 1)).collect())
    }

    pub fn entries(&self) -> &[(C64, usize)] {
        &self.entries
    }

    /// Distinct representatives.
    pub fn points(&self) -> impl Iterator<Item = C64> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    /// Each representative repeated according to its multiplicity.
    pub fn expanded(&self) -> Vec<C64> {
        self.entries
            .iter()
            .flat_map(|&(p, m)| std::iter::repeat_n(p, m))
            .collect()
    }

    /// Sum of multiplicities.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Number of distinct representatives.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.points().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// The underlying set with points closer than `radius` identified.
    pub fn collapse(&self, radius: f64) -> Vec<C64> {
        let pts: Vec<C64> = self.points().collect();
        single_linkage(&pts, radius)
            .into_iter()
            .map(|g| g.iter().map(|&i| pts[i]).sum::<C64>() / g.len() as f64)
            .collect()
    }
}

/// Connected components of the graph joining points at distance `<= radius`.
/// Components are listed by their smallest index, members in index order.
pub(crate) fn single_linkage(points: &[C64], radius: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}
