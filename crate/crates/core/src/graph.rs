//! Communication graph between robots and its spectral connectivity.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point2;

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
const JACOBI_TOL: f64 = 1e-10;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("communication graph is disconnected ({components} components); robots must form a connected network")]
    Disconnected { components: usize },
    #[error("graph needs at least one robot")]
    Empty,
    #[error("disk radius must be positive and finite, got {0}")]
    BadRadius(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphPolicy {
    Complete,
    Disk {
        radius: f64,
        /// Keep the graph built from the initial positions for the whole run.
        #[serde(default = "default_true")]
        frozen: bool,
    },
}

fn default_true() -> bool {
    true
}

/// Undirected, loop-free graph over robot ids `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommGraph {
    neighbors: Vec<Vec<usize>>,
}

impl CommGraph {
    /// Builds a graph from an edge list; duplicates and self-loops are ignored.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut neighbors = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b && !neighbors[a].contains(&b) {
                neighbors[a].push(b);
                neighbors[b].push(a);
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Self { neighbors }
    }

    pub fn complete(n: usize) -> Self {
        Self {
            neighbors: (0..n)
                .map(|i| (0..n).filter(|&j| j != i).collect())
                .collect(),
        }
    }

    /// Connects `i` and `j` iff `‖p_i − p_j‖ ≤ radius`. Does not check connectivity.
    pub fn disk(positions: &[Point2], radius: f64) -> Self {
        let n = positions.len();
        let neighbors = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && positions[i].distance(positions[j]) <= radius)
                    .collect()
            })
            .collect();
        Self { neighbors }
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// Sorted neighbor ids of robot `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].binary_search(&j).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Number of connected components (breadth-first search).
    pub fn component_count(&self) -> usize {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.neighbors[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// `L = D − A` as a dense row-major matrix.
    pub fn laplacian(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut l = vec![vec![0.0; n]; n];
        for (i, row) in l.iter_mut().enumerate() {
            row[i] = self.degree(i) as f64;
            for &j in &self.neighbors[i] {
                row[j] = -1.0;
            }
        }
        l
    }

    /// Laplacian spectrum in ascending order.
    pub fn laplacian_spectrum(&self) -> Vec<f64> {
        let mut ev = symmetric_eigenvalues(self.laplacian());
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Second-smallest Laplacian eigenvalue λ₂ (0 for a single robot).
    pub fn algebraic_connectivity(&self) -> f64 {
        let ev = self.laplacian_spectrum();
        ev.get(1).copied().unwrap_or(0.0).max(0.0)
    }
}

/// Builds the graph for `policy` and rejects disconnected results.
pub fn build_graph(positions: &[Point2], policy: GraphPolicy) -> Result<CommGraph, GraphError> {
    if positions.is_empty() {
        return Err(GraphError::Empty);
    }
    let g = match policy {
        GraphPolicy::Complete => CommGraph::complete(positions.len()),
        GraphPolicy::Disk { radius, .. } => {
            if !(radius.is_finite() && radius > 0.0) {
                return Err(GraphError::BadRadius(radius));
            }
            CommGraph::disk(positions, radius)
        }
    };
    match g.component_count() {
        0 | 1 => Ok(g),
        components => Err(GraphError::Disconnected { components }),
    }
}

/// Free-function form of [`CommGraph::laplacian`].
pub fn laplacian(g: &CommGraph) -> Vec<Vec<f64>> {
    g.laplacian()
}

/// Free-function form of [`CommGraph::algebraic_connectivity`].
pub fn algebraic_connectivity(g: &CommGraph) -> f64 {
    g.algebraic_connectivity()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (upper, lower) = a.split_at_mut(q);
                for (apk, aqk) in upper[p].iter_mut().zip(lower[0].iter_mut()) {
                    let (x, y) = (*apk, *aqk);
                    *apk = c * x - s * y;
                    *aqk = s * x + c * y;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn complete_graph_degrees() {
        let g = build_graph(&[Point2::ORIGIN; 6], GraphPolicy::Complete).unwrap();
        assert!((0..6).all(|i| g.degree(i) == 5));
        assert_eq!(g.edge_count(), 15);
    }

    #[test]
    fn disk_path_graph() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
        ];
        let g = build_graph(
            &pts,
            GraphPolicy::Disk {
                radius: 1.0,
                frozen: true,
            },
        )
        .unwrap();
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.neighbors(2), &[1]);
        assert_eq!(
            build_graph(
                &pts,
                GraphPolicy::Disk {
                    radius: 0.5,
                    frozen: true
                }
            ),
            Err(GraphError::Disconnected { components: 3 })
        );
        assert!(build_graph(
            &pts,
            GraphPolicy::Disk {
                radius: -1.0,
                frozen: true
            }
        )
        .is_err());
        assert_eq!(
            build_graph(&[], GraphPolicy::Complete),
            Err(GraphError::Empty)
        );
    }

    #[test]
    fn laplacians() {
        assert_eq!(
            CommGraph::complete(2).laplacian(),
            vec![vec![1.0, -1.0], vec![-1.0, 1.0]]
        );
        let p3 = CommGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(
            laplacian(&p3),
            vec![
                vec![1.0, -1.0, 0.0],
                vec![-1.0, 2.0, -1.0],
                vec![0.0, -1.0, 1.0]
            ]
        );
        let k6 = CommGraph::complete(6).laplacian();
        for (i, row) in k6.iter().enumerate() {
            assert_eq!(row.iter().sum::<f64>(), 0.0);
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, if i == j { 5.0 } else { -1.0 });
            }
        }
    }

    #[test]
    fn connectivity_values() {
        let two = CommGraph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_relative_eq!(algebraic_connectivity(&two), 0.0, epsilon = 1e-9);
        let p3 = CommGraph::from_edges(3, &[(0, 1), (1, 2)]);
        let spec = p3.laplacian_spectrum();
        // roots of λ(λ−1)(λ−3)
        for (got, want) in spec.iter().zip([0.0, 1.0, 3.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-9);
        }
        assert_relative_eq!(
            CommGraph::complete(6).algebraic_connectivity(),
            6.0,
            epsilon = 1e-9
        );
        assert_eq!(CommGraph::complete(1).algebraic_connectivity(), 0.0);
    }
}
