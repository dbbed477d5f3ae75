//! Cubic reference implementations used by tests and `--oracle` checks.

use crate::apsp::{EdgeClassDigraph, VertexWeightedDigraph};
use crate::error::{Error, Result};
use crate::matrix::{BitMatrix, ScalarMatrix};

fn floyd_warshall(n: usize, weights: &[f64], edge: impl Fn(usize, usize) -> Option<f64>) -> ScalarMatrix {
    let mut d = ScalarMatrix::infinite(n, n);
    for v in 0..n {
        for u in 0..n {
            if v == u {
                d.set(v, u, 0.0);
            } else if let Some(c) = edge(v, u) {
                d.set(v, u, weights[v] + c + weights[u]);
            }
        }
    }
    for (k, &wk) in weights.iter().enumerate() {
        for v in 0..n {
            if v == k {
                continue;
            }
            let dvk = d.get(v, k);
            if dvk == f64::INFINITY {
                continue;
            }
            for u in 0..n {
                if u == k || u == v {
                    continue;
                }
                let cand = dvk + d.get(k, u) - wk;
                if cand < d.get(v, u) {
                    d.set(v, u, cand);
                }
            }
        }
    }
    d
}

/// Floyd–Warshall on endpoint-inclusive vertex-weighted distances.
pub fn floyd_warshall_vertex_weighted(graph: &VertexWeightedDigraph) -> ScalarMatrix {
    let a = graph.adjacency();
    floyd_warshall(graph.n(), graph.weights(), |v, u| a.get(v, u).then_some(0.0))
}

/// Floyd–Warshall where each edge also pays its class cost.
pub fn floyd_warshall_edge_classes(graph: &EdgeClassDigraph) -> ScalarMatrix {
    let classes = graph.classes();
    let costs = graph.class_costs();
    floyd_warshall(graph.n(), graph.weights(), |v, u| {
        classes
            .iter()
            .zip(costs)
            .filter(|(m, _)| m.get(v, u))
            .map(|(_, &c)| c)
            .min_by(f64::total_cmp)
    })
}

/// Reflexive-transitive closure by one BFS per source.
pub fn bfs_closure(b: &BitMatrix) -> Result<BitMatrix> {
    if !b.is_square() {
        return Err(Error::dims(
            "closure input must be square",
            format!("{0}x{0}", b.rows()),
            format!("{}x{}", b.rows(), b.cols()),
        ));
    }
    let n = b.rows();
    let mut out = BitMatrix::zeros(n, n);
    let mut queue = Vec::with_capacity(n);
    for s in 0..n {
        queue.clear();
        queue.push(s);
        out.set(s, s, true);
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for y in b.row(x).ones() {
                if !out.get(s, y) {
                    out.set(s, y, true);
                    queue.push(y);
                }
            }
        }
    }
    Ok(out)
}
