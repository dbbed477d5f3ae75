use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::graph::{Layers, VertexWeightedDigraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Reverse,
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compressed adjacency lists with per-edge costs, one orientation.
pub(crate) struct Csr {
    offsets: Vec<usize>,
    targets: Vec<(u32, f64)>,
}

impl Csr {
    pub fn build(layers: Layers<'_>, direction: Direction) -> Self {
        let n = layers.n();
        let mut lists: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for (m, &c) in layers.matrices.iter().zip(layers.costs) {
            for x in 0..n {
                for y in m.row(x).ones() {
                    if x == y {
                        continue;
                    }
                    match direction {
                        Direction::Forward => lists[x].push((y as u32, c)),
                        Direction::Reverse => lists[y].push((x as u32, c)),
                    }
                }
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for l in lists {
            targets.extend(l);
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    fn neighbours(&self, x: usize) -> &[(u32, f64)] {
        &self.targets[self.offsets[x]..self.offsets[x + 1]]
    }
}

/// Endpoint-inclusive labels from `source`: `label[source] = w(source)`,
/// and an edge `x -> y` of cost `c` extends a label by `c + w(y)`.
pub(crate) fn labels(csr: &Csr, weights: &[f64], source: usize) -> Vec<f64> {
    let n = weights.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = weights[source];
    heap.push(Entry {
        dist: dist[source],
        node: source,
    });
    while let Some(Entry { dist: d, node: x }) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &(y, c) in csr.neighbours(x) {
            let y = y as usize;
            let nd = d + c + weights[y];
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(Entry { dist: nd, node: y });
            }
        }
    }
    dist
}

/// Single-source vertex-weighted distances: `δ(source, u)` (forward) or
/// `δ(u, source)` (reverse), endpoint-inclusive, with 0 at the source.
pub fn dijkstra_vertex_weighted(graph: &VertexWeightedDigraph, source: usize, direction: Direction) -> Vec<f64> {
    let layers = graph.layers();
    let csr = Csr::build(layers, direction);
    let mut d = labels(&csr, layers.weights, source);
    d[source] = 0.0;
    d
}
