//! Spanning trees over matrix rows in the Hamming metric (exact Prim and an
//! LSH-driven approximation), Euclidean MSTs for planar point sets, and the
//! compilation of a tree into a traversal schedule.

mod lsh;
mod traversal;

pub use lsh::{approx_mst_lsh, LshParams};
pub use traversal::{compile_traversal, Step, StepDiff, TraversalPlan};

use std::ops::Add;

use crate::diskgraph::Point;
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

/// One tree edge; `cost` is the metric distance between its endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreeEdge<W> {
    pub u: usize,
    pub v: usize,
    pub cost: W,
}

/// Spanning tree over `node_count` nodes. `W = usize` for Hamming costs,
/// `W = f64` for Euclidean ones.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanningTree<W = usize> {
    node_count: usize,
    edges: Vec<TreeEdge<W>>,
    cost: W,
}

impl<W: Copy + Default + Add<Output = W>> SpanningTree<W> {
    pub fn new(node_count: usize, edges: Vec<TreeEdge<W>>) -> Result<Self> {
        let cost = edges.iter().fold(W::default(), |acc, e| acc + e.cost);
        let tree = SpanningTree {
            node_count,
            edges,
            cost,
        };
        tree.validate()?;
        Ok(tree)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[TreeEdge<W>] {
        &self.edges
    }

    pub fn cost(&self) -> W {
        self.cost
    }

    /// Checks `node_count - 1` edges, in-range endpoints, no cycles.
    pub fn validate(&self) -> Result<()> {
        if self.node_count == 0 {
            return Err(Error::Empty("spanning tree"));
        }
        if self.edges.len() != self.node_count - 1 {
            return Err(Error::Invariant(format!(
                "tree on {} nodes has {} edges",
                self.node_count,
                self.edges.len()
            )));
        }
        let mut dsu = UnionFind::new(self.node_count);
        for e in &self.edges {
            if e.u >= self.node_count || e.v >= self.node_count {
                return Err(Error::Invariant(format!("edge ({}, {}) out of range", e.u, e.v)));
            }
            if !dsu.union(e.u, e.v) {
                return Err(Error::Invariant(format!("edge ({}, {}) closes a cycle", e.u, e.v)));
            }
        }
        Ok(())
    }

    /// Neighbour lists, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

impl SpanningTree<usize> {
    /// Same topology with every edge cost recomputed as the Hamming distance
    /// of the corresponding rows of `rows`.
    pub fn with_hamming_costs<W>(tree: &SpanningTree<W>, rows: &BitMatrix) -> Result<Self> {
        if tree.node_count != rows.rows() {
            return Err(Error::dims("tree nodes vs matrix rows", rows.rows(), tree.node_count));
        }
        let edges = tree
            .edges
            .iter()
            .map(|e| TreeEdge {
                u: e.u,
                v: e.v,
                cost: rows.row_distance(e.u, e.v),
            })
            .collect();
        SpanningTree::new(tree.node_count, edges)
    }

    /// True when every edge cost equals the Hamming distance of its rows.
    pub fn costs_match(&self, rows: &BitMatrix) -> bool {
        self.node_count == rows.rows()
            && self.edges.iter().all(|e| rows.row_distance(e.u, e.v) == e.cost)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Quadratic Prim over an implicit complete graph. Ties go to the smaller
/// node index, both when picking the next node and when choosing its parent.
fn prim_dense<W, F>(n: usize, dist: F) -> Vec<TreeEdge<W>>
where
    W: Copy + PartialOrd,
    F: Fn(usize, usize) -> W,
{
    let mut in_tree = vec![false; n];
    let mut best: Vec<Option<(W, usize)>> = vec![None; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    in_tree[0] = true;
    let mut last = 0;
    for _ in 1..n {
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let d = dist(last, v);
            if best[v].is_none_or(|(bd, _)| d < bd) {
                best[v] = Some((d, last));
            }
        }
        let mut pick: Option<(W, usize)> = None;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            if let Some((d, _)) = best[v] {
                if pick.is_none_or(|(pd, _)| d < pd) {
                    pick = Some((d, v));
                }
            }
        }
        let (_, v) = pick.expect("complete graph always has a next node");
        let (cost, parent) = best[v].unwrap();
        in_tree[v] = true;
        edges.push(TreeEdge { u: parent, v, cost });
        last = v;
    }
    edges
}

/// Exact minimum spanning tree of the rows of `rows` under Hamming distance.
pub fn exact_mst(rows: &BitMatrix) -> Result<SpanningTree> {
    if rows.rows() == 0 {
        return Err(Error::Empty("matrix has no rows"));
    }
    let edges = prim_dense(rows.rows(), |a, b| rows.row_distance(a, b));
    SpanningTree::new(rows.rows(), edges)
}

/// How the pipeline obtains the spanning tree over the rows it sweeps.
#[derive(Clone, Debug, PartialEq)]
pub enum MstMode {
    Exact,
    /// LSH approximation; `epsilon: None` uses the size-dependent default.
    Lsh { epsilon: Option<f64> },
    /// A caller-supplied tree (edge costs are recomputed from the rows).
    Fixed(SpanningTree),
}

impl MstMode {
    pub fn build(&self, rows: &BitMatrix, seed: u64) -> Result<SpanningTree> {
        match self {
            MstMode::Exact => exact_mst(rows),
            MstMode::Lsh { epsilon } => {
                let params = match epsilon {
                    Some(e) => LshParams::with_epsilon(rows.rows(), rows.cols(), *e, seed),
                    None => LshParams::defaults(rows.rows(), rows.cols(), seed),
                };
                approx_mst_lsh(rows, &params)
            }
            MstMode::Fixed(tree) => SpanningTree::with_hamming_costs(tree, rows),
        }
    }
}

/// Exact Euclidean minimum spanning tree (quadratic Prim).
pub fn euclidean_mst(points: &[Point]) -> Result<SpanningTree<f64>> {
    if points.is_empty() {
        return Err(Error::Empty("point set"));
    }
    let edges = prim_dense(points.len(), |a, b| points[a].dist(&points[b]));
    SpanningTree::new(points.len(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_rows_cost_zero() {
        let m = BitMatrix::from_strs(&["0101", "0101", "0101"]);
        let t = exact_mst(&m).unwrap();
        assert_eq!(t.cost(), 0);
        assert_eq!(t.edges().len(), 2);
    }

    #[test]
    fn small_chain() {
        let m = BitMatrix::from_strs(&["0000", "0001", "0011"]);
        let t = exact_mst(&m).unwrap();
        assert_eq!(t.cost(), 2);
        let mut pairs: Vec<_> = t.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        pairs.sort();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
        assert!(t.costs_match(&m));
    }

    #[test]
    fn empty_matrix_is_an_error() {
        assert_eq!(exact_mst(&BitMatrix::zeros(0, 4)), Err(Error::Empty("matrix has no rows")));
        assert!(euclidean_mst(&[]).is_err());
    }

    #[test]
    fn single_row_has_no_edges() {
        let t = exact_mst(&BitMatrix::from_strs(&["1"])).unwrap();
        assert!(t.edges().is_empty());
        assert_eq!(t.cost(), 0);
    }

    #[test]
    fn euclidean_examples() {
        let t = euclidean_mst(&[Point::new(0.0, 0.0), Point::new(0.5, 0.0)]).unwrap();
        assert_eq!(t.edges().len(), 1);
        assert!((t.cost() - 0.5).abs() < 1e-15);

        let square = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        assert!((euclidean_mst(&square).unwrap().cost() - 3.0).abs() < 1e-12);

        let line = [Point::new(0.0, 0.0), Point::new(0.1, 0.0), Point::new(0.3, 0.0)];
        let t = euclidean_mst(&line).unwrap();
        assert!((t.cost() - 0.3).abs() < 1e-12);
        let mut pairs: Vec<_> = t.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        pairs.sort();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn validate_rejects_cycles_and_wrong_counts() {
        let e = |u, v| TreeEdge { u, v, cost: 1usize };
        assert!(SpanningTree::new(3, vec![e(0, 1)]).is_err());
        assert!(SpanningTree::new(3, vec![e(0, 1), e(1, 0)]).is_err());
        assert!(SpanningTree::new(3, vec![e(0, 1), e(1, 3)]).is_err());
        assert!(SpanningTree::new(3, vec![e(0, 1), e(1, 2)]).is_ok());
    }
}
