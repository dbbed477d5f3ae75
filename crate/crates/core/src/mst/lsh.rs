//! Approximate Hamming MST by simulating Prim's algorithm on top of
//! bit-sampling LSH tables.
//!
//! For every distance scale `s` there are `L` tables, each keyed by `k`
//! sampled coordinates; two rows at distance `d` collide in one table with
//! probability `(1 - d/cols)^k`. Rows not yet in the tree live in the
//! tables (removed lazily as buckets are scanned). Every tree node keeps
//! one candidate edge in a heap: its nearest colliding non-tree row at the
//! smallest scale where anything collides. When the candidate goes stale
//! the node is re-queried, moving to coarser scales as finer ones empty
//! out. A final exact scan stands behind the coarsest scale so the
//! construction always completes.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{SpanningTree, TreeEdge};
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::rng::SeedSplitter;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LshParams {
    /// Ratio between consecutive scales is `1 + epsilon`.
    pub epsilon: f64,
    /// Tables per scale (`L`).
    pub tables: usize,
    /// Sampled coordinates per hash (`k`), one entry per scale.
    pub bits_per_hash: Vec<usize>,
    /// Distance thresholds, strictly increasing, each `<= cols`.
    pub scales: Vec<usize>,
    pub seed: u64,
}

impl LshParams {
    /// Defaults for `n` rows of length `cols`: `epsilon = max(1, ceil(log2 n) - 1)`.
    pub fn defaults(n: usize, cols: usize, seed: u64) -> Self {
        let log2 = (n.max(1) as f64).log2().ceil();
        Self::with_epsilon(n, cols, (log2 - 1.0).max(1.0), seed)
    }

    /// Geometric scales `1, ⌈1+ε⌉, …` capped by `cols`, `k = ⌈cols/(s+1)⌉`
    /// and `L = ⌈3 ln n⌉`.
    pub fn with_epsilon(n: usize, cols: usize, epsilon: f64, seed: u64) -> Self {
        let mut scales = Vec::new();
        let mut s = 1usize;
        while s < cols {
            scales.push(s);
            s = ((s as f64) * (1.0 + epsilon)).ceil().max((s + 1) as f64) as usize;
        }
        if cols > 0 {
            scales.push(cols);
        }
        let bits_per_hash = scales
            .iter()
            .map(|&s| cols.div_ceil(s + 1).clamp(1, cols))
            .collect();
        let tables = ((3.0 * (n.max(2) as f64).ln()).ceil() as usize).max(1);
        LshParams {
            epsilon,
            tables,
            bits_per_hash,
            scales,
            seed,
        }
    }

    pub fn validate(&self, cols: usize) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::InvalidParams(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        if self.tables == 0 {
            return Err(Error::InvalidParams("need at least one table".into()));
        }
        if self.bits_per_hash.len() != self.scales.len() {
            return Err(Error::InvalidParams(format!(
                "{} hash widths for {} scales",
                self.bits_per_hash.len(),
                self.scales.len()
            )));
        }
        if self.bits_per_hash.contains(&0) {
            return Err(Error::InvalidParams("bits_per_hash must be >= 1".into()));
        }
        if self.scales.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams("scales must be strictly increasing".into()));
        }
        if self.scales.last().is_some_and(|&s| s > cols) {
            return Err(Error::InvalidParams(format!("scale exceeds row length {cols}")));
        }
        Ok(())
    }
}

struct Table {
    positions: Vec<u32>,
    buckets: HashMap<u64, Vec<u32>>,
}

fn hash_row(rows: &BitMatrix, r: usize, positions: &[u32]) -> u64 {
    let row = rows.row(r);
    let words = row.words();
    let mut h = 0x9e37_79b9_7f4a_7c15u64;
    let mut acc = 0u64;
    for (i, &p) in positions.iter().enumerate() {
        let bit = (words[p as usize / 64] >> (p % 64)) & 1;
        acc = (acc << 1) | bit;
        if i % 64 == 63 {
            h = (h ^ acc).wrapping_mul(0xff51_afd7_ed55_8ccd).rotate_left(31);
            acc = 0;
        }
    }
    (h ^ acc ^ positions.len() as u64).wrapping_mul(0xc4ce_b9fe_1a85_ec53)
}

struct Index<'a> {
    rows: &'a BitMatrix,
    /// `tables[scale][table]`
    tables: Vec<Vec<Table>>,
    keys: Vec<Vec<Vec<u64>>>,
    in_tree: Vec<bool>,
    next_scale: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl<'a> Index<'a> {
    fn build(rows: &'a BitMatrix, params: &LshParams) -> Self {
        let n = rows.rows();
        let cols = rows.cols() as u32;
        let mut rng = SeedSplitter::new(params.seed).stream("lsh-mst");
        let mut tables = Vec::with_capacity(params.scales.len());
        let mut keys = Vec::with_capacity(params.scales.len());
        for &k in &params.bits_per_hash {
            let mut scale_tables = Vec::with_capacity(params.tables);
            let mut scale_keys = Vec::with_capacity(params.tables);
            for _ in 0..params.tables {
                let positions: Vec<u32> = (0..k).map(|_| rng.gen_range(0..cols)).collect();
                let row_keys: Vec<u64> = (0..n).map(|r| hash_row(rows, r, &positions)).collect();
                let mut buckets: HashMap<u64, Vec<u32>> = HashMap::new();
                for (r, &key) in row_keys.iter().enumerate() {
                    buckets.entry(key).or_default().push(r as u32);
                }
                scale_tables.push(Table { positions, buckets });
                scale_keys.push(row_keys);
            }
            tables.push(scale_tables);
            keys.push(scale_keys);
        }
        Index {
            rows,
            tables,
            keys,
            in_tree: vec![false; n],
            next_scale: vec![0; n],
            stamp: vec![0; n],
            epoch: 0,
        }
    }

    /// Nearest non-tree row colliding with `t` at the finest non-empty scale,
    /// falling back to an exact scan once every scale is exhausted.
    fn query(&mut self, t: usize) -> Option<(usize, usize)> {
        let rows = self.rows;
        while self.next_scale[t] < self.tables.len() {
            let s = self.next_scale[t];
            self.epoch = self.epoch.wrapping_add(1);
            if self.epoch == 0 {
                self.stamp.iter_mut().for_each(|x| *x = 0);
                self.epoch = 1;
            }
            let mut best: Option<(usize, usize)> = None;
            for (ti, table) in self.tables[s].iter_mut().enumerate() {
                debug_assert!(!table.positions.is_empty());
                let key = self.keys[s][ti][t];
                let Some(bucket) = table.buckets.get_mut(&key) else {
                    continue;
                };
                let in_tree = &self.in_tree;
                bucket.retain(|&r| !in_tree[r as usize]);
                for &r in bucket.iter() {
                    let r = r as usize;
                    if self.stamp[r] == self.epoch {
                        continue;
                    }
                    self.stamp[r] = self.epoch;
                    let d = rows.row_distance(t, r);
                    if best.is_none_or(|b| (d, r) < b) {
                        best = Some((d, r));
                    }
                }
            }
            if best.is_some() {
                return best;
            }
            self.next_scale[t] += 1;
        }
        (0..rows.rows())
            .filter(|&r| !self.in_tree[r])
            .map(|r| (rows.row_distance(t, r), r))
            .min()
    }
}

/// Approximate minimum spanning tree of the rows of `rows` under Hamming
/// distance. Deterministic for a fixed `params.seed`.
pub fn approx_mst_lsh(rows: &BitMatrix, params: &LshParams) -> Result<SpanningTree> {
    let n = rows.rows();
    if n == 0 {
        return Err(Error::Empty("matrix has no rows"));
    }
    params.validate(rows.cols())?;
    if n == 1 {
        return SpanningTree::new(1, Vec::new());
    }
    if rows.cols() == 0 {
        let edges = (1..n).map(|v| TreeEdge { u: v - 1, v, cost: 0 }).collect();
        return SpanningTree::new(n, edges);
    }

    let mut index = Index::build(rows, params);
    let mut heap: BinaryHeap<Reverse<(usize, usize, usize)>> = BinaryHeap::new();
    let mut edges = Vec::with_capacity(n - 1);

    index.in_tree[0] = true;
    if let Some((d, r)) = index.query(0) {
        heap.push(Reverse((d, 0, r)));
    }
    while edges.len() < n - 1 {
        let Some(Reverse((d, t, r))) = heap.pop() else {
            return Err(Error::Invariant("LSH Prim ran out of candidates".into()));
        };
        if !index.in_tree[r] {
            index.in_tree[r] = true;
            edges.push(TreeEdge { u: t, v: r, cost: d });
            if let Some((d2, r2)) = index.query(r) {
                heap.push(Reverse((d2, r, r2)));
            }
        }
        if let Some((d2, r2)) = index.query(t) {
            heap.push(Reverse((d2, t, r2)));
        }
    }
    SpanningTree::new(n, edges)
}
