//! Bounded-horizon distances `D^i` (paths of at most `i` edges), advanced
//! one edge at a time through mixed products.

use super::graph::{Layers, VertexWeightedDigraph};
use crate::error::{Error, Result};
use crate::matrix::{approx_eq, ScalarMatrix, WitnessMatrix};
use crate::mixed::{sweep_left, sweep_right, Side};
use crate::mst::TraversalPlan;

/// One strict improvement recorded at a given level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Improvement {
    pair: u32,
    witness: u32,
}

#[derive(Clone, Debug)]
pub struct HorizonState {
    horizon: usize,
    side: Side,
    d: ScalarMatrix,
    witness: WitnessMatrix,
    level: Vec<u32>,
    /// `log[l]` lists the entries strictly improved at level `l` (sorted by
    /// pair), with the witness used at that level. Levels 0 and 1 are empty.
    log: Vec<Vec<Improvement>>,
}

impl HorizonState {
    /// `D^1`: zero diagonal, `w(v) + c + w(u)` on edges, `+inf` elsewhere.
    /// The sum is associated the way a step would extend the diagonal
    /// `w(v)`, so a one-edge candidate can never beat `D^1` by rounding.
    pub fn initial(graph: &VertexWeightedDigraph, side: Side) -> Self {
        Self::initial_layers(graph.layers(), side)
    }

    pub(crate) fn initial_layers(layers: Layers<'_>, side: Side) -> Self {
        let n = layers.n();
        let w = layers.weights;
        let mut d = ScalarMatrix::infinite(n, n);
        let mut level = vec![0u32; n * n];
        for v in 0..n {
            d.set(v, v, 0.0);
            for u in 0..n {
                if u == v {
                    continue;
                }
                if let Some(c) = layers.edge_cost(v, u) {
                    let one_edge = match side {
                        Side::Right => (w[v] + c) + w[u],
                        Side::Left => w[v] + (c + w[u]),
                    };
                    d.set(v, u, one_edge);
                    level[v * n + u] = 1;
                }
            }
        }
        HorizonState {
            horizon: 1,
            side,
            d,
            witness: WitnessMatrix::empty(n, n),
            level,
            log: vec![Vec::new(), Vec::new()],
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn distances(&self) -> &ScalarMatrix {
        &self.d
    }

    /// Last improving intermediate vertex: the predecessor of `u` for right
    /// products, the successor of `v` for left products.
    pub fn witnesses(&self) -> &WitnessMatrix {
        &self.witness
    }

    /// Level of the last strict improvement of `(v, u)`; 0 for entries never
    /// set past `D^0`.
    pub fn level(&self, v: usize, u: usize) -> usize {
        self.level[v * self.d.cols() + u] as usize
    }

    pub fn n(&self) -> usize {
        self.d.rows()
    }

    fn witness_at(&self, level: usize, v: usize, u: usize) -> Option<usize> {
        let pair = (v * self.n() + u) as u32;
        let entries = self.log.get(level)?;
        entries
            .binary_search_by_key(&pair, |e| e.pair)
            .ok()
            .map(|i| entries[i].witness as usize)
    }

    /// Moves the horizon forward without computing; valid only once a step
    /// has improved nothing, since `D^j` is then fixed for all later `j`.
    pub(crate) fn fast_forward(&mut self, horizon: usize) {
        while self.log.len() <= horizon {
            self.log.push(Vec::new());
        }
        self.horizon = self.horizon.max(horizon);
    }

    /// Mixed-product input: `D` with `w(v)` on the diagonal (a zero-edge
    /// path from `v` to itself, endpoint-inclusive).
    fn product_input(&self, weights: &[f64]) -> ScalarMatrix {
        let mut a = self.d.clone();
        for (v, &w) in weights.iter().enumerate() {
            a.set(v, v, w);
        }
        a
    }

    /// Advances from `D^i` to `D^{i+1}` using one precompiled plan per layer.
    /// Returns `(improved entries, pool operations)`.
    pub(crate) fn advance(&mut self, layers: Layers<'_>, plans: &[TraversalPlan]) -> Result<(usize, u64)> {
        let n = self.n();
        if self.horizon + 1 > n.saturating_sub(1) {
            return Err(Error::HorizonOverflow {
                horizon: self.horizon,
                n,
            });
        }
        debug_assert_eq!(plans.len(), layers.matrices.len());
        let w = layers.weights;
        let input = self.product_input(w);
        let mut ops = 0u64;
        let mut best = ScalarMatrix::infinite(n, n);
        let mut best_witness = WitnessMatrix::empty(n, n);
        for (plan, &cost) in plans.iter().zip(layers.costs) {
            let prod = match self.side {
                Side::Right => sweep_right(&input, plan),
                Side::Left => sweep_left(&input, plan),
            };
            ops += prod.op_count;
            for v in 0..n {
                for u in 0..n {
                    let sel = prod.c.get(v, u);
                    if sel.is_infinite() {
                        continue;
                    }
                    let cand = match self.side {
                        Side::Right => sel + cost + w[u],
                        Side::Left => w[v] + (cost + sel),
                    };
                    if cand < best.get(v, u) {
                        best.set(v, u, cand);
                        best_witness.set(v, u, prod.w.get(v, u));
                    }
                }
            }
        }

        let next = self.horizon + 1;
        let mut improved = Vec::new();
        for v in 0..n {
            for u in 0..n {
                if v == u {
                    continue;
                }
                let cand = best.get(v, u);
                if cand < self.d.get(v, u) {
                    let x = best_witness.get(v, u).expect("finite candidate has a witness");
                    self.d.set(v, u, cand);
                    self.witness.set(v, u, Some(x));
                    self.level[v * n + u] = next as u32;
                    improved.push(Improvement {
                        pair: (v * n + u) as u32,
                        witness: x as u32,
                    });
                }
            }
        }
        let count = improved.len();
        self.fast_forward(next - 1);
        self.log.push(improved);
        self.horizon = next;
        Ok((count, ops))
    }

    /// Vertex sequence (path order) of the `level`-edge path recorded for
    /// `(v, u)`, checked for length and weight against `D`.
    pub(crate) fn backtrack(&self, layers: Layers<'_>, v: usize, u: usize) -> Result<Vec<usize>> {
        let lvl = self.level(v, u);
        let mut path = Vec::with_capacity(lvl + 1);
        match self.side {
            Side::Right => {
                let mut cur = u;
                path.push(u);
                for l in (2..=lvl).rev() {
                    let x = self.witness_at(l, v, cur).ok_or_else(|| {
                        Error::Invariant(format!("no level-{l} record for ({v}, {cur})"))
                    })?;
                    path.push(x);
                    cur = x;
                }
                path.push(v);
                path.reverse();
            }
            Side::Left => {
                let mut cur = v;
                path.push(v);
                for l in (2..=lvl).rev() {
                    let x = self.witness_at(l, cur, u).ok_or_else(|| {
                        Error::Invariant(format!("no level-{l} record for ({cur}, {u})"))
                    })?;
                    path.push(x);
                    cur = x;
                }
                path.push(u);
            }
        }
        if path.len() != lvl + 1 {
            return Err(Error::Invariant(format!(
                "chain for ({v}, {u}) has {} vertices, expected {}",
                path.len(),
                lvl + 1
            )));
        }
        let weight = path_weight(layers, &path)?;
        if !approx_eq(weight, self.d.get(v, u), 1e-9) {
            return Err(Error::Invariant(format!(
                "chain for ({v}, {u}) weighs {weight}, D holds {}",
                self.d.get(v, u)
            )));
        }
        Ok(path)
    }
}

/// Endpoint-inclusive vertex weight plus edge costs, summed along the path.
pub(crate) fn path_weight(layers: Layers<'_>, path: &[usize]) -> Result<f64> {
    let mut total = layers.weights[path[0]];
    for hop in path.windows(2) {
        let c = layers
            .edge_cost(hop[0], hop[1])
            .ok_or_else(|| Error::Invariant(format!("({}, {}) is not an edge", hop[0], hop[1])))?;
        total += c + layers.weights[hop[1]];
    }
    Ok(total)
}

fn check_plan(graph: &VertexWeightedDigraph, side: Side, plan: &TraversalPlan) -> Result<()> {
    let ok = match side {
        Side::Right => plan.matches(&graph.adjacency().transpose()),
        Side::Left => plan.matches(graph.adjacency()),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::PlanMismatch(format!(
            "{side:?} step needs a plan over the {} of the adjacency matrix",
            if side == Side::Right { "columns" } else { "rows" }
        )))
    }
}

/// One horizon step: `D^{i+1}[v,u] = min(D^i[v,u], min{D^i[v,x] + w(u) :
/// A[x,u] = 1})` (or the symmetric left form), recording witnesses and
/// levels of strict improvements.
pub fn horizon_step(
    state: &HorizonState,
    graph: &VertexWeightedDigraph,
    plan: &TraversalPlan,
) -> Result<HorizonState> {
    if state.n() != graph.n() {
        return Err(Error::dims("state vs graph size", graph.n(), state.n()));
    }
    check_plan(graph, state.side, plan)?;
    let mut next = state.clone();
    next.advance(graph.layers(), std::slice::from_ref(plan))?;
    Ok(next)
}

/// Vertex sets of the recorded paths for every pair whose last strict
/// improvement happened at the current horizon `t - 1`. Each set has exactly
/// `t` vertices.
pub fn extract_long_paths(state: &HorizonState, graph: &VertexWeightedDigraph) -> Result<Vec<Vec<usize>>> {
    extract_layers(state, graph.layers())
}

pub(crate) fn extract_layers(state: &HorizonState, layers: Layers<'_>) -> Result<Vec<Vec<usize>>> {
    let n = state.n();
    let target = state.horizon as u32;
    let mut sets = Vec::new();
    for v in 0..n {
        for u in 0..n {
            if v != u && state.level[v * n + u] == target {
                let mut path = state.backtrack(layers, v, u)?;
                path.sort_unstable();
                path.dedup();
                if path.len() != state.horizon + 1 {
                    return Err(Error::Invariant(format!(
                        "path for ({v}, {u}) repeats a vertex"
                    )));
                }
                sets.push(path);
            }
        }
    }
    Ok(sets)
}
