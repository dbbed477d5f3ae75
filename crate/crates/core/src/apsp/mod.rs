//! All-pairs shortest paths for vertex-weighted digraphs.
//!
//! Pipeline: build a Hamming spanning tree over the columns (right
//! products) or rows (left products) of the adjacency matrix, pick a
//! horizon `t`, advance `D^1 … D^{t-1}` with one mixed product per step,
//! collect the `t`-vertex paths behind every entry that first became final
//! at step `t - 1`, hit them with a greedy bridging set, run Dijkstra from
//! and to every bridging vertex, and combine.

mod bridging;
mod dijkstra;
mod graph;
mod horizon;

pub use bridging::{hitting_set, BridgingSet};
pub use dijkstra::{dijkstra_vertex_weighted, Direction};
pub use graph::{EdgeClassDigraph, VertexWeightedDigraph};
pub use horizon::{extract_long_paths, horizon_step, HorizonState};

use serde::Serialize;

use self::dijkstra::{labels, Csr};
use self::graph::Layers;
use self::horizon::extract_layers;
use crate::error::{Error, Result};
use crate::matrix::{BitMatrix, ScalarMatrix};
use crate::mixed::Side;
use crate::mst::{compile_traversal, MstMode, TraversalPlan};
use crate::par;
use crate::rng::SeedSplitter;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SidePolicy {
    /// Build both trees and use the cheaper side.
    #[default]
    Auto,
    Right,
    Left,
}

#[derive(Clone, Debug)]
pub struct ApspConfig {
    pub mst: MstMode,
    pub side: SidePolicy,
    /// Forces the horizon `t` (clamped to `[2, n]`).
    pub horizon: Option<usize>,
    pub seed: u64,
}

impl Default for ApspConfig {
    fn default() -> Self {
        ApspConfig {
            mst: MstMode::Lsh { epsilon: None },
            side: SidePolicy::Auto,
            horizon: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ApspStats {
    pub n: usize,
    pub t: usize,
    pub side: Option<Side>,
    /// Σ over layers of the Hamming tree cost over adjacency columns.
    pub tree_cost_right: Option<usize>,
    /// Σ over layers of the Hamming tree cost over adjacency rows.
    pub tree_cost_left: Option<usize>,
    pub horizon_steps: usize,
    pub long_paths: usize,
    pub bridging_size: usize,
    pub op_count: u64,
}

#[derive(Clone, Debug)]
pub struct ApspResult {
    pub distances: ScalarMatrix,
    pub bridging: BridgingSet,
    /// Horizon state at `t - 1` (witness and level matrices).
    pub horizon: Option<HorizonState>,
    pub stats: ApspStats,
}

/// `t = clamp(⌈sqrt(n³ / T̂)⌉, 2, n)` with `T̂ = Σ_layers n·(n + 2·cost + 1)`.
pub fn choose_horizon(n: usize, layer_tree_costs: &[usize]) -> usize {
    if n < 2 {
        return n.max(1);
    }
    let nf = n as f64;
    let t_mix: f64 = layer_tree_costs
        .iter()
        .map(|&c| nf * (nf + 2.0 * c as f64 + 1.0))
        .sum::<f64>()
        .max(1.0);
    let t = (nf * nf * nf / t_mix).sqrt().ceil() as usize;
    t.clamp(2, n)
}

fn side_rows(m: &BitMatrix, side: Side) -> BitMatrix {
    match side {
        Side::Right => m.transpose(),
        Side::Left => m.clone(),
    }
}

fn build_plans(layers: Layers<'_>, side: Side, config: &ApspConfig) -> Result<Vec<TraversalPlan>> {
    let seeds = SeedSplitter::new(config.seed);
    layers
        .matrices
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let rows = side_rows(m, side);
            let seed = seeds.stream_seed(&format!("mst-{side:?}-{i}"));
            let tree = config.mst.build(&rows, seed)?;
            compile_traversal(&tree, &rows)
        })
        .collect()
}

fn run_pipeline(layers: Layers<'_>, config: &ApspConfig) -> Result<ApspResult> {
    let n = layers.n();
    let mut stats = ApspStats {
        n,
        ..ApspStats::default()
    };
    if n == 0 {
        return Ok(ApspResult {
            distances: ScalarMatrix::infinite(0, 0),
            bridging: BridgingSet::default(),
            horizon: None,
            stats,
        });
    }
    if n == 1 {
        stats.t = 1;
        return Ok(ApspResult {
            distances: ScalarMatrix::filled(1, 1, 0.0),
            bridging: BridgingSet::default(),
            horizon: None,
            stats,
        });
    }

    let total = |plans: &[TraversalPlan]| plans.iter().map(TraversalPlan::tree_cost).sum::<usize>();
    let (side, plans) = match config.side {
        SidePolicy::Right => {
            let p = build_plans(layers, Side::Right, config)?;
            stats.tree_cost_right = Some(total(&p));
            (Side::Right, p)
        }
        SidePolicy::Left => {
            let p = build_plans(layers, Side::Left, config)?;
            stats.tree_cost_left = Some(total(&p));
            (Side::Left, p)
        }
        SidePolicy::Auto => {
            let right = build_plans(layers, Side::Right, config)?;
            let left = build_plans(layers, Side::Left, config)?;
            let (cr, cl) = (total(&right), total(&left));
            stats.tree_cost_right = Some(cr);
            stats.tree_cost_left = Some(cl);
            if cl < cr {
                (Side::Left, left)
            } else {
                (Side::Right, right)
            }
        }
    };
    stats.side = Some(side);

    let costs: Vec<usize> = plans.iter().map(TraversalPlan::tree_cost).collect();
    let t = config
        .horizon
        .map_or_else(|| choose_horizon(n, &costs), |t| t.clamp(2, n));
    stats.t = t;

    let mut state = HorizonState::initial_layers(layers, side);
    while state.horizon() < t - 1 {
        let (improved, ops) = state.advance(layers, &plans)?;
        stats.horizon_steps += 1;
        stats.op_count += ops;
        if improved == 0 {
            state.fast_forward(t - 1);
        }
    }

    let sets = extract_layers(&state, layers)?;
    stats.long_paths = sets.len();
    let bridging = hitting_set(&sets, n)?;
    drop(sets);
    stats.bridging_size = bridging.len();

    let distances = combine(layers, state.distances(), &bridging);
    Ok(ApspResult {
        distances,
        bridging,
        horizon: Some(state),
        stats,
    })
}

/// `D[v,u] = min(D^{t-1}[v,u], min_b δ(v,b) + δ(b,u) - w(b))`, with the
/// Dijkstra rows used directly when `b` is an endpoint.
fn combine(layers: Layers<'_>, bounded: &ScalarMatrix, bridging: &BridgingSet) -> ScalarMatrix {
    let n = layers.n();
    let w = layers.weights;
    let bs = bridging.vertices();
    if bs.is_empty() {
        return bounded.clone();
    }
    let fwd_csr = Csr::build(layers, Direction::Forward);
    let rev_csr = Csr::build(layers, Direction::Reverse);
    let from_b: Vec<Vec<f64>> = par::map_indices(bs.len(), |i| labels(&fwd_csr, w, bs[i]));
    let to_b: Vec<Vec<f64>> = par::map_indices(bs.len(), |i| labels(&rev_csr, w, bs[i]));

    let mut out = bounded.clone();
    par::for_each_chunk_mut(out.as_mut_slice(), n, |v, row| {
        for (u, cell) in row.iter_mut().enumerate() {
            if u == v {
                *cell = 0.0;
                continue;
            }
            let mut best = *cell;
            for (i, &b) in bs.iter().enumerate() {
                let cand = if b == v {
                    from_b[i][u]
                } else if b == u {
                    to_b[i][v]
                } else {
                    to_b[i][v] + from_b[i][u] - w[b]
                };
                if cand < best {
                    best = cand;
                }
            }
            *cell = best;
        }
    });
    out
}

/// All-pairs vertex-weighted distances (`δ(v,v) = 0`, endpoints included
/// otherwise, `+inf` when unreachable).
pub fn apsp(graph: &VertexWeightedDigraph, config: &ApspConfig) -> Result<ApspResult> {
    run_pipeline(graph.layers(), config)
}

/// All-pairs distances when every edge carries one of `q` class costs in
/// addition to the vertex weights. One mixed product per class per step.
pub fn apsp_bounded_edge_classes(graph: &EdgeClassDigraph, config: &ApspConfig) -> Result<ApspResult> {
    if matches!(config.mst, MstMode::Fixed(_)) && graph.classes().len() > 1 {
        return Err(Error::InvalidParams(
            "a fixed spanning tree applies to single-class graphs only".into(),
        ));
    }
    run_pipeline(graph.layers(), config)
}

/// Reflexive-transitive closure of a square Boolean matrix, via `apsp`
/// with all vertex weights zero.
pub fn transitive_closure(b: &BitMatrix, config: &ApspConfig) -> Result<BitMatrix> {
    if !b.is_square() {
        return Err(Error::dims(
            "closure input must be square",
            format!("{0}x{0}", b.rows()),
            format!("{}x{}", b.rows(), b.cols()),
        ));
    }
    let g = VertexWeightedDigraph::new(b.clone(), vec![0.0; b.rows()])?;
    let d = apsp(&g, config)?.distances;
    Ok(BitMatrix::from_fn(b.rows(), b.cols(), |v, u| d.get(v, u).is_finite()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{floyd_warshall_edge_classes, floyd_warshall_vertex_weighted};

    #[test]
    fn horizon_choice() {
        assert_eq!(choose_horizon(2, &[0]), 2);
        // n = 64, cost 0: sqrt(64^3 / (64 * 65)) = 7.94
        assert_eq!(choose_horizon(64, &[0]), 8);
        // dense random: tree cost ~ n^2 / 2 drives t to the floor
        assert_eq!(choose_horizon(64, &[2000]), 2);
        assert_eq!(choose_horizon(1, &[0]), 1);
    }

    #[test]
    fn edgeless_graph() {
        let g = VertexWeightedDigraph::new(BitMatrix::zeros(4, 4), vec![1.0; 4]).unwrap();
        let r = apsp(&g, &ApspConfig::default()).unwrap();
        for v in 0..4 {
            for u in 0..4 {
                assert_eq!(r.distances.get(v, u), if u == v { 0.0 } else { f64::INFINITY });
            }
        }
    }

    #[test]
    fn complete_zero_weight_graph() {
        let n = 6;
        let g = VertexWeightedDigraph::new(BitMatrix::ones(n, n), vec![0.0; n]).unwrap();
        let r = apsp(&g, &ApspConfig::default()).unwrap();
        assert!(r.distances.bit_eq(&ScalarMatrix::filled(n, n, 0.0)));
    }

    #[test]
    fn single_vertex_and_empty() {
        let g = VertexWeightedDigraph::new(BitMatrix::ones(1, 1), vec![3.0]).unwrap();
        assert_eq!(apsp(&g, &ApspConfig::default()).unwrap().distances.get(0, 0), 0.0);
        let g = VertexWeightedDigraph::new(BitMatrix::zeros(0, 0), vec![]).unwrap();
        assert_eq!(apsp(&g, &ApspConfig::default()).unwrap().distances.rows(), 0);
    }

    #[test]
    fn long_line_with_forced_horizon() {
        let n = 12;
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let w: Vec<f64> = (0..n).map(|i| (i % 4) as f64 + 0.5).collect();
        let g = VertexWeightedDigraph::from_edges(n, w, &edges).unwrap();
        let oracle = floyd_warshall_vertex_weighted(&g);
        for t in [2, 3, 5, 12] {
            for side in [SidePolicy::Right, SidePolicy::Left, SidePolicy::Auto] {
                let cfg = ApspConfig {
                    horizon: Some(t),
                    side,
                    mst: MstMode::Exact,
                    ..ApspConfig::default()
                };
                let r = apsp(&g, &cfg).unwrap();
                assert_eq!(r.stats.t, t);
                assert!(r.distances.first_mismatch(&oracle, 1e-9).is_none(), "t={t} {side:?}");
            }
        }
    }

    #[test]
    fn closure_examples() {
        let id = BitMatrix::identity(3);
        assert_eq!(transitive_closure(&id, &ApspConfig::default()).unwrap(), id);
        let e = BitMatrix::from_strs(&["01", "00"]);
        assert_eq!(
            transitive_closure(&e, &ApspConfig::default()).unwrap(),
            BitMatrix::from_strs(&["11", "01"])
        );
        assert!(transitive_closure(&BitMatrix::zeros(2, 3), &ApspConfig::default()).is_err());
    }

    #[test]
    fn edge_class_two_vertices() {
        let g = EdgeClassDigraph::new(vec![1.0, 2.0], vec![5.0], &[(0, 1, 0)]).unwrap();
        let r = apsp_bounded_edge_classes(&g, &ApspConfig::default()).unwrap();
        assert_eq!(r.distances.get(0, 1), 8.0);
        assert_eq!(r.distances.get(1, 0), f64::INFINITY);
    }

    #[test]
    fn single_zero_class_matches_plain_apsp() {
        let edges = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (0, 4)];
        let w = vec![1.0, 0.5, 2.0, 0.25, 4.0];
        let g = VertexWeightedDigraph::from_edges(5, w.clone(), &edges).unwrap();
        let labelled: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 0)).collect();
        let gc = EdgeClassDigraph::new(w, vec![0.0], &labelled).unwrap();
        let cfg = ApspConfig {
            horizon: Some(3),
            ..ApspConfig::default()
        };
        let a = apsp(&g, &cfg).unwrap().distances;
        let b = apsp_bounded_edge_classes(&gc, &cfg).unwrap().distances;
        assert!(a.bit_eq(&b));
        assert!(b.first_mismatch(&floyd_warshall_edge_classes(&gc), 1e-12).is_none());
    }
}
