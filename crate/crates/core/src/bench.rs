//! Seeded instance generators and the benchmark harness behind `capsp bench`.

use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::apsp::{apsp, ApspConfig, SidePolicy, VertexWeightedDigraph};
use crate::error::{Error, Result};
use crate::matrix::{BitMatrix, ScalarMatrix};
use crate::mixed::{mixed_left, mixed_left_naive, mixed_right, mixed_right_naive, MixedProductResult, Side};
use crate::mst::{compile_traversal, MstMode, TraversalPlan};
use crate::oracle::floyd_warshall_vertex_weighted;
use crate::rng::SeedSplitter;

/// `n x n` matrix whose rows are `k` random templates, each copy with up to
/// `noise` bit flips (positions drawn with replacement). The exact row MST
/// costs at most `2·n·noise + k·n`.
pub fn make_clustered_matrix(n: usize, k: usize, noise: usize, seed: u64) -> Result<BitMatrix> {
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!("cluster count {k} must be in [1, {n}]")));
    }
    let mut rng = SeedSplitter::new(seed).stream("clustered-matrix");
    let templates = BitMatrix::from_fn(k, n, |_, _| rng.gen::<bool>());
    let mut m = BitMatrix::zeros(n, n);
    for r in 0..n {
        let t = rng.gen_range(0..k);
        for c in templates.row(t).ones() {
            m.set(r, c, true);
        }
        for _ in 0..noise {
            let c = rng.gen_range(0..n);
            m.set(r, c, !m.get(r, c));
        }
    }
    Ok(m)
}

/// i.i.d. Bernoulli(`p`) entries.
pub fn random_bit_matrix(rows: usize, cols: usize, p: f64, seed: u64) -> BitMatrix {
    let mut rng = SeedSplitter::new(seed).stream("random-bits");
    BitMatrix::from_fn(rows, cols, |_, _| rng.gen_bool(p))
}

/// Uniform `[0, 1)` entries, each replaced by `+inf` with probability `inf_frac`.
pub fn random_scalar_matrix(rows: usize, cols: usize, inf_frac: f64, seed: u64) -> ScalarMatrix {
    let mut rng = SeedSplitter::new(seed).stream("random-scalars");
    ScalarMatrix::from_fn(rows, cols, |_, _| {
        if rng.gen_bool(inf_frac) {
            f64::INFINITY
        } else {
            rng.gen::<f64>()
        }
    })
    .expect("generated values are never NaN")
}

/// Directed graph with each off-diagonal edge present with probability
/// `density` and vertex weights uniform in `[0, max_weight]`.
pub fn random_digraph(n: usize, density: f64, max_weight: f64, seed: u64) -> VertexWeightedDigraph {
    let split = SeedSplitter::new(seed);
    let mut erng = split.stream("digraph-edges");
    let adj = BitMatrix::from_fn(n, n, |u, v| u != v && erng.gen_bool(density));
    let mut wrng = split.stream("digraph-weights");
    let weights = (0..n).map(|_| wrng.gen_range(0.0..=max_weight)).collect();
    VertexWeightedDigraph::new(adj, weights).expect("generated weights are valid")
}

#[derive(Clone, Debug)]
pub struct BenchInstance {
    pub descriptor: String,
    pub matrix: BitMatrix,
}

impl BenchInstance {
    pub fn clustered(n: usize, k: usize, noise: usize, seed: u64) -> Result<Self> {
        Ok(BenchInstance {
            descriptor: format!("clustered(n={n},k={k},noise={noise},seed={seed})"),
            matrix: make_clustered_matrix(n, k, noise, seed)?,
        })
    }

    pub fn random(n: usize, p: f64, seed: u64) -> Self {
        BenchInstance {
            descriptor: format!("random(n={n},p={p},seed={seed})"),
            matrix: random_bit_matrix(n, n, p, seed),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub mst: MstMode,
    pub side: SidePolicy,
    pub seed: u64,
    /// Also run the full APSP pipeline on the instance as an adjacency matrix.
    pub run_apsp: bool,
    pub oracle: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            mst: MstMode::Lsh { epsilon: None },
            side: SidePolicy::Auto,
            seed: 0,
            run_apsp: false,
            oracle: false,
        }
    }
}

/// Wall-clock seconds per stage.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StageTimes {
    pub mst: f64,
    pub mixed: f64,
    pub apsp: Option<f64>,
    pub oracle: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub instance: String,
    pub n: usize,
    pub side: Side,
    pub tree_cost: usize,
    pub t: Option<usize>,
    pub bridging_size: Option<usize>,
    /// Pool operations of one mixed product of a random finite `A` with
    /// the instance matrix.
    pub op_count: u64,
    pub times: StageTimes,
    pub oracle_agrees: Option<bool>,
}

fn plan_for(b: &BitMatrix, side: Side, mst: &MstMode, seed: u64) -> Result<TraversalPlan> {
    let rows = match side {
        Side::Right => b.transpose(),
        Side::Left => b.clone(),
    };
    compile_traversal(&mst.build(&rows, seed)?, &rows)
}

/// Product of `a` with `b` on `side`: `A ⊙ B` (right) or `B ⊙ A` (left).
pub fn mixed_on_side(a: &ScalarMatrix, b: &BitMatrix, side: Side, plan: &TraversalPlan) -> Result<MixedProductResult> {
    match side {
        Side::Right => mixed_right(a, b, plan),
        Side::Left => mixed_left(b, a, plan),
    }
}

pub fn run_bench(instance: &BenchInstance, opts: &BenchOptions) -> Result<BenchReport> {
    let b = &instance.matrix;
    if !b.is_square() {
        return Err(Error::InvalidParams("bench instances must be square".into()));
    }
    let n = b.rows();
    let split = SeedSplitter::new(opts.seed);

    let clock = Instant::now();
    let build = |side: Side| plan_for(b, side, &opts.mst, split.stream_seed(&format!("bench-mst-{side:?}")));
    let (side, plan) = match opts.side {
        SidePolicy::Right => (Side::Right, build(Side::Right)?),
        SidePolicy::Left => (Side::Left, build(Side::Left)?),
        SidePolicy::Auto => {
            let right = build(Side::Right)?;
            let left = build(Side::Left)?;
            if left.tree_cost() < right.tree_cost() {
                (Side::Left, left)
            } else {
                (Side::Right, right)
            }
        }
    };
    let mut times = StageTimes {
        mst: clock.elapsed().as_secs_f64(),
        ..StageTimes::default()
    };

    let a = random_scalar_matrix(n, n, 0.0, split.stream_seed("bench-a"));
    let clock = Instant::now();
    let product = mixed_on_side(&a, b, side, &plan)?;
    times.mixed = clock.elapsed().as_secs_f64();

    let mut t = None;
    let mut bridging_size = None;
    let mut distances = None;
    let mut graph = None;
    if opts.run_apsp {
        let mut wrng = split.stream("bench-weights");
        let weights = (0..n).map(|_| wrng.gen_range(0.0..=10.0)).collect();
        let g = VertexWeightedDigraph::new(b.clone(), weights)?;
        let config = ApspConfig {
            mst: opts.mst.clone(),
            side: opts.side,
            horizon: None,
            seed: split.stream_seed("bench-apsp"),
        };
        let clock = Instant::now();
        let r = apsp(&g, &config)?;
        times.apsp = Some(clock.elapsed().as_secs_f64());
        t = Some(r.stats.t);
        bridging_size = Some(r.bridging.len());
        distances = Some(r.distances);
        graph = Some(g);
    }

    let mut oracle_agrees = None;
    if opts.oracle {
        let clock = Instant::now();
        let naive = match side {
            Side::Right => mixed_right_naive(&a, b)?,
            Side::Left => mixed_left_naive(b, &a)?,
        };
        let mut ok = naive.c.bit_eq(&product.c) && naive.w == product.w;
        if let (Some(g), Some(d)) = (&graph, &distances) {
            ok &= d.first_mismatch(&floyd_warshall_vertex_weighted(g), 1e-9).is_none();
        }
        times.oracle = Some(clock.elapsed().as_secs_f64());
        oracle_agrees = Some(ok);
    }

    Ok(BenchReport {
        instance: instance.descriptor.clone(),
        n,
        side,
        tree_cost: plan.tree_cost(),
        t,
        bridging_size,
        op_count: product.op_count,
        times,
        oracle_agrees,
    })
}
