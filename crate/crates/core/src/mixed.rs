//! Mixed (min-selection) products of a real matrix with a Boolean matrix,
//! with witnesses.
//!
//! The right product is `C[i,j] = min{A[i,k] : B[k,j] = 1}` and the left
//! product is `C'[i,j] = min{A[k,j] : B[i,k] = 1}`; an empty selection
//! yields `+inf`. The fast path sweeps a pool of candidate entries along an
//! Euler walk of a Hamming spanning tree over the columns (right) or rows
//! (left) of `B`, so each line of `A` costs `n + Σ|diff|` pool operations
//! instead of `n · m`.
//!
//! Pools are ordered by `(value, index)`, so the witness of every entry is
//! the smallest index attaining the minimum. The naive oracles use the same
//! rule, making the two paths comparable bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{BitMatrix, ScalarMatrix, WitnessMatrix};
use crate::mst::TraversalPlan;
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

#[derive(Clone, Debug)]
pub struct MixedProductResult {
    pub c: ScalarMatrix,
    pub w: WitnessMatrix,
    /// Total pool inserts plus deletes.
    pub op_count: u64,
    /// Pool operations per swept line: rows of `A` for the right product,
    /// columns of `A` for the left one.
    pub line_ops: Vec<u64>,
}

/// Priority pool over the entries of one fixed line of values, keyed by
/// `(value, index)`.
///
/// Entries are ranked once when the line is loaded; membership is then a
/// bit per rank in a 64-ary summary tree, so `insert`, `remove` and `min`
/// each touch one word per level (`O(log_64 n)`). Infinite values are never
/// stored: inserting one is a no-op.
#[derive(Debug, Default)]
pub struct OrderedPool {
    rank_of: Vec<u32>,
    by_rank: Vec<u32>,
    levels: Vec<Vec<u64>>,
    len: usize,
}

const NO_RANK: u32 = u32::MAX;

impl OrderedPool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Empties the pool and ranks `values` for subsequent operations.
    pub fn load(&mut self, values: &[f64]) {
        let n = values.len();
        self.by_rank.clear();
        self.by_rank
            .extend((0..n as u32).filter(|&k| values[k as usize].is_finite()));
        self.by_rank.sort_unstable_by(|&a, &b| {
            values[a as usize]
                .total_cmp(&values[b as usize])
                .then(a.cmp(&b))
        });
        self.rank_of.clear();
        self.rank_of.resize(n, NO_RANK);
        for (r, &k) in self.by_rank.iter().enumerate() {
            self.rank_of[k as usize] = r as u32;
        }

        let mut width = self.by_rank.len();
        let mut depth = 0;
        loop {
            let words = width.div_ceil(64).max(1);
            if self.levels.len() <= depth {
                self.levels.push(Vec::new());
            }
            let level = &mut self.levels[depth];
            level.clear();
            level.resize(words, 0);
            depth += 1;
            if words == 1 {
                break;
            }
            width = words;
        }
        self.levels.truncate(depth);
        self.len = 0;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Adds index `k`; returns whether the pool changed.
    #[inline]
    pub fn insert(&mut self, k: usize) -> bool {
        let r = self.rank_of[k];
        if r == NO_RANK {
            return false;
        }
        let mut pos = r as usize;
        let word = &mut self.levels[0][pos / 64];
        let mask = 1u64 << (pos % 64);
        if *word & mask != 0 {
            return false;
        }
        let mut was_empty = *word == 0;
        *word |= mask;
        self.len += 1;
        for level in &mut self.levels[1..] {
            if !was_empty {
                break;
            }
            pos /= 64;
            let word = &mut level[pos / 64];
            was_empty = *word == 0;
            *word |= 1u64 << (pos % 64);
        }
        true
    }

    /// Removes index `k`; returns whether the pool changed.
    #[inline]
    pub fn remove(&mut self, k: usize) -> bool {
        let r = self.rank_of[k];
        if r == NO_RANK {
            return false;
        }
        let mut pos = r as usize;
        let word = &mut self.levels[0][pos / 64];
        let mask = 1u64 << (pos % 64);
        if *word & mask == 0 {
            return false;
        }
        *word &= !mask;
        let mut now_empty = *word == 0;
        self.len -= 1;
        for level in &mut self.levels[1..] {
            if !now_empty {
                break;
            }
            pos /= 64;
            let word = &mut level[pos / 64];
            *word &= !(1u64 << (pos % 64));
            now_empty = *word == 0;
        }
        true
    }

    /// Index of the smallest `(value, index)` pair present.
    #[inline]
    pub fn min_index(&self) -> Option<usize> {
        let top = self.levels.last()?;
        if top[0] == 0 {
            return None;
        }
        let mut pos = 0usize;
        for level in self.levels.iter().rev() {
            let word = level[pos];
            pos = pos * 64 + word.trailing_zeros() as usize;
        }
        Some(self.by_rank[pos] as usize)
    }
}

/// Sweeps one line of values along the plan. Writes the selected minimum and
/// its witness for every plan node and returns the pool operation count.
fn sweep_line(
    values: &[f64],
    plan: &TraversalPlan,
    pool: &mut OrderedPool,
    out_c: &mut [f64],
    out_w: &mut [u32],
) -> u64 {
    pool.load(values);
    let mut ops = 0u64;
    for &p in plan.start_ones() {
        ops += pool.insert(p as usize) as u64;
    }
    let mut record = |node: usize, pool: &OrderedPool| match pool.min_index() {
        Some(k) => {
            out_c[node] = values[k];
            out_w[node] = k as u32;
        }
        None => {
            out_c[node] = f64::INFINITY;
            out_w[node] = u32::MAX;
        }
    };
    record(plan.start(), pool);
    for step in plan.discovery_steps() {
        let (added, removed) = plan.step_sets(step);
        for &p in removed {
            ops += pool.remove(p as usize) as u64;
        }
        for &p in added {
            ops += pool.insert(p as usize) as u64;
        }
        record(step.to, pool);
    }
    ops
}

struct LineSweep {
    c: Vec<f64>,
    w: Vec<u32>,
    ops: u64,
}

/// Runs `sweep_line` over every line, in parallel when enabled.
fn sweep_all<'a, F>(lines: usize, plan: &TraversalPlan, line_values: F) -> Vec<LineSweep>
where
    F: Fn(usize) -> &'a [f64] + Sync + Send,
{
    let m = plan.node_count();
    par::map_indices(lines, |i| {
        thread_local! {
            static POOL: std::cell::RefCell<OrderedPool> = std::cell::RefCell::new(OrderedPool::new());
        }
        let mut c = vec![f64::INFINITY; m];
        let mut w = vec![u32::MAX; m];
        let ops = POOL.with(|pool| sweep_line(line_values(i), plan, &mut pool.borrow_mut(), &mut c, &mut w));
        LineSweep { c, w, ops }
    })
}

/// Right product from a plan over the columns of `B`; `B` itself is not
/// needed beyond what the plan recorded. `a.cols()` must equal `plan.width()`.
pub(crate) fn sweep_right(a: &ScalarMatrix, plan: &TraversalPlan) -> MixedProductResult {
    debug_assert_eq!(a.cols(), plan.width());
    let m = plan.node_count();
    let lines = sweep_all(a.rows(), plan, |r| a.row(r));
    let mut c = ScalarMatrix::infinite(a.rows(), m);
    let mut w = WitnessMatrix::empty(a.rows(), m);
    let mut line_ops = Vec::with_capacity(lines.len());
    for (r, line) in lines.into_iter().enumerate() {
        c.row_mut(r).copy_from_slice(&line.c);
        w.raw_row_mut(r).copy_from_slice(&line.w);
        line_ops.push(line.ops);
    }
    MixedProductResult {
        c,
        w,
        op_count: line_ops.iter().sum(),
        line_ops,
    }
}

/// Left product from a plan over the rows of `B`. `a.rows()` must equal
/// `plan.width()`.
pub(crate) fn sweep_left(a: &ScalarMatrix, plan: &TraversalPlan) -> MixedProductResult {
    debug_assert_eq!(a.rows(), plan.width());
    let m = plan.node_count();
    let at = a.transpose();
    let lines = sweep_all(at.rows(), plan, |j| at.row(j));
    let mut c = ScalarMatrix::infinite(m, a.cols());
    let mut w = WitnessMatrix::empty(m, a.cols());
    let mut line_ops = Vec::with_capacity(lines.len());
    for (j, line) in lines.into_iter().enumerate() {
        for i in 0..m {
            c.set(i, j, line.c[i]);
            w.set(i, j, (line.w[i] != u32::MAX).then_some(line.w[i] as usize));
        }
        line_ops.push(line.ops);
    }
    MixedProductResult {
        c,
        w,
        op_count: line_ops.iter().sum(),
        line_ops,
    }
}

fn check_plan(plan: &TraversalPlan, lines_of_b: &BitMatrix, what: &str) -> Result<()> {
    if !plan.matches(lines_of_b) {
        return Err(Error::PlanMismatch(format!(
            "plan covers {} nodes of width {}, {what} is {}x{}",
            plan.node_count(),
            plan.width(),
            lines_of_b.rows(),
            lines_of_b.cols()
        )));
    }
    Ok(())
}

/// `C[i,j] = min{A[i,k] : B[k,j] = 1}` with witnesses, sweeping `plan`,
/// which must be compiled over the columns of `B` (the rows of `Bᵗ`).
pub fn mixed_right(a: &ScalarMatrix, b: &BitMatrix, plan: &TraversalPlan) -> Result<MixedProductResult> {
    if a.cols() != b.rows() {
        return Err(Error::dims("A.cols vs B.rows", b.rows(), a.cols()));
    }
    check_plan(plan, &b.transpose(), "B transposed")?;
    Ok(sweep_right(a, plan))
}

/// `C'[i,j] = min{A[k,j] : B[i,k] = 1}` with witnesses, sweeping `plan`,
/// which must be compiled over the rows of `B`.
pub fn mixed_left(b: &BitMatrix, a: &ScalarMatrix, plan: &TraversalPlan) -> Result<MixedProductResult> {
    if b.cols() != a.rows() {
        return Err(Error::dims("B.cols vs A.rows", b.cols(), a.rows()));
    }
    check_plan(plan, b, "B")?;
    Ok(sweep_left(a, plan))
}

#[inline]
fn better(candidate: (f64, usize), current: Option<(f64, usize)>) -> bool {
    match current {
        None => true,
        Some((v, k)) => candidate.0 < v || (candidate.0 == v && candidate.1 < k),
    }
}

/// Direct evaluation of the right product. Reference oracle; `op_count` is 0.
pub fn mixed_right_naive(a: &ScalarMatrix, b: &BitMatrix) -> Result<MixedProductResult> {
    if a.cols() != b.rows() {
        return Err(Error::dims("A.cols vs B.rows", b.rows(), a.cols()));
    }
    let bt = b.transpose();
    let mut c = ScalarMatrix::infinite(a.rows(), b.cols());
    let mut w = WitnessMatrix::empty(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut best = None;
            for k in bt.row(j).ones() {
                let v = a.get(i, k);
                if v.is_finite() && better((v, k), best) {
                    best = Some((v, k));
                }
            }
            if let Some((v, k)) = best {
                c.set(i, j, v);
                w.set(i, j, Some(k));
            }
        }
    }
    Ok(MixedProductResult {
        c,
        w,
        op_count: 0,
        line_ops: vec![0; a.rows()],
    })
}

/// Direct evaluation of the left product. Reference oracle; `op_count` is 0.
pub fn mixed_left_naive(b: &BitMatrix, a: &ScalarMatrix) -> Result<MixedProductResult> {
    if b.cols() != a.rows() {
        return Err(Error::dims("B.cols vs A.rows", b.cols(), a.rows()));
    }
    let mut c = ScalarMatrix::infinite(b.rows(), a.cols());
    let mut w = WitnessMatrix::empty(b.rows(), a.cols());
    for i in 0..b.rows() {
        for j in 0..a.cols() {
            let mut best = None;
            for k in b.row(i).ones() {
                let v = a.get(k, j);
                if v.is_finite() && better((v, k), best) {
                    best = Some((v, k));
                }
            }
            if let Some((v, k)) = best {
                c.set(i, j, v);
                w.set(i, j, Some(k));
            }
        }
    }
    Ok(MixedProductResult {
        c,
        w,
        op_count: 0,
        line_ops: vec![0; a.cols()],
    })
}
