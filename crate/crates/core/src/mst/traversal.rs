use super::SpanningTree;
use crate::error::{Error, Result};
use crate::matrix::{diff_positions, BitMatrix};

/// Symmetric difference of the two rows joined by a tree edge, stored once
/// and read in either direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepDiff {
    pub a: usize,
    pub b: usize,
    /// Positions set in row `a` but not in row `b`.
    pub only_a: Vec<u32>,
    /// Positions set in row `b` but not in row `a`.
    pub only_b: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub from: usize,
    pub to: usize,
    edge: usize,
}

/// Depth-first Euler walk over a spanning tree of matrix rows, with the
/// per-edge difference sets needed to update a pool incrementally.
#[derive(Clone, Debug)]
pub struct TraversalPlan {
    node_count: usize,
    width: usize,
    fingerprint: u64,
    start: usize,
    start_ones: Vec<u32>,
    diffs: Vec<StepDiff>,
    steps: Vec<Step>,
    discovery_len: usize,
    tree_cost: usize,
}

impl TraversalPlan {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Length of the rows the plan was compiled from.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Set positions of the start row.
    pub fn start_ones(&self) -> &[u32] {
        &self.start_ones
    }

    /// The full closed walk, returning to `start`.
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Prefix of [`steps`](Self::steps) that reaches every node for the first
    /// time; the remainder only walks back to the start.
    pub fn discovery_steps(&self) -> &[Step] {
        &self.steps[..self.discovery_len]
    }

    pub fn tree_cost(&self) -> usize {
        self.tree_cost
    }

    /// `(added, removed)` for a step from `u` to `v`: positions set in `v`
    /// but not `u`, and positions set in `u` but not `v`.
    #[inline]
    pub fn step_sets(&self, step: &Step) -> (&[u32], &[u32]) {
        let d = &self.diffs[step.edge];
        if step.from == d.a {
            (&d.only_b, &d.only_a)
        } else {
            (&d.only_a, &d.only_b)
        }
    }

    /// Σ over the whole walk of |added| + |removed|.
    pub fn walk_diff_total(&self) -> usize {
        self.steps.iter().map(|s| self.step_len(s)).sum()
    }

    /// Σ over the discovery prefix of |added| + |removed|.
    pub fn discovery_diff_total(&self) -> usize {
        self.discovery_steps().iter().map(|s| self.step_len(s)).sum()
    }

    fn step_len(&self, s: &Step) -> usize {
        let (a, r) = self.step_sets(s);
        a.len() + r.len()
    }

    /// Does `rows` look like the matrix this plan was compiled from?
    pub fn matches(&self, rows: &BitMatrix) -> bool {
        rows.rows() == self.node_count
            && rows.cols() == self.width
            && rows.fingerprint() == self.fingerprint
    }

    /// Rebuilds each visited row's set positions by replaying the walk from
    /// the start row. Index `i` holds row `i`.
    pub fn replay(&self) -> Vec<Vec<u32>> {
        let mut current = vec![false; self.width];
        for &p in &self.start_ones {
            current[p as usize] = true;
        }
        let snapshot = |cur: &[bool]| -> Vec<u32> {
            cur.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i as u32)
                .collect()
        };
        let mut out = vec![Vec::new(); self.node_count];
        out[self.start] = snapshot(&current);
        for s in &self.steps {
            let (added, removed) = self.step_sets(s);
            for &p in removed {
                current[p as usize] = false;
            }
            for &p in added {
                current[p as usize] = true;
            }
            out[s.to] = snapshot(&current);
        }
        out
    }
}

/// Compiles a spanning tree over the rows of `rows` into a depth-first
/// Euler walk from node 0. Children are visited in ascending index order.
pub fn compile_traversal(tree: &SpanningTree, rows: &BitMatrix) -> Result<TraversalPlan> {
    if tree.node_count() != rows.rows() {
        return Err(Error::dims("tree nodes vs matrix rows", rows.rows(), tree.node_count()));
    }
    tree.validate()?;

    let diffs = tree
        .edges()
        .iter()
        .map(|e| {
            let (only_a, only_b) = diff_positions(rows.row(e.u), rows.row(e.v))?;
            Ok(StepDiff {
                a: e.u,
                b: e.v,
                only_a: only_a.into_iter().map(|p| p as u32).collect(),
                only_b: only_b.into_iter().map(|p| p as u32).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n = tree.node_count();
    let adj = tree.adjacency();
    let start = 0;
    let mut steps = Vec::with_capacity(2 * n.saturating_sub(1));
    let mut discovery_len = 0;
    // (node, parent edge, next child cursor)
    let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(start, None, 0)];
    while let Some(top) = stack.last_mut() {
        let (node, parent_edge, cursor) = *top;
        let next = adj[node][cursor..]
            .iter()
            .position(|&(_, e)| Some(e) != parent_edge)
            .map(|off| cursor + off);
        match next {
            Some(i) => {
                top.2 = i + 1;
                let (child, e) = adj[node][i];
                steps.push(Step {
                    from: node,
                    to: child,
                    edge: e,
                });
                discovery_len = steps.len();
                stack.push((child, Some(e), 0));
            }
            None => {
                stack.pop();
                if let (Some(e), Some(&(parent, _, _))) = (parent_edge, stack.last()) {
                    steps.push(Step {
                        from: node,
                        to: parent,
                        edge: e,
                    });
                }
            }
        }
    }

    Ok(TraversalPlan {
        node_count: n,
        width: rows.cols(),
        fingerprint: rows.fingerprint(),
        start,
        start_ones: rows.row(start).ones().map(|p| p as u32).collect(),
        diffs,
        steps,
        discovery_len,
        tree_cost: SpanningTree::with_hamming_costs(tree, rows)?.cost(),
    })
}
