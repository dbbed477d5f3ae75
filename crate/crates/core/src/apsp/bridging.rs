use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Vertices hitting every registered long path.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BridgingSet {
    vertices: Vec<usize>,
}

impl BridgingSet {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn hits_all(&self, sets: &[Vec<usize>]) -> bool {
        sets.iter().all(|s| s.iter().any(|&v| self.contains(v)))
    }
}

/// Greedy hitting set over subsets of `[0, n)` that all have the same size:
/// repeatedly take the element contained in the most not-yet-hit sets,
/// smaller index on ties.
pub fn hitting_set(sets: &[Vec<usize>], n: usize) -> Result<BridgingSet> {
    let Some(first) = sets.first() else {
        return Ok(BridgingSet::default());
    };
    let l = first.len();
    if l == 0 {
        return Err(Error::InvalidParams("hitting set input contains an empty set".into()));
    }
    let mut occurs: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, s) in sets.iter().enumerate() {
        if s.len() != l {
            return Err(Error::InvalidParams(format!(
                "set {i} has size {}, expected {l}",
                s.len()
            )));
        }
        for &e in s {
            if e >= n {
                return Err(Error::InvalidParams(format!("element {e} outside [0, {n})")));
            }
            if occurs[e].last() != Some(&(i as u32)) {
                occurs[e].push(i as u32);
            }
        }
    }

    let mut count: Vec<usize> = occurs.iter().map(Vec::len).collect();
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = count
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(e, &c)| (c, Reverse(e)))
        .collect();
    let mut hit = vec![false; sets.len()];
    let mut remaining = sets.len();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let Some((c, Reverse(e))) = heap.pop() else {
            break;
        };
        if c != count[e] {
            if count[e] > 0 {
                heap.push((count[e], Reverse(e)));
            }
            continue;
        }
        chosen.push(e);
        for &si in &occurs[e] {
            let si = si as usize;
            if hit[si] {
                continue;
            }
            hit[si] = true;
            remaining -= 1;
            for &f in &sets[si] {
                count[f] -= 1;
            }
        }
    }
    chosen.sort_unstable();
    chosen.dedup();
    let result = BridgingSet { vertices: chosen };
    if !result.hits_all(sets) {
        return Err(Error::Invariant("greedy hitting set missed a set".into()));
    }
    Ok(result)
}
