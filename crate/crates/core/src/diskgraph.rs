//! Uniform disk graphs over bounded-density point sets in the unit square.

use rand::Rng;

use crate::apsp::VertexWeightedDigraph;
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::mst::{euclidean_mst, SpanningTree};
use crate::par;
use crate::rng::SeedSplitter;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dist2(&self, other: &Point) -> f64 {
        let (dx, dy) = (self.x - other.x, self.y - other.y);
        dx * dx + dy * dy
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        self.dist2(other).sqrt()
    }
}

/// Weighted points in `[0,1]²` with a common disk radius `r ∈ (0,1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    weights: Vec<f64>,
    radius: f64,
}

impl PointSet {
    pub fn new(points: Vec<Point>, weights: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(Error::InvalidParams(format!("radius {radius} outside (0, 1]")));
        }
        if points.len() != weights.len() {
            return Err(Error::dims("weights per point", points.len(), weights.len()));
        }
        if let Some(p) = points
            .iter()
            .find(|p| !(0.0..=1.0).contains(&p.x) || !(0.0..=1.0).contains(&p.y))
        {
            return Err(Error::InvalidParams(format!(
                "point ({}, {}) outside the unit square",
                p.x, p.y
            )));
        }
        if let Some((i, &w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::InvalidWeight { vertex: i, value: w });
        }
        Ok(PointSet {
            points,
            weights,
            radius,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Side length of the density grid for `n` points.
pub fn grid_side(n: usize) -> usize {
    let mut g = (n as f64).sqrt().ceil() as usize;
    while g * g < n {
        g += 1;
    }
    while g > 1 && (g - 1) * (g - 1) >= n {
        g -= 1;
    }
    g.max(1)
}

/// Cell index along one axis; a coordinate on a cell boundary belongs to
/// the lower cell.
#[inline]
fn cell_coord(v: f64, side: usize) -> usize {
    let c = (v * side as f64).ceil() as isize - 1;
    c.clamp(0, side as isize - 1) as usize
}

fn cell_of(p: &Point, side: usize) -> usize {
    cell_coord(p.y, side) * side + cell_coord(p.x, side)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityProfile {
    pub grid_side: usize,
    pub max_per_cell: usize,
    /// `histogram[c]` = number of cells holding exactly `c` points.
    pub histogram: Vec<usize>,
}

/// Exact occupancy of the `⌈√n⌉ × ⌈√n⌉` grid.
pub fn density_check(points: &PointSet) -> DensityProfile {
    let side = grid_side(points.len());
    let mut counts = vec![0usize; side * side];
    for p in points.points() {
        counts[cell_of(p, side)] += 1;
    }
    let max_per_cell = counts.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0usize; max_per_cell + 1];
    for &c in &counts {
        histogram[c] += 1;
    }
    DensityProfile {
        grid_side: side,
        max_per_cell,
        histogram,
    }
}

/// Uniform points with at most `b` per grid cell (rejection sampling) and
/// weights uniform in `[0,1)`.
pub fn generate_dense_points(n: usize, b: usize, r: f64, seed: u64) -> Result<PointSet> {
    if n == 0 || b == 0 {
        return Err(Error::InvalidParams("need n >= 1 and b >= 1".into()));
    }
    let side = grid_side(n);
    if b.saturating_mul(side * side) < n {
        return Err(Error::Infeasible(format!(
            "{n} points cannot fit {b} per cell in a {side}x{side} grid"
        )));
    }
    let streams = SeedSplitter::new(seed);
    let mut prng = streams.stream("disk-points");
    let mut wrng = streams.stream("disk-weights");
    let mut counts = vec![0usize; side * side];
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let p = Point::new(prng.gen::<f64>(), prng.gen::<f64>());
        let cell = cell_of(&p, side);
        if counts[cell] < b {
            counts[cell] += 1;
            points.push(p);
        }
    }
    let weights = (0..n).map(|_| wrng.gen::<f64>()).collect();
    PointSet::new(points, weights, r)
}

/// Adjacency in both directions iff `dist <= r`; no self-loops.
pub fn disk_adjacency(points: &PointSet) -> BitMatrix {
    let n = points.len();
    let r2 = points.radius() * points.radius();
    let pts = points.points();
    let rows: Vec<Vec<usize>> = par::map_indices(n, |i| {
        (0..n)
            .filter(|&j| j != i && pts[i].dist2(&pts[j]) <= r2)
            .collect()
    });
    let mut a = BitMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for &j in row {
            a.set(i, j, true);
        }
    }
    a
}

pub fn build_disk_graph(points: &PointSet) -> VertexWeightedDigraph {
    VertexWeightedDigraph::new(disk_adjacency(points), points.weights().to_vec())
        .expect("point set weights are validated on construction")
}

/// Spanning tree over the adjacency rows whose topology is the Euclidean MST
/// of the points and whose costs are Hamming distances of adjacency rows.
pub fn row_tree_from_euclidean_mst(graph: &VertexWeightedDigraph, points: &PointSet) -> Result<SpanningTree> {
    if graph.n() != points.len() {
        return Err(Error::dims("graph vertices vs points", points.len(), graph.n()));
    }
    let emst = euclidean_mst(points.points())?;
    SpanningTree::with_hamming_costs(&emst, graph.adjacency())
}

/// Area of the symmetric difference of two radius-`r` disks whose centres
/// are `d` apart, for `0 <= d <= 2r`.
pub fn symmetric_difference_area(r: f64, d: f64) -> Result<f64> {
    if r.is_nan() || r <= 0.0 || !(0.0..=2.0 * r).contains(&d) {
        return Err(Error::InvalidParams(format!("need 0 <= d <= 2r, got r={r}, d={d}")));
    }
    if d == 0.0 {
        return Ok(0.0);
    }
    let ratio = (d / (2.0 * r)).min(1.0);
    let area = 2.0 * std::f64::consts::PI * r * r - 4.0 * r * r * ratio.acos()
        + d * (4.0 * r * r - d * d).max(0.0).sqrt();
    Ok(area)
}
