use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

fn check_weights(weights: &[f64]) -> Result<()> {
    match weights
        .iter()
        .enumerate()
        .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
    {
        Some((vertex, &value)) => Err(Error::InvalidWeight { vertex, value }),
        None => Ok(()),
    }
}

/// Directed graph with nonnegative vertex weights. Self-loops may appear in
/// the adjacency matrix; they never affect distances.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexWeightedDigraph {
    adjacency: BitMatrix,
    weights: Vec<f64>,
}

impl VertexWeightedDigraph {
    pub fn new(adjacency: BitMatrix, weights: Vec<f64>) -> Result<Self> {
        if !adjacency.is_square() {
            return Err(Error::dims(
                "adjacency must be square",
                format!("{0}x{0}", adjacency.rows()),
                format!("{}x{}", adjacency.rows(), adjacency.cols()),
            ));
        }
        if weights.len() != adjacency.rows() {
            return Err(Error::dims("one weight per vertex", adjacency.rows(), weights.len()));
        }
        check_weights(&weights)?;
        Ok(VertexWeightedDigraph { adjacency, weights })
    }

    pub fn from_edges(n: usize, weights: Vec<f64>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut a = BitMatrix::zeros(n, n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParams(format!("edge ({u}, {v}) out of range for n={n}")));
            }
            a.set(u, v, true);
        }
        Self::new(a, weights)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adjacency
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.count_ones()
    }
}

/// Directed graph with vertex weights and edges drawn from `q` weight
/// classes. Class `i` has cost `class_costs[i]` and adjacency `classes[i]`;
/// an edge belongs to exactly one class.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeClassDigraph {
    weights: Vec<f64>,
    class_costs: Vec<f64>,
    classes: Vec<BitMatrix>,
}

impl EdgeClassDigraph {
    pub fn new(weights: Vec<f64>, class_costs: Vec<f64>, edges: &[(usize, usize, usize)]) -> Result<Self> {
        let n = weights.len();
        check_weights(&weights)?;
        if class_costs.is_empty() {
            return Err(Error::InconsistentLabel("at least one weight class is required".into()));
        }
        if let Some((i, &c)) = class_costs
            .iter()
            .enumerate()
            .find(|(_, c)| !(c.is_finite() && **c >= 0.0))
        {
            return Err(Error::InconsistentLabel(format!("class {i} has invalid cost {c}")));
        }
        let mut classes = vec![BitMatrix::zeros(n, n); class_costs.len()];
        for &(u, v, c) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParams(format!("edge ({u}, {v}) out of range for n={n}")));
            }
            if c >= class_costs.len() {
                return Err(Error::InconsistentLabel(format!(
                    "edge ({u}, {v}) has class {c} but only {} classes exist",
                    class_costs.len()
                )));
            }
            if let Some(other) = (0..classes.len()).find(|&k| k != c && classes[k].get(u, v)) {
                return Err(Error::InconsistentLabel(format!(
                    "edge ({u}, {v}) labelled with classes {other} and {c}"
                )));
            }
            classes[c].set(u, v, true);
        }
        Ok(EdgeClassDigraph {
            weights,
            class_costs,
            classes,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn class_costs(&self) -> &[f64] {
        &self.class_costs
    }

    pub fn classes(&self) -> &[BitMatrix] {
        &self.classes
    }

    /// Union of all class matrices.
    pub fn adjacency(&self) -> BitMatrix {
        self.classes
            .iter()
            .skip(1)
            .fold(self.classes[0].clone(), |acc, m| acc.union(m).expect("same shape"))
    }

    /// All edges as `(u, v, class)`, row-major.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for (c, m) in self.classes.iter().enumerate() {
                out.extend(m.row(u).ones().map(|v| (u, v, c)));
            }
        }
        out.sort_unstable();
        out
    }
}

/// Borrowed view used by the pipeline: vertex weights plus one or more
/// adjacency layers, each with a constant edge cost.
#[derive(Clone, Copy)]
pub(crate) struct Layers<'a> {
    pub weights: &'a [f64],
    pub matrices: &'a [BitMatrix],
    pub costs: &'a [f64],
}

impl<'a> Layers<'a> {
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Cost of edge `(u, v)` if it exists (cheapest layer holding it).
    pub fn edge_cost(&self, u: usize, v: usize) -> Option<f64> {
        self.matrices
            .iter()
            .zip(self.costs)
            .filter(|(m, _)| m.get(u, v))
            .map(|(_, &c)| c)
            .min_by(f64::total_cmp)
    }
}

pub(crate) const ZERO_COST: [f64; 1] = [0.0];

impl VertexWeightedDigraph {
    pub(crate) fn layers(&self) -> Layers<'_> {
        Layers {
            weights: &self.weights,
            matrices: std::slice::from_ref(&self.adjacency),
            costs: &ZERO_COST,
        }
    }
}

impl EdgeClassDigraph {
    pub(crate) fn layers(&self) -> Layers<'_> {
        Layers {
            weights: &self.weights,
            matrices: &self.classes,
            costs: &self.class_costs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_weights_and_shapes() {
        assert!(VertexWeightedDigraph::new(BitMatrix::zeros(2, 3), vec![0.0; 2]).is_err());
        assert!(VertexWeightedDigraph::new(BitMatrix::zeros(2, 2), vec![0.0; 3]).is_err());
        assert!(matches!(
            VertexWeightedDigraph::new(BitMatrix::zeros(2, 2), vec![0.0, -1.0]),
            Err(Error::InvalidWeight { vertex: 1, .. })
        ));
        assert!(VertexWeightedDigraph::new(BitMatrix::zeros(1, 1), vec![f64::INFINITY]).is_err());
        assert!(VertexWeightedDigraph::from_edges(2, vec![0.0; 2], &[(0, 2)]).is_err());
    }

    #[test]
    fn edge_class_labeling() {
        let g = EdgeClassDigraph::new(vec![1.0, 2.0], vec![5.0, 1.0], &[(0, 1, 0), (1, 0, 1)]).unwrap();
        assert_eq!(g.edges(), vec![(0, 1, 0), (1, 0, 1)]);
        assert_eq!(g.adjacency(), BitMatrix::from_strs(&["01", "10"]));
        assert!(matches!(
            EdgeClassDigraph::new(vec![1.0, 2.0], vec![5.0], &[(0, 1, 1)]),
            Err(Error::InconsistentLabel(_))
        ));
        assert!(matches!(
            EdgeClassDigraph::new(vec![1.0, 2.0], vec![5.0, 1.0], &[(0, 1, 0), (0, 1, 1)]),
            Err(Error::InconsistentLabel(_))
        ));
        assert!(EdgeClassDigraph::new(vec![1.0], vec![], &[]).is_err());
        assert!(EdgeClassDigraph::new(vec![1.0], vec![-2.0], &[]).is_err());
    }
}
