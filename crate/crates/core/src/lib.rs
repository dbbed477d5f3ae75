//! All-pairs shortest paths in vertex-weighted digraphs whose adjacency
//! matrices have cheap Hamming spanning trees.
//!
//! The core primitive is the mixed (min-selection) product of a real matrix
//! with a Boolean one, evaluated by sweeping a priority pool along an Euler
//! walk of a minimum spanning tree over the Boolean lines. Its cost scales
//! with the tree weight, so clustered inputs are cheap. On top of it sit a
//! bounded-horizon distance iteration, a bridging-set Dijkstra completion,
//! transitive closure, a multi-class edge-cost extension and generators for
//! uniform disk graphs.
//!
//! ```
//! use clustered_apsp::{apsp, ApspConfig, VertexWeightedDigraph};
//!
//! let g = VertexWeightedDigraph::from_edges(3, vec![1.0, 2.0, 3.0], &[(0, 1), (1, 2)]).unwrap();
//! let d = apsp(&g, &ApspConfig::default()).unwrap().distances;
//! assert_eq!(d.get(0, 2), 6.0);
//! ```

pub mod apsp;
pub mod bench;
pub mod diskgraph;
pub mod error;
pub mod io;
pub mod matrix;
pub mod mixed;
pub mod mst;
pub mod oracle;
pub mod par;
pub mod rng;

pub use apsp::{
    apsp, apsp_bounded_edge_classes, transitive_closure, ApspConfig, ApspResult, ApspStats, BridgingSet,
    EdgeClassDigraph, SidePolicy, VertexWeightedDigraph,
};
pub use error::{Error, Result};
pub use matrix::{BitMatrix, ScalarMatrix, WitnessMatrix};
pub use mixed::{mixed_left, mixed_right, MixedProductResult, Side};
pub use mst::{approx_mst_lsh, compile_traversal, exact_mst, LshParams, MstMode, SpanningTree, TraversalPlan};
