//! Static Wasserstein-1 distances: the closed form on rooted trees, the
//! Beckmann minimal-flow program, and the Kantorovich coupling program used
//! as an independent oracle.
//!
//! Each method has a `*_from_difference` form that only needs `f1 - f0`.
//! W₁ with unit edge lengths depends on the endpoints through their
//! difference alone, so these forms also accept signed measures of equal
//! total mass.

mod beckmann;
mod kantorovich;
mod tree;

pub use beckmann::{beckmann_from_difference, flow_to_constant_pair, w1_beckmann, Flow};
pub(crate) use beckmann::{constant_pair_from_values, split_flux};
pub use kantorovich::{kantorovich_from_difference, w1_kantorovich, TransportPlan};
pub use tree::{tree_from_difference, w1_tree};

use crate::error::Result;
use crate::graph::{DirectedGraph, RootedTree};
use crate::measures::VertexDistribution;

/// Tail formula when the graph is an outward-rooted tree, Beckmann otherwise.
pub fn w1_auto(graph: &DirectedGraph, f0: &VertexDistribution, f1: &VertexDistribution) -> Result<f64> {
    if RootedTree::from_graph(graph).is_ok() {
        w1_tree(graph, f0, f1)
    } else {
        w1_beckmann(graph, f0, f1).map(|(value, _)| value)
    }
}
