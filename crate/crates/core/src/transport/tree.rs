use ndarray::ArrayView1;

use crate::error::{check_len, Result};
use crate::graph::{DirectedGraph, RootedTree};
use crate::measures::VertexDistribution;

/// `W₁ = Σ_x |F(1)_x - F(0)_x|` on an outward-rooted tree.
///
/// With inclusive tails the root term is identically zero.
pub fn w1_tree(graph: &DirectedGraph, f0: &VertexDistribution, f1: &VertexDistribution) -> Result<f64> {
    let tree = RootedTree::from_graph(graph)?;
    check_len("target distribution", f0.len(), f1.len())?;
    let delta = f1.mass() - f0.mass();
    tree_from_difference(&tree, delta.view())
}

/// Tail formula applied to `delta = f1 - f0`; tails are linear, so this is
/// `Σ_x |tails(delta)_x|` with the root excluded.
pub fn tree_from_difference(tree: &RootedTree, delta: ArrayView1<'_, f64>) -> Result<f64> {
    let tails = tree.tails(delta)?;
    Ok(tails
        .iter()
        .enumerate()
        .filter(|(x, _)| *x != tree.root())
        .map(|(_, d)| d.abs())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn identical_endpoints() {
        let g = DirectedGraph::star(3).unwrap();
        let f = VertexDistribution::uniform(4);
        assert_eq!(w1_tree(&g, &f, &f).unwrap(), 0.0);
    }

    #[test]
    fn point_masses_on_a_path() {
        let g = DirectedGraph::path(3).unwrap();
        let a = VertexDistribution::point_mass(3, 0);
        let b = VertexDistribution::point_mass(3, 2);
        assert_eq!(w1_tree(&g, &a, &b).unwrap(), 2.0);
    }

    #[test]
    fn rejects_cycles() {
        let g = DirectedGraph::cycle(3).unwrap();
        let f = VertexDistribution::uniform(3);
        assert!(w1_tree(&g, &f, &f).is_err());
    }

    #[test]
    fn any_root_gives_the_same_value() {
        // 0 -> 1 -> 2 rooted at 0 versus 1 -> 0, 1 -> 2 rooted at 1
        let a = VertexDistribution::new(array![0.6, 0.1, 0.3]).unwrap();
        let b = VertexDistribution::new(array![0.1, 0.2, 0.7]).unwrap();
        let g0 = DirectedGraph::path(3).unwrap();
        let g1 = DirectedGraph::with_numbered_vertices(3, &[(1, 0), (1, 2)], Some(1)).unwrap();
        let d0 = w1_tree(&g0, &a, &b).unwrap();
        let d1 = w1_tree(&g1, &a, &b).unwrap();
        assert!((d0 - d1).abs() < 1e-15);
        // |0.5| + |0.4| from the two cuts
        assert!((d0 - 0.9).abs() < 1e-15);
    }
}
