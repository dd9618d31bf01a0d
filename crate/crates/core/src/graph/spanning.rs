use std::collections::VecDeque;

use ndarray::{Array1, Array2, ArrayView1};

use super::DirectedGraph;
use crate::error::{check_len, Error, Result};

/// A breadth-first spanning tree together with the right inverse and cycle
/// basis it induces.
///
/// With `Ω̃` the incidence matrix minus the row of `dropped_vertex`,
/// `right_inverse` is a matrix `P` with `Ω̃ P = I`: its column for vertex `y`
/// carries one unit of flow from the dropped vertex to `y` along tree edges.
/// Rows belonging to non-tree edges are zero. Each cycle-basis vector is a
/// unit circulation through one non-tree edge closed up by the tree path
/// between its endpoints, so `Ω ε = 0`.
#[derive(Debug, Clone)]
pub struct SpanningTreeDecomposition {
    tree_edges: Vec<usize>,
    nontree_edges: Vec<usize>,
    dropped_vertex: usize,
    column_vertices: Vec<usize>,
    right_inverse: Array2<f64>,
    cycle_basis: Vec<Array1<f64>>,
}

impl SpanningTreeDecomposition {
    /// Decomposition with the default dropped row: the root if the graph has
    /// one, otherwise vertex 0.
    pub fn for_graph(graph: &DirectedGraph) -> Self {
        Self::new(graph, graph.root().unwrap_or(0)).expect("default row is in range")
    }

    /// The tree is grown breadth-first from `dropped`, scanning each vertex's
    /// incident edges in ascending index order.
    pub fn new(graph: &DirectedGraph, dropped: usize) -> Result<Self> {
        let n = graph.num_vertices();
        let m = graph.num_edges();
        if dropped >= n {
            return Err(Error::Graph(format!("dropped vertex {dropped} out of range")));
        }

        let mut parent_edge: Vec<Option<usize>> = vec![None; n];
        let mut visited = vec![false; n];
        let mut in_tree = vec![false; m];
        visited[dropped] = true;
        let mut queue = VecDeque::from([dropped]);
        while let Some(x) = queue.pop_front() {
            for &k in graph.incident_edges(x) {
                let y = graph.edge(k).other(x);
                if !visited[y] {
                    visited[y] = true;
                    parent_edge[y] = Some(k);
                    in_tree[k] = true;
                    queue.push_back(y);
                }
            }
        }

        // Signed unit flow from the dropped vertex to `y` along the tree.
        let route = |y: usize| -> Array1<f64> {
            let mut flow = Array1::zeros(m);
            let mut x = y;
            while let Some(k) = parent_edge[x] {
                let e = graph.edge(k);
                flow[k] = if e.head == x { 1.0 } else { -1.0 };
                x = e.other(x);
            }
            flow
        };

        let column_vertices: Vec<usize> = (0..n).filter(|&x| x != dropped).collect();
        let mut right_inverse = Array2::zeros((m, n - 1));
        for (col, &y) in column_vertices.iter().enumerate() {
            right_inverse.column_mut(col).assign(&route(y));
        }

        let tree_edges: Vec<usize> = (0..m).filter(|&k| in_tree[k]).collect();
        let nontree_edges: Vec<usize> = (0..m).filter(|&k| !in_tree[k]).collect();
        let cycle_basis = nontree_edges
            .iter()
            .map(|&k| {
                let e = graph.edge(k);
                let mut eps = route(e.tail) - route(e.head);
                eps[k] = 1.0;
                eps
            })
            .collect();

        Ok(SpanningTreeDecomposition {
            tree_edges,
            nontree_edges,
            dropped_vertex: dropped,
            column_vertices,
            right_inverse,
            cycle_basis,
        })
    }

    pub fn tree_edges(&self) -> &[usize] {
        &self.tree_edges
    }

    pub fn nontree_edges(&self) -> &[usize] {
        &self.nontree_edges
    }

    pub fn dropped_vertex(&self) -> usize {
        self.dropped_vertex
    }

    /// Vertex associated with each column of the right inverse.
    pub fn column_vertices(&self) -> &[usize] {
        &self.column_vertices
    }

    pub fn right_inverse(&self) -> &Array2<f64> {
        &self.right_inverse
    }

    pub fn cycle_basis(&self) -> &[Array1<f64>] {
        &self.cycle_basis
    }

    /// Removes the dropped vertex's entry from a vertex-function.
    pub fn reduce(&self, delta: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        check_len("vertex-function", self.column_vertices.len() + 1, delta.len())?;
        Ok(self.column_vertices.iter().map(|&x| delta[x]).collect())
    }

    /// `P · Δf̃`: the tree-supported flow whose net inflow is `delta`
    /// (which must sum to zero for the dropped row to be consistent).
    pub fn particular_flow(&self, delta: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        let reduced = self.reduce(delta)?;
        Ok(self.right_inverse.dot(&reduced))
    }

    /// `Σ_i c_i ε_i` for coefficients `c`.
    pub fn cycle_combination(&self, coefficients: &[f64]) -> Result<Array1<f64>> {
        check_len("cycle coefficients", self.cycle_basis.len(), coefficients.len())?;
        let mut out = Array1::zeros(self.right_inverse.nrows());
        for (c, eps) in coefficients.iter().zip(&self.cycle_basis) {
            out.scaled_add(*c, eps);
        }
        Ok(out)
    }
}
