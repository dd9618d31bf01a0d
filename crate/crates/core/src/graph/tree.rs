use std::collections::VecDeque;

use ndarray::{Array1, ArrayView1};

use super::{DirectedEdge, DirectedGraph, SpanningTreeDecomposition};
use crate::error::{check_len, Error, Result};

/// A tree whose every edge points away from `root`.
///
/// The root is taken from the graph when set, otherwise it is inferred as
/// the unique vertex without incoming edges. Orientations are never
/// repaired: an edge pointing toward the root is an error.
#[derive(Debug, Clone)]
pub struct RootedTree {
    root: usize,
    edges: Vec<DirectedEdge>,
    // parent edge of each vertex (None for the root)
    parent_edge: Vec<Option<usize>>,
    // breadth-first order from the root
    order: Vec<usize>,
}

impl RootedTree {
    pub fn from_graph(graph: &DirectedGraph) -> Result<Self> {
        if !graph.is_tree() {
            let decomp = SpanningTreeDecomposition::for_graph(graph);
            let k = decomp.nontree_edges()[0];
            return Err(Error::NotATree(format!(
                "{} closes a cycle",
                graph.describe_edge(k)
            )));
        }

        let root = match graph.root() {
            Some(r) => r,
            None => infer_root(graph)?,
        };
        let n = graph.num_vertices();
        let mut parent_edge = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &k in graph.incident_edges(x) {
                let e = graph.edge(k);
                let y = e.other(x);
                if seen[y] {
                    continue;
                }
                if e.head != y {
                    return Err(Error::NotATree(format!(
                        "{} points toward the root {:?}",
                        graph.describe_edge(k),
                        graph.label(root)
                    )));
                }
                seen[y] = true;
                parent_edge[y] = Some(k);
                queue.push_back(y);
            }
        }

        Ok(RootedTree {
            root,
            edges: graph.edges().to_vec(),
            parent_edge,
            order,
        })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn num_vertices(&self) -> usize {
        self.order.len()
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn parent_edge(&self, x: usize) -> Option<usize> {
        self.parent_edge[x]
    }

    /// `F_x`: mass on `x` and all of its descendants.
    pub fn tails(&self, f: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        check_len("vertex-function", self.num_vertices(), f.len())?;
        let mut tails = f.to_owned();
        for &x in self.order.iter().rev() {
            if let Some(k) = self.parent_edge[x] {
                let parent = self.edges[k].tail;
                tails[parent] += tails[x];
            }
        }
        Ok(tails)
    }
}

fn infer_root(graph: &DirectedGraph) -> Result<usize> {
    let mut indegree = vec![0usize; graph.num_vertices()];
    for e in graph.edges() {
        indegree[e.head] += 1;
    }
    let sources: Vec<usize> = (0..graph.num_vertices())
        .filter(|&x| indegree[x] == 0)
        .collect();
    match sources.as_slice() {
        [r] => Ok(*r),
        [] => Err(Error::NotATree(
            "no root given and every vertex has an incoming edge".into(),
        )),
        _ => Err(Error::NotATree(format!(
            "no root given and {} vertices have no incoming edge",
            sources.len()
        ))),
    }
}
