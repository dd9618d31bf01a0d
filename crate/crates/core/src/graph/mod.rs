//! Simple connected directed graphs and the linear algebra built on their
//! incidence matrix.
//!
//! Vertices and edges are addressed by their position in the input, so a
//! vertex-function is a vector of length `|V|` and an edge-function a vector
//! of length `|E|`. Orientation is taken from the input as-is; it only fixes
//! the sign convention, since mass may travel against an edge through a
//! negative velocity.

mod incidence;
mod metric;
mod spanning;
mod tree;

pub use incidence::IncidenceMatrix;
pub use metric::MetricMatrix;
pub use spanning::SpanningTreeDecomposition;
pub use tree::RootedTree;

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

/// An oriented edge. `tail` is the vertex the edge leaves, `head` the vertex
/// it enters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectedEdge {
    pub index: usize,
    pub tail: usize,
    pub head: usize,
}

impl DirectedEdge {
    /// The endpoint that is not `x`. `x` must be incident to the edge.
    pub fn other(&self, x: usize) -> usize {
        if self.tail == x {
            self.head
        } else {
            self.tail
        }
    }
}

/// A connected simple graph with an orientation on every edge.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    labels: Vec<String>,
    edges: Vec<DirectedEdge>,
    root: Option<usize>,
    index_of: HashMap<String, usize>,
    // incident edge indices per vertex, ascending
    incident: Vec<Vec<usize>>,
}

impl DirectedGraph {
    /// Builds and validates a graph. Edges are `(tail, head)` vertex indices.
    ///
    /// Rejects duplicate labels, self-loops, parallel edges (in either
    /// direction), out-of-range endpoints and disconnected graphs. At least
    /// two vertices are required.
    pub fn new(labels: Vec<String>, edges: &[(usize, usize)], root: Option<usize>) -> Result<Self> {
        let n = labels.len();
        if n < 2 {
            return Err(Error::Graph(format!(
                "need at least two vertices, got {n}"
            )));
        }
        let mut index_of = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if index_of.insert(label.clone(), i).is_some() {
                return Err(Error::Graph(format!("duplicate vertex label {label:?}")));
            }
        }
        if let Some(r) = root {
            if r >= n {
                return Err(Error::Graph(format!("root index {r} out of range")));
            }
        }

        let mut seen = HashSet::with_capacity(edges.len());
        let mut incident = vec![Vec::new(); n];
        let mut out = Vec::with_capacity(edges.len());
        for (k, &(tail, head)) in edges.iter().enumerate() {
            if tail >= n || head >= n {
                return Err(Error::Graph(format!(
                    "edge {k} has an endpoint outside 0..{n}"
                )));
            }
            if tail == head {
                return Err(Error::Graph(format!(
                    "edge {k} is a self-loop at {:?}",
                    labels[tail]
                )));
            }
            if !seen.insert((tail.min(head), tail.max(head))) {
                return Err(Error::Graph(format!(
                    "edge {k} ({:?} -> {:?}) duplicates an earlier edge",
                    labels[tail], labels[head]
                )));
            }
            incident[tail].push(k);
            incident[head].push(k);
            out.push(DirectedEdge {
                index: k,
                tail,
                head,
            });
        }

        let graph = DirectedGraph {
            labels,
            edges: out,
            root,
            index_of,
            incident,
        };
        if let Some(v) = graph.first_unreachable() {
            return Err(Error::Graph(format!(
                "graph is disconnected: vertex {:?} is unreachable from {:?}",
                graph.labels[v], graph.labels[0]
            )));
        }
        Ok(graph)
    }

    /// Same as [`DirectedGraph::new`] but with vertices named `"0"`, `"1"`, ...
    pub fn with_numbered_vertices(
        n: usize,
        edges: &[(usize, usize)],
        root: Option<usize>,
    ) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect(), edges, root)
    }

    /// The path `0 -> 1 -> ... -> n-1`, rooted at 0.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::with_numbered_vertices(n, &edges, Some(0))
    }

    /// The star with centre 0 and edges `0 -> i` for `i = 1..=leaves`.
    pub fn star(leaves: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::with_numbered_vertices(leaves + 1, &edges, Some(0))
    }

    /// The cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::with_numbered_vertices(n, &edges, None)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &DirectedEdge {
        &self.edges[k]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.index_of.get(label).copied()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// Returns a copy of the graph with the given root.
    pub fn with_root(mut self, root: usize) -> Result<Self> {
        if root >= self.num_vertices() {
            return Err(Error::Graph(format!("root index {root} out of range")));
        }
        self.root = Some(root);
        Ok(self)
    }

    /// Indices of the edges touching `x`, ascending.
    pub fn incident_edges(&self, x: usize) -> &[usize] {
        &self.incident[x]
    }

    /// `|E| = |V| - 1`; with connectivity this is equivalent to acyclicity.
    pub fn is_tree(&self) -> bool {
        self.num_edges() + 1 == self.num_vertices()
    }

    /// Dimension of the cycle space, `|E| - |V| + 1`.
    pub fn cyclomatic_number(&self) -> usize {
        self.num_edges() + 1 - self.num_vertices()
    }

    /// Human-readable `tail -> head` for messages.
    pub fn describe_edge(&self, k: usize) -> String {
        let e = &self.edges[k];
        format!("edge {k} ({} -> {})", self.labels[e.tail], self.labels[e.head])
    }

    fn first_unreachable(&self) -> Option<usize> {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &k in &self.incident[x] {
                let y = self.edges[k].other(x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }
}
