use std::collections::VecDeque;

use super::DirectedGraph;

/// Hop-count distances on the underlying undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricMatrix {
    n: usize,
    d: Vec<u32>,
}

impl MetricMatrix {
    pub fn from_graph(graph: &DirectedGraph) -> Self {
        let n = graph.num_vertices();
        let mut d = vec![u32::MAX; n * n];
        for source in 0..n {
            let row = &mut d[source * n..(source + 1) * n];
            row[source] = 0;
            let mut queue = VecDeque::from([source]);
            while let Some(x) = queue.pop_front() {
                for &k in graph.incident_edges(x) {
                    let y = graph.edge(k).other(x);
                    if row[y] == u32::MAX {
                        row[y] = row[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        MetricMatrix { n, d }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.d[x * self.n + y]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hop_counts() {
        let p = MetricMatrix::from_graph(&DirectedGraph::path(3).unwrap());
        assert_eq!(p.get(0, 2), 2);
        assert_eq!(p.get(2, 0), 2);

        let s = MetricMatrix::from_graph(&DirectedGraph::star(3).unwrap());
        assert_eq!(s.get(1, 2), 2);
        for i in 1..=3 {
            assert_eq!(s.get(0, i), 1);
        }

        let c = MetricMatrix::from_graph(&DirectedGraph::cycle(4).unwrap());
        assert_eq!(c.get(0, 2), 2);
        assert_eq!(c.get(1, 3), 2);
        assert_eq!(c.get(0, 3), 1);
    }

    #[test]
    fn orientation_is_ignored() {
        let g = DirectedGraph::with_numbered_vertices(3, &[(1, 0), (2, 1)], None).unwrap();
        assert_eq!(MetricMatrix::from_graph(&g).get(0, 2), 2);
    }
}
