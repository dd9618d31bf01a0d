use ndarray::{Array1, Array2, ArrayView1, Axis};

use super::DirectedGraph;
use crate::error::{check_len, Result};

/// The `|V| x |E|` incidence matrix: `+1` where an edge enters a vertex,
/// `-1` where it leaves, `0` elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceMatrix {
    entries: Array2<f64>,
}

impl IncidenceMatrix {
    pub fn from_graph(graph: &DirectedGraph) -> Self {
        let mut entries = Array2::zeros((graph.num_vertices(), graph.num_edges()));
        for e in graph.edges() {
            entries[[e.head, e.index]] = 1.0;
            entries[[e.tail, e.index]] = -1.0;
        }
        IncidenceMatrix { entries }
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn num_vertices(&self) -> usize {
        self.entries.nrows()
    }

    pub fn num_edges(&self) -> usize {
        self.entries.ncols()
    }

    /// `Ω · g`: net inflow at every vertex.
    pub fn apply(&self, g: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        check_len("edge-function", self.num_edges(), g.len())?;
        Ok(self.entries.dot(&g))
    }

    /// `(∇f)_k = f(tail k) - f(head k) = (-Ωᵀ f)_k`.
    pub fn gradient(&self, f: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        check_len("vertex-function", self.num_vertices(), f.len())?;
        Ok(-self.entries.t().dot(&f))
    }

    /// `(∇·g)_x = outflow - inflow = (-Ω g)_x`. Always sums to zero.
    pub fn divergence(&self, g: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        Ok(-self.apply(g)?)
    }

    /// `ΩΩᵀ`.
    pub fn laplacian(&self) -> Array2<f64> {
        self.entries.dot(&self.entries.t())
    }

    /// Ω with row `r` removed.
    pub fn without_row(&self, r: usize) -> Array2<f64> {
        let keep: Vec<usize> = (0..self.num_vertices()).filter(|&x| x != r).collect();
        self.entries.select(Axis(0), &keep)
    }

    /// Numerical rank by Gaussian elimination with partial pivoting.
    pub fn rank(&self, pivot_tol: f64) -> usize {
        matrix_rank(&self.entries, pivot_tol)
    }
}

pub(crate) fn matrix_rank(m: &Array2<f64>, pivot_tol: f64) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.dim();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let (best, val) = (rank..rows)
            .map(|r| (r, a[[r, c]].abs()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= pivot_tol {
            continue;
        }
        for j in 0..cols {
            a.swap([rank, j], [best, j]);
        }
        let p = a[[rank, c]];
        for r in (rank + 1)..rows {
            let factor = a[[r, c]] / p;
            if factor != 0.0 {
                for j in c..cols {
                    a[[r, j]] -= factor * a[[rank, j]];
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn omega(n: usize, edges: &[(usize, usize)]) -> IncidenceMatrix {
        IncidenceMatrix::from_graph(&DirectedGraph::with_numbered_vertices(n, edges, None).unwrap())
    }

    #[test]
    fn single_edge_column() {
        let m = omega(2, &[(0, 1)]);
        assert_eq!(m.entries(), &array![[-1.0], [1.0]]);
    }

    #[test]
    fn path_matrix() {
        let m = omega(3, &[(0, 1), (1, 2)]);
        assert_eq!(m.entries(), &array![[-1.0, 0.0], [1.0, -1.0], [0.0, 1.0]]);
    }

    #[test]
    fn star_centre_row() {
        let m = IncidenceMatrix::from_graph(&DirectedGraph::star(3).unwrap());
        assert_eq!(m.entries().row(0), array![-1.0, -1.0, -1.0]);
    }

    #[test]
    fn gradient_examples() {
        let m = omega(2, &[(0, 1)]);
        assert_eq!(m.gradient(array![3.0, 5.0].view()).unwrap(), array![-2.0]);
        let p = omega(3, &[(0, 1), (1, 2)]);
        assert_eq!(p.gradient(array![1.0, 0.0, 0.0].view()).unwrap(), array![1.0, 0.0]);
        assert_eq!(
            p.gradient(array![7.0, 7.0, 7.0].view()).unwrap(),
            array![0.0, 0.0]
        );
    }

    #[test]
    fn divergence_examples() {
        let m = omega(2, &[(0, 1)]);
        assert_eq!(m.divergence(array![1.0].view()).unwrap(), array![1.0, -1.0]);

        let s = IncidenceMatrix::from_graph(&DirectedGraph::star(3).unwrap());
        let third = 1.0 / 3.0;
        let d = s.divergence(array![third, third, third].view()).unwrap();
        let expected = [1.0, -third, -third, -third];
        for (a, b) in d.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        // out minus in, evaluated edge by edge
        let mut by_hand = [0.0; 4];
        for k in 0..3 {
            by_hand[0] += third;
            by_hand[k + 1] -= third;
        }
        for (a, b) in d.iter().zip(by_hand) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let m = omega(2, &[(0, 1)]);
        assert!(m.gradient(array![1.0].view()).is_err());
        assert!(m.divergence(array![1.0, 2.0].view()).is_err());
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(omega(2, &[(0, 1)]).laplacian(), array![[1.0, -1.0], [-1.0, 1.0]]);
        assert_eq!(
            omega(3, &[(0, 1), (1, 2)]).laplacian(),
            array![[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]]
        );
    }

    #[test]
    fn rank_is_vertices_minus_one() {
        assert_eq!(omega(4, &[(0, 1), (1, 2), (3, 2), (0, 3)]).rank(1e-9), 3);
        assert_eq!(omega(3, &[(0, 1), (1, 2)]).rank(1e-9), 2);
    }
}
