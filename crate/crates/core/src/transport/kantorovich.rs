use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{check_len, Error, Result};
use crate::graph::{DirectedGraph, MetricMatrix};
use crate::lp::LinearProgram;
use crate::measures::VertexDistribution;

const MARGINAL_TOLERANCE: f64 = 1e-8;

/// A coupling of two vertex distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pi: Array2<f64>,
}

impl TransportPlan {
    /// Checks marginals against `source` (rows) and `target` (columns).
    pub fn new(pi: Array2<f64>, source: ArrayView1<'_, f64>, target: ArrayView1<'_, f64>) -> Result<Self> {
        check_len("plan rows", source.len(), pi.nrows())?;
        check_len("plan columns", target.len(), pi.ncols())?;
        if let Some(v) = pi.iter().find(|&&p| p < -1e-9) {
            return Err(Error::Distribution(format!("transport plan has negative entry {v}")));
        }
        let rows = pi.sum_axis(ndarray::Axis(1));
        let cols = pi.sum_axis(ndarray::Axis(0));
        let worst = rows
            .iter()
            .zip(source)
            .chain(cols.iter().zip(target))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if worst > MARGINAL_TOLERANCE {
            return Err(Error::Distribution(format!(
                "transport plan marginals are off by {worst:e}"
            )));
        }
        Ok(TransportPlan { pi })
    }

    pub fn pi(&self) -> &Array2<f64> {
        &self.pi
    }

    /// `Σ d(x,y) π(x,y)`.
    pub fn cost(&self, metric: &MetricMatrix) -> f64 {
        self.pi
            .indexed_iter()
            .map(|((x, y), p)| metric.get(x, y) as f64 * p)
            .sum()
    }
}

/// Exact W₁ over all couplings, with the hop-count metric as cost.
pub fn w1_kantorovich(
    graph: &DirectedGraph,
    f0: &VertexDistribution,
    f1: &VertexDistribution,
) -> Result<(f64, TransportPlan)> {
    let n = graph.num_vertices();
    check_len("source distribution", n, f0.len())?;
    check_len("target distribution", n, f1.len())?;
    let metric = MetricMatrix::from_graph(graph);
    coupling_program(&metric, f0.view(), f1.view())
}

/// W₁ determined by `delta = f1 - f0` alone: the optimal coupling of the
/// negative part of `delta` with its positive part.
pub fn kantorovich_from_difference(graph: &DirectedGraph, delta: ArrayView1<'_, f64>) -> Result<f64> {
    check_len("vertex-function", graph.num_vertices(), delta.len())?;
    let excess: Array1<f64> = delta.mapv(|d| d.max(0.0));
    let deficit: Array1<f64> = delta.mapv(|d| (-d).max(0.0));
    let metric = MetricMatrix::from_graph(graph);
    coupling_program(&metric, deficit.view(), excess.view()).map(|(value, _)| value)
}

fn coupling_program(
    metric: &MetricMatrix,
    source: ArrayView1<'_, f64>,
    target: ArrayView1<'_, f64>,
) -> Result<(f64, TransportPlan)> {
    let n = metric.size();
    let var = |x: usize, y: usize| x * n + y;
    let mut cost = vec![0.0; n * n];
    for x in 0..n {
        for y in 0..n {
            cost[var(x, y)] = metric.get(x, y) as f64;
        }
    }
    let mut rows = Vec::with_capacity(2 * n);
    let mut rhs = Vec::with_capacity(2 * n);
    for x in 0..n {
        let mut row = vec![0.0; n * n];
        for y in 0..n {
            row[var(x, y)] = 1.0;
        }
        rows.push(row);
        rhs.push(source[x]);
    }
    for y in 0..n {
        let mut row = vec![0.0; n * n];
        for x in 0..n {
            row[var(x, y)] = 1.0;
        }
        rows.push(row);
        rhs.push(target[y]);
    }
    let solution = LinearProgram::new(cost, rows, rhs)?.solve()?.optimal()?;
    let pi = Array2::from_shape_vec((n, n), solution.x).expect("n*n variables");
    let plan = TransportPlan::new(pi, source, target)?;
    Ok((solution.objective_value, plan))
}
