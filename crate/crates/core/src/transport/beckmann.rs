use ndarray::{Array1, ArrayView1};

use crate::error::{check_len, Error, Result};
use crate::graph::{DirectedGraph, IncidenceMatrix};
use crate::lp::LinearProgram;
use crate::measures::{EdgeDistribution, EdgePairPath, EdgeVelocity, TimeGrid, VertexDistribution};

const BALANCE_TOLERANCE: f64 = 1e-8;

/// A signed edge flow `J` together with the net inflow it must produce,
/// `Ω J = f1 - f0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    values: Array1<f64>,
    demand: Array1<f64>,
}

impl Flow {
    pub fn new(omega: &IncidenceMatrix, values: Array1<f64>, demand: Array1<f64>) -> Result<Self> {
        check_len("flow", omega.num_edges(), values.len())?;
        check_len("demand", omega.num_vertices(), demand.len())?;
        let residual = (omega.apply(values.view())? - &demand)
            .iter()
            .fold(0.0f64, |a, r| a.max(r.abs()));
        if residual > BALANCE_TOLERANCE {
            return Err(Error::Parameter(format!(
                "flow violates the balance equation by {residual:e}"
            )));
        }
        Ok(Flow { values, demand })
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    pub fn demand(&self) -> &Array1<f64> {
        &self.demand
    }

    /// `Σ_k |J_k|`.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|j| j.abs()).sum()
    }
}

/// `min Σ_k |J_k|` subject to `Ω J = f1 - f0`.
pub fn w1_beckmann(
    graph: &DirectedGraph,
    f0: &VertexDistribution,
    f1: &VertexDistribution,
) -> Result<(f64, Flow)> {
    check_len("source distribution", graph.num_vertices(), f0.len())?;
    check_len("target distribution", graph.num_vertices(), f1.len())?;
    beckmann_from_difference(graph, (f1.mass() - f0.mass()).view())
}

/// Beckmann program for an arbitrary zero-sum `demand`, solved by splitting
/// `J = J⁺ - J⁻` with both parts nonnegative.
pub fn beckmann_from_difference(graph: &DirectedGraph, demand: ArrayView1<'_, f64>) -> Result<(f64, Flow)> {
    check_len("demand", graph.num_vertices(), demand.len())?;
    let omega = IncidenceMatrix::from_graph(graph);
    let m = graph.num_edges();
    let entries = omega.entries();
    let rows: Vec<Vec<f64>> = entries
        .rows()
        .into_iter()
        .map(|row| row.iter().copied().chain(row.iter().map(|w| -w)).collect())
        .collect();
    let lp = LinearProgram::new(vec![1.0; 2 * m], rows, demand.to_vec())?;
    let solution = lp.solve()?.optimal()?;
    let values: Array1<f64> = (0..m).map(|k| solution.x[k] - solution.x[m + k]).collect();
    let flow = Flow::new(&omega, values, demand.to_owned())?;
    Ok((flow.l1_norm(), flow))
}

/// The time-constant pair with `v_k g_k = J_k`:
/// `|v| = Σ|J_k|`, `v_k = sign(J_k)|v|`, `g_k = |J_k| / |v|`, where
/// `sign(0) = +1`. A zero flow gives zero velocity and uniform weights.
pub fn flow_to_constant_pair(flow: &Flow, grid: TimeGrid) -> Result<EdgePairPath> {
    constant_pair_from_values(flow.values().view(), grid)
}

pub(crate) fn constant_pair_from_values(values: ArrayView1<'_, f64>, grid: TimeGrid) -> Result<EdgePairPath> {
    let (velocity, weight) = split_flux(values)?;
    EdgePairPath::constant(grid, velocity, weight)
}

/// Splits an edge flux `h` into `(v, g)` with `v ⊙ g = h` and every `|v_k|`
/// equal to `Σ|h_k|`. Zero flux maps to zero velocity and uniform weights.
pub(crate) fn split_flux(values: ArrayView1<'_, f64>) -> Result<(EdgeVelocity, EdgeDistribution)> {
    let speed: f64 = values.iter().map(|j| j.abs()).sum();
    if speed == 0.0 {
        return Ok((EdgeVelocity::zeros(values.len()), EdgeDistribution::uniform(values.len())));
    }
    let velocity = values.mapv(|j| if j < 0.0 { -speed } else { speed });
    let weight = values.mapv(|j| j.abs() / speed);
    Ok((EdgeVelocity::new(velocity)?, EdgeDistribution::new(weight)?))
}
