use ndarray::{Array1, ArrayView1};

use crate::error::{check_len, Error, Result};
use crate::graph::{IncidenceMatrix, RootedTree, SpanningTreeDecomposition};
use crate::measures::{EdgePairPath, TimeGrid, VertexDistribution, VertexPath};
use crate::transport::{constant_pair_from_values, split_flux};

const CYCLE_TOLERANCE: f64 = 1e-10;

/// Constant-speed pair for a vertex path on an outward-rooted tree.
///
/// On each interval the tail rates `h_k = ΔF_{head k} / Δt` fix the flux
/// edge by edge; the pair is `v_k = sign(h_k)|v|`, `g_k = |h_k| / |v|`
/// with `|v| = Σ_k |h_k|`. The root's tail is identically 1, so summing over
/// edge heads is the same as summing over all vertices.
pub fn constant_speed_solution_tree(tree: &RootedTree, path: &VertexPath) -> Result<EdgePairPath> {
    check_len("path vertices", tree.num_vertices(), path.num_vertices())?;
    let grid = path.grid().clone();
    let mut velocities = Vec::with_capacity(grid.steps());
    let mut weights = Vec::with_capacity(grid.steps());
    let mut before = tree.tails(path.sample(0).view())?;
    for i in 0..grid.steps() {
        let after = tree.tails(path.sample(i + 1).view())?;
        let dt = grid.duration(i);
        let flux: Array1<f64> = tree
            .edges()
            .iter()
            .map(|e| (after[e.head] - before[e.head]) / dt)
            .collect();
        let (v, g) = split_flux(flux.view())?;
        velocities.push(v);
        weights.push(g);
        before = after;
    }
    EdgePairPath::new(grid, velocities, weights)
}

/// `P · Δf̃ + ε`: the time-integrated flux of every pair associated with the
/// inverse `P` of `decomp` and the circulation `epsilon`.
///
/// `epsilon` must lie in the cycle space (`Ω ε = 0` within `1e-10`).
pub fn cycle_space_flux(
    omega: &IncidenceMatrix,
    decomp: &SpanningTreeDecomposition,
    f0: &VertexDistribution,
    f1: &VertexDistribution,
    epsilon: ArrayView1<'_, f64>,
) -> Result<Array1<f64>> {
    check_len("circulation", omega.num_edges(), epsilon.len())?;
    check_len("target distribution", f0.len(), f1.len())?;
    let leak = omega
        .apply(epsilon)?
        .iter()
        .fold(0.0f64, |a, r| a.max(r.abs()));
    if leak > CYCLE_TOLERANCE {
        return Err(Error::Parameter(format!(
            "epsilon is not a circulation: |Ω ε| = {leak:e}"
        )));
    }
    let delta = f1.mass() - f0.mass();
    Ok(decomp.particular_flow(delta.view())? + epsilon)
}

/// Time-constant pair associated with `(P, ε)`; its speed is
/// `|v| = Σ_k |P · Δf̃ + ε|_k` and `I_q = |v|` for every `q`.
pub fn constant_speed_solution_graph(
    omega: &IncidenceMatrix,
    decomp: &SpanningTreeDecomposition,
    f0: &VertexDistribution,
    f1: &VertexDistribution,
    epsilon: ArrayView1<'_, f64>,
    grid: TimeGrid,
) -> Result<EdgePairPath> {
    let flux = cycle_space_flux(omega, decomp, f0, f1, epsilon)?;
    constant_pair_from_values(flux.view(), grid)
}
