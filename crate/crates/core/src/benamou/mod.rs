//! The dynamic formulation: triples `(f, v, g)` tied together by
//! `∂_t f = Ω (v ⊙ g)`, the energy `I_q`, and the constructions that attain
//! its infimum.

mod algebra;
mod constant_speed;
mod geodesic;

pub use algebra::{concatenate_pairs, restrict_pair, reverse_pair};
pub use constant_speed::{
    constant_speed_solution_graph, constant_speed_solution_tree, cycle_space_flux,
};
pub use geodesic::{geodesic, geodesic_triple, GeodesicMode};

use ndarray::Array1;

use crate::error::{check_len, Error, Result};
use crate::graph::{DirectedGraph, IncidenceMatrix, RootedTree};
use crate::measures::{EdgePairPath, TimeGrid, Triple, VertexDistribution};
use crate::transport::{flow_to_constant_pair, w1_beckmann};

/// Where the worst residual was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Vertex(usize),
    Edge(usize),
}

/// Worst discrete residual over all intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub max_abs_residual: f64,
    /// Interval `[t_i, t_{i+1})` holding the worst entry.
    pub worst_interval: usize,
    pub worst: Location,
}

impl ResidualReport {
    fn track(&mut self, value: f64, interval: usize, at: Location) {
        if value > self.max_abs_residual {
            *self = ResidualReport {
                max_abs_residual: value,
                worst_interval: interval,
                worst: at,
            };
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub q: f64,
    /// `I_q = (Σ_i Δt_i Σ_k g_{i,k} |v_{i,k}|^q)^{1/q}`.
    pub value: f64,
    /// `(Σ_k g_{i,k} |v_{i,k}|^q)^{1/q}` on each interval.
    pub per_interval_speed: Vec<f64>,
}

fn check_exponent(q: f64) -> Result<()> {
    if q.is_finite() && q >= 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("energy exponent q must be finite and >= 1, got {q}")))
    }
}

/// `max_{i,x} |(f(t_{i+1}) - f(t_i)) / Δt_i - (Ω (v_i ⊙ g_i))_x|`.
pub fn transport_residual(triple: &Triple, omega: &IncidenceMatrix) -> Result<ResidualReport> {
    let path = triple.path();
    let pair = triple.pair();
    check_len("path vertices", omega.num_vertices(), path.num_vertices())?;
    check_len("pair edges", omega.num_edges(), pair.num_edges())?;
    let grid = path.grid();
    let mut report = ResidualReport {
        max_abs_residual: 0.0,
        worst_interval: 0,
        worst: Location::Vertex(0),
    };
    for i in 0..grid.steps() {
        let rate = (path.sample(i + 1).mass() - path.sample(i).mass()) / grid.duration(i);
        let predicted = omega.apply(pair.flux(i).view())?;
        for (x, (a, b)) in rate.iter().zip(&predicted).enumerate() {
            report.track((a - b).abs(), i, Location::Vertex(x));
        }
    }
    Ok(report)
}

/// The energy functional `I_q` of a piecewise-constant pair.
pub fn energy(pair: &EdgePairPath, q: f64) -> Result<EnergyReport> {
    check_exponent(q)?;
    let grid = pair.grid();
    let mut total = 0.0;
    let mut per_interval_speed = Vec::with_capacity(grid.steps());
    for i in 0..grid.steps() {
        let v = pair.velocities()[i].value();
        let g = pair.weights()[i].mass();
        let moment: f64 = g.iter().zip(v).map(|(g, v)| g * v.abs().powf(q)).sum();
        total += grid.duration(i) * moment;
        per_interval_speed.push(moment.powf(1.0 / q));
    }
    Ok(EnergyReport {
        q,
        value: total.powf(1.0 / q),
        per_interval_speed,
    })
}

/// Tail form of the transport equation on an outward-rooted tree:
/// `max_{i,k} |ΔF_{head k} / Δt_i - v_{i,k} g_{i,k}|`.
pub fn tail_pde_check(triple: &Triple, tree: &RootedTree) -> Result<ResidualReport> {
    let path = triple.path();
    let pair = triple.pair();
    check_len("path vertices", tree.num_vertices(), path.num_vertices())?;
    check_len("pair edges", tree.edges().len(), pair.num_edges())?;
    let grid = path.grid();
    let mut report = ResidualReport {
        max_abs_residual: 0.0,
        worst_interval: 0,
        worst: Location::Edge(0),
    };
    let mut tails_before = tree.tails(path.sample(0).view())?;
    for i in 0..grid.steps() {
        let tails_after = tree.tails(path.sample(i + 1).view())?;
        let flux = pair.flux(i);
        for e in tree.edges() {
            let rate = (tails_after[e.head] - tails_before[e.head]) / grid.duration(i);
            report.track((rate - flux[e.index]).abs(), i, Location::Edge(e.index));
        }
        tails_before = tails_after;
    }
    Ok(report)
}

/// `‖Ω ∫₀¹ v ⊙ g dt - (f1 - f0)‖_∞`; a pair is admissible for the reduced
/// problem when this is at most `1e-8`.
pub fn reduced_constraint_check(
    pair: &EdgePairPath,
    omega: &IncidenceMatrix,
    f0: &VertexDistribution,
    f1: &VertexDistribution,
) -> Result<f64> {
    check_len("source distribution", omega.num_vertices(), f0.len())?;
    check_len("target distribution", omega.num_vertices(), f1.len())?;
    let moved = omega.apply(pair.time_integral().view())?;
    let target: Array1<f64> = f1.mass() - f0.mass();
    Ok((moved - target).iter().fold(0.0, |a, r| a.max(r.abs())))
}

/// Minimum of `I_q` over the dynamic problem, attained by the time-constant
/// pair of an optimal Beckmann flow. Returns the value and that pair.
pub fn benamou_distance(
    graph: &DirectedGraph,
    f0: &VertexDistribution,
    f1: &VertexDistribution,
    q: f64,
) -> Result<(f64, EdgePairPath)> {
    check_exponent(q)?;
    let (_, flow) = w1_beckmann(graph, f0, f1)?;
    let pair = flow_to_constant_pair(&flow, TimeGrid::uniform(1)?)?;
    let report = energy(&pair, q)?;
    Ok((report.value, pair))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{
        integrate_pair, EdgeDistribution, EdgeVelocity, VertexPath,
    };
    use crate::transport::w1_tree;
    use ndarray::array;

    fn square() -> DirectedGraph {
        DirectedGraph::with_numbered_vertices(4, &[(0, 1), (1, 2), (3, 2), (0, 3)], None).unwrap()
    }

    #[test]
    fn exponent_must_be_at_least_one() {
        let pair = EdgePairPath::stationary(TimeGrid::uniform(1).unwrap(), 2);
        assert!(energy(&pair, 0.5).is_err());
        assert!(energy(&pair, f64::NAN).is_err());
        assert_eq!(energy(&pair, 1.0).unwrap().value, 0.0);
    }

    #[test]
    fn integrated_triple_has_zero_residual() {
        let g = DirectedGraph::path(3).unwrap();
        let omega = IncidenceMatrix::from_graph(&g);
        let pair = EdgePairPath::new(
            TimeGrid::uniform(2).unwrap(),
            vec![
                EdgeVelocity::new(array![0.5, -0.2]).unwrap(),
                EdgeVelocity::new(array![0.1, 0.4]).unwrap(),
            ],
            vec![
                EdgeDistribution::new(array![0.5, 0.5]).unwrap(),
                EdgeDistribution::new(array![0.25, 0.75]).unwrap(),
            ],
        )
        .unwrap();
        let f0 = VertexDistribution::new(array![0.4, 0.3, 0.3]).unwrap();
        let path = integrate_pair(&f0, &pair, &omega).unwrap();
        let triple = Triple::new(path, pair).unwrap();
        assert!(transport_residual(&triple, &omega).unwrap().max_abs_residual < 1e-15);
        let tree = RootedTree::from_graph(&g).unwrap();
        assert!(tail_pde_check(&triple, &tree).unwrap().max_abs_residual < 1e-15);
    }

    #[test]
    fn constant_path_with_moving_pair() {
        let g = DirectedGraph::path(2).unwrap();
        let omega = IncidenceMatrix::from_graph(&g);
        let f = VertexDistribution::uniform(2);
        let grid = TimeGrid::uniform(3).unwrap();
        let path = VertexPath::new(grid.clone(), vec![f.clone(); 4]).unwrap();
        let pair = EdgePairPath::constant(
            grid,
            EdgeVelocity::new(array![0.7]).unwrap(),
            EdgeDistribution::new(array![1.0]).unwrap(),
        )
        .unwrap();
        let report = transport_residual(&Triple::new(path, pair).unwrap(), &omega).unwrap();
        assert!((report.max_abs_residual - 0.7).abs() < 1e-15);
    }

    #[test]
    fn reduced_constraint_of_zero_pair() {
        let g = DirectedGraph::path(3).unwrap();
        let omega = IncidenceMatrix::from_graph(&g);
        let a = VertexDistribution::new(array![0.5, 0.5, 0.0]).unwrap();
        let b = VertexDistribution::new(array![0.0, 0.2, 0.8]).unwrap();
        let pair = EdgePairPath::stationary(TimeGrid::uniform(4).unwrap(), 2);
        assert!((reduced_constraint_check(&pair, &omega, &a, &b).unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn beckmann_pair_energy_is_flow_norm_for_every_q() {
        let g = square();
        let f0 = VertexDistribution::uniform(4);
        let f1 = VertexDistribution::new(array![0.09, 0.01, 0.09, 0.81]).unwrap();
        let (w, flow) = w1_beckmann(&g, &f0, &f1).unwrap();
        let pair = flow_to_constant_pair(&flow, TimeGrid::uniform(5).unwrap()).unwrap();
        let omega = IncidenceMatrix::from_graph(&g);
        assert!(reduced_constraint_check(&pair, &omega, &f0, &f1).unwrap() < 1e-12);
        for q in [1.0, 2.0, 3.0] {
            let e = energy(&pair, q).unwrap();
            assert!((e.value - w).abs() < 1e-12, "q={q}: {} vs {w}", e.value);
            assert!(e.per_interval_speed.iter().all(|s| (s - w).abs() < 1e-12));
        }
    }

    #[test]
    fn benamou_matches_static_values() {
        let g = square();
        let f0 = VertexDistribution::uniform(4);
        let f1 = VertexDistribution::new(array![0.09, 0.01, 0.09, 0.81]).unwrap();
        let one = benamou_distance(&g, &f0, &f1, 1.0).unwrap().0;
        let three = benamou_distance(&g, &f0, &f1, 3.0).unwrap().0;
        assert!((one - 0.8).abs() < 1e-12);
        assert!((one - three).abs() < 1e-12);

        let t = DirectedGraph::star(3).unwrap();
        let a = VertexDistribution::new(array![0.1, 0.2, 0.3, 0.4]).unwrap();
        let b = VertexDistribution::new(array![0.4, 0.3, 0.2, 0.1]).unwrap();
        for q in [1.0, 2.0, 3.0] {
            let d = benamou_distance(&t, &a, &b, q).unwrap().0;
            assert!((d - w1_tree(&t, &a, &b).unwrap()).abs() < 1e-12);
        }
    }
}
