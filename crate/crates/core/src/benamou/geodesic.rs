use std::fmt;
use std::str::FromStr;

use crate::error::{check_len, Error, Result};
use crate::graph::{DirectedGraph, IncidenceMatrix, RootedTree};
use crate::measures::{
    convex_interpolation, integrate_pair, TimeGrid, Triple, VertexDistribution, VertexPath,
};
use crate::transport::{flow_to_constant_pair, w1_beckmann};

use super::constant_speed_solution_tree;

/// Integrated endpoints closer than this to the requested target are
/// replaced by the target itself.
const ENDPOINT_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicMode {
    /// `(1 - t) f0 + t f1`.
    Convex,
    /// Integrate the time-constant pair of an optimal Beckmann flow.
    BeckmannFlow,
}

impl FromStr for GeodesicMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convex" => Ok(GeodesicMode::Convex),
            "beckmann-flow" | "beckmann_flow" => Ok(GeodesicMode::BeckmannFlow),
            other => Err(Error::Parameter(format!(
                "unknown geodesic mode {other:?} (expected convex or beckmann-flow)"
            ))),
        }
    }
}

impl fmt::Display for GeodesicMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeodesicMode::Convex => "convex",
            GeodesicMode::BeckmannFlow => "beckmann-flow",
        })
    }
}

/// A constant-speed W₁ geodesic from `f0` to `f1` sampled on `grid`.
pub fn geodesic(
    graph: &DirectedGraph,
    f0: &VertexDistribution,
    f1: &VertexDistribution,
    grid: &TimeGrid,
    mode: GeodesicMode,
) -> Result<VertexPath> {
    geodesic_triple(graph, f0, f1, grid, mode).map(|t| t.path().clone())
}

/// The geodesic together with a pair that drives it.
///
/// In convex mode on an outward-rooted tree the pair comes from the tails,
/// which reproduces the path exactly; otherwise it is the Beckmann pair.
pub fn geodesic_triple(
    graph: &DirectedGraph,
    f0: &VertexDistribution,
    f1: &VertexDistribution,
    grid: &TimeGrid,
    mode: GeodesicMode,
) -> Result<Triple> {
    check_len("source distribution", graph.num_vertices(), f0.len())?;
    check_len("target distribution", graph.num_vertices(), f1.len())?;
    match mode {
        GeodesicMode::Convex => {
            let path = convex_interpolation(f0, f1, grid)?;
            let pair = match RootedTree::from_graph(graph) {
                Ok(tree) => constant_speed_solution_tree(&tree, &path)?,
                Err(_) => {
                    let (_, flow) = w1_beckmann(graph, f0, f1)?;
                    flow_to_constant_pair(&flow, grid.clone())?
                }
            };
            Triple::new(path, pair)
        }
        GeodesicMode::BeckmannFlow => {
            let omega = IncidenceMatrix::from_graph(graph);
            let (_, flow) = w1_beckmann(graph, f0, f1)?;
            let pair = flow_to_constant_pair(&flow, grid.clone())?;
            let integrated = integrate_pair(f0, &pair, &omega)?;
            let gap = integrated
                .end()
                .mass()
                .iter()
                .zip(f1.mass())
                .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            let path = if gap <= ENDPOINT_SNAP {
                let mut samples = integrated.samples().to_vec();
                *samples.last_mut().unwrap() = f1.clone();
                VertexPath::new(grid.clone(), samples)?
            } else {
                integrated
            };
            Triple::new(path, pair)
        }
    }
}
