use ndarray::Array1;

use super::{EdgeDistribution, EdgeVelocity, VertexDistribution};
use crate::error::{check_len, Error, Result};
use crate::graph::IncidenceMatrix;

/// Integrated paths are allowed to dip this far below zero before they are
/// rejected; anything smaller is clamped.
const PATH_NEGATIVE_TOLERANCE: f64 = 1e-9;

/// Knots `0 = t_0 < t_1 < ... < t_M = 1`.
///
/// Grids read from files or built by [`TimeGrid::uniform`] are uniform.
/// Time-rescaled pairs (concatenation, restriction) carry non-uniform knots.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    knots: Vec<f64>,
}

impl TimeGrid {
    pub fn uniform(steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Parameter("time grid needs at least one step".into()));
        }
        let m = steps as f64;
        let knots = (0..=steps).map(|i| i as f64 / m).collect();
        Ok(TimeGrid { knots })
    }

    pub fn from_knots(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Parameter("time grid needs at least two knots".into()));
        }
        if knots[0] != 0.0 || *knots.last().unwrap() != 1.0 {
            return Err(Error::Parameter("time grid must start at 0 and end at 1".into()));
        }
        if knots.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::Parameter("time knots must be strictly increasing".into()));
        }
        Ok(TimeGrid { knots })
    }

    /// Number of intervals `M`.
    pub fn steps(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn knot(&self, i: usize) -> f64 {
        self.knots[i]
    }

    /// Length of interval `i`, `t_{i+1} - t_i`.
    pub fn duration(&self, i: usize) -> f64 {
        self.knots[i + 1] - self.knots[i]
    }

    /// Midpoint of interval `i`.
    pub fn midpoint(&self, i: usize) -> f64 {
        0.5 * (self.knots[i] + self.knots[i + 1])
    }

    pub fn is_uniform(&self) -> bool {
        let dt = 1.0 / self.steps() as f64;
        (0..self.steps()).all(|i| (self.duration(i) - dt).abs() <= 1e-14)
    }
}

/// Vertex distributions sampled at every knot of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexPath {
    grid: TimeGrid,
    samples: Vec<VertexDistribution>,
}

impl VertexPath {
    pub fn new(grid: TimeGrid, samples: Vec<VertexDistribution>) -> Result<Self> {
        check_len("path samples", grid.steps() + 1, samples.len())?;
        let n = samples[0].len();
        for s in &samples {
            check_len("path sample", n, s.len())?;
        }
        Ok(VertexPath { grid, samples })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[VertexDistribution] {
        &self.samples
    }

    pub fn sample(&self, i: usize) -> &VertexDistribution {
        &self.samples[i]
    }

    pub fn start(&self) -> &VertexDistribution {
        &self.samples[0]
    }

    pub fn end(&self) -> &VertexDistribution {
        self.samples.last().unwrap()
    }

    pub fn num_vertices(&self) -> usize {
        self.samples[0].len()
    }
}

/// A velocity and an edge distribution held constant on each interval
/// `[t_i, t_{i+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgePairPath {
    grid: TimeGrid,
    velocities: Vec<EdgeVelocity>,
    weights: Vec<EdgeDistribution>,
}

impl EdgePairPath {
    pub fn new(
        grid: TimeGrid,
        velocities: Vec<EdgeVelocity>,
        weights: Vec<EdgeDistribution>,
    ) -> Result<Self> {
        check_len("velocity samples", grid.steps(), velocities.len())?;
        check_len("edge-distribution samples", grid.steps(), weights.len())?;
        let m = weights[0].len();
        for (v, g) in velocities.iter().zip(&weights) {
            check_len("velocity", m, v.len())?;
            check_len("edge distribution", m, g.len())?;
        }
        Ok(EdgePairPath {
            grid,
            velocities,
            weights,
        })
    }

    /// The same `(v, g)` on every interval.
    pub fn constant(grid: TimeGrid, velocity: EdgeVelocity, weight: EdgeDistribution) -> Result<Self> {
        let steps = grid.steps();
        Self::new(grid, vec![velocity; steps], vec![weight; steps])
    }

    /// Zero velocity with uniform edge weights.
    pub fn stationary(grid: TimeGrid, num_edges: usize) -> Self {
        let steps = grid.steps();
        EdgePairPath {
            grid,
            velocities: vec![EdgeVelocity::zeros(num_edges); steps],
            weights: vec![EdgeDistribution::uniform(num_edges); steps],
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn velocities(&self) -> &[EdgeVelocity] {
        &self.velocities
    }

    pub fn weights(&self) -> &[EdgeDistribution] {
        &self.weights
    }

    pub fn num_edges(&self) -> usize {
        self.weights[0].len()
    }

    /// `v_i ⊙ g_i` on interval `i`.
    pub fn flux(&self, i: usize) -> Array1<f64> {
        self.velocities[i].value() * self.weights[i].mass()
    }

    /// `∫₀¹ v ⊙ g dt`.
    pub fn time_integral(&self) -> Array1<f64> {
        let mut total = Array1::zeros(self.num_edges());
        for i in 0..self.grid.steps() {
            total.scaled_add(self.grid.duration(i), &self.flux(i));
        }
        total
    }
}

/// A vertex path and an edge pair on the same grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Triple {
    path: VertexPath,
    pair: EdgePairPath,
}

impl Triple {
    pub fn new(path: VertexPath, pair: EdgePairPath) -> Result<Self> {
        if path.grid() != pair.grid() {
            return Err(Error::Parameter("vertex path and edge pair use different grids".into()));
        }
        Ok(Triple { path, pair })
    }

    pub fn path(&self) -> &VertexPath {
        &self.path
    }

    pub fn pair(&self) -> &EdgePairPath {
        &self.pair
    }
}

/// Integrates `∂_t f = Ω (v ⊙ g)` exactly for a piecewise-constant pair:
/// `f(t_j) = f0 + Σ_{i<j} Δt_i Ω (v_i ⊙ g_i)`.
///
/// Fails with [`Error::NegativeMass`] at the first knot where some vertex
/// drops below `-1e-9`; smaller negative entries are clamped to zero.
pub fn integrate_pair(
    f0: &VertexDistribution,
    pair: &EdgePairPath,
    omega: &IncidenceMatrix,
) -> Result<VertexPath> {
    check_len("initial distribution", omega.num_vertices(), f0.len())?;
    check_len("edge pair", omega.num_edges(), pair.num_edges())?;
    let grid = pair.grid().clone();
    let mut samples = Vec::with_capacity(grid.steps() + 1);
    samples.push(f0.clone());
    let mut current = f0.mass().clone();
    for i in 0..grid.steps() {
        let rate = omega.apply(pair.flux(i).view())?;
        current.scaled_add(grid.duration(i), &rate);
        let mut sample = current.clone();
        for (x, m) in sample.iter_mut().enumerate() {
            if *m < -PATH_NEGATIVE_TOLERANCE {
                return Err(Error::NegativeMass {
                    knot: i + 1,
                    vertex: x,
                    value: *m,
                });
            }
            if *m < 0.0 {
                *m = 0.0;
            }
        }
        samples.push(VertexDistribution::from_trusted(sample));
    }
    VertexPath::new(grid, samples)
}

/// Forward differences `(f(t_{i+1}) - f(t_i)) / Δt_i`.
pub fn differentiate_path(path: &VertexPath) -> Vec<Array1<f64>> {
    let grid = path.grid();
    (0..grid.steps())
        .map(|i| (path.sample(i + 1).mass() - path.sample(i).mass()) / grid.duration(i))
        .collect()
}

/// `(1 - t) f0 + t f1` at every knot, evaluated as `f0 + t (f1 - f0)` so that
/// both endpoints are reproduced bit for bit.
pub fn convex_interpolation(
    f0: &VertexDistribution,
    f1: &VertexDistribution,
    grid: &TimeGrid,
) -> Result<VertexPath> {
    check_len("target distribution", f0.len(), f1.len())?;
    let delta = f1.mass() - f0.mass();
    let last = grid.steps();
    let samples = grid
        .knots()
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            if i == last {
                f1.clone()
            } else {
                VertexDistribution::from_trusted(f0.mass() + &(&delta * t))
            }
        })
        .collect();
    VertexPath::new(grid.clone(), samples)
}
