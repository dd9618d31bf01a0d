//! Probability vectors on vertices and edges, velocities, and the
//! time-discretized paths built from them.

mod path;

pub use path::{
    convex_interpolation, differentiate_path, integrate_pair, EdgePairPath, TimeGrid, Triple,
    VertexPath,
};

use ndarray::{Array1, ArrayView1};

use crate::error::{check_len, Error, Result};
use crate::graph::RootedTree;

/// Entries in `[-NEGATIVE_TOLERANCE, 0)` are treated as round-off and clamped.
pub const NEGATIVE_TOLERANCE: f64 = 1e-12;
/// Allowed deviation of the total mass from 1.
pub const SUM_TOLERANCE: f64 = 1e-9;

fn validate_probability(what: &str, mut mass: Array1<f64>) -> Result<Array1<f64>> {
    if mass.is_empty() {
        return Err(Error::Distribution(format!("{what} is empty")));
    }
    for (i, m) in mass.iter_mut().enumerate() {
        if !m.is_finite() {
            return Err(Error::Distribution(format!("{what} entry {i} is not finite")));
        }
        if *m < -NEGATIVE_TOLERANCE {
            return Err(Error::Distribution(format!(
                "{what} entry {i} is negative ({m})"
            )));
        }
        if *m < 0.0 {
            *m = 0.0;
        }
    }
    let total = mass.sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::Distribution(format!(
            "{what} sums to {total}, not 1"
        )));
    }
    Ok(mass)
}

/// A probability vector on the vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexDistribution(Array1<f64>);

impl VertexDistribution {
    pub fn new(mass: impl Into<Array1<f64>>) -> Result<Self> {
        validate_probability("vertex distribution", mass.into()).map(VertexDistribution)
    }

    pub fn point_mass(n: usize, x: usize) -> Self {
        let mut mass = Array1::zeros(n);
        mass[x] = 1.0;
        VertexDistribution(mass)
    }

    pub fn uniform(n: usize) -> Self {
        VertexDistribution(Array1::from_elem(n, 1.0 / n as f64))
    }

    // Caller guarantees entries are nonnegative and the mass is conserved.
    pub(crate) fn from_trusted(mass: Array1<f64>) -> Self {
        VertexDistribution(mass)
    }

    pub fn mass(&self) -> &Array1<f64> {
        &self.0
    }

    pub fn view(&self) -> ArrayView1<'_, f64> {
        self.0.view()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Array1<f64> {
        self.0
    }
}

/// A probability vector on the edges.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDistribution(Array1<f64>);

impl EdgeDistribution {
    pub fn new(mass: impl Into<Array1<f64>>) -> Result<Self> {
        validate_probability("edge distribution", mass.into()).map(EdgeDistribution)
    }

    pub fn uniform(m: usize) -> Self {
        EdgeDistribution(Array1::from_elem(m, 1.0 / m as f64))
    }

    pub fn mass(&self) -> &Array1<f64> {
        &self.0
    }

    pub fn view(&self) -> ArrayView1<'_, f64> {
        self.0.view()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Signed speed along each oriented edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeVelocity(Array1<f64>);

impl EdgeVelocity {
    pub fn new(value: impl Into<Array1<f64>>) -> Result<Self> {
        let value = value.into();
        if let Some(i) = value.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parameter(format!("velocity entry {i} is not finite")));
        }
        Ok(EdgeVelocity(value))
    }

    pub fn zeros(m: usize) -> Self {
        EdgeVelocity(Array1::zeros(m))
    }

    pub fn value(&self) -> &Array1<f64> {
        &self.0
    }

    pub fn view(&self) -> ArrayView1<'_, f64> {
        self.0.view()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Tail masses `F_x` of `f` on a rooted tree (inclusive of `x` itself).
pub fn tails(tree: &RootedTree, f: &VertexDistribution) -> Result<Array1<f64>> {
    tree.tails(f.view())
}

/// Total variation `½ Σ_x |f0_x - f1_x|`.
pub fn tv_distance(f0: &VertexDistribution, f1: &VertexDistribution) -> Result<f64> {
    check_len("vertex distribution", f0.len(), f1.len())?;
    Ok(0.5 * f0.mass().iter().zip(f1.mass()).map(|(a, b)| (a - b).abs()).sum::<f64>())
}
