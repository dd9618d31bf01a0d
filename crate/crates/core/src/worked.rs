//! Four closed-form examples: binomial laws on a path, truncated Poisson
//! laws on a path, a signed family on the star with three leaves, and
//! product measures on the 4-cycle.
//!
//! Each example samples its analytic path at the knots and its analytic
//! pair at interval midpoints, then compares the analytic energy with the
//! static solvers.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, ArrayView1};

use crate::benamou::energy;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, IncidenceMatrix, RootedTree};
use crate::measures::{
    EdgeDistribution, EdgePairPath, EdgeVelocity, TimeGrid, Triple, VertexDistribution, VertexPath,
};
use crate::transport::{beckmann_from_difference, kantorovich_from_difference, tree_from_difference};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleName {
    Binomial,
    Poisson,
    Star,
    Square,
}

impl ExampleName {
    pub const ALL: [ExampleName; 4] = [
        ExampleName::Binomial,
        ExampleName::Poisson,
        ExampleName::Star,
        ExampleName::Square,
    ];
}

impl FromStr for ExampleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binomial" => Ok(ExampleName::Binomial),
            "poisson" => Ok(ExampleName::Poisson),
            "star" => Ok(ExampleName::Star),
            "square" => Ok(ExampleName::Square),
            other => Err(Error::Parameter(format!(
                "unknown example {other:?} (expected binomial, poisson, star or square)"
            ))),
        }
    }
}

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExampleName::Binomial => "binomial",
            ExampleName::Poisson => "poisson",
            ExampleName::Star => "star",
            ExampleName::Square => "square",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExampleOptions {
    /// Number of time steps `M`.
    pub steps: usize,
    /// Largest vertex `N` kept in the Poisson example.
    pub truncation: usize,
}

impl Default for ExampleOptions {
    fn default() -> Self {
        ExampleOptions {
            steps: 100,
            truncation: 30,
        }
    }
}

pub const BINOMIAL_TRIALS: usize = 5;
pub const BINOMIAL_P: (f64, f64) = (0.8, 0.3);
pub const POISSON_RATES: (f64, f64) = (4.0, 2.0);
/// `s(t) = -(1 + 1/(a t + b)) / 3`.
pub const STAR_AB: (f64, f64) = (-2.0, -3.0);
/// `(p, q)` at `t = 0` and `t = 1`.
pub const SQUARE_PQ: ((f64, f64), (f64, f64)) = ((0.5, 0.5), (0.9, 0.1));

/// An example sampled on a uniform grid. The path is kept as raw vectors
/// because the star family leaves the simplex.
#[derive(Debug, Clone)]
pub struct WorkedExample {
    pub name: ExampleName,
    pub graph: DirectedGraph,
    pub grid: TimeGrid,
    pub path: Vec<Array1<f64>>,
    pub pair: EdgePairPath,
    /// W₁ predicted by the closed form.
    pub closed_form: f64,
    /// Mass dropped by the truncation (Poisson only).
    pub truncated_mass: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleReport {
    pub name: ExampleName,
    pub steps: usize,
    pub closed_form: f64,
    /// `I₂` of the sampled analytic pair.
    pub analytic_energy: f64,
    pub kantorovich: f64,
    pub beckmann: f64,
    pub tree: Option<f64>,
    /// Largest pairwise difference among the analytic energy and the
    /// static solvers.
    pub max_gap: f64,
    pub closed_form_gap: f64,
    pub transport_residual: f64,
    pub tail_residual: Option<f64>,
    /// `max |f(t) - ((1-t) f(0) + t f(1))|` over knots (star only).
    pub convexity_deviation: Option<f64>,
    pub truncated_mass: Option<f64>,
    pub notes: Vec<String>,
}

pub fn build_example(name: ExampleName, options: ExampleOptions) -> Result<WorkedExample> {
    if options.steps == 0 {
        return Err(Error::Parameter("steps must be at least 1".into()));
    }
    match name {
        ExampleName::Binomial => binomial(options.steps),
        ExampleName::Poisson => {
            if options.truncation < 5 {
                return Err(Error::Parameter(format!(
                    "truncation must be at least 5, got {}",
                    options.truncation
                )));
            }
            poisson(options.steps, options.truncation)
        }
        ExampleName::Star => star(options.steps),
        ExampleName::Square => square(options.steps),
    }
}

pub fn run_example(name: ExampleName, options: ExampleOptions) -> Result<ExampleReport> {
    build_example(name, options)?.evaluate()
}

fn sample_path(grid: &TimeGrid, f: impl Fn(f64) -> Array1<f64>) -> Vec<Array1<f64>> {
    grid.knots().iter().map(|&t| f(t)).collect()
}

fn sample_pair(
    grid: &TimeGrid,
    pair: impl Fn(f64) -> (Array1<f64>, Array1<f64>),
) -> Result<EdgePairPath> {
    let mut velocities = Vec::with_capacity(grid.steps());
    let mut weights = Vec::with_capacity(grid.steps());
    for i in 0..grid.steps() {
        let (v, g) = pair(grid.midpoint(i));
        velocities.push(EdgeVelocity::new(v)?);
        weights.push(EdgeDistribution::new(g)?);
    }
    EdgePairPath::new(grid.clone(), velocities, weights)
}

fn binomial_pmf(n: usize, p: f64) -> Array1<f64> {
    let mut out = Array1::zeros(n + 1);
    let mut choose = 1.0;
    for k in 0..=n {
        out[k] = choose * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
        choose = choose * (n - k) as f64 / (k + 1) as f64;
    }
    out
}

/// Poisson probabilities of `0..=n`, unnormalized.
fn poisson_pmf(n: usize, rate: f64) -> Array1<f64> {
    let mut out = Array1::zeros(n + 1);
    out[0] = (-rate).exp();
    for k in 1..=n {
        out[k] = out[k - 1] * rate / k as f64;
    }
    out
}

fn normalized(a: Array1<f64>) -> Array1<f64> {
    let s = a.sum();
    a / s
}

// Path 0 -> 1 -> ... -> n with f(t) = Bin(n, p(t)). The tail at k+1 is
// P(X > k), whose p-derivative is n Bin(k; n-1, p); so v = n p' on every
// edge and g = Bin(n-1, p).
fn binomial(steps: usize) -> Result<WorkedExample> {
    let n = BINOMIAL_TRIALS;
    let (p0, p1) = BINOMIAL_P;
    let dp = p1 - p0;
    let p = move |t: f64| p0 + dp * t;
    let graph = DirectedGraph::path(n + 1)?;
    let grid = TimeGrid::uniform(steps)?;
    let path = sample_path(&grid, |t| binomial_pmf(n, p(t)));
    let pair = sample_pair(&grid, |t| {
        (Array1::from_elem(n, n as f64 * dp), binomial_pmf(n - 1, p(t)))
    })?;
    Ok(WorkedExample {
        name: ExampleName::Binomial,
        graph,
        grid,
        path,
        pair,
        closed_form: n as f64 * dp.abs(),
        truncated_mass: None,
        notes: vec![format!("n = {n}, p: {p0} -> {p1}, W1 = n |p0 - p1|")],
    })
}

// Path 0 -> ... -> N with f(t) = Poisson(λ(t)) restricted to 0..=N and
// renormalized. Untruncated, the tail at k+1 has λ-derivative Poi(k; λ),
// so v = λ' and g = Poi(λ) on edges 0..N-1 (renormalized).
fn poisson(steps: usize, truncation: usize) -> Result<WorkedExample> {
    let (l0, l1) = POISSON_RATES;
    let dl = l1 - l0;
    let rate = move |t: f64| l0 + dl * t;
    let graph = DirectedGraph::path(truncation + 1)?;
    let grid = TimeGrid::uniform(steps)?;
    let path = sample_path(&grid, |t| normalized(poisson_pmf(truncation, rate(t))));
    let pair = sample_pair(&grid, |t| {
        let g = poisson_pmf(truncation - 1, rate(t));
        (Array1::from_elem(truncation, dl), normalized(g))
    })?;
    let dropped = [l0, l1]
        .iter()
        .map(|&r| (1.0 - poisson_pmf(truncation, r).sum()).max(0.0))
        .fold(0.0, f64::max);
    Ok(WorkedExample {
        name: ExampleName::Poisson,
        graph,
        grid,
        path,
        pair,
        closed_form: dl.abs(),
        truncated_mass: Some(dropped),
        notes: vec![format!(
            "lambda: {l0} -> {l1}, support truncated to 0..={truncation} and renormalized"
        )],
    })
}

// Star with centre 0 and edges 0 -> i. Mass Z = 1/(1 + 3s) at the centre
// and s Z on each leaf. With s(t) = -(1 + 1/(a t + b))/3 this is
// Z = -(a t + b) and s Z = (a t + b + 1)/3, both linear in t. Each leaf tail
// moves at a/3, so the pair is v = a, g = 1/3 on every edge.
fn star(steps: usize) -> Result<WorkedExample> {
    let (a, b) = STAR_AB;
    let s = move |t: f64| -(1.0 + 1.0 / (a * t + b)) / 3.0;
    let z = move |t: f64| 1.0 / (1.0 + 3.0 * s(t));
    let graph = DirectedGraph::star(3)?;
    let grid = TimeGrid::uniform(steps)?;
    let path = sample_path(&grid, |t| {
        let (zt, st) = (z(t), s(t));
        Array1::from(vec![zt, st * zt, st * zt, st * zt])
    });
    let pair = sample_pair(&grid, |_| (Array1::from_elem(3, a), Array1::from_elem(3, 1.0 / 3.0)))?;
    let closed_form = (z(1.0) - z(0.0)).abs();
    let mut notes = vec![format!("a = {a}, b = {b}, W1 = |Z(1) - Z(0)|")];
    if path.iter().flatten().any(|m| *m < 0.0) {
        notes.push(format!(
            "leaf masses are negative (s(0) = {:.6}, s(1) = {:.6}); endpoints are signed unit-mass \
             measures and distances are computed from f(1) - f(0)",
            s(0.0),
            s(1.0)
        ));
    }
    Ok(WorkedExample {
        name: ExampleName::Star,
        graph,
        grid,
        path,
        pair,
        closed_form,
        truncated_mass: None,
        notes,
    })
}

// 4-cycle with edges 0 -> 1, 1 -> 2, 3 -> 2, 0 -> 3 and
// f = (p q, q (1-p), (1-p)(1-q), p (1-q)). The flux
// J = (-p' q, -q' (1-p), -p' (1-q), -p q') solves Ω J = f' and has
// Σ|J| = |p'| + |q'| when p' and q' have opposite signs.
fn square(steps: usize) -> Result<WorkedExample> {
    let ((p0, q0), (p1, q1)) = SQUARE_PQ;
    let (dp, dq) = (p1 - p0, q1 - q0);
    let pq = move |t: f64| (p0 + dp * t, q0 + dq * t);
    let graph = DirectedGraph::with_numbered_vertices(4, &[(0, 1), (1, 2), (3, 2), (0, 3)], None)?;
    let grid = TimeGrid::uniform(steps)?;
    let path = sample_path(&grid, |t| {
        let (p, q) = pq(t);
        Array1::from(vec![p * q, q * (1.0 - p), (1.0 - p) * (1.0 - q), p * (1.0 - q)])
    });
    let pair = sample_pair(&grid, |t| {
        let (p, q) = pq(t);
        let flux = Array1::from(vec![-dp * q, -dq * (1.0 - p), -dp * (1.0 - q), -p * dq]);
        let speed: f64 = flux.iter().map(|j| j.abs()).sum();
        let v = flux.mapv(|j| if j < 0.0 { -speed } else { speed });
        let g = flux.mapv(|j| j.abs() / speed);
        (v, g)
    })?;
    Ok(WorkedExample {
        name: ExampleName::Square,
        graph,
        grid,
        path,
        pair,
        closed_form: dp.abs() + dq.abs(),
        truncated_mass: None,
        notes: vec![format!("(p, q): ({p0}, {q0}) -> ({p1}, {q1}), W1 = |dp| + |dq|")],
    })
}

fn max_abs(a: ArrayView1<'_, f64>) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

impl WorkedExample {
    pub fn start(&self) -> &Array1<f64> {
        &self.path[0]
    }

    pub fn end(&self) -> &Array1<f64> {
        self.path.last().expect("grid has at least two knots")
    }

    /// The sampled triple, when every sample is a probability vector.
    pub fn triple(&self) -> Result<Triple> {
        let samples = self
            .path
            .iter()
            .map(|f| VertexDistribution::new(f.clone()))
            .collect::<Result<Vec<_>>>()?;
        Triple::new(VertexPath::new(self.grid.clone(), samples)?, self.pair.clone())
    }

    pub fn evaluate(&self) -> Result<ExampleReport> {
        let delta = self.end() - self.start();
        let analytic_energy = energy(&self.pair, 2.0)?.value;
        let kantorovich = kantorovich_from_difference(&self.graph, delta.view())?;
        let beckmann = beckmann_from_difference(&self.graph, delta.view())?.0;
        let rooted = RootedTree::from_graph(&self.graph).ok();
        let tree = rooted
            .as_ref()
            .map(|t| tree_from_difference(t, delta.view()))
            .transpose()?;

        let mut values = vec![analytic_energy, kantorovich, beckmann];
        values.extend(tree);
        let mut max_gap: f64 = 0.0;
        for (i, a) in values.iter().enumerate() {
            for b in &values[i + 1..] {
                max_gap = max_gap.max((a - b).abs());
            }
        }
        let closed_form_gap = values
            .iter()
            .map(|v| (v - self.closed_form).abs())
            .fold(0.0, f64::max);

        let omega = IncidenceMatrix::from_graph(&self.graph);
        let mut transport_residual: f64 = 0.0;
        for i in 0..self.grid.steps() {
            let rate = (&self.path[i + 1] - &self.path[i]) / self.grid.duration(i);
            let predicted = omega.apply(self.pair.flux(i).view())?;
            transport_residual = transport_residual.max(max_abs((rate - predicted).view()));
        }

        let tail_residual = match &rooted {
            Some(t) => {
                let mut worst: f64 = 0.0;
                for i in 0..self.grid.steps() {
                    let before = t.tails(self.path[i].view())?;
                    let after = t.tails(self.path[i + 1].view())?;
                    let flux = self.pair.flux(i);
                    for e in t.edges() {
                        let rate = (after[e.head] - before[e.head]) / self.grid.duration(i);
                        worst = worst.max((rate - flux[e.index]).abs());
                    }
                }
                Some(worst)
            }
            None => None,
        };

        let convexity_deviation = (self.name == ExampleName::Star).then(|| {
            self.grid
                .knots()
                .iter()
                .zip(&self.path)
                .map(|(&t, f)| max_abs((f - &(self.start() + &(&delta * t))).view()))
                .fold(0.0, f64::max)
        });

        Ok(ExampleReport {
            name: self.name,
            steps: self.grid.steps(),
            closed_form: self.closed_form,
            analytic_energy,
            kantorovich,
            beckmann,
            tree,
            max_gap,
            closed_form_gap,
            transport_residual,
            tail_residual,
            convexity_deviation,
            truncated_mass: self.truncated_mass,
            notes: self.notes.clone(),
        })
    }
}
