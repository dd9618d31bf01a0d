//! Seeded random instances: graphs, distributions and admissible pairs.

use ndarray::{Array1, ArrayView1};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{check_len, Result};
use crate::graph::{DirectedGraph, SpanningTreeDecomposition};
use crate::measures::{EdgeDistribution, EdgePairPath, EdgeVelocity, TimeGrid, VertexDistribution};

/// A random recursive tree on `n ≥ 2` vertices with every edge pointing
/// away from the root. Vertex indices are shuffled, so the root is not
/// always 0.
pub fn random_rooted_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<DirectedGraph> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let edges: Vec<(usize, usize)> = (1..n)
        .map(|i| (order[rng.random_range(0..i)], order[i]))
        .collect();
    DirectedGraph::with_numbered_vertices(n, &edges, Some(order[0]))
}

/// A random spanning tree with random orientations plus up to `extra`
/// additional edges between non-adjacent vertices (fewer if the graph
/// fills up). No root is set.
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, extra: usize) -> Result<DirectedGraph> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let orient = |rng: &mut R, a: usize, b: usize| if rng.random_bool(0.5) { (a, b) } else { (b, a) };
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n - 1 + extra);
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        edges.push(orient(rng, parent, order[i]));
    }
    let adjacent = |edges: &[(usize, usize)], a: usize, b: usize| {
        edges.iter().any(|&(t, h)| (t, h) == (a, b) || (t, h) == (b, a))
    };
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !adjacent(&edges, a, b))
        .collect();
    candidates.shuffle(rng);
    for &(a, b) in candidates.iter().take(extra) {
        edges.push(orient(rng, a, b));
    }
    DirectedGraph::with_numbered_vertices(n, &edges, None)
}

/// Exponential weights, normalized; with probability `sparsity` each vertex
/// is given zero mass (at least one vertex always keeps its mass).
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize, sparsity: f64) -> VertexDistribution {
    let keep = rng.random_range(0..n);
    let mut w: Array1<f64> = (0..n)
        .map(|x| {
            if x != keep && rng.random_bool(sparsity) {
                0.0
            } else {
                -(1.0 - rng.random::<f64>()).ln()
            }
        })
        .collect();
    let total = w.sum();
    w /= total;
    VertexDistribution::new(w).expect("normalized weights form a distribution")
}

/// A random pair with `Ω ∫ v ⊙ g dt = f1 - f0`.
///
/// The total flux is `P Δf̃ + ε` for a random circulation `ε`, spread over
/// time by [`random_pair_with_integral`].
pub fn random_admissible_pair<R: Rng + ?Sized>(
    rng: &mut R,
    graph: &DirectedGraph,
    f0: &VertexDistribution,
    f1: &VertexDistribution,
    steps: usize,
) -> Result<EdgePairPath> {
    let dropped = rng.random_range(0..graph.num_vertices());
    let decomp = SpanningTreeDecomposition::new(graph, dropped)?;
    let delta = f1.mass() - f0.mass();
    let total = decomp.particular_flow(delta.view())? + random_circulation(rng, &decomp)?;
    random_pair_with_integral(rng, graph, total.view(), steps)
}

/// `Σ_j c_j ε_j` with `c_j` uniform in `[-1, 1)`.
pub fn random_circulation<R: Rng + ?Sized>(rng: &mut R, decomp: &SpanningTreeDecomposition) -> Result<Array1<f64>> {
    let c: Vec<f64> = (0..decomp.cycle_basis().len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    decomp.cycle_combination(&c)
}

/// A random pair with `∫ v ⊙ g dt = total`.
///
/// `total` is spread over a random non-uniform grid with random positive
/// time weights, and a random circulation is added on each interval with
/// time-weights that integrate to zero. On each interval `g` is a random
/// distribution with full support and `v = flux / g`, so speeds vary
/// across edges.
pub fn random_pair_with_integral<R: Rng + ?Sized>(
    rng: &mut R,
    graph: &DirectedGraph,
    total: ArrayView1<'_, f64>,
    steps: usize,
) -> Result<EdgePairPath> {
    check_len("flux integral", graph.num_edges(), total.len())?;
    let decomp = SpanningTreeDecomposition::for_graph(graph);
    let grid = random_grid(rng, steps)?;
    let shares: Vec<f64> = {
        let raw: Vec<f64> = (0..steps).map(|_| rng.random_range(0.05..1.0)).collect();
        let s: f64 = raw.iter().sum();
        raw.into_iter().map(|r| r / s).collect()
    };
    // time-weights with Σ Δt_i c_i = 0
    let wobble = random_circulation(rng, &decomp)?;
    let c: Vec<f64> = {
        let raw: Vec<f64> = (0..steps).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mean: f64 = raw.iter().enumerate().map(|(i, r)| grid.duration(i) * r).sum();
        raw.into_iter().map(|r| r - mean).collect()
    };

    let m = graph.num_edges();
    let mut velocities = Vec::with_capacity(steps);
    let mut weights = Vec::with_capacity(steps);
    for i in 0..steps {
        let flux = &total * (shares[i] / grid.duration(i)) + &(&wobble * c[i]);
        let g: Array1<f64> = (0..m).map(|_| rng.random_range(0.1..1.0)).collect();
        let g = &g / g.sum();
        let v = &flux / &g;
        velocities.push(EdgeVelocity::new(v)?);
        weights.push(EdgeDistribution::new(g)?);
    }
    EdgePairPath::new(grid, velocities, weights)
}

/// Strictly increasing knots from `0` to `1` with random spacing.
pub fn random_grid<R: Rng + ?Sized>(rng: &mut R, steps: usize) -> Result<TimeGrid> {
    if steps == 0 {
        return TimeGrid::uniform(0);
    }
    let gaps: Vec<f64> = (0..steps).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = gaps.iter().sum();
    let mut knots = Vec::with_capacity(steps + 1);
    let mut t = 0.0;
    knots.push(0.0);
    for g in &gaps[..steps - 1] {
        t += g / total;
        knots.push(t);
    }
    knots.push(1.0);
    TimeGrid::from_knots(knots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benamou::reduced_constraint_check;
    use crate::graph::{IncidenceMatrix, RootedTree};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trees_are_outward_rooted() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..12 {
            let g = random_rooted_tree(&mut rng, n).unwrap();
            let tree = RootedTree::from_graph(&g).unwrap();
            assert_eq!(Some(tree.root()), g.root());
        }
    }

    #[test]
    fn graphs_have_requested_cycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 2..10 {
            for extra in 0..5 {
                let g = random_connected_graph(&mut rng, n, extra).unwrap();
                let room = n * (n - 1) / 2 - (n - 1);
                assert_eq!(g.cyclomatic_number(), extra.min(room));
            }
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let a = random_connected_graph(&mut ChaCha8Rng::seed_from_u64(9), 8, 3).unwrap();
        let b = random_connected_graph(&mut ChaCha8Rng::seed_from_u64(9), 8, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn distributions_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let f = random_distribution(&mut rng, 7, 0.5);
            assert!((f.mass().sum() - 1.0).abs() < 1e-12);
            assert!(f.mass().iter().any(|m| *m > 0.0));
        }
    }

    #[test]
    fn admissible_pairs_meet_the_constraint() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let n = rng.random_range(2..9);
            let g = random_connected_graph(&mut rng, n, 3).unwrap();
            let f0 = random_distribution(&mut rng, n, 0.3);
            let f1 = random_distribution(&mut rng, n, 0.3);
            let pair = random_admissible_pair(&mut rng, &g, &f0, &f1, 6).unwrap();
            let omega = IncidenceMatrix::from_graph(&g);
            assert!(reduced_constraint_check(&pair, &omega, &f0, &f1).unwrap() < 1e-10);
        }
    }
}
