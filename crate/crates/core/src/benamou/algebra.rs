use crate::error::{check_len, Error, Result};
use crate::measures::{EdgePairPath, EdgeVelocity, TimeGrid};

use super::energy;

fn scaled(velocity: &EdgeVelocity, factor: f64) -> Result<EdgeVelocity> {
    EdgeVelocity::new(velocity.value() * factor)
}

/// Runs a pair backwards in time: `g̃(t) = g(1 - t)`, `ṽ(t) = -v(1 - t)`.
/// Interval `i` becomes interval `M - 1 - i`.
pub fn reverse_pair(pair: &EdgePairPath) -> Result<EdgePairPath> {
    let grid = pair.grid();
    let reversed_grid = if grid.is_uniform() {
        TimeGrid::uniform(grid.steps())?
    } else {
        let mut knots: Vec<f64> = grid.knots().iter().rev().map(|t| 1.0 - t).collect();
        knots[0] = 0.0;
        *knots.last_mut().unwrap() = 1.0;
        TimeGrid::from_knots(knots)?
    };
    let velocities = pair
        .velocities()
        .iter()
        .rev()
        .map(|v| scaled(v, -1.0))
        .collect::<Result<Vec<_>>>()?;
    let weights = pair.weights().iter().rev().cloned().collect();
    EdgePairPath::new(reversed_grid, velocities, weights)
}

/// Runs `p1` on `[0, ρ]` and `p2` on `[ρ, 1]` with `ρ = a / (a + b)`,
/// `a = I_q(p1)`, `b = I_q(p2)`. Velocities are scaled by `1/ρ` and
/// `1/(1-ρ)`, which gives `I_q = ρ^{1-q} a^q + (1-ρ)^{1-q} b^q = (a+b)^q`
/// and leaves each time integral unchanged.
///
/// If one of the energies is zero the other pair is returned unchanged; if
/// both are, the result is the stationary pair on the grid of `p1`.
pub fn concatenate_pairs(p1: &EdgePairPath, p2: &EdgePairPath, q: f64) -> Result<EdgePairPath> {
    check_len("second pair edges", p1.num_edges(), p2.num_edges())?;
    let a = energy(p1, q)?.value;
    let b = energy(p2, q)?.value;
    match (a > 0.0, b > 0.0) {
        (false, false) => return Ok(EdgePairPath::stationary(p1.grid().clone(), p1.num_edges())),
        (true, false) => return Ok(p1.clone()),
        (false, true) => return Ok(p2.clone()),
        (true, true) => {}
    }
    let rho = a / (a + b);
    let mut knots: Vec<f64> = p1.grid().knots().iter().map(|t| rho * t).collect();
    knots.extend(p2.grid().knots()[1..].iter().map(|t| rho + (1.0 - rho) * t));
    *knots.last_mut().unwrap() = 1.0;
    let grid = TimeGrid::from_knots(knots).map_err(|_| {
        Error::Parameter(format!("split point {rho} leaves an interval of zero length"))
    })?;

    let mut velocities = Vec::with_capacity(grid.steps());
    for v in p1.velocities() {
        velocities.push(scaled(v, 1.0 / rho)?);
    }
    for v in p2.velocities() {
        velocities.push(scaled(v, 1.0 / (1.0 - rho))?);
    }
    let weights = p1.weights().iter().chain(p2.weights()).cloned().collect();
    EdgePairPath::new(grid, velocities, weights)
}

/// The part of `pair` on `[t_from, t_to]`, stretched back to `[0, 1]`.
/// Velocities are multiplied by `t_to - t_from`, so the restricted pair moves
/// the same mass as the original did over that window.
pub fn restrict_pair(pair: &EdgePairPath, from_knot: usize, to_knot: usize) -> Result<EdgePairPath> {
    let grid = pair.grid();
    if from_knot >= to_knot || to_knot > grid.steps() {
        return Err(Error::Parameter(format!(
            "cannot restrict to knots {from_knot}..{to_knot} of a {}-step grid",
            grid.steps()
        )));
    }
    let (s, t) = (grid.knot(from_knot), grid.knot(to_knot));
    let width = t - s;
    let mut knots: Vec<f64> = grid.knots()[from_knot..=to_knot]
        .iter()
        .map(|k| (k - s) / width)
        .collect();
    knots[0] = 0.0;
    *knots.last_mut().unwrap() = 1.0;
    let velocities = pair.velocities()[from_knot..to_knot]
        .iter()
        .map(|v| scaled(v, width))
        .collect::<Result<Vec<_>>>()?;
    let weights = pair.weights()[from_knot..to_knot].to_vec();
    EdgePairPath::new(TimeGrid::from_knots(knots)?, velocities, weights)
}
