//! Logarithmic least squares weights for incomplete comparison matrices.
//!
//! Minimizes the sum of squared log errors over the known comparisons,
//! sum of (ln a_ij - ln(w_i / w_j))^2. Taking logs turns this into a
//! linear problem whose normal equations are a graph Laplacian system:
//! one row per alternative, degree on the diagonal, -1 per known
//! comparison, right-hand side the oriented log sums. The system has a
//! one-dimensional null space (adding a constant to all log weights),
//! removed by pinning the last coordinate to zero. A connected
//! comparison graph makes the remaining system nonsingular and the
//! weights unique up to normalization.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::pcm::{comparison_graph, IncompletePcm};
use crate::weights::{Method, WeightVector};

/// Residual bound for the full normal equations, relative to the
/// right-hand side magnitude.
const RESIDUAL_BOUND: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct LlsmSolution {
    pub weights: WeightVector,
    /// Max-norm residual of the full (unpinned) normal equations.
    pub residual_max_norm: f64,
    /// Objective value at the solution.
    pub objective: f64,
}

/// Sum of squared log errors of `w` against the known entries of `m`.
pub fn objective(m: &IncompletePcm, w: &[f64]) -> f64 {
    m.known()
        .map(|(i, j, a)| {
            let e = a.ln() - (w[i] / w[j]).ln();
            e * e
        })
        .sum()
}

pub fn llsm_weights(m: &IncompletePcm) -> Result<LlsmSolution> {
    let n = m.n();
    if n < 2 {
        return Err(Error::Degenerate(
            "need at least two alternatives to solve for weights".into(),
        ));
    }
    let graph = comparison_graph(m);
    if !graph.is_connected() {
        return Err(Error::Disconnected {
            components: graph.components(),
        });
    }

    let mut degree = vec![0.0f64; n];
    let mut b = vec![0.0f64; n];
    for (i, j, a) in m.known() {
        let log = a.ln();
        degree[i] += 1.0;
        degree[j] += 1.0;
        b[i] += log;
        b[j] -= log;
    }

    // Pin the last log weight to zero and solve the leading principal
    // (n-1) x (n-1) block.
    let k = n - 1;
    let mut lap = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        lap[(i, i)] = degree[i];
    }
    for (i, j, _) in m.known() {
        if i < k && j < k {
            lap[(i, j)] -= 1.0;
            lap[(j, i)] -= 1.0;
        }
    }
    let rhs = DVector::from_iterator(k, b[..k].iter().copied());
    let y_head = lap
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Degenerate("normal equations are singular".into()))?;

    let mut y = vec![0.0f64; n];
    y[..k].copy_from_slice(y_head.as_slice());

    // Validate against the full singular system, not just the solved block.
    let mut residual_max = 0.0f64;
    let mut lap_y = vec![0.0f64; n];
    for (i, yi) in y.iter().enumerate() {
        lap_y[i] += degree[i] * yi;
    }
    for (i, j, _) in m.known() {
        lap_y[i] -= y[j];
        lap_y[j] -= y[i];
    }
    for i in 0..n {
        residual_max = residual_max.max((lap_y[i] - b[i]).abs());
    }
    let b_scale = b.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let bound = RESIDUAL_BOUND * b_scale;
    if residual_max > bound {
        return Err(Error::ResidualTooLarge {
            residual: residual_max,
            bound,
        });
    }

    let values: Vec<f64> = y.iter().map(|v| v.exp()).collect();
    let weights = WeightVector::new(values, Method::Llsm, m.scale().clone())?;
    let objective = objective(m, weights.values());
    Ok(LlsmSolution {
        weights,
        residual_max_norm: residual_max,
        objective,
    })
}
