//! Eigenvalue-minimizing completion of incomplete comparison matrices.
//!
//! The missing entries are chosen to minimize the principal eigenvalue
//! of the completed matrix. For a positive reciprocal matrix the
//! principal eigenvalue is at least the dimension, with equality exactly
//! at consistency, so this picks the completion closest to consistent.
//! The weight vector is the principal eigenvector of the minimizing
//! completion.
//!
//! Minimization is cyclic coordinate descent over the log completions.
//! In each coordinate the eigenvalue is unimodal in the log entry, so a
//! golden-section search suffices; eigenvalues come from warm-started
//! power iteration.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::pcm::{comparison_graph, ComparisonGraph, IncompletePcm};
use crate::weights::{Method, WeightVector};

#[derive(Debug, Clone)]
pub struct EmConfig {
    /// Relative residual bound for power iteration.
    pub eigen_tol: f64,
    pub eigen_max_iter: usize,
    /// Interval width, in log space, below which a coordinate search stops.
    pub coord_tol: f64,
    /// Minimum eigenvalue improvement per sweep to keep sweeping.
    pub sweep_tol: f64,
    pub sweep_cap: usize,
    /// Half-width of the initial log-space search bracket per coordinate.
    pub bracket_half_width: f64,
    pub max_bracket_expansions: usize,
}

impl Default for EmConfig {
    fn default() -> Self {
        EmConfig {
            eigen_tol: 1e-11,
            eigen_max_iter: 50_000,
            coord_tol: 1e-8,
            sweep_tol: 1e-10,
            sweep_cap: 200,
            bracket_half_width: 8.0,
            max_bracket_expansions: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PerronResult {
    pub lambda_max: f64,
    /// Principal eigenvector, normalized to sum 1.
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Principal eigenpair of a positive matrix by power iteration. The
/// Rayleigh quotient estimates the eigenvalue; convergence is declared
/// when the relative max-norm residual of the eigen equation drops
/// below `tol`.
pub fn perron(
    a: &DMatrix<f64>,
    warm_start: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<PerronResult> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    assert!(n > 0, "matrix must be non-empty");

    let mut v: Vec<f64> = match warm_start {
        Some(w) if w.len() == n && w.iter().all(|&x| x.is_finite() && x > 0.0) => w.to_vec(),
        _ => vec![1.0 / n as f64; n],
    };
    normalize_sum(&mut v);

    let mut av = vec![0.0f64; n];
    let mut last_residual = f64::INFINITY;
    for iter in 1..=max_iter {
        mat_vec(a, &v, &mut av);
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let vav: f64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
        let lambda = vav / vv;
        let mut residual = 0.0f64;
        for i in 0..n {
            residual = residual.max((av[i] - lambda * v[i]).abs());
        }
        let rel = residual / lambda.abs().max(f64::MIN_POSITIVE);
        if rel <= tol {
            v.copy_from_slice(&av);
            normalize_sum(&mut v);
            return Ok(PerronResult {
                lambda_max: lambda,
                vector: v,
                iterations: iter,
                residual: rel,
            });
        }
        last_residual = rel;
        v.copy_from_slice(&av);
        normalize_sum(&mut v);
    }
    Err(Error::EigenNonConvergence {
        residual: last_residual,
        iterations: max_iter,
    })
}

fn mat_vec(a: &DMatrix<f64>, v: &[f64], out: &mut [f64]) {
    let n = v.len();
    for (i, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, vj) in v.iter().enumerate() {
            acc += a[(i, j)] * vj;
        }
        *slot = acc;
    }
    debug_assert_eq!(n, out.len());
}

fn normalize_sum(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= sum;
    }
}

/// The chosen completion: one value per missing pair, plus the
/// eigenvalue trajectory that produced it.
#[derive(Debug, Clone)]
pub struct CompletionState {
    /// Missing upper-triangle pairs, lexicographic.
    pub missing: Vec<(usize, usize)>,
    /// Completion values aligned with `missing`.
    pub x: Vec<f64>,
    pub lambda_max: f64,
    pub sweeps: usize,
    /// Eigenvalue before any sweep, then after each sweep.
    pub sweep_trace: Vec<f64>,
}

/// Log weights read off a breadth-first spanning tree of the comparison
/// graph. On a tree the known comparisons determine relative weights
/// exactly; elsewhere this is a cheap consistent-ish starting point.
fn tree_log_potentials(m: &IncompletePcm, graph: &ComparisonGraph) -> Result<Vec<f64>> {
    let parents = graph.bfs_tree()?;
    let n = m.n();
    let mut y = vec![f64::NAN; n];
    if n == 0 {
        return Ok(y);
    }
    y[0] = 0.0;
    // Parents always precede children in BFS discovery order, so one
    // pass over vertices sorted by discovery works; recover that order
    // by repeated relaxation instead of tracking it explicitly.
    let mut assigned = 1;
    while assigned < n {
        let before = assigned;
        for v in 1..n {
            if y[v].is_nan() {
                if let Some(p) = parents[v] {
                    if !y[p].is_nan() {
                        let a_pv = m.get(p, v).expect("tree edge must be known");
                        y[v] = y[p] - a_pv.ln();
                        assigned += 1;
                    }
                }
            }
        }
        assert!(assigned > before, "spanning tree must cover all vertices");
    }
    Ok(y)
}

/// Builds the full matrix from known entries plus the completion.
pub fn completed_matrix(m: &IncompletePcm, state: &CompletionState) -> DMatrix<f64> {
    let n = m.n();
    let mut a = DMatrix::<f64>::from_element(n, n, 1.0);
    for (i, j, v) in m.known() {
        a[(i, j)] = v;
        a[(j, i)] = 1.0 / v;
    }
    for (&(i, j), &x) in state.missing.iter().zip(state.x.iter()) {
        a[(i, j)] = x;
        a[(j, i)] = 1.0 / x;
    }
    a
}

pub fn optimal_completion(m: &IncompletePcm, cfg: &EmConfig) -> Result<CompletionState> {
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

    let missing = m.missing_pairs();
    let potentials = tree_log_potentials(m, &graph)?;
    let mut x: Vec<f64> = missing
        .iter()
        .map(|&(i, j)| (potentials[i] - potentials[j]).exp())
        .collect();

    let mut state = CompletionState {
        missing,
        x: x.clone(),
        lambda_max: f64::NAN,
        sweeps: 0,
        sweep_trace: Vec::new(),
    };
    let mut a = completed_matrix(m, &state);

    let first = perron(&a, None, cfg.eigen_tol, cfg.eigen_max_iter)?;
    let mut lambda = first.lambda_max;
    let mut warm = first.vector;
    state.sweep_trace.push(lambda);

    if state.missing.is_empty() {
        state.lambda_max = lambda;
        state.x = x;
        return Ok(state);
    }

    // lambda >= n for every completion, with equality only at a
    // consistent one. A seed already on the floor is optimal; sweeping
    // from it would only wander at solver-noise level.
    let consistent_floor = |l: f64| l - n as f64 <= 1e-12 * n as f64;
    if consistent_floor(lambda) {
        state.lambda_max = lambda;
        state.x = x;
        return Ok(state);
    }

    for sweep in 1..=cfg.sweep_cap {
        let lambda_before = lambda;
        for (k, &(i, j)) in state.missing.iter().enumerate() {
            let t0 = x[k].ln();
            let mut eval = |t: f64, warm: &mut Vec<f64>| -> Result<f64> {
                a[(i, j)] = t.exp();
                a[(j, i)] = (-t).exp();
                let r = perron(&a, Some(warm), cfg.eigen_tol, cfg.eigen_max_iter)?;
                *warm = r.vector;
                Ok(r.lambda_max)
            };

            let f0 = eval(t0, &mut warm)?;
            let mut half = cfg.bracket_half_width;
            let mut best = (t0, f0);
            for _ in 0..=cfg.max_bracket_expansions {
                let (t_min, f_min) =
                    golden_min(|t| eval(t, &mut warm), t0 - half, t0 + half, cfg.coord_tol)?;
                best = (t_min, f_min);
                let margin = 4.0 * cfg.coord_tol;
                let interior = t_min > t0 - half + margin && t_min < t0 + half - margin;
                if interior {
                    break;
                }
                half *= 2.0;
            }
            // Keep the old value if the search only found solver noise.
            let t_new = if best.1 <= f0 { best.0 } else { t0 };
            x[k] = t_new.exp();
            lambda = eval(t_new, &mut warm)?;
        }
        state.sweeps = sweep;
        state.sweep_trace.push(lambda);
        if lambda_before - lambda <= cfg.sweep_tol * lambda.max(1.0) || consistent_floor(lambda) {
            state.lambda_max = lambda;
            state.x = x;
            return Ok(state);
        }
    }

    state.lambda_max = lambda;
    state.x = x.clone();
    Err(Error::SweepCapExhausted {
        sweeps: cfg.sweep_cap,
        lambda_max: lambda,
        state: Box::new(state),
    })
}

/// Golden-section minimum of a unimodal function on [lo, hi]. Returns
/// the interval midpoint after shrinking below `tol` and the smaller of
/// the last two probe values.
fn golden_min(
    mut f: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(((a + b) / 2.0, fc.min(fd)))
}

#[derive(Debug, Clone)]
pub struct EmSolution {
    pub weights: WeightVector,
    pub lambda_max: f64,
    pub completion: CompletionState,
    pub perron_iterations: usize,
    pub perron_residual: f64,
}

/// Completes the matrix, then ranks by the principal eigenvector of the
/// completed matrix.
pub fn em_weights(m: &IncompletePcm, cfg: &EmConfig) -> Result<EmSolution> {
    let completion = optimal_completion(m, cfg)?;
    let a = completed_matrix(m, &completion);
    let final_perron = perron(&a, None, cfg.eigen_tol, cfg.eigen_max_iter)?;
    let weights = WeightVector::new(final_perron.vector.clone(), Method::Em, m.scale().clone())?;
    Ok(EmSolution {
        weights,
        lambda_max: final_perron.lambda_max,
        completion,
        perron_iterations: final_perron.iterations,
        perron_residual: final_perron.residual,
    })
}
