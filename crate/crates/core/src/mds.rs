//! Low-dimensional embedding of a ranking distance table.
//!
//! This is metric multidimensional scaling at the interval level: the
//! configuration is fit against disparities a + b * d, an affine
//! transform of the input dissimilarities with positive slope, rather
//! than the raw values. Initialization is classical scaling (double
//! centering plus a symmetric eigendecomposition); refinement
//! alternates a linear disparity refit with a majorization step for the
//! coordinates. Each candidate step is accepted only if the (refit)
//! stress drops, so the recorded stress trace never increases.

use nalgebra::DMatrix;

use crate::compare::DistanceMatrix;
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 500;
const MIN_IMPROVEMENT: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct MdsEmbedding {
    pub labels: Vec<String>,
    /// Row-major k x dims coordinates.
    pub coords: Vec<f64>,
    pub dims: usize,
    /// Normalized residual between configuration distances and
    /// disparities (Kruskal's first formula).
    pub stress: f64,
    /// Squared correlation between disparities and configuration
    /// distances.
    pub rsq: f64,
    pub disparity_intercept: f64,
    pub disparity_slope: f64,
    pub iterations: usize,
    /// Stress after initialization, then after each accepted step.
    pub stress_trace: Vec<f64>,
}

impl MdsEmbedding {
    pub fn coord(&self, point: usize, dim: usize) -> f64 {
        self.coords[point * self.dims + dim]
    }
}

/// Pairwise Euclidean distances of a configuration, upper triangle
/// (i < j) in lexicographic order.
fn config_distances(x: &DMatrix<f64>) -> Vec<f64> {
    let k = x.nrows();
    let dims = x.ncols();
    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            let mut s = 0.0;
            for t in 0..dims {
                let d = x[(i, t)] - x[(j, t)];
                s += d * d;
            }
            out.push(s.sqrt());
        }
    }
    out
}

struct DisparityFit {
    intercept: f64,
    slope: f64,
    /// Fitted disparities aligned with the upper-triangle pair order,
    /// clamped at zero.
    values: Vec<f64>,
}

/// Least-squares fit of configuration distances as an affine function of
/// the input dissimilarities. A non-positive slope or constant input
/// falls back to the identity transform so far-apart inputs never map to
/// closer disparities.
fn fit_disparities(dhat: &[f64], dist: &[f64]) -> DisparityFit {
    let n = dhat.len() as f64;
    let mean_x: f64 = dhat.iter().sum::<f64>() / n;
    let mean_y: f64 = dist.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (&x, &y) in dhat.iter().zip(dist) {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    let (intercept, slope) = if var > 0.0 && cov > 0.0 {
        let b = cov / var;
        (mean_y - b * mean_x, b)
    } else {
        (0.0, 1.0)
    };
    let values = dhat
        .iter()
        .map(|&x| (intercept + slope * x).max(0.0))
        .collect();
    DisparityFit {
        intercept,
        slope,
        values,
    }
}

/// Kruskal stress-1 of a configuration against disparities.
fn stress1(dist: &[f64], disparities: &[f64]) -> f64 {
    let num: f64 = dist
        .iter()
        .zip(disparities)
        .map(|(&d, &t)| (d - t) * (d - t))
        .sum();
    let den: f64 = dist.iter().map(|&d| d * d).sum();
    if den == 0.0 {
        0.0
    } else {
        (num / den).sqrt()
    }
}

fn pearson_sq(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if va == 0.0 || vb == 0.0 {
        0.0
    } else {
        (cov * cov) / (va * vb)
    }
}

/// Classical scaling: double-center the squared dissimilarities and
/// read coordinates off the top eigenpairs.
fn classical_init(dhat: &[f64], k: usize, dims: usize) -> DMatrix<f64> {
    let mut sq = DMatrix::<f64>::zeros(k, k);
    let mut idx = 0;
    for i in 0..k {
        for j in (i + 1)..k {
            let v = dhat[idx] * dhat[idx];
            sq[(i, j)] = v;
            sq[(j, i)] = v;
            idx += 1;
        }
    }
    let row_means: Vec<f64> = (0..k).map(|i| sq.row(i).sum() / k as f64).collect();
    let grand = row_means.iter().sum::<f64>() / k as f64;
    let mut b = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            b[(i, j)] = -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand);
        }
    }
    let eig = b.symmetric_eigen();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &c| {
        eig.eigenvalues[c]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&c))
    });
    let mut x = DMatrix::<f64>::zeros(k, dims);
    for (t, &col) in order.iter().take(dims).enumerate() {
        let lambda = eig.eigenvalues[col].max(0.0);
        let scale = lambda.sqrt();
        // Fix the sign so the largest-magnitude entry is positive; the
        // embedding is reflection-invariant but outputs should not be.
        let column = eig.eigenvectors.column(col);
        let lead = column
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| {
                a.abs()
                    .partial_cmp(&b.abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(ib.cmp(ia))
            })
            .map(|(_, v)| *v)
            .unwrap_or(1.0);
        let sign = if lead < 0.0 { -1.0 } else { 1.0 };
        for i in 0..k {
            x[(i, t)] = sign * scale * column[i];
        }
    }
    x
}

/// One majorization step toward the disparities.
fn guttman_step(x: &DMatrix<f64>, disparities: &[f64], dist: &[f64]) -> DMatrix<f64> {
    let k = x.nrows();
    let mut b = DMatrix::<f64>::zeros(k, k);
    let mut idx = 0;
    for i in 0..k {
        for j in (i + 1)..k {
            let d = dist[idx];
            if d > 0.0 {
                let v = -disparities[idx] / d;
                b[(i, j)] = v;
                b[(j, i)] = v;
            }
            idx += 1;
        }
    }
    for i in 0..k {
        let row_sum: f64 = (0..k).filter(|&j| j != i).map(|j| b[(i, j)]).sum();
        b[(i, i)] = -row_sum;
    }
    (b * x) / k as f64
}

/// Embeds the distance table in `dims` dimensions.
pub fn embed(dm: &DistanceMatrix, dims: usize) -> Result<MdsEmbedding> {
    if !dm.metric().is_distance() {
        return Err(Error::Degenerate(
            "embedding needs a distance metric, not a correlation".into(),
        ));
    }
    let k = dm.k();
    if k < 3 {
        return Err(Error::Degenerate(
            "embedding needs at least three rankings".into(),
        ));
    }
    if dims == 0 || dims >= k {
        return Err(Error::Degenerate(format!(
            "embedding dimension must be between 1 and {}",
            k - 1
        )));
    }
    let mut dhat = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            dhat.push(dm.get(i, j));
        }
    }
    if dhat.iter().all(|&d| d == 0.0) {
        return Err(Error::Degenerate(
            "all pairwise distances are zero".into(),
        ));
    }
    if dhat.iter().any(|&d| d < 0.0) {
        return Err(Error::Degenerate(
            "embedding needs non-negative distances".into(),
        ));
    }

    let mut x = classical_init(&dhat, k, dims);
    let mut dist = config_distances(&x);
    let mut fit = fit_disparities(&dhat, &dist);
    let mut stress = stress1(&dist, &fit.values);
    let mut trace = vec![stress];

    for _ in 0..MAX_ITERATIONS {
        let candidate = guttman_step(&x, &fit.values, &dist);
        let cand_dist = config_distances(&candidate);
        let cand_fit = fit_disparities(&dhat, &cand_dist);
        let cand_stress = stress1(&cand_dist, &cand_fit.values);
        if cand_stress >= stress {
            break;
        }
        let improvement = stress - cand_stress;
        x = candidate;
        dist = cand_dist;
        fit = cand_fit;
        stress = cand_stress;
        trace.push(stress);
        if improvement < MIN_IMPROVEMENT {
            break;
        }
    }

    let rsq = pearson_sq(&fit.values, &dist);
    let iterations = trace.len() - 1;
    Ok(MdsEmbedding {
        labels: dm.labels().to_vec(),
        coords: x.transpose().as_slice().to_vec(),
        dims,
        stress,
        rsq,
        disparity_intercept: fit.intercept,
        disparity_slope: fit.slope,
        iterations,
        stress_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compare::RankMetric;

    fn dm(labels: &[&str], upper: &[f64]) -> DistanceMatrix {
        let k = labels.len();
        let mut values = vec![0.0; k * k];
        let mut idx = 0;
        for i in 0..k {
            for j in (i + 1)..k {
                values[i * k + j] = upper[idx];
                values[j * k + i] = upper[idx];
                idx += 1;
            }
        }
        DistanceMatrix::new(
            labels.iter().map(|s| s.to_string()).collect(),
            values,
            RankMetric::Tau,
        )
        .unwrap()
    }

    #[test]
    fn collinear_points_embed_with_zero_stress() {
        let table = dm(&["a", "b", "c"], &[1.0, 2.0, 1.0]);
        let e = embed(&table, 2).unwrap();
        assert!(e.stress < 1e-6, "stress {}", e.stress);
        assert!(e.rsq > 0.999, "rsq {}", e.rsq);
        assert_eq!(e.labels, vec!["a", "b", "c"]);
    }

    #[test]
    fn square_embeds_exactly_in_two_dims() {
        let s = std::f64::consts::SQRT_2;
        // Vertices of a unit square: sides 1, diagonals sqrt 2.
        let table = dm(&["a", "b", "c", "d"], &[1.0, s, 1.0, 1.0, s, 1.0]);
        let e = embed(&table, 2).unwrap();
        assert!(e.stress < 1e-6, "stress {}", e.stress);
        // Recovered distances should reproduce the square's shape: the
        // two largest must be the diagonals.
        let mut dists = vec![];
        for i in 0..4 {
            for j in (i + 1)..4 {
                let dx = e.coord(i, 0) - e.coord(j, 0);
                let dy = e.coord(i, 1) - e.coord(j, 1);
                dists.push((dx * dx + dy * dy).sqrt());
            }
        }
        dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ratio = dists[5] / dists[0];
        assert!((ratio - s).abs() < 1e-5, "ratio {ratio}");
    }

    #[test]
    fn equilateral_distances_fit() {
        let table = dm(&["a", "b", "c"], &[1.0, 1.0, 1.0]);
        let e = embed(&table, 2).unwrap();
        assert!(e.stress < 1e-9);
    }

    #[test]
    fn stress_trace_never_increases() {
        // Distances that no 2-D configuration reproduces exactly.
        let table = dm(
            &["a", "b", "c", "d", "e"],
            &[1.0, 4.0, 1.2, 3.0, 2.0, 0.4, 2.2, 1.1, 3.3, 0.7],
        );
        let e = embed(&table, 2).unwrap();
        assert!(e.stress > 0.0);
        for w in e.stress_trace.windows(2) {
            assert!(w[1] <= w[0], "trace rose: {w:?}");
        }
        assert_eq!(e.stress_trace.len(), e.iterations + 1);
        assert!(*e.stress_trace.last().unwrap() == e.stress);
    }

    #[test]
    fn too_few_points_rejected() {
        let table = dm(&["a", "b"], &[1.0]);
        assert!(matches!(embed(&table, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn zero_table_rejected() {
        let table = dm(&["a", "b", "c"], &[0.0, 0.0, 0.0]);
        assert!(matches!(embed(&table, 2), Err(Error::Degenerate(_))));
    }

    #[test]
    fn bad_dims_rejected() {
        let table = dm(&["a", "b", "c"], &[1.0, 1.0, 1.0]);
        assert!(embed(&table, 0).is_err());
        assert!(embed(&table, 3).is_err());
    }

    #[test]
    fn disparity_slope_positive() {
        let table = dm(
            &["a", "b", "c", "d"],
            &[1.0, 2.0, 2.5, 1.5, 2.0, 1.0],
        );
        let e = embed(&table, 2).unwrap();
        assert!(e.disparity_slope > 0.0);
    }
}
