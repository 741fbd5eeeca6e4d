//! Metrics for comparing rankings and summarizing weight vectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::parallel::*;
use crate::ranking::Ranking;
use crate::scale::RatioScale;
use crate::score::ResultDistribution;
use crate::tournament::Tournament;
use crate::weights::WeightVector;

/// Metric used for pairwise ranking distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMetric {
    /// Log-Euclidean distance between position vectors.
    Tau,
    /// Spearman rank correlation.
    Spearman,
}

impl RankMetric {
    /// Value of a ranking compared against itself: 0 for a distance,
    /// 1 for a correlation.
    pub fn self_value(self) -> f64 {
        match self {
            RankMetric::Tau => 0.0,
            RankMetric::Spearman => 1.0,
        }
    }

    /// Whether larger values mean further apart.
    pub fn is_distance(self) -> bool {
        matches!(self, RankMetric::Tau)
    }
}

impl fmt::Display for RankMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankMetric::Tau => f.write_str("tau"),
            RankMetric::Spearman => f.write_str("spearman"),
        }
    }
}

/// Positions of `y` aligned to `x`'s team order.
fn aligned_positions(x: &Ranking, y: &Ranking) -> Result<Vec<(u32, u32)>> {
    if x.len() != y.len() {
        return Err(Error::MismatchedTeams);
    }
    x.team_ids()
        .iter()
        .zip(x.positions())
        .map(|(id, &xp)| {
            let yp = y.position_of(id).ok_or(Error::MismatchedTeams)?;
            Ok((xp, yp))
        })
        .collect()
}

/// Spearman rank correlation between two rankings over the same teams:
/// 1 - 6 * sum(d^2) / (n (n^2 - 1)).
pub fn spearman(x: &Ranking, y: &Ranking) -> Result<f64> {
    let pairs = aligned_positions(x, y)?;
    let n = pairs.len() as i64;
    if n < 2 {
        return Err(Error::Degenerate(
            "rank correlation needs at least two teams".into(),
        ));
    }
    let d2: i64 = pairs
        .iter()
        .map(|&(xp, yp)| {
            let d = xp as i64 - yp as i64;
            d * d
        })
        .sum();
    Ok(1.0 - (6 * d2) as f64 / (n * (n * n - 1)) as f64)
}

/// Slope of the least-squares line through the rank pairs (x_i, y_i).
/// For two permutations of 1..n this coincides with the Spearman
/// correlation, which gives an independent cross-check.
pub fn regression_slope(x: &Ranking, y: &Ranking) -> Result<f64> {
    let pairs = aligned_positions(x, y)?;
    let n = pairs.len() as f64;
    if pairs.len() < 2 {
        return Err(Error::Degenerate(
            "regression needs at least two teams".into(),
        ));
    }
    let mean_x: f64 = pairs.iter().map(|&(a, _)| a as f64).sum::<f64>() / n;
    let mean_y: f64 = pairs.iter().map(|&(_, b)| b as f64).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for &(a, b) in &pairs {
        let dx = a as f64 - mean_x;
        cov += dx * (b as f64 - mean_y);
        var += dx * dx;
    }
    if var == 0.0 {
        return Err(Error::Degenerate("zero variance in rank positions".into()));
    }
    Ok(cov / var)
}

/// Log-Euclidean distance between position vectors: the Euclidean norm
/// of the vector of log position ratios. Zero iff the rankings agree;
/// symmetric because each term squares a log ratio.
pub fn tau(x: &Ranking, y: &Ranking) -> Result<f64> {
    let pairs = aligned_positions(x, y)?;
    let sum: f64 = pairs
        .iter()
        .map(|&(xp, yp)| {
            let r = (xp as f64 / yp as f64).ln();
            r * r
        })
        .sum();
    Ok(sum.sqrt())
}

/// Largest possible log-Euclidean distance between two rankings of n
/// teams, attained exactly when one ranking reverses the other.
pub fn tau_max(n: usize) -> f64 {
    let sum: f64 = (1..=n)
        .map(|i| {
            let r = (i as f64 / (n + 1 - i) as f64).ln();
            r * r
        })
        .sum();
    sum.sqrt()
}

/// Symmetric table of pairwise distances between rankings.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    /// Row-major k x k values.
    values: Vec<f64>,
    metric: RankMetric,
}

impl DistanceMatrix {
    /// Wraps precomputed values. The matrix must be square, symmetric,
    /// finite, and have the metric's self-comparison value on the
    /// diagonal.
    pub fn new(labels: Vec<String>, values: Vec<f64>, metric: RankMetric) -> Result<Self> {
        let k = labels.len();
        if values.len() != k * k {
            return Err(Error::Validation(format!(
                "distance matrix needs {} values for {} labels, got {}",
                k * k,
                k,
                values.len()
            )));
        }
        for i in 0..k {
            if values[i * k + i] != metric.self_value() {
                return Err(Error::Validation(format!(
                    "diagonal must be {} under this metric",
                    metric.self_value()
                )));
            }
            for j in 0..k {
                let v = values[i * k + j];
                if !v.is_finite() {
                    return Err(Error::Validation("distances must be finite".into()));
                }
                if v != values[j * k + i] {
                    return Err(Error::Validation("distance matrix must be symmetric".into()));
                }
            }
        }
        Ok(DistanceMatrix {
            labels,
            values,
            metric,
        })
    }

    pub fn k(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn metric(&self) -> RankMetric {
        self.metric
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.k() + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Pairwise distances between all rankings under the chosen metric.
/// Off-diagonal cells are computed in parallel; output is identical to
/// the sequential order because results are collected by pair index.
pub fn distance_table(rankings: &[Ranking], metric: RankMetric) -> Result<DistanceMatrix> {
    let k = rankings.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| ((i + 1)..k).map(move |j| (i, j)))
        .collect();
    let computed: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| match metric {
            RankMetric::Tau => tau(&rankings[i], &rankings[j]),
            RankMetric::Spearman => spearman(&rankings[i], &rankings[j]),
        })
        .collect();
    let mut values = vec![0.0; k * k];
    for i in 0..k {
        values[i * k + i] = metric.self_value();
    }
    for (&(i, j), result) in pairs.iter().zip(computed) {
        let v = result?;
        values[i * k + j] = v;
        values[j * k + i] = v;
    }
    let labels = rankings.iter().map(|r| r.label().to_owned()).collect();
    DistanceMatrix::new(labels, values, metric)
}

/// Summary statistics of a weight vector, with the spread expressed in
/// decisive-match units.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightStats {
    pub max: f64,
    pub min: f64,
    pub max_min_ratio: f64,
    pub mean: f64,
    pub std_dev: f64,
    /// Average scale ratio over decisive matches.
    pub average_win_ratio: f64,
    /// How many average wins separate the top weight from the bottom:
    /// log of the weight ratio in base `average_win_ratio`.
    pub power: f64,
}

pub fn weight_stats(
    w: &WeightVector,
    dist: &ResultDistribution,
    scale: &RatioScale,
) -> Result<WeightStats> {
    let values = w.values();
    let n = values.len() as f64;
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;

    let decisive = dist.decisive();
    if decisive == 0 {
        return Err(Error::Degenerate(
            "no decisive matches to calibrate the win ratio".into(),
        ));
    }
    let mut weighted = 0.0;
    for (bin, &count) in dist.counts().iter().enumerate().skip(1) {
        let hp = ResultDistribution::BIN_HALF_POINTS[bin];
        let g = crate::tournament::GamePoints::from_half_points(hp).expect("bin on grid");
        weighted += count as f64 * scale.value(g);
    }
    let average_win_ratio = weighted / decisive as f64;
    let max_min_ratio = max / min;
    let power = max_min_ratio.ln() / average_win_ratio.ln();

    Ok(WeightStats {
        max,
        min,
        max_min_ratio,
        mean,
        std_dev: var.sqrt(),
        average_win_ratio,
        power,
    })
}

/// Position gaps between paired opponents under a ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyStats {
    pub mean: f64,
    pub median: f64,
}

/// Mean and median absolute position difference between the two teams of
/// each played match, under the given ranking. Zero for a tournament
/// without matches.
///
/// Panics if the ranking does not cover every team in the tournament.
pub fn adjacency_stats(t: &Tournament, r: &Ranking) -> AdjacencyStats {
    let mut gaps: Vec<u32> = t
        .matches()
        .iter()
        .map(|m| {
            let pa = r
                .position_of(&m.team_a)
                .expect("ranking must cover all teams");
            let pb = r
                .position_of(&m.team_b)
                .expect("ranking must cover all teams");
            pa.abs_diff(pb)
        })
        .collect();
    if gaps.is_empty() {
        return AdjacencyStats {
            mean: 0.0,
            median: 0.0,
        };
    }
    gaps.sort_unstable();
    let mean = gaps.iter().map(|&g| g as f64).sum::<f64>() / gaps.len() as f64;
    let mid = gaps.len() / 2;
    let median = if gaps.len() % 2 == 1 {
        gaps[mid] as f64
    } else {
        (gaps[mid - 1] as f64 + gaps[mid] as f64) / 2.0
    };
    AdjacencyStats { mean, median }
}
