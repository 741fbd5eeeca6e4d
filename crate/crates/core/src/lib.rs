//! Rankings for Swiss-system team tournaments from incomplete pairwise
//! comparisons.
//!
//! A round-robin would compare every pair of teams; a Swiss tournament
//! only plays a sparse subset. This crate turns the played matches into
//! an incomplete pairwise comparison matrix under a configurable ratio
//! scale and derives team weights two ways: logarithmic least squares
//! over the known comparisons, and a completion chosen to minimize the
//! principal eigenvalue with the Perron eigenvector as weights. Both
//! need a connected comparison graph.
//!
//! Alongside the weight-based rankings it computes the official
//! lexicographic ranking (match points with Sonneborn-Berger, game
//! point, and Buchholz tie-breaks) plus several tie-break-first
//! variants, and quantifies how much rankings disagree: Spearman
//! correlation, a log-Euclidean distance on position vectors, and a
//! two-dimensional embedding of the full distance table.

pub mod compare;
pub mod em;
pub mod error;
pub mod export;
pub mod llsm;
pub mod mds;
pub mod parallel;
pub mod pcm;
pub mod pipeline;
pub mod ranking;
pub mod scale;
pub mod score;
pub mod synth;
pub mod tournament;
pub mod weights;

pub use compare::{
    adjacency_stats, distance_table, regression_slope, spearman, tau, tau_max, weight_stats,
    AdjacencyStats, DistanceMatrix, RankMetric, WeightStats,
};
pub use em::{em_weights, optimal_completion, perron, CompletionState, EmConfig, EmSolution};
pub use error::{Error, Result};
pub use llsm::{llsm_weights, LlsmSolution};
pub use mds::{embed, MdsEmbedding};
pub use pcm::{build_pcm, comparison_graph, ComparisonGraph, IncompletePcm};
pub use pipeline::{solve_weight_jobs, JobResult, SolverDiagnostics, WeightJob};
pub use ranking::{
    buchholz_ranking, mix_ranking, official_final_ranking, ranking_from_weights,
    sonneborn_berger_ranking, start_ranking, Ranking,
};
pub use scale::{BuiltinScale, RatioScale, ScaleName};
pub use score::{compute_score_table, result_distribution, ResultDistribution, ScoreTable, TeamScore};
pub use tournament::{
    parse_results, parse_results_with_roster, write_results, write_roster, GamePoints, MatchRecord,
    Team, TeamId, Tournament,
};
pub use weights::{Method, WeightVector};
