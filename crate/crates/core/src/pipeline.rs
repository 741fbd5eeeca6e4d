//! Batch solving: one weight vector and ranking per (method, scale) job.
//!
//! Jobs are independent, so they run data-parallel when the `parallel`
//! feature is on. Results keep job order either way, and on failure the
//! error of the earliest failing job is reported.

use crate::em::{em_weights, EmConfig};
use crate::error::Result;
use crate::llsm::llsm_weights;
use crate::parallel::*;
use crate::pcm::build_pcm;
use crate::ranking::{ranking_from_weights, Ranking};
use crate::scale::RatioScale;
use crate::tournament::Tournament;
use crate::weights::{Method, WeightVector};

#[derive(Debug, Clone)]
pub struct WeightJob {
    pub method: Method,
    pub scale: RatioScale,
}

#[derive(Debug, Clone)]
pub enum SolverDiagnostics {
    Llsm {
        residual_max_norm: f64,
        objective: f64,
    },
    Em {
        lambda_max: f64,
        sweeps: usize,
        perron_residual: f64,
    },
}

#[derive(Debug, Clone)]
pub struct JobResult {
    pub label: String,
    pub weights: WeightVector,
    pub ranking: Ranking,
    pub diagnostics: SolverDiagnostics,
    /// Chosen completion values, present for eigenvalue-method jobs.
    pub completion: Option<crate::em::CompletionState>,
}

fn solve_one(t: &Tournament, job: &WeightJob, em_cfg: &EmConfig) -> Result<JobResult> {
    let m = build_pcm(t, &job.scale)?;
    let (weights, diagnostics, completion) = match job.method {
        Method::Llsm => {
            let s = llsm_weights(&m)?;
            let d = SolverDiagnostics::Llsm {
                residual_max_norm: s.residual_max_norm,
                objective: s.objective,
            };
            (s.weights, d, None)
        }
        Method::Em => {
            let s = em_weights(&m, em_cfg)?;
            let d = SolverDiagnostics::Em {
                lambda_max: s.lambda_max,
                sweeps: s.completion.sweeps,
                perron_residual: s.perron_residual,
            };
            (s.weights, d, Some(s.completion))
        }
    };
    let ranking = ranking_from_weights(t, &weights)?;
    Ok(JobResult {
        label: weights.label(),
        weights,
        ranking,
        diagnostics,
        completion,
    })
}

/// Solves every job. Output order matches job order regardless of the
/// execution order; the first failing job (by position) decides the
/// error.
pub fn solve_weight_jobs(
    t: &Tournament,
    jobs: &[WeightJob],
    em_cfg: &EmConfig,
) -> Result<Vec<JobResult>> {
    let computed: Vec<Result<JobResult>> = jobs
        .par_iter()
        .map(|job| solve_one(t, job, em_cfg))
        .collect();
    computed.into_iter().collect()
}
