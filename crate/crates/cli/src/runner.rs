//! Executes a run configuration: parse, solve, compare, write.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::PathBuf;

use serde::Serialize;

use swissrank_core::em::CompletionState;
use swissrank_core::error::Error as CoreError;
use swissrank_core::export;
use swissrank_core::pcm::{build_pcm, comparison_graph};
use swissrank_core::pipeline::{solve_weight_jobs, JobResult, SolverDiagnostics, WeightJob};
use swissrank_core::ranking::{
    buchholz_ranking, mix_ranking, official_final_ranking, sonneborn_berger_ranking,
    start_ranking, Ranking,
};
use swissrank_core::scale::{BuiltinScale, RatioScale};
use swissrank_core::score::{compute_score_table, result_distribution, ResultDistribution};
use swissrank_core::tournament::{parse_results, parse_results_with_roster, GamePoints, Tournament};
use swissrank_core::weights::Method;
use swissrank_core::{distance_table, embed, RankMetric};

use crate::config::{FormatChoice, MethodChoice, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Unusable invocation: unknown names, impossible combinations.
    Config(String),
    /// The comparison graph splits into groups that never met.
    Disconnected { groups: Vec<Vec<String>> },
    Core(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 5,
            CliError::Disconnected { .. } => 3,
            CliError::Core(e) => match e {
                CoreError::Disconnected { .. } => 3,
                CoreError::EigenNonConvergence { .. }
                | CoreError::SweepCapExhausted { .. }
                | CoreError::ResidualTooLarge { .. } => 4,
                _ => 2,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::Disconnected { groups } => {
                write!(
                    f,
                    "comparison graph is disconnected; weights are only defined when every \
                     pair of teams is linked by played matches"
                )?;
                for (k, group) in groups.iter().enumerate() {
                    write!(f, "\n  group {}: {}", k + 1, group.join(", "))?;
                }
                Ok(())
            }
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(CoreError::Io(e))
    }
}

/// Converts core errors once team indices can be mapped to ids.
fn with_team_ids(t: &Tournament, e: CoreError) -> CliError {
    match e {
        CoreError::Disconnected { components } => {
            let groups = components
                .iter()
                .map(|c| c.iter().map(|&i| t.team(i).id.to_string()).collect())
                .collect();
            CliError::Disconnected { groups }
        }
        other => CliError::Core(other),
    }
}

#[derive(Debug)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    /// File names inside `out_dir`, sorted.
    pub files: Vec<String>,
    pub warnings: Vec<String>,
}

fn slug(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '-'
            }
        })
        .collect()
}

fn dedupe<T: PartialEq + Clone>(items: &[T]) -> Vec<T> {
    let mut out = Vec::new();
    for item in items {
        if !out.contains(item) {
            out.push(item.clone());
        }
    }
    out
}

#[derive(Serialize)]
struct EmEcho {
    sweep_cap: usize,
    eigen_tol: f64,
    coord_tol: f64,
    sweep_tol: f64,
}

#[derive(Serialize)]
struct InvocationEcho {
    input: String,
    roster: Option<String>,
    scales: Vec<String>,
    methods: Vec<String>,
    em_scales: Vec<String>,
    metrics: Vec<String>,
    formats: Vec<String>,
    mds: bool,
    mds_dims: usize,
    dump_pcm: bool,
    dump_completion: bool,
    em: EmEcho,
}

#[derive(Serialize)]
struct TournamentInfo {
    teams: usize,
    rounds: u32,
    matches: usize,
    full_start_ranks: bool,
}

#[derive(Serialize)]
struct ComparisonInfo {
    known_pairs: usize,
    missing_pairs: usize,
    density: f64,
}

#[derive(Serialize)]
struct RankingInfo {
    label: String,
    method: String,
    tie_break_used: bool,
}

#[derive(Serialize)]
struct SolverInfo {
    label: String,
    method: String,
    scale: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_max_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    objective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweeps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    perron_residual: Option<f64>,
}

#[derive(Serialize)]
struct DistributionInfo {
    winner_game_points: Vec<String>,
    counts: Vec<u64>,
}

#[derive(Serialize)]
struct MdsInfo {
    dims: usize,
    stress: f64,
    rsq: f64,
    iterations: usize,
}

#[derive(Serialize)]
struct Manifest {
    invocation: InvocationEcho,
    tournament: TournamentInfo,
    /// Coverage of the pairwise comparisons, when a weight solver ran.
    /// Which pairs are known depends only on the matches, not the scale.
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<ComparisonInfo>,
    rankings: Vec<RankingInfo>,
    solvers: Vec<SolverInfo>,
    result_distribution: DistributionInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    mds: Option<MdsInfo>,
    warnings: Vec<String>,
    files: Vec<String>,
}

struct ScaleSet {
    customs: Vec<RatioScale>,
}

impl ScaleSet {
    fn load(cfg: &RunConfig) -> Result<Self, CliError> {
        let mut customs: Vec<RatioScale> = Vec::new();
        for path in &cfg.custom_scales {
            let name = path
                .file_stem()
                .and_then(|s| s.to_str())
                .filter(|s| !s.is_empty())
                .ok_or_else(|| {
                    CliError::Config(format!("cannot derive a scale name from {}", path.display()))
                })?
                .to_owned();
            if name.parse::<BuiltinScale>().is_ok() {
                return Err(CliError::Config(format!(
                    "custom scale name {name:?} collides with a built-in scale"
                )));
            }
            if customs.iter().any(|s| s.name().to_string() == name) {
                return Err(CliError::Config(format!(
                    "custom scale {name:?} supplied twice"
                )));
            }
            let file = fs::File::open(path).map_err(|e| {
                CliError::Config(format!("cannot read scale file {}: {e}", path.display()))
            })?;
            let scale = RatioScale::from_csv(&name, file)
                .map_err(|e| CliError::Config(format!("scale file {}: {e}", path.display())))?;
            customs.push(scale);
        }
        Ok(ScaleSet { customs })
    }

    fn resolve(&self, name: &str) -> Result<RatioScale, CliError> {
        if let Ok(builtin) = name.parse::<BuiltinScale>() {
            return Ok(RatioScale::builtin(builtin));
        }
        self.customs
            .iter()
            .find(|s| s.name().to_string() == name)
            .cloned()
            .ok_or_else(|| CliError::Config(format!("unknown scale {name:?}")))
    }
}

fn validate(cfg: &RunConfig, methods: &[MethodChoice]) -> Result<(), CliError> {
    if methods.is_empty() {
        return Err(CliError::Config("no methods selected".into()));
    }
    if cfg.formats.is_empty() {
        return Err(CliError::Config("no output formats selected".into()));
    }
    if methods.contains(&MethodChoice::Llsm) && cfg.scales.is_empty() {
        return Err(CliError::Config(
            "the llsm method needs at least one scale".into(),
        ));
    }
    if methods.contains(&MethodChoice::Em) && cfg.em_scales.is_empty() {
        return Err(CliError::Config(
            "the em method needs at least one completion scale".into(),
        ));
    }
    if cfg.dump_completion && !methods.contains(&MethodChoice::Em) {
        return Err(CliError::Config(
            "--dump-completion requires the em method".into(),
        ));
    }
    if cfg.dump_pcm
        && !methods.contains(&MethodChoice::Llsm)
        && !methods.contains(&MethodChoice::Em)
    {
        return Err(CliError::Config(
            "--dump-pcm requires a weight method (llsm or em)".into(),
        ));
    }
    if cfg.mds && cfg.mds_dims == 0 {
        return Err(CliError::Config("embedding dimension must be positive".into()));
    }
    Ok(())
}

/// Number of rankings the configuration will produce.
fn ranking_count(cfg: &RunConfig, methods: &[MethodChoice]) -> usize {
    methods
        .iter()
        .map(|m| match m {
            MethodChoice::Llsm => dedupe(&cfg.scales).len(),
            MethodChoice::Em => dedupe(&cfg.em_scales).len(),
            _ => 1,
        })
        .sum()
}

pub fn run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let methods = dedupe(&cfg.methods);
    validate(cfg, &methods)?;
    let scale_set = ScaleSet::load(cfg)?;

    let llsm_scales: Vec<RatioScale> = dedupe(&cfg.scales)
        .iter()
        .map(|n| scale_set.resolve(n))
        .collect::<Result<_, _>>()?;
    let em_scales: Vec<RatioScale> = dedupe(&cfg.em_scales)
        .iter()
        .map(|n| scale_set.resolve(n))
        .collect::<Result<_, _>>()?;
    let metrics = dedupe(&cfg.metrics);

    if cfg.mds {
        let k = ranking_count(cfg, &methods);
        if k < 3 {
            return Err(CliError::Config(format!(
                "embedding needs at least three rankings, this run produces {k}"
            )));
        }
        if cfg.mds_dims >= k {
            return Err(CliError::Config(format!(
                "embedding dimension {} too large for {k} rankings",
                cfg.mds_dims
            )));
        }
    }

    let input = fs::File::open(&cfg.input)?;
    let tournament = match &cfg.roster {
        Some(roster_path) => {
            let roster = fs::File::open(roster_path)?;
            parse_results_with_roster(input, roster)?
        }
        None => parse_results(input)?,
    };

    if methods.contains(&MethodChoice::Start) && !tournament.has_full_start_ranks() {
        return Err(CliError::Config(
            "the start method needs a roster assigning a start rank to every team".into(),
        ));
    }

    let scores = compute_score_table(&tournament);
    let distribution = result_distribution(&tournament);

    let mut jobs = Vec::new();
    if methods.contains(&MethodChoice::Llsm) {
        jobs.extend(llsm_scales.iter().map(|s| WeightJob {
            method: Method::Llsm,
            scale: s.clone(),
        }));
    }
    if methods.contains(&MethodChoice::Em) {
        jobs.extend(em_scales.iter().map(|s| WeightJob {
            method: Method::Em,
            scale: s.clone(),
        }));
    }
    let em_config = cfg.em.to_config();
    let job_results: Vec<JobResult> = solve_weight_jobs(&tournament, &jobs, &em_config)
        .map_err(|e| with_team_ids(&tournament, e))?;
    let llsm_results: Vec<&JobResult> = job_results
        .iter()
        .filter(|r| r.weights.method() == Method::Llsm)
        .collect();
    let em_results: Vec<&JobResult> = job_results
        .iter()
        .filter(|r| r.weights.method() == Method::Em)
        .collect();

    let mut rankings: Vec<Ranking> = Vec::new();
    let mut ranking_infos: Vec<RankingInfo> = Vec::new();
    for m in &methods {
        match m {
            MethodChoice::Llsm => {
                for r in &llsm_results {
                    rankings.push(r.ranking.clone());
                    ranking_infos.push(RankingInfo {
                        label: r.label.clone(),
                        method: m.name().into(),
                        tie_break_used: r.ranking.tie_break_used(),
                    });
                }
            }
            MethodChoice::Em => {
                for r in &em_results {
                    rankings.push(r.ranking.clone());
                    ranking_infos.push(RankingInfo {
                        label: r.label.clone(),
                        method: m.name().into(),
                        tie_break_used: r.ranking.tie_break_used(),
                    });
                }
            }
            other => {
                let r = match other {
                    MethodChoice::Official => official_final_ranking(&tournament, &scores),
                    MethodChoice::SonnebornBerger => {
                        sonneborn_berger_ranking(&tournament, &scores)
                    }
                    MethodChoice::Buchholz => buchholz_ranking(&tournament, &scores),
                    MethodChoice::Mix => mix_ranking(&tournament, &scores),
                    MethodChoice::Start => start_ranking(&tournament),
                    _ => unreachable!("solver methods handled above"),
                }
                .map_err(|e| with_team_ids(&tournament, e))?;
                ranking_infos.push(RankingInfo {
                    label: r.label().to_owned(),
                    method: other.name().into(),
                    tie_break_used: r.tie_break_used(),
                });
                rankings.push(r);
            }
        }
    }

    let tables: Vec<(RankMetric, swissrank_core::DistanceMatrix)> = metrics
        .iter()
        .map(|mc| {
            let metric = mc.as_metric();
            distance_table(&rankings, metric)
                .map(|t| (metric, t))
                .map_err(|e| with_team_ids(&tournament, e))
        })
        .collect::<Result<_, _>>()?;

    let embedding = if cfg.mds {
        let tau_table =
            distance_table(&rankings, RankMetric::Tau).map_err(|e| with_team_ids(&tournament, e))?;
        Some(embed(&tau_table, cfg.mds_dims).map_err(|e| with_team_ids(&tournament, e))?)
    } else {
        None
    };

    let mut warnings: Vec<String> = Vec::new();
    for e in scores.entries() {
        if e.matches_played < tournament.rounds() {
            warnings.push(format!(
                "team {} played {} of {} rounds; its cut statistics use only the opponents it met",
                e.team_id,
                e.matches_played,
                tournament.rounds()
            ));
        }
    }
    for info in &ranking_infos {
        if info.tie_break_used {
            warnings.push(format!(
                "ranking {} could not separate some teams and fell back to team-id order",
                info.label
            ));
        }
    }

    fs::create_dir_all(&cfg.out_dir)?;
    let mut files: Vec<String> = Vec::new();
    let mut write = |name: String, contents: String| -> Result<(), CliError> {
        fs::write(cfg.out_dir.join(&name), contents)?;
        files.push(name);
        Ok(())
    };

    let csv = cfg.wants_format(FormatChoice::Csv);
    let json = cfg.wants_format(FormatChoice::Json);

    if csv {
        write("score_table.csv".into(), export::score_table_csv(&scores))?;
    }
    for r in &job_results {
        let s = slug(&r.label);
        if csv {
            write(
                format!("weights-{s}.csv"),
                export::weights_csv(&r.weights, &r.ranking)?,
            )?;
        }
        if json {
            write(
                format!("weights-{s}.json"),
                export::weights_json(&r.weights, &r.ranking)?,
            )?;
        }
    }
    if csv {
        for r in &rankings {
            write(
                format!("ranking-{}.csv", slug(r.label())),
                export::ranking_csv(&tournament, r)?,
            )?;
        }
    }
    if json {
        write(
            "rankings.json".into(),
            export::rankings_json(&tournament, &rankings)?,
        )?;
    }
    for (metric, table) in &tables {
        if csv {
            write(
                format!("distances-{metric}.csv"),
                export::distance_csv(table),
            )?;
        }
        if json {
            write(
                format!("distances-{metric}.json"),
                export::distance_json(table),
            )?;
        }
    }
    if let Some(e) = &embedding {
        if csv {
            write("mds.csv".into(), export::mds_csv(e))?;
        }
        if json {
            write("mds.json".into(), export::mds_json(e))?;
        }
    }

    let mut used_scales: Vec<RatioScale> = Vec::new();
    let mut seen_scale_names = BTreeSet::new();
    for job in &jobs {
        if seen_scale_names.insert(job.scale.name().to_string()) {
            used_scales.push(job.scale.clone());
        }
    }

    let mut comparison: Option<ComparisonInfo> = None;
    for s in &used_scales {
        let m = build_pcm(&tournament, s).map_err(|e| with_team_ids(&tournament, e))?;
        debug_assert!(
            comparison_graph(&m).is_connected(),
            "solvers ran, so the graph is connected"
        );
        comparison.get_or_insert(ComparisonInfo {
            known_pairs: m.known_count(),
            missing_pairs: m.missing_count(),
            density: m.density(),
        });
        if cfg.dump_pcm {
            let slug_name = slug(&s.name().to_string());
            if csv {
                write(format!("pcm-{slug_name}.csv"), export::pcm_csv(&m))?;
            }
            if json {
                write(format!("pcm-{slug_name}.json"), export::pcm_json(&m))?;
            }
        } else {
            break;
        }
    }

    if cfg.dump_completion {
        for r in &em_results {
            let state: &CompletionState = r
                .completion
                .as_ref()
                .expect("eigenvalue jobs always carry a completion");
            let s = slug(&r.weights.scale().to_string());
            if csv {
                write(format!("completion-{s}.csv"), export::completion_csv(state))?;
            }
            if json {
                write(
                    format!("completion-{s}.json"),
                    export::completion_json(state),
                )?;
            }
        }
    }

    let solver_infos: Vec<SolverInfo> = job_results
        .iter()
        .map(|r| {
            let (residual_max_norm, objective, lambda_max, sweeps, perron_residual) =
                match r.diagnostics {
                    SolverDiagnostics::Llsm {
                        residual_max_norm,
                        objective,
                    } => (Some(residual_max_norm), Some(objective), None, None, None),
                    SolverDiagnostics::Em {
                        lambda_max,
                        sweeps,
                        perron_residual,
                    } => (None, None, Some(lambda_max), Some(sweeps), Some(perron_residual)),
                };
            SolverInfo {
                label: r.label.clone(),
                method: r.weights.method().to_string(),
                scale: r.weights.scale().to_string(),
                residual_max_norm,
                objective,
                lambda_max,
                sweeps,
                perron_residual,
            }
        })
        .collect();

    files.push("manifest.json".into());
    files.sort();

    let manifest = Manifest {
        invocation: InvocationEcho {
            input: cfg.input.display().to_string(),
            roster: cfg.roster.as_ref().map(|p| p.display().to_string()),
            scales: dedupe(&cfg.scales),
            methods: methods.iter().map(|m| m.name().to_string()).collect(),
            em_scales: dedupe(&cfg.em_scales),
            metrics: metrics.iter().map(|m| m.to_string()).collect(),
            formats: cfg.formats.iter().map(|f| f.to_string()).collect(),
            mds: cfg.mds,
            mds_dims: cfg.mds_dims,
            dump_pcm: cfg.dump_pcm,
            dump_completion: cfg.dump_completion,
            em: EmEcho {
                sweep_cap: cfg.em.sweep_cap,
                eigen_tol: cfg.em.eigen_tol,
                coord_tol: cfg.em.coord_tol,
                sweep_tol: cfg.em.sweep_tol,
            },
        },
        tournament: TournamentInfo {
            teams: tournament.team_count(),
            rounds: tournament.rounds(),
            matches: tournament.matches().len(),
            full_start_ranks: tournament.has_full_start_ranks(),
        },
        comparison,
        rankings: ranking_infos,
        solvers: solver_infos,
        result_distribution: DistributionInfo {
            winner_game_points: ResultDistribution::BIN_HALF_POINTS
                .iter()
                .map(|&hp| {
                    GamePoints::from_half_points(hp)
                        .expect("bins on grid")
                        .to_string()
                })
                .collect(),
            counts: distribution.counts().to_vec(),
        },
        mds: embedding.as_ref().map(|e| MdsInfo {
            dims: e.dims,
            stress: e.stress,
            rsq: e.rsq,
            iterations: e.iterations,
        }),
        warnings: warnings.clone(),
        files: files.clone(),
    };
    let mut manifest_text =
        serde_json::to_string_pretty(&manifest).expect("manifest serialization cannot fail");
    manifest_text.push('\n');
    fs::write(cfg.out_dir.join("manifest.json"), manifest_text)?;

    Ok(RunSummary {
        out_dir: cfg.out_dir.clone(),
        files,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs_are_lowercase_hyphenated() {
        assert_eq!(slug("A-LLSM"), "a-llsm");
        assert_eq!(slug("Final"), "final");
        assert_eq!(slug("SB"), "sb");
        assert_eq!(slug("my scale"), "my-scale");
    }

    #[test]
    fn dedupe_preserves_first_occurrence() {
        let v = ["b".to_string(), "a".into(), "b".into(), "c".into()];
        assert_eq!(dedupe(&v), vec!["b", "a", "c"]);
    }

    #[test]
    fn exit_codes_by_error_class() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 5);
        assert_eq!(
            CliError::Disconnected { groups: vec![] }.exit_code(),
            3
        );
        assert_eq!(
            CliError::Core(CoreError::Validation("x".into())).exit_code(),
            2
        );
        assert_eq!(
            CliError::Core(CoreError::EigenNonConvergence {
                residual: 1.0,
                iterations: 5
            })
            .exit_code(),
            4
        );
    }
}
