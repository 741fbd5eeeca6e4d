//! Deterministic text serializers for every output artifact.
//!
//! All writers return complete file contents with fixed float formats,
//! so byte-identical inputs always produce byte-identical files.

use serde::Serialize;

use crate::compare::DistanceMatrix;
use crate::em::CompletionState;
use crate::error::{Error, Result};
use crate::mds::MdsEmbedding;
use crate::pcm::IncompletePcm;
use crate::ranking::Ranking;
use crate::score::ScoreTable;
use crate::tournament::{TeamId, Tournament};
use crate::weights::WeightVector;

/// Half-point units rendered exactly: "13" half-points is "6.5".
fn half_str(half: u64) -> String {
    if half % 2 == 0 {
        (half / 2).to_string()
    } else {
        format!("{}.5", half / 2)
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}

pub fn score_table_csv(s: &ScoreTable) -> String {
    let mut out = String::from(
        "team_id,matches,wins,draws,losses,match_points,game_points,sonneborn_berger,buchholz\n",
    );
    for e in s.entries() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            e.team_id,
            e.matches_played,
            e.wins,
            e.draws,
            e.losses,
            e.match_points,
            half_str(e.game_points_half),
            half_str(e.sonneborn_half),
            e.buchholz
        ));
    }
    out
}

/// Rows ordered by rank position.
pub fn weights_csv(w: &WeightVector, r: &Ranking) -> Result<String> {
    if w.len() != r.len() {
        return Err(Error::MismatchedTeams);
    }
    let mut rows: Vec<(u32, &TeamId, f64)> = r
        .team_ids()
        .iter()
        .enumerate()
        .map(|(k, id)| (r.position_at(k), id, w.values()[k]))
        .collect();
    rows.sort_by_key(|&(p, _, _)| p);
    let mut out = String::from("team_id,weight,position\n");
    for (position, id, weight) in rows {
        out.push_str(&format!("{id},{weight:.12},{position}\n"));
    }
    Ok(out)
}

#[derive(Serialize)]
struct WeightRow {
    team_id: String,
    weight: f64,
    position: u32,
}

#[derive(Serialize)]
struct WeightsDoc {
    label: String,
    method: String,
    scale: String,
    weights: Vec<WeightRow>,
}

pub fn weights_json(w: &WeightVector, r: &Ranking) -> Result<String> {
    if w.len() != r.len() {
        return Err(Error::MismatchedTeams);
    }
    let mut rows: Vec<WeightRow> = r
        .team_ids()
        .iter()
        .enumerate()
        .map(|(k, id)| WeightRow {
            team_id: id.to_string(),
            weight: w.values()[k],
            position: r.position_at(k),
        })
        .collect();
    rows.sort_by_key(|row| row.position);
    Ok(to_pretty_json(&WeightsDoc {
        label: w.label(),
        method: w.method().to_string(),
        scale: w.scale().to_string(),
        weights: rows,
    }))
}

/// One row per rank position; team names resolved from the tournament.
pub fn ranking_csv(t: &Tournament, r: &Ranking) -> Result<String> {
    let mut out = String::from("position,team_id,team_name,primary_key_value\n");
    for id in r.order() {
        let position = r.position_of(&id).expect("order() covers all teams");
        let k = r
            .team_ids()
            .iter()
            .position(|x| *x == id)
            .expect("order() covers all teams");
        let name = t
            .team_index(&id)
            .map(|i| t.team(i).name.clone())
            .ok_or(Error::MismatchedTeams)?;
        out.push_str(&format!(
            "{position},{id},{name},{:.6}\n",
            r.key_values()[k]
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct RankingMeta {
    label: String,
    tie_break_used: bool,
}

#[derive(Serialize)]
struct TeamPositions {
    team_id: String,
    team_name: String,
    positions: Vec<u32>,
}

#[derive(Serialize)]
struct RankingsDoc {
    rankings: Vec<RankingMeta>,
    teams: Vec<TeamPositions>,
}

/// All rankings side by side: one entry per team, positions aligned with
/// the ranking list.
pub fn rankings_json(t: &Tournament, rankings: &[Ranking]) -> Result<String> {
    let metas = rankings
        .iter()
        .map(|r| RankingMeta {
            label: r.label().to_owned(),
            tie_break_used: r.tie_break_used(),
        })
        .collect();
    let mut teams = Vec::with_capacity(t.team_count());
    for team in t.teams() {
        let mut positions = Vec::with_capacity(rankings.len());
        for r in rankings {
            positions.push(r.position_of(&team.id).ok_or(Error::MismatchedTeams)?);
        }
        teams.push(TeamPositions {
            team_id: team.id.to_string(),
            team_name: team.name.clone(),
            positions,
        });
    }
    Ok(to_pretty_json(&RankingsDoc {
        rankings: metas,
        teams,
    }))
}

pub fn distance_csv(dm: &DistanceMatrix) -> String {
    let mut out = String::from("label");
    for l in dm.labels() {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for (i, l) in dm.labels().iter().enumerate() {
        out.push_str(l);
        for j in 0..dm.k() {
            out.push_str(&format!(",{:.6}", dm.get(i, j)));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct DistanceDoc {
    metric: String,
    labels: Vec<String>,
    /// Row-major k x k values.
    values: Vec<f64>,
}

pub fn distance_json(dm: &DistanceMatrix) -> String {
    to_pretty_json(&DistanceDoc {
        metric: dm.metric().to_string(),
        labels: dm.labels().to_vec(),
        values: dm.values().to_vec(),
    })
}

pub fn pcm_csv(m: &IncompletePcm) -> String {
    let mut out = String::from("i,j,a_ij\n");
    for (i, j, a) in m.known() {
        out.push_str(&format!("{i},{j},{a:.12}\n"));
    }
    out
}

#[derive(Serialize)]
struct PcmDoc {
    n: usize,
    known: usize,
    missing: usize,
    density: f64,
    scale: String,
}

pub fn pcm_json(m: &IncompletePcm) -> String {
    to_pretty_json(&PcmDoc {
        n: m.n(),
        known: m.known_count(),
        missing: m.missing_count(),
        density: m.density(),
        scale: m.scale().to_string(),
    })
}

pub fn completion_csv(state: &CompletionState) -> String {
    let mut out = String::from("i,j,x_ij\n");
    for (&(i, j), &x) in state.missing.iter().zip(state.x.iter()) {
        out.push_str(&format!("{i},{j},{x:.12}\n"));
    }
    out
}

#[derive(Serialize)]
struct CompletionDoc {
    lambda_max: f64,
    sweeps: usize,
    completed_pairs: usize,
}

pub fn completion_json(state: &CompletionState) -> String {
    to_pretty_json(&CompletionDoc {
        lambda_max: state.lambda_max,
        sweeps: state.sweeps,
        completed_pairs: state.missing.len(),
    })
}

pub fn mds_csv(e: &MdsEmbedding) -> String {
    let mut out = String::from("label");
    for d in 0..e.dims {
        out.push(',');
        out.push_str(dim_name(d));
    }
    out.push('\n');
    for (i, l) in e.labels.iter().enumerate() {
        out.push_str(l);
        for d in 0..e.dims {
            out.push_str(&format!(",{:.6}", e.coord(i, d)));
        }
        out.push('\n');
    }
    out
}

fn dim_name(d: usize) -> &'static str {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    NAMES.get(d).copied().unwrap_or("d")
}

#[derive(Serialize)]
struct MdsDoc {
    stress: f64,
    rsq: f64,
    disparity_intercept: f64,
    disparity_slope: f64,
    iterations: usize,
    labels: Vec<String>,
}

pub fn mds_json(e: &MdsEmbedding) -> String {
    to_pretty_json(&MdsDoc {
        stress: e.stress,
        rsq: e.rsq,
        disparity_intercept: e.disparity_intercept,
        disparity_slope: e.disparity_slope,
        iterations: e.iterations,
        labels: e.labels.clone(),
    })
}
