//! Tournament data model and results-file parsing.
//!
//! A tournament is a roster of teams plus one record per played match.
//! Each match awards game points on the half-integer grid 0..4; the
//! opponent's share is always `4 - g` and is never stored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;

use crate::error::{Error, Result};

/// Total game points available in one match (in half-point units).
pub const MATCH_HALF_POINTS: u8 = 8;

/// Opaque team identifier. Ordered, so id order doubles as the
/// deterministic tie-break of last resort.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TeamId(String);

impl TeamId {
    pub fn new(id: impl Into<String>) -> Self {
        TeamId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TeamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for TeamId {
    fn from(s: &str) -> Self {
        TeamId(s.to_owned())
    }
}

/// Game points scored by one team in one match, stored in half-point
/// units (0..=8) so the 0, 0.5, ..., 4 grid is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GamePoints(u8);

impl GamePoints {
    pub fn from_half_points(hp: u8) -> Option<Self> {
        (hp <= MATCH_HALF_POINTS).then_some(GamePoints(hp))
    }

    /// Parses a decimal value on the half-integer grid ("2", "2.0", "2.5").
    pub fn parse(s: &str) -> Option<Self> {
        let v: f64 = s.trim().parse().ok()?;
        let doubled = v * 2.0;
        if doubled.fract() != 0.0 || !(0.0..=MATCH_HALF_POINTS as f64).contains(&doubled) {
            return None;
        }
        Some(GamePoints(doubled as u8))
    }

    pub fn half_points(self) -> u8 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// The opponent's share of the same match: `4 - g`.
    pub fn opponent(self) -> Self {
        GamePoints(MATCH_HALF_POINTS - self.0)
    }

    /// Match won: at least 2.5 game points.
    pub fn is_win(self) -> bool {
        self.0 >= 5
    }

    /// Drawn match: exactly 2 game points each.
    pub fn is_draw(self) -> bool {
        self.0 == 4
    }

    /// Match points earned from this result under the 2/1/0 rule.
    pub fn match_points(self) -> u32 {
        if self.is_win() {
            2
        } else if self.is_draw() {
            1
        } else {
            0
        }
    }

    /// All nine grid values in increasing order.
    pub fn grid() -> impl Iterator<Item = GamePoints> {
        (0..=MATCH_HALF_POINTS).map(GamePoints)
    }
}

impl fmt::Display for GamePoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Team {
    pub id: TeamId,
    pub name: String,
    /// Seed position before the first round, when known.
    pub start_rank: Option<u32>,
}

impl Team {
    pub fn new(id: impl Into<String>) -> Self {
        let id = TeamId::new(id);
        let name = id.as_str().to_owned();
        Team {
            id,
            name,
            start_rank: None,
        }
    }
}

/// One played match. The opponent's game points are derived, never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchRecord {
    pub round: u32,
    pub team_a: TeamId,
    pub team_b: TeamId,
    pub game_points_a: GamePoints,
}

impl MatchRecord {
    pub fn game_points_b(&self) -> GamePoints {
        self.game_points_a.opponent()
    }
}

/// A validated tournament: roster, round count, and played matches.
#[derive(Debug, Clone)]
pub struct Tournament {
    teams: Vec<Team>,
    rounds: u32,
    matches: Vec<MatchRecord>,
    index: BTreeMap<TeamId, usize>,
}

impl Tournament {
    /// Builds a tournament, checking every structural invariant:
    /// unique team ids, start ranks forming a permutation when fully
    /// present, no self-matches, no repeated pairings, at most one match
    /// per team per round, and all rounds within bounds.
    pub fn new(teams: Vec<Team>, rounds: u32, matches: Vec<MatchRecord>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (k, team) in teams.iter().enumerate() {
            if index.insert(team.id.clone(), k).is_some() {
                return Err(Error::Validation(format!("duplicate team id {}", team.id)));
            }
        }

        let with_rank = teams.iter().filter(|t| t.start_rank.is_some()).count();
        if with_rank == teams.len() && !teams.is_empty() {
            let mut seen: Vec<u32> = teams.iter().filter_map(|t| t.start_rank).collect();
            seen.sort_unstable();
            let expected: Vec<u32> = (1..=teams.len() as u32).collect();
            if seen != expected {
                return Err(Error::Validation(
                    "start ranks do not form a permutation of 1..n".into(),
                ));
            }
        }

        let mut pairs = BTreeSet::new();
        let mut team_rounds = BTreeSet::new();
        for m in &matches {
            if m.team_a == m.team_b {
                return Err(Error::Validation(format!(
                    "round {}: team {} paired against itself",
                    m.round, m.team_a
                )));
            }
            let ia = *index.get(&m.team_a).ok_or_else(|| {
                Error::Validation(format!("unknown team {} in round {}", m.team_a, m.round))
            })?;
            let ib = *index.get(&m.team_b).ok_or_else(|| {
                Error::Validation(format!("unknown team {} in round {}", m.team_b, m.round))
            })?;
            if m.round == 0 || m.round > rounds {
                return Err(Error::Validation(format!(
                    "match {} vs {} has round {} outside 1..={}",
                    m.team_a, m.team_b, m.round, rounds
                )));
            }
            let key = (ia.min(ib), ia.max(ib));
            if !pairs.insert(key) {
                return Err(Error::Validation(format!(
                    "pair {} vs {} appears more than once",
                    m.team_a, m.team_b
                )));
            }
            for t in [ia, ib] {
                if !team_rounds.insert((t, m.round)) {
                    return Err(Error::Validation(format!(
                        "team {} has two matches in round {}",
                        self_id(&teams, t),
                        m.round
                    )));
                }
            }
        }

        Ok(Tournament {
            teams,
            rounds,
            matches,
            index,
        })
    }

    pub fn teams(&self) -> &[Team] {
        &self.teams
    }

    pub fn team_count(&self) -> usize {
        self.teams.len()
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn matches(&self) -> &[MatchRecord] {
        &self.matches
    }

    pub fn team(&self, idx: usize) -> &Team {
        &self.teams[idx]
    }

    pub fn team_index(&self, id: &TeamId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn team_ids(&self) -> Vec<TeamId> {
        self.teams.iter().map(|t| t.id.clone()).collect()
    }

    /// Matches as roster-index pairs with the first index's game points.
    pub fn matches_by_index(&self) -> Vec<(usize, usize, GamePoints)> {
        self.matches
            .iter()
            .map(|m| {
                let ia = self.index[&m.team_a];
                let ib = self.index[&m.team_b];
                (ia, ib, m.game_points_a)
            })
            .collect()
    }

    /// True when every team carries a start rank.
    pub fn has_full_start_ranks(&self) -> bool {
        !self.teams.is_empty() && self.teams.iter().all(|t| t.start_rank.is_some())
    }

    /// Number of matches actually played by each team, by roster index.
    pub fn matches_played(&self) -> Vec<u32> {
        let mut played = vec![0u32; self.teams.len()];
        for (ia, ib, _) in self.matches_by_index() {
            played[ia] += 1;
            played[ib] += 1;
        }
        played
    }
}

fn self_id(teams: &[Team], idx: usize) -> &TeamId {
    &teams[idx].id
}

const RESULTS_HEADER: [&str; 4] = ["round", "team_a", "team_b", "game_points_a"];
const ROSTER_HEADER: [&str; 3] = ["id", "name", "start_rank"];

/// Parses a results CSV, inferring the roster from match rows in order of
/// first appearance (start ranks absent).
pub fn parse_results(input: impl Read) -> Result<Tournament> {
    parse(input, None)
}

/// Parses a results CSV against an explicit roster CSV. Every match row
/// must reference a roster id; roster order defines alternative order.
pub fn parse_results_with_roster(input: impl Read, roster: impl Read) -> Result<Tournament> {
    let teams = parse_roster(roster)?;
    parse(input, Some(teams))
}

fn parse(input: impl Read, roster: Option<Vec<Team>>) -> Result<Tournament> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);

    {
        let headers = reader
            .headers()
            .map_err(|e| parse_err(1, format!("unreadable header: {e}")))?;
        let got: Vec<&str> = headers.iter().collect();
        if got != RESULTS_HEADER {
            return Err(parse_err(
                1,
                format!(
                    "expected header {}, got {}",
                    RESULTS_HEADER.join(","),
                    got.join(",")
                ),
            ));
        }
    }

    let infer_roster = roster.is_none();
    let mut teams = roster.unwrap_or_default();
    let mut seen: BTreeSet<TeamId> = teams.iter().map(|t| t.id.clone()).collect();
    let mut matches = Vec::new();
    let mut max_round = 0u32;

    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_err(line, format!("malformed row: {e}"))
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 4 {
            return Err(parse_err(
                line,
                format!("expected 4 fields, got {}", record.len()),
            ));
        }
        let round: u32 = record[0]
            .parse()
            .map_err(|_| parse_err(line, format!("bad round {:?}", &record[0])))?;
        if round == 0 {
            return Err(parse_err(line, "round must be positive".into()));
        }
        let team_a = TeamId::new(&record[1]);
        let team_b = TeamId::new(&record[2]);
        if team_a.as_str().is_empty() || team_b.as_str().is_empty() {
            return Err(parse_err(line, "empty team id".into()));
        }
        let game_points_a = GamePoints::parse(&record[3]).ok_or_else(|| {
            parse_err(
                line,
                format!(
                    "game points {:?} not on the half-integer grid 0..4",
                    &record[3]
                ),
            )
        })?;
        if infer_roster {
            for id in [&team_a, &team_b] {
                if seen.insert(id.clone()) {
                    teams.push(Team::new(id.as_str()));
                }
            }
        }
        max_round = max_round.max(round);
        matches.push(MatchRecord {
            round,
            team_a,
            team_b,
            game_points_a,
        });
    }

    Tournament::new(teams, max_round, matches)
}

fn parse_roster(input: impl Read) -> Result<Vec<Team>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);

    {
        let headers = reader
            .headers()
            .map_err(|e| parse_err(1, format!("unreadable roster header: {e}")))?;
        let got: Vec<&str> = headers.iter().collect();
        if got != ROSTER_HEADER {
            return Err(parse_err(
                1,
                format!(
                    "expected roster header {}, got {}",
                    ROSTER_HEADER.join(","),
                    got.join(",")
                ),
            ));
        }
    }

    let mut teams = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_err(line, format!("malformed roster row: {e}"))
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 3 {
            return Err(parse_err(
                line,
                format!("expected 3 roster fields, got {}", record.len()),
            ));
        }
        if record[0].is_empty() {
            return Err(parse_err(line, "empty team id".into()));
        }
        let start_rank = if record[2].is_empty() {
            None
        } else {
            let r: u32 = record[2]
                .parse()
                .map_err(|_| parse_err(line, format!("bad start rank {:?}", &record[2])))?;
            if r == 0 {
                return Err(parse_err(line, "start rank must be positive".into()));
            }
            Some(r)
        };
        teams.push(Team {
            id: TeamId::new(&record[0]),
            name: record[1].to_owned(),
            start_rank,
        });
    }
    Ok(teams)
}

fn parse_err(line: u64, message: String) -> Error {
    Error::Parse { line, message }
}

/// Serializes matches back into the results CSV schema. Re-parsing the
/// output yields an identical tournament.
pub fn write_results(t: &Tournament) -> String {
    let mut out = String::from("round,team_a,team_b,game_points_a\n");
    for m in t.matches() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            m.round, m.team_a, m.team_b, m.game_points_a
        ));
    }
    out
}

/// Serializes the roster into the roster CSV schema.
pub fn write_roster(t: &Tournament) -> String {
    let mut out = String::from("id,name,start_rank\n");
    for team in t.teams() {
        let rank = team
            .start_rank
            .map(|r| r.to_string())
            .unwrap_or_default();
        out.push_str(&format!("{},{},{}\n", team.id, team.name, rank));
    }
    out
}
