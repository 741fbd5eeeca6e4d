//! Official scoring statistics per team.
//!
//! Match points follow the 2/1/0 rule. The two cut statistics
//! (Sonneborn-Berger and Buchholz) each drop exactly one opponent: the
//! one with the fewest match points. When several opponents tie for
//! fewest, the one contributing least to that statistic is dropped, and
//! remaining ties fall back to the smallest team id. The two statistics
//! resolve their exclusions independently.
//!
//! Sonneborn-Berger and game points are stored in half-point units so
//! every comparison stays exact.

use crate::tournament::{TeamId, Tournament};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeamScore {
    pub team_id: TeamId,
    pub matches_played: u32,
    pub wins: u32,
    pub draws: u32,
    pub losses: u32,
    /// Match points under the 2/1/0 rule.
    pub match_points: u32,
    /// Total game points in half-point units.
    pub game_points_half: u64,
    /// Sonneborn-Berger in half-point units: sum over counted opponents
    /// of (opponent match points) * (game points scored against them).
    pub sonneborn_half: u64,
    /// Buchholz: sum of counted opponents' match points.
    pub buchholz: u32,
}

impl TeamScore {
    pub fn game_points(&self) -> f64 {
        self.game_points_half as f64 / 2.0
    }

    pub fn sonneborn(&self) -> f64 {
        self.sonneborn_half as f64 / 2.0
    }

    /// Numerator of the weighting factor (3W + 2D + L).
    pub fn n3(&self) -> u32 {
        3 * self.wins + 2 * self.draws + self.losses
    }

    /// Weighting factor (3W + 2D + L) / matches played. Zero for a team
    /// that never played.
    pub fn mix_factor(&self) -> f64 {
        if self.matches_played == 0 {
            0.0
        } else {
            self.n3() as f64 / self.matches_played as f64
        }
    }
}

/// Scores for every team, aligned with roster order.
#[derive(Debug, Clone)]
pub struct ScoreTable {
    entries: Vec<TeamScore>,
}

impl ScoreTable {
    pub fn entries(&self) -> &[TeamScore] {
        &self.entries
    }

    pub fn entry(&self, idx: usize) -> &TeamScore {
        &self.entries[idx]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

struct OpponentEntry {
    opponent: usize,
    /// Game points scored against this opponent, half-point units.
    scored_half: u8,
}

pub fn compute_score_table(t: &Tournament) -> ScoreTable {
    let n = t.team_count();
    let mut wins = vec![0u32; n];
    let mut draws = vec![0u32; n];
    let mut losses = vec![0u32; n];
    let mut match_points = vec![0u32; n];
    let mut game_points_half = vec![0u64; n];
    let mut opponents: Vec<Vec<OpponentEntry>> = (0..n).map(|_| Vec::new()).collect();

    for (ia, ib, gp_a) in t.matches_by_index() {
        let gp_b = gp_a.opponent();
        for (me, other, mine) in [(ia, ib, gp_a), (ib, ia, gp_b)] {
            if mine.is_win() {
                wins[me] += 1;
            } else if mine.is_draw() {
                draws[me] += 1;
            } else {
                losses[me] += 1;
            }
            match_points[me] += mine.match_points();
            game_points_half[me] += mine.half_points() as u64;
            opponents[me].push(OpponentEntry {
                opponent: other,
                scored_half: mine.half_points(),
            });
        }
    }

    let entries = (0..n)
        .map(|i| {
            let sonneborn_half = cut_sum(&opponents[i], t, &match_points, |e| {
                match_points[e.opponent] as u64 * e.scored_half as u64
            });
            let buchholz =
                cut_sum(&opponents[i], t, &match_points, |e| {
                    match_points[e.opponent] as u64
                }) as u32;
            TeamScore {
                team_id: t.team(i).id.clone(),
                matches_played: opponents[i].len() as u32,
                wins: wins[i],
                draws: draws[i],
                losses: losses[i],
                match_points: match_points[i],
                game_points_half: game_points_half[i],
                sonneborn_half,
                buchholz,
            }
        })
        .collect();

    ScoreTable { entries }
}

/// Sums `term` over all opponents except the one excluded by the cut
/// rule. The exclusion key orders by opponent match points, then the
/// opponent's term for this statistic, then team id.
fn cut_sum(
    entries: &[OpponentEntry],
    t: &Tournament,
    match_points: &[u32],
    term: impl Fn(&OpponentEntry) -> u64,
) -> u64 {
    if entries.is_empty() {
        return 0;
    }
    let excluded = entries
        .iter()
        .enumerate()
        .min_by_key(|(_, e)| (match_points[e.opponent], term(e), &t.team(e.opponent).id))
        .map(|(k, _)| k)
        .expect("non-empty");
    entries
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != excluded)
        .map(|(_, e)| term(e))
        .sum()
}

/// Histogram of winners' game points over all matches. Bins correspond
/// to 2, 2.5, 3, 3.5, 4 game points; drawn matches land in the first bin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultDistribution {
    counts: [u64; 5],
}

impl ResultDistribution {
    /// Winner's game points for each bin.
    pub const BIN_HALF_POINTS: [u8; 5] = [4, 5, 6, 7, 8];

    /// A distribution from explicit per-bin counts, draws first.
    pub fn from_counts(counts: [u64; 5]) -> Self {
        ResultDistribution { counts }
    }

    pub fn counts(&self) -> &[u64; 5] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Matches with a winner (everything past the drawn bin).
    pub fn decisive(&self) -> u64 {
        self.counts[1..].iter().sum()
    }
}

pub fn result_distribution(t: &Tournament) -> ResultDistribution {
    let mut counts = [0u64; 5];
    for (_, _, gp_a) in t.matches_by_index() {
        let winner_half = gp_a.half_points().max(gp_a.opponent().half_points());
        counts[(winner_half - 4) as usize] += 1;
    }
    ResultDistribution { counts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::{parse_results, GamePoints, MatchRecord, Team, Tournament};

    /// Four-team fixture with hand-computed statistics.
    pub(crate) fn four_team_fixture() -> Tournament {
        let csv = "round,team_a,team_b,game_points_a\n\
                   1,P,Q,3\n\
                   1,R,S,2\n\
                   2,P,R,2.5\n\
                   2,Q,S,2\n\
                   3,P,S,1\n\
                   3,Q,R,0.5\n";
        parse_results(csv.as_bytes()).unwrap()
    }

    #[test]
    fn fixture_match_and_game_points() {
        let t = four_team_fixture();
        let table = compute_score_table(&t);
        let by_id = |id: &str| {
            table
                .entries()
                .iter()
                .find(|e| e.team_id.as_str() == id)
                .unwrap()
        };
        let p = by_id("P");
        assert_eq!((p.match_points, p.game_points_half), (4, 13));
        assert_eq!((p.wins, p.draws, p.losses), (2, 0, 1));
        let q = by_id("Q");
        assert_eq!((q.match_points, q.game_points_half), (1, 7));
        assert_eq!((q.wins, q.draws, q.losses), (0, 1, 2));
        let r = by_id("R");
        assert_eq!((r.match_points, r.game_points_half), (3, 14));
        assert_eq!((r.wins, r.draws, r.losses), (1, 1, 1));
        let s = by_id("S");
        assert_eq!((s.match_points, s.game_points_half), (4, 14));
        assert_eq!((s.wins, s.draws, s.losses), (1, 2, 0));
    }

    #[test]
    fn fixture_cut_statistics() {
        let t = four_team_fixture();
        let table = compute_score_table(&t);
        let by_id = |id: &str| {
            table
                .entries()
                .iter()
                .find(|e| e.team_id.as_str() == id)
                .unwrap()
        };
        // Each value recomputed by hand from the match list.
        assert_eq!(by_id("P").sonneborn(), 11.5);
        assert_eq!(by_id("Q").sonneborn(), 12.0);
        assert_eq!(by_id("R").sonneborn(), 14.0);
        assert_eq!(by_id("S").sonneborn(), 18.0);
        assert_eq!(by_id("P").buchholz, 7);
        assert_eq!(by_id("Q").buchholz, 8);
        assert_eq!(by_id("R").buchholz, 8);
        assert_eq!(by_id("S").buchholz, 7);
    }

    #[test]
    fn fixture_mix_factors() {
        let t = four_team_fixture();
        let table = compute_score_table(&t);
        let by_id = |id: &str| {
            table
                .entries()
                .iter()
                .find(|e| e.team_id.as_str() == id)
                .unwrap()
        };
        assert_eq!(by_id("P").n3(), 7);
        assert_eq!(by_id("Q").n3(), 4);
        assert_eq!(by_id("R").n3(), 6);
        assert_eq!(by_id("S").n3(), 7);
        assert!((by_id("R").mix_factor() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cut_tie_drops_smallest_contribution() {
        // A faces B and C, both finishing on equal match points; the cut
        // must drop whichever contributes less to each statistic.
        let teams = vec![Team::new("A"), Team::new("B"), Team::new("C"), Team::new("D")];
        let m = |round, a: &str, b: &str, hp| MatchRecord {
            round,
            team_a: a.into(),
            team_b: b.into(),
            game_points_a: GamePoints::from_half_points(hp).unwrap(),
        };
        // B and C both end on 2 match points. A scored 3 on B, 1 on C.
        let t = Tournament::new(
            teams,
            3,
            vec![
                m(1, "A", "B", 6),
                m(2, "A", "C", 2),
                m(1, "C", "D", 2),
                m(2, "B", "D", 6),
            ],
        )
        .unwrap();
        let table = compute_score_table(&t);
        let a = table
            .entries()
            .iter()
            .find(|e| e.team_id.as_str() == "A")
            .unwrap();
        // Contributions: B gives 2 * 6 = 12 half, C gives 2 * 2 = 4 half.
        // C is dropped from the Sonneborn sum.
        assert_eq!(a.sonneborn_half, 12);
        // Buchholz contributions tie (2 and 2), so the id tie-break drops B.
        assert_eq!(a.buchholz, 2);
    }

    #[test]
    fn zero_and_one_opponent_edge_cases() {
        let teams = vec![Team::new("A"), Team::new("B"), Team::new("C")];
        let m = MatchRecord {
            round: 1,
            team_a: "A".into(),
            team_b: "B".into(),
            game_points_a: GamePoints::from_half_points(6).unwrap(),
        };
        let t = Tournament::new(teams, 1, vec![m]).unwrap();
        let table = compute_score_table(&t);
        // C never played.
        let c = table
            .entries()
            .iter()
            .find(|e| e.team_id.as_str() == "C")
            .unwrap();
        assert_eq!(c.matches_played, 0);
        assert_eq!(c.sonneborn_half, 0);
        assert_eq!(c.buchholz, 0);
        assert_eq!(c.mix_factor(), 0.0);
        // A's only opponent is cut, leaving empty sums.
        let a = table
            .entries()
            .iter()
            .find(|e| e.team_id.as_str() == "A")
            .unwrap();
        assert_eq!(a.sonneborn_half, 0);
        assert_eq!(a.buchholz, 0);
    }

    #[test]
    fn distribution_counts_winner_bins() {
        let t = four_team_fixture();
        let d = result_distribution(&t);
        // Winners scored 3, draw, 2.5, draw, 3, 3.5.
        assert_eq!(d.counts(), &[2, 1, 2, 1, 0]);
        assert_eq!(d.total(), 6);
        assert_eq!(d.decisive(), 4);
    }
}
