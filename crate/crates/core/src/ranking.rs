//! Rankings: orderings of the teams under different criteria.
//!
//! Every ranking assigns positions 1..n. Sorting is always resolved to a
//! strict order; when a criterion cannot separate two teams the smaller
//! team id wins and the ranking is flagged as tie-broken.

use crate::error::{Error, Result};
use crate::score::ScoreTable;
use crate::tournament::{TeamId, Tournament};
use crate::weights::WeightVector;

/// A strict ordering of the teams. `positions[k]` is the 1-based rank of
/// `team_ids[k]`; `key_values[k]` is the primary sort key, recorded for
/// output.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    label: String,
    team_ids: Vec<TeamId>,
    positions: Vec<u32>,
    key_values: Vec<f64>,
    tie_break_used: bool,
}

impl Ranking {
    /// Builds a ranking after checking that positions are a permutation
    /// of 1..n aligned with the team list.
    pub fn new(
        label: impl Into<String>,
        team_ids: Vec<TeamId>,
        positions: Vec<u32>,
        key_values: Vec<f64>,
        tie_break_used: bool,
    ) -> Result<Self> {
        let n = team_ids.len();
        if positions.len() != n || key_values.len() != n {
            return Err(Error::Validation(
                "ranking fields must have one entry per team".into(),
            ));
        }
        let mut sorted = positions.clone();
        sorted.sort_unstable();
        if sorted != (1..=n as u32).collect::<Vec<_>>() {
            return Err(Error::Validation(
                "positions must form a permutation of 1..n".into(),
            ));
        }
        let mut ids = team_ids.clone();
        ids.sort();
        ids.dedup();
        if ids.len() != n {
            return Err(Error::Validation("duplicate team id in ranking".into()));
        }
        Ok(Ranking {
            label: label.into(),
            team_ids,
            positions,
            key_values,
            tie_break_used,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn team_ids(&self) -> &[TeamId] {
        &self.team_ids
    }

    pub fn len(&self) -> usize {
        self.team_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.team_ids.is_empty()
    }

    /// 1-based position of the team at list index `k`.
    pub fn position_at(&self, k: usize) -> u32 {
        self.positions[k]
    }

    pub fn positions(&self) -> &[u32] {
        &self.positions
    }

    pub fn key_values(&self) -> &[f64] {
        &self.key_values
    }

    pub fn tie_break_used(&self) -> bool {
        self.tie_break_used
    }

    /// 1-based position of a team by id.
    pub fn position_of(&self, id: &TeamId) -> Option<u32> {
        self.team_ids
            .iter()
            .position(|t| t == id)
            .map(|k| self.positions[k])
    }

    /// Team ids from first to last place.
    pub fn order(&self) -> Vec<TeamId> {
        let mut pairs: Vec<(u32, &TeamId)> = self
            .positions
            .iter()
            .copied()
            .zip(self.team_ids.iter())
            .collect();
        pairs.sort_unstable_by_key(|&(p, _)| p);
        pairs.into_iter().map(|(_, id)| id.clone()).collect()
    }
}

/// Sorts teams by a comparator, falling back to team id, and reports
/// whether the fallback ever decided a pair.
fn rank_by<K: PartialOrd>(
    label: &str,
    team_ids: Vec<TeamId>,
    keys: Vec<K>,
    key_values: Vec<f64>,
) -> Result<Ranking> {
    let n = team_ids.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut tie = false;
    order.sort_by(|&a, &b| {
        // Higher key ranks first.
        match keys[b].partial_cmp(&keys[a]) {
            Some(std::cmp::Ordering::Equal) | None => {
                tie = true;
                team_ids[a].cmp(&team_ids[b])
            }
            Some(ord) => ord,
        }
    });
    let mut positions = vec![0u32; n];
    for (place, &idx) in order.iter().enumerate() {
        positions[idx] = place as u32 + 1;
    }
    Ranking::new(label, team_ids, positions, key_values, tie)
}

/// Ranks by solver weights, descending. Label comes from the weight
/// vector, e.g. "A-LLSM".
pub fn ranking_from_weights(t: &Tournament, w: &WeightVector) -> Result<Ranking> {
    if w.len() != t.team_count() {
        return Err(Error::MismatchedTeams);
    }
    rank_by(
        &w.label(),
        t.team_ids(),
        w.values().to_vec(),
        w.values().to_vec(),
    )
}

/// The official ordering: match points, then Sonneborn-Berger, then game
/// points, then Buchholz, all descending.
pub fn official_final_ranking(t: &Tournament, s: &ScoreTable) -> Result<Ranking> {
    let keys: Vec<(u32, u64, u64, u32)> = s
        .entries()
        .iter()
        .map(|e| (e.match_points, e.sonneborn_half, e.game_points_half, e.buchholz))
        .collect();
    let key_values = s.entries().iter().map(|e| e.match_points as f64).collect();
    rank_by("Final", t.team_ids(), keys, key_values)
}

/// Sonneborn-Berger first: SB, then match points, then game points.
pub fn sonneborn_berger_ranking(t: &Tournament, s: &ScoreTable) -> Result<Ranking> {
    let keys: Vec<(u64, u32, u64)> = s
        .entries()
        .iter()
        .map(|e| (e.sonneborn_half, e.match_points, e.game_points_half))
        .collect();
    let key_values = s.entries().iter().map(|e| e.sonneborn()).collect();
    rank_by("SB", t.team_ids(), keys, key_values)
}

/// Exact rational for cross-multiplied comparisons: value num/den with
/// den > 0.
#[derive(Debug, Clone, Copy)]
struct Frac {
    num: u64,
    den: u64,
}

impl Frac {
    fn new(num: u64, den: u64) -> Self {
        assert!(den > 0);
        Frac { num, den }
    }

    fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn cross(self, other: Self) -> (u128, u128) {
        (
            self.num as u128 * other.den as u128,
            other.num as u128 * self.den as u128,
        )
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        let (l, r) = self.cross(*other);
        l == r
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        let (l, r) = self.cross(*other);
        l.partial_cmp(&r)
    }
}

/// Buchholz first, normalized by matches played: Buchholz * match points
/// / matches, then match points, then Sonneborn-Berger.
pub fn buchholz_ranking(t: &Tournament, s: &ScoreTable) -> Result<Ranking> {
    let keys: Vec<(Frac, u32, u64)> = s
        .entries()
        .iter()
        .map(|e| {
            let m = e.matches_played.max(1) as u64;
            let primary = Frac::new(e.buchholz as u64 * e.match_points as u64, m);
            (primary, e.match_points, e.sonneborn_half)
        })
        .collect();
    let key_values = keys.iter().map(|k| k.0.as_f64()).collect();
    rank_by("Buchholz", t.team_ids(), keys, key_values)
}

/// Sonneborn-Berger plus Buchholz weighted by the per-team factor
/// (3W + 2D + L) / matches; ties go to the higher plain Sonneborn-Berger.
pub fn mix_ranking(t: &Tournament, s: &ScoreTable) -> Result<Ranking> {
    let keys: Vec<(Frac, u64)> = s
        .entries()
        .iter()
        .map(|e| {
            let m = e.matches_played.max(1) as u64;
            // SB + (n3 / m) * buchholz, over the common denominator 2m.
            let num = e.sonneborn_half * m + 2 * e.n3() as u64 * e.buchholz as u64;
            (Frac::new(num, 2 * m), e.sonneborn_half)
        })
        .collect();
    let key_values = keys.iter().map(|k| k.0.as_f64()).collect();
    rank_by("Mix", t.team_ids(), keys, key_values)
}

/// The pre-tournament seeding as a ranking. Requires a complete set of
/// start ranks.
pub fn start_ranking(t: &Tournament) -> Result<Ranking> {
    if !t.has_full_start_ranks() {
        return Err(Error::Validation(
            "start ranking needs a start rank for every team".into(),
        ));
    }
    let positions: Vec<u32> = t.teams().iter().map(|tm| tm.start_rank.unwrap()).collect();
    let key_values = positions.iter().map(|&p| p as f64).collect();
    Ranking::new("Start", t.team_ids(), positions, key_values, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::score::compute_score_table;
    use crate::scale::{BuiltinScale, ScaleName};
    use crate::tournament::parse_results;
    use crate::weights::Method;

    fn fixture() -> Tournament {
        let csv = "round,team_a,team_b,game_points_a\n\
                   1,P,Q,3\n\
                   1,R,S,2\n\
                   2,P,R,2.5\n\
                   2,Q,S,2\n\
                   3,P,S,1\n\
                   3,Q,R,0.5\n";
        parse_results(csv.as_bytes()).unwrap()
    }

    fn pos(r: &Ranking, id: &str) -> u32 {
        r.position_of(&id.into()).unwrap()
    }

    #[test]
    fn official_ranking_uses_tie_breaks_in_order() {
        let t = fixture();
        let s = compute_score_table(&t);
        let r = official_final_ranking(&t, &s).unwrap();
        // S and P tie on match points; S wins on Sonneborn-Berger.
        assert_eq!(pos(&r, "S"), 1);
        assert_eq!(pos(&r, "P"), 2);
        assert_eq!(pos(&r, "R"), 3);
        assert_eq!(pos(&r, "Q"), 4);
        assert!(!r.tie_break_used());
        assert_eq!(
            r.order(),
            vec!["S".into(), "P".into(), "R".into(), "Q".into()]
        );
    }

    #[test]
    fn sonneborn_ranking_reorders_fixture() {
        let t = fixture();
        let s = compute_score_table(&t);
        let r = sonneborn_berger_ranking(&t, &s).unwrap();
        // SB values: S 18, R 14, Q 12, P 11.5.
        assert_eq!(pos(&r, "S"), 1);
        assert_eq!(pos(&r, "R"), 2);
        assert_eq!(pos(&r, "Q"), 3);
        assert_eq!(pos(&r, "P"), 4);
    }

    #[test]
    fn buchholz_ranking_normalizes_by_matches() {
        let t = fixture();
        let s = compute_score_table(&t);
        let r = buchholz_ranking(&t, &s).unwrap();
        // Keys B * MP / m: P 28/3, Q 8/3, R 8, S 28/3. P and S tie
        // exactly, resolved by match points (equal), then SB (S higher).
        assert_eq!(pos(&r, "S"), 1);
        assert_eq!(pos(&r, "P"), 2);
        assert_eq!(pos(&r, "R"), 3);
        assert_eq!(pos(&r, "Q"), 4);
    }

    #[test]
    fn mix_ranking_combines_sb_and_buchholz() {
        let t = fixture();
        let s = compute_score_table(&t);
        let r = mix_ranking(&t, &s).unwrap();
        // Keys SB + F * B: P 11.5 + 7/3*7 = 167/6; Q 12 + 4/3*8 = 68/3;
        // R 14 + 2*8 = 30; S 18 + 7/3*7 = 206/6.
        assert_eq!(pos(&r, "S"), 1);
        assert_eq!(pos(&r, "R"), 2);
        assert_eq!(pos(&r, "P"), 3);
        assert_eq!(pos(&r, "Q"), 4);
    }

    #[test]
    fn weights_ranking_descends() {
        let t = fixture();
        let w = WeightVector::new(
            vec![0.1, 0.4, 0.3, 0.2],
            Method::Llsm,
            ScaleName::Builtin(BuiltinScale::A),
        )
        .unwrap();
        let r = ranking_from_weights(&t, &w).unwrap();
        assert_eq!(r.label(), "A-LLSM");
        assert_eq!(pos(&r, "Q"), 1);
        assert_eq!(pos(&r, "R"), 2);
        assert_eq!(pos(&r, "S"), 3);
        assert_eq!(pos(&r, "P"), 4);
        assert!(!r.tie_break_used());
    }

    #[test]
    fn equal_weights_fall_back_to_id() {
        let t = fixture();
        let w = WeightVector::new(
            vec![0.25, 0.25, 0.25, 0.25],
            Method::Em,
            ScaleName::Builtin(BuiltinScale::C),
        )
        .unwrap();
        let r = ranking_from_weights(&t, &w).unwrap();
        assert!(r.tie_break_used());
        assert_eq!(pos(&r, "P"), 1);
        assert_eq!(pos(&r, "S"), 4);
    }

    #[test]
    fn start_ranking_requires_full_ranks() {
        let t = fixture();
        assert!(start_ranking(&t).is_err());
    }

    #[test]
    fn permutation_validation() {
        let ids: Vec<TeamId> = vec!["A".into(), "B".into()];
        assert!(Ranking::new("x", ids.clone(), vec![1, 1], vec![0.0, 0.0], false).is_err());
        assert!(Ranking::new("x", ids.clone(), vec![1], vec![0.0], false).is_err());
        assert!(Ranking::new("x", ids, vec![2, 1], vec![0.0, 0.0], false).is_ok());
    }

    #[test]
    fn mismatched_weight_length_rejected() {
        let t = fixture();
        let w = WeightVector::new(
            vec![0.5, 0.5],
            Method::Llsm,
            ScaleName::Builtin(BuiltinScale::A),
        )
        .unwrap();
        assert!(matches!(
            ranking_from_weights(&t, &w).unwrap_err(),
            Error::MismatchedTeams
        ));
    }
}
