//! Seeded generators for tournaments, comparison matrices, and rankings.
//!
//! Everything here is deterministic in the seed, so tests and benches
//! can regenerate identical inputs. Generated structures go through the
//! normal validating constructors.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::pcm::IncompletePcm;
use crate::ranking::Ranking;
use crate::scale::ScaleName;
use crate::tournament::{GamePoints, MatchRecord, Team, TeamId, Tournament};

/// Standard normal draw via Box-Muller; avoids an extra distribution
/// dependency.
fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// A Swiss-like tournament: teams with seeded strengths, rounds paired
/// by running score with rematches forbidden, game points drawn from
/// eight strength-weighted game simulations.
pub fn synthetic_tournament(n_teams: usize, rounds: u32, seed: u64) -> Tournament {
    assert!(n_teams >= 2, "need at least two teams");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut start_ranks: Vec<u32> = (1..=n_teams as u32).collect();
    start_ranks.shuffle(&mut rng);
    let teams: Vec<Team> = (0..n_teams)
        .map(|i| Team {
            id: TeamId::new(format!("T{:03}", i + 1)),
            name: format!("Team {:03}", i + 1),
            start_rank: Some(start_ranks[i]),
        })
        .collect();

    // Strength follows the seeding with noise, so results correlate
    // with start rank without reproducing it.
    let strengths: Vec<f64> = (0..n_teams)
        .map(|i| {
            let base = (n_teams as f64 - start_ranks[i] as f64) / n_teams as f64;
            (base * 2.0 + 0.4 * gauss(&mut rng)).exp()
        })
        .collect();

    let mut match_points = vec![0u32; n_teams];
    let mut met: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut matches = Vec::new();

    for round in 1..=rounds {
        let mut order: Vec<usize> = (0..n_teams).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(match_points[i]), i));
        let mut used = vec![false; n_teams];
        for a_pos in 0..n_teams {
            let a = order[a_pos];
            if used[a] {
                continue;
            }
            let partner = (a_pos + 1..n_teams)
                .map(|p| order[p])
                .find(|&b| !used[b] && !met.contains(&(a.min(b), a.max(b))));
            let Some(b) = partner else { continue };
            used[a] = true;
            used[b] = true;
            met.insert((a.min(b), a.max(b)));

            // Eight games, each won by A with probability proportional
            // to its strength share.
            let p = strengths[a] / (strengths[a] + strengths[b]);
            let mut half = 0u8;
            for _ in 0..8 {
                if rng.random::<f64>() < p {
                    half += 1;
                }
            }
            let gp = GamePoints::from_half_points(half).expect("binomial stays on grid");
            match_points[a] += gp.match_points();
            match_points[b] += gp.opponent().match_points();
            matches.push(MatchRecord {
                round,
                team_a: teams[a].id.clone(),
                team_b: teams[b].id.clone(),
                game_points_a: gp,
            });
        }
    }

    Tournament::new(teams, rounds, matches).expect("generator output must validate")
}

/// Latent positive weights, log-normally spread around 1.
pub fn latent_weights(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| gauss(&mut rng).exp()).collect()
}

/// A connected incomplete matrix: a random spanning tree plus
/// `extra_edges` additional pairs, entries w_i / w_j perturbed by
/// log-normal noise of the given sigma.
pub fn connected_pcm(
    n: usize,
    extra_edges: usize,
    noise_sigma: f64,
    seed: u64,
    scale: ScaleName,
) -> IncompletePcm {
    assert!(n >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = latent_weights(n, seed.wrapping_add(1));

    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for v in 1..n {
        let parent = rng.random_range(0..v);
        edges.insert((parent, v));
    }
    let max_extra = n * (n - 1) / 2 - edges.len();
    let mut added = 0;
    let mut attempts = 0;
    while added < extra_edges.min(max_extra) && attempts < 100 * (extra_edges + 1) {
        attempts += 1;
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        if edges.insert((i.min(j), i.max(j))) {
            added += 1;
        }
    }

    let entries: Vec<(usize, usize, f64)> = edges
        .into_iter()
        .map(|(i, j)| {
            let noise = (noise_sigma * gauss(&mut rng)).exp();
            (i, j, weights[i] / weights[j] * noise)
        })
        .collect();
    IncompletePcm::new(n, entries, scale).expect("generator output must validate")
}

/// The fully consistent complete matrix a_ij = w_i / w_j.
pub fn consistent_pcm(weights: &[f64], scale: ScaleName) -> IncompletePcm {
    let n = weights.len();
    let mut entries = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            entries.push((i, j, weights[i] / weights[j]));
        }
    }
    IncompletePcm::new(n, entries, scale).expect("consistent matrix must validate")
}

/// Builds a ranking over generic team ids t001..t<n> from explicit
/// positions.
pub fn ranking_from_positions(label: &str, positions: &[u32]) -> Result<Ranking> {
    let ids: Vec<TeamId> = (1..=positions.len())
        .map(|i| TeamId::new(format!("t{i:03}")))
        .collect();
    let keys = positions.iter().map(|&p| p as f64).collect();
    Ranking::new(label, ids, positions.to_vec(), keys, false)
}

/// A uniformly random permutation ranking over n generic teams.
pub fn random_ranking(label: &str, n: usize, seed: u64) -> Ranking {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions: Vec<u32> = (1..=n as u32).collect();
    positions.shuffle(&mut rng);
    ranking_from_positions(label, &positions).expect("shuffled permutation is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcm::comparison_graph;
    use crate::scale::BuiltinScale;

    fn name() -> ScaleName {
        ScaleName::Builtin(BuiltinScale::A)
    }

    #[test]
    fn tournament_deterministic_in_seed() {
        let a = synthetic_tournament(12, 5, 7);
        let b = synthetic_tournament(12, 5, 7);
        assert_eq!(a.matches(), b.matches());
        let c = synthetic_tournament(12, 5, 8);
        assert_ne!(a.matches(), c.matches());
    }

    #[test]
    fn tournament_is_swiss_like() {
        let t = synthetic_tournament(16, 7, 3);
        assert!(t.has_full_start_ranks());
        // Validation already forbids rematches; check rounds are full.
        for round in 1..=7u32 {
            let in_round = t.matches().iter().filter(|m| m.round == round).count();
            assert!(in_round >= 6, "round {round} has only {in_round} matches");
        }
    }

    #[test]
    fn connected_pcm_is_connected() {
        for seed in 0..5 {
            let m = connected_pcm(10, 6, 0.3, seed, name());
            assert!(comparison_graph(&m).is_connected());
            assert_eq!(m.known_count(), 9 + 6);
        }
    }

    #[test]
    fn consistent_pcm_has_no_missing_entries() {
        let w = latent_weights(6, 11);
        let m = consistent_pcm(&w, name());
        assert_eq!(m.missing_count(), 0);
        // Spot-check consistency a_ik = a_ij * a_jk.
        let a01 = m.get(0, 1).unwrap();
        let a12 = m.get(1, 2).unwrap();
        let a02 = m.get(0, 2).unwrap();
        assert!((a01 * a12 - a02).abs() < 1e-12 * a02.abs());
    }

    #[test]
    fn random_ranking_deterministic() {
        let a = random_ranking("r", 20, 5);
        let b = random_ranking("r", 20, 5);
        assert_eq!(a.positions(), b.positions());
    }
}
