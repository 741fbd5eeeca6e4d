//! Incomplete pairwise comparison matrices and their comparison graphs.
//!
//! Only upper-triangle entries are stored; the diagonal is 1 and the
//! lower triangle is implied by reciprocity a_ji = 1 / a_ij. A pair
//! without a stored entry is a missing comparison.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scale::{RatioScale, ScaleName};
use crate::tournament::Tournament;

/// A positive reciprocal matrix with possibly missing comparisons.
#[derive(Debug, Clone)]
pub struct IncompletePcm {
    n: usize,
    /// Keys are (i, j) with i < j; values are a_ij > 0.
    entries: BTreeMap<(usize, usize), f64>,
    scale: ScaleName,
}

impl IncompletePcm {
    /// Builds a matrix from explicit upper-triangle entries. Rejects
    /// out-of-range indices, non-positive or non-finite values, and
    /// duplicate pairs (a mirrored duplicate counts as a duplicate).
    pub fn new(
        n: usize,
        raw: impl IntoIterator<Item = (usize, usize, f64)>,
        scale: ScaleName,
    ) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, j, a) in raw {
            if i >= n || j >= n {
                return Err(Error::Validation(format!(
                    "entry ({i},{j}) outside a {n}x{n} matrix"
                )));
            }
            if i == j {
                return Err(Error::Validation(format!(
                    "diagonal entry ({i},{i}) may not be supplied"
                )));
            }
            if !a.is_finite() || a <= 0.0 {
                return Err(Error::Validation(format!(
                    "entry ({i},{j}) must be positive and finite, got {a}"
                )));
            }
            let (key, value) = if i < j { ((i, j), a) } else { ((j, i), 1.0 / a) };
            if entries.insert(key, value).is_some() {
                return Err(Error::Validation(format!(
                    "pair ({},{}) supplied more than once",
                    key.0, key.1
                )));
            }
        }
        Ok(IncompletePcm { n, entries, scale })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> &ScaleName {
        &self.scale
    }

    /// The comparison value for (i, j): 1 on the diagonal, the stored
    /// entry or its reciprocal where known, None where missing.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        if i == j {
            return Some(1.0);
        }
        if i < j {
            self.entries.get(&(i, j)).copied()
        } else {
            self.entries.get(&(j, i)).map(|a| 1.0 / a)
        }
    }

    /// Stored upper-triangle entries in key order.
    pub fn known(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().map(|(&(i, j), &a)| (i, j, a))
    }

    pub fn known_count(&self) -> usize {
        self.entries.len()
    }

    /// Upper-triangle pairs with no comparison, in lexicographic order.
    pub fn missing_pairs(&self) -> Vec<(usize, usize)> {
        let mut missing = Vec::with_capacity(self.missing_count());
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if !self.entries.contains_key(&(i, j)) {
                    missing.push((i, j));
                }
            }
        }
        missing
    }

    pub fn missing_count(&self) -> usize {
        self.n * (self.n - 1) / 2 - self.entries.len()
    }

    /// Fraction of off-diagonal pairs that are known.
    pub fn density(&self) -> f64 {
        let total = self.n * (self.n - 1) / 2;
        if total == 0 {
            1.0
        } else {
            self.entries.len() as f64 / total as f64
        }
    }
}

/// Builds the comparison matrix of a tournament under a ratio scale:
/// one known entry per played match, indexed by roster order.
pub fn build_pcm(t: &Tournament, scale: &RatioScale) -> Result<IncompletePcm> {
    let raw: Vec<(usize, usize, f64)> = t
        .matches_by_index()
        .into_iter()
        .map(|(ia, ib, gp_a)| {
            // Store at (min, max) with the value oriented from the
            // lower roster index toward the higher one.
            if ia < ib {
                (ia, ib, scale.value(gp_a))
            } else {
                (ib, ia, scale.value(gp_a.opponent()))
            }
        })
        .collect();
    IncompletePcm::new(t.team_count(), raw, scale.name().clone())
}

/// Undirected graph with one vertex per alternative and one edge per
/// known comparison.
#[derive(Debug, Clone)]
pub struct ComparisonGraph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl ComparisonGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Connected components as sorted vertex lists, ordered by smallest
    /// member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut queue = std::collections::VecDeque::from([start]);
            seen[start] = true;
            let mut comp = vec![start];
            while let Some(v) = queue.pop_front() {
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// Breadth-first spanning tree from vertex 0: for each non-root
    /// vertex, its parent in the tree. Requires a connected graph.
    pub fn bfs_tree(&self) -> Result<Vec<Option<usize>>> {
        if self.n == 0 {
            return Ok(Vec::new());
        }
        let mut parent: Vec<Option<usize>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        if reached < self.n {
            return Err(Error::Disconnected {
                components: self.components(),
            });
        }
        Ok(parent)
    }
}

pub fn comparison_graph(m: &IncompletePcm) -> ComparisonGraph {
    let n = m.n();
    let mut adjacency: Vec<Vec<usize>> = (0..n).map(|_| Vec::new()).collect();
    let mut edges = Vec::with_capacity(m.known_count());
    for (i, j, _) in m.known() {
        adjacency[i].push(j);
        adjacency[j].push(i);
        edges.push((i, j));
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
    }
    ComparisonGraph {
        n,
        adjacency,
        edges,
    }
}
