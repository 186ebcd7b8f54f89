//! Induced matchings and the matching lower bound on packing dimension.
//!
//! Two members of size at least two conflict when some member meets both of
//! them (possibly one of the two itself). Independent sets of the resulting
//! conflict graph are exactly the induced matchings.

use fixedbitset::FixedBitSet;

use super::{is_downward_closed, isolated_elements, SetFamily};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    pub graph: Graph,
    /// The member behind each vertex, in lexicographic order.
    pub sets: Vec<Vec<usize>>,
}

pub fn conflict_graph(f: &SetFamily) -> ConflictGraph {
    let sets: Vec<Vec<usize>> = f.sets().filter(|s| s.len() >= 2).cloned().collect();
    let mut containing = vec![FixedBitSet::with_capacity(sets.len()); f.universe_size()];
    for (v, s) in sets.iter().enumerate() {
        for &e in s {
            containing[e].insert(v);
        }
    }
    // Every member turns the vertices it meets into a clique.
    let mut adjacency = vec![FixedBitSet::with_capacity(sets.len()); sets.len()];
    let mut seen = std::collections::HashSet::new();
    for s in f.sets() {
        let mut met = FixedBitSet::with_capacity(sets.len());
        for &e in s {
            met.union_with(&containing[e]);
        }
        if met.count_ones(..) < 2 || !seen.insert(met.clone()) {
            continue;
        }
        for v in met.ones() {
            adjacency[v].union_with(&met);
        }
    }
    let edges = adjacency
        .iter()
        .enumerate()
        .flat_map(|(u, adj)| adj.ones().filter(move |&v| v > u).map(move |v| (u, v)))
        .collect::<Vec<_>>();
    let graph = Graph::new(sets.len(), edges).expect("vertices are in range");
    ConflictGraph { graph, sets }
}

/// Pairwise disjoint members of size at least two, no member meeting two of
/// them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedMatching {
    sets: Vec<Vec<usize>>,
}

impl InducedMatching {
    /// Validates `sets` against `f`.
    pub fn new(f: &SetFamily, mut sets: Vec<Vec<usize>>) -> Result<Self> {
        for s in sets.iter_mut() {
            s.sort_unstable();
            s.dedup();
        }
        sets.sort();
        let mut owner = vec![None; f.universe_size()];
        for (i, s) in sets.iter().enumerate() {
            if s.len() < 2 {
                return Err(Error::input(format!("{s:?} has fewer than two elements")));
            }
            if !f.contains(s) {
                return Err(Error::input(format!("{s:?} is not a member")));
            }
            for &e in s {
                if let Some(j) = owner[e] {
                    return Err(Error::input(format!(
                        "{:?} and {s:?} share element {e}",
                        sets[j]
                    )));
                }
                owner[e] = Some(i);
            }
        }
        for s in f.sets() {
            let mut hit = s.iter().filter_map(|&e| owner[e]);
            if let Some(first) = hit.next() {
                if let Some(other) = hit.find(|&j| j != first) {
                    return Err(Error::input(format!(
                        "member {s:?} meets both {:?} and {:?}",
                        sets[first], sets[other]
                    )));
                }
            }
        }
        Ok(InducedMatching { sets })
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingMode {
    /// Static ascending-degree order, ties by the sets' lexicographic order.
    /// The result is a maximal independent set, so it has at least
    /// `ceil(|V| / (max degree + 1))` members.
    Greedy,
    /// Maximum independent set by branch and bound.
    Exact,
}

pub fn induced_matching(f: &SetFamily, mode: MatchingMode) -> Result<InducedMatching> {
    induced_matching_budgeted(f, mode, &mut Budget::default())
}

pub fn induced_matching_budgeted(
    f: &SetFamily,
    mode: MatchingMode,
    budget: &mut Budget,
) -> Result<InducedMatching> {
    let cg = conflict_graph(f);
    let chosen = match mode {
        MatchingMode::Greedy => greedy_independent(&cg.graph),
        MatchingMode::Exact => max_independent(&cg.graph, budget)?,
    };
    InducedMatching::new(f, chosen.into_iter().map(|v| cg.sets[v].clone()).collect())
}

fn greedy_independent(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    // Vertices are already in lexicographic set order; the sort is stable.
    order.sort_by_key(|&v| g.degree(v));
    let mut blocked = FixedBitSet::with_capacity(g.vertex_count());
    let mut chosen = Vec::new();
    for v in order {
        if !blocked.contains(v) {
            chosen.push(v);
            blocked.insert(v);
            blocked.union_with(g.neighbors(v));
        }
    }
    chosen.sort_unstable();
    chosen
}

fn max_independent(g: &Graph, budget: &mut Budget) -> Result<Vec<usize>> {
    let mut best = greedy_independent(g);
    let mut all = FixedBitSet::with_capacity(g.vertex_count());
    all.insert_range(..);
    let mut current = Vec::new();
    branch(g, all, &mut current, &mut best, budget)?;
    best.sort_unstable();
    Ok(best)
}

/// Some maximum independent set of the remaining graph contains a vertex of
/// `N[v]` for any remaining `v`; branching on a minimum-degree `v` keeps the
/// fan-out small.
fn branch(
    g: &Graph,
    remaining: FixedBitSet,
    current: &mut Vec<usize>,
    best: &mut Vec<usize>,
    budget: &mut Budget,
) -> Result<()> {
    budget.tick("induced matching")?;
    let left = remaining.count_ones(..);
    if left == 0 {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return Ok(());
    }
    if current.len() + left <= best.len() {
        return Ok(());
    }
    let degree = |v: usize| g.neighbors(v).intersection(&remaining).count();
    let v = remaining
        .ones()
        .min_by_key(|&v| degree(v))
        .expect("non-empty");
    let mut closed = g.neighbors(v).clone();
    closed.intersect_with(&remaining);
    closed.insert(v);
    for u in closed.ones() {
        let mut next = remaining.clone();
        next.set(u, false);
        next.difference_with(g.neighbors(u));
        current.push(u);
        branch(g, next, current, best, budget)?;
        current.pop();
    }
    Ok(())
}

/// Default node allowance for the exact matching inside [`gpd_lower_bound`].
pub const EXACT_MATCHING_NODES: u64 = 1_000_000;

/// The packing dimension of the family is at least `value`, or infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    pub value: usize,
    /// Whether the matching is maximum; otherwise it is the greedy one.
    pub exact: bool,
    /// Hygiene problems that void the bound's usual reading.
    pub warnings: Vec<String>,
    pub matching: InducedMatching,
}

/// Tries the exact matching under `budget` and falls back to the greedy one
/// when it runs out.
pub fn gpd_lower_bound(f: &SetFamily, budget: &mut Budget) -> Result<LowerBound> {
    let mut warnings = Vec::new();
    if let Some(w) = is_downward_closed(f) {
        warnings.push(format!(
            "not downward closed: {:?} is a member but {:?} is not",
            w.member, w.missing
        ));
    }
    let isolated = isolated_elements(f);
    if !isolated.is_empty() {
        warnings.push(format!("isolated elements: {isolated:?}"));
    }
    let (matching, exact) = match induced_matching_budgeted(f, MatchingMode::Exact, budget) {
        Ok(m) => (m, true),
        Err(e) if e.is_budget() => (induced_matching(f, MatchingMode::Greedy)?, false),
        Err(e) => return Err(e),
    };
    Ok(LowerBound {
        value: matching.len(),
        exact,
        warnings,
        matching,
    })
}
