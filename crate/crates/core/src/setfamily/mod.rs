//! Set families and their geometric packing dimension.
//!
//! An embedding maps every element of a family's universe to a box of one
//! common dimension so that a set belongs to the family exactly when its
//! boxes fit in the unit cube. The packing dimension of a family is the
//! smallest dimension admitting such an embedding, if any does.

mod embedding;
mod lines;
mod matching;

pub use embedding::{
    maximal_members, minimal_non_members, search_embedding, search_embedding_budgeted,
    verify_embedding, verify_embedding_budgeted, verify_embedding_exhaustive, Embedding,
    EmbeddingCheck, EmbeddingViolation, ViolationKind, MAX_EXHAUSTIVE_UNIVERSE,
};
pub use lines::{find_1d_counterexample, lines_of, lines_system, F3Space, MAX_LINES_DIMENSION};
pub use matching::{
    conflict_graph, gpd_lower_bound, induced_matching, induced_matching_budgeted, ConflictGraph,
    InducedMatching, LowerBound, MatchingMode, EXACT_MATCHING_NODES,
};

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Distinct subsets of `0..universe_size`, each kept sorted, iterated in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    universe_size: usize,
    sets: BTreeSet<Vec<usize>>,
}

impl SetFamily {
    pub fn new(universe_size: usize, sets: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        if universe_size == 0 {
            return Err(Error::input("the universe must be non-empty"));
        }
        let mut out = BTreeSet::new();
        for mut s in sets {
            s.sort_unstable();
            s.dedup();
            if let Some(&e) = s.last() {
                if e >= universe_size {
                    return Err(Error::input(format!(
                        "element {e} outside 0..{universe_size}"
                    )));
                }
            }
            out.insert(s);
        }
        Ok(SetFamily {
            universe_size,
            sets: out,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> impl Iterator<Item = &Vec<usize>> + '_ {
        self.sets.iter()
    }

    /// Membership of a sorted, duplicate-free set.
    pub fn contains(&self, sorted: &[usize]) -> bool {
        self.sets.contains(sorted)
    }

    /// Membership of an arbitrary collection of elements.
    pub fn contains_set(&self, elements: &[usize]) -> bool {
        let mut s = elements.to_vec();
        s.sort_unstable();
        s.dedup();
        self.contains(&s)
    }
}

/// A member and one of its subsets missing from the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureWitness {
    pub member: Vec<usize>,
    pub missing: Vec<usize>,
}

/// `None` when every subset of every member is a member; otherwise a member
/// and a missing subset (obtained by dropping one element).
pub fn is_downward_closed(f: &SetFamily) -> Option<ClosureWitness> {
    for s in f.sets() {
        for i in 0..s.len() {
            let mut t = s.clone();
            t.remove(i);
            if !f.contains(&t) {
                return Some(ClosureWitness {
                    member: s.clone(),
                    missing: t,
                });
            }
        }
    }
    None
}

/// Elements that no member of size two or more contains.
pub fn isolated_elements(f: &SetFamily) -> Vec<usize> {
    let mut covered = vec![false; f.universe_size()];
    for s in f.sets().filter(|s| s.len() >= 2) {
        for &e in s {
            covered[e] = true;
        }
    }
    (0..f.universe_size()).filter(|&e| !covered[e]).collect()
}

/// Default cap on the number of sets [`downward_closure`] may produce.
pub const MAX_CLOSURE_SETS: usize = 1 << 20;

/// Smallest downward-closed family containing `f` (including the empty set).
pub fn downward_closure(f: &SetFamily, max_sets: usize) -> Result<SetFamily> {
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = f.sets().cloned().collect();
    stack.push(Vec::new());
    while let Some(s) = stack.pop() {
        if out.contains(&s) {
            continue;
        }
        for i in 0..s.len() {
            let mut t = s.clone();
            t.remove(i);
            if !out.contains(&t) {
                stack.push(t);
            }
        }
        out.insert(s);
        if out.len() > max_sets {
            return Err(Error::BudgetExceeded {
                nodes: max_sets as u64,
                context: "downward closure output size".to_string(),
            });
        }
    }
    Ok(SetFamily {
        universe_size: f.universe_size(),
        sets: out,
    })
}

/// Largest member size `k` and largest number `b` of members sharing one
/// element, with a member and an element attaining them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedProfile {
    pub k: usize,
    pub b: usize,
    pub largest_member: Option<Vec<usize>>,
    pub busiest_element: Option<usize>,
}

pub fn bounded_profile(f: &SetFamily) -> BoundedProfile {
    let largest_member = f
        .sets()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b.cmp(a)))
        .cloned();
    let mut counts = vec![0usize; f.universe_size()];
    for s in f.sets() {
        for &e in s {
            counts[e] += 1;
        }
    }
    let busiest = (0..counts.len())
        .filter(|&e| counts[e] > 0)
        .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)));
    BoundedProfile {
        k: largest_member.as_ref().map_or(0, Vec::len),
        b: busiest.map_or(0, |e| counts[e]),
        largest_member: largest_member.filter(|s| !s.is_empty()),
        busiest_element: busiest,
    }
}
