//! Embeddings of set families as boxes, their verification, and a small
//! exhaustive search over grid-valued side lengths.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{is_downward_closed, ClosureWitness, SetFamily};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::geometry::{fits_exact_budgeted, BoxDims, PackingInstance};
use crate::scalar::Scalar;

/// One box per universe element, all of the same dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding<T> {
    dimension: usize,
    map: Vec<BoxDims<T>>,
}

impl<T: Scalar> Embedding<T> {
    pub fn new(dimension: usize, map: Vec<BoxDims<T>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::input("dimension must be positive"));
        }
        if map.is_empty() {
            return Err(Error::input("an embedding needs at least one element"));
        }
        if let Some(b) = map.iter().find(|b| b.dimension() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: b.dimension(),
            });
        }
        Ok(Embedding { dimension, map })
    }

    /// Every element mapped to the same cube.
    pub fn constant(universe_size: usize, dimension: usize, side: T) -> Result<Self> {
        let cube = BoxDims::cube(dimension, side)?;
        Self::new(dimension, vec![cube; universe_size])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn universe_size(&self) -> usize {
        self.map.len()
    }

    pub fn image(&self, element: usize) -> &BoxDims<T> {
        &self.map[element]
    }

    pub fn images(&self) -> &[BoxDims<T>] {
        &self.map
    }

    /// The boxes of a set of elements as a packing instance.
    pub fn instance(&self, set: &[usize]) -> Result<PackingInstance<T>> {
        let boxes = set
            .iter()
            .map(|&e| {
                self.map
                    .get(e)
                    .cloned()
                    .ok_or_else(|| Error::input(format!("element {e} is not embedded")))
            })
            .collect::<Result<Vec<_>>>()?;
        PackingInstance::new(self.dimension, boxes)
    }

    pub fn fits(&self, set: &[usize], budget: &mut Budget) -> Result<bool> {
        Ok(fits_exact_budgeted(&self.instance(set)?, budget)?.is_some())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    MemberDoesNotFit,
    NonMemberFits,
}

/// A set on which fit and membership disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingViolation {
    pub set: Vec<usize>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingCheck {
    Valid,
    Violation(EmbeddingViolation),
    /// Fit is monotone, so a family that is not downward closed has no
    /// embedding at all.
    NotDownwardClosed(ClosureWitness),
}

impl EmbeddingCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, EmbeddingCheck::Valid)
    }
}

/// Members with no one-element extension in the family. For a downward-closed
/// family these are exactly the inclusion-maximal members.
pub fn maximal_members(f: &SetFamily) -> Vec<Vec<usize>> {
    f.sets()
        .filter(|s| (0..f.universe_size()).all(|x| s.contains(&x) || !f.contains(&with(s, x))))
        .cloned()
        .collect()
}

/// Non-members all of whose one-smaller subsets are members, in lexicographic
/// order. For a downward-closed family every non-member contains one of these.
pub fn minimal_non_members(f: &SetFamily) -> Vec<Vec<usize>> {
    if !f.contains(&[]) {
        return vec![Vec::new()];
    }
    let mut out = BTreeSet::new();
    for s in f.sets() {
        for x in 0..f.universe_size() {
            if s.contains(&x) {
                continue;
            }
            let t = with(s, x);
            if !f.contains(&t) && (0..t.len()).all(|i| f.contains(&without(&t, i))) {
                out.insert(t);
            }
        }
    }
    out.into_iter().collect()
}

fn with(s: &[usize], x: usize) -> Vec<usize> {
    let mut t = s.to_vec();
    let at = t.partition_point(|&y| y < x);
    t.insert(at, x);
    t
}

fn without(s: &[usize], i: usize) -> Vec<usize> {
    let mut t = s.to_vec();
    t.remove(i);
    t
}

fn check_shape<T: Scalar>(f: &SetFamily, emb: &Embedding<T>) -> Result<()> {
    if emb.universe_size() != f.universe_size() {
        return Err(Error::input(format!(
            "embedding covers {} elements but the universe has {}",
            emb.universe_size(),
            f.universe_size()
        )));
    }
    Ok(())
}

/// Checks membership against fit on the maximal members and the minimal
/// non-members, which suffices by monotonicity.
pub fn verify_embedding<T: Scalar>(f: &SetFamily, emb: &Embedding<T>) -> Result<EmbeddingCheck> {
    verify_embedding_budgeted(f, emb, &mut Budget::default())
}

pub fn verify_embedding_budgeted<T: Scalar>(
    f: &SetFamily,
    emb: &Embedding<T>,
    budget: &mut Budget,
) -> Result<EmbeddingCheck> {
    check_shape(f, emb)?;
    if let Some(w) = is_downward_closed(f) {
        return Ok(EmbeddingCheck::NotDownwardClosed(w));
    }
    for s in maximal_members(f) {
        if !emb.fits(&s, budget)? {
            return Ok(EmbeddingCheck::Violation(EmbeddingViolation {
                set: s,
                kind: ViolationKind::MemberDoesNotFit,
            }));
        }
    }
    for s in minimal_non_members(f) {
        if emb.fits(&s, budget)? {
            return Ok(EmbeddingCheck::Violation(EmbeddingViolation {
                set: s,
                kind: ViolationKind::NonMemberFits,
            }));
        }
    }
    Ok(EmbeddingCheck::Valid)
}

/// Largest universe [`verify_embedding_exhaustive`] accepts.
pub const MAX_EXHAUSTIVE_UNIVERSE: usize = 20;

/// Compares fit and membership on every subset of the universe, reporting the
/// first disagreement in order of the subsets' bitmasks.
pub fn verify_embedding_exhaustive<T: Scalar>(
    f: &SetFamily,
    emb: &Embedding<T>,
    budget: &mut Budget,
) -> Result<EmbeddingCheck> {
    check_shape(f, emb)?;
    let n = f.universe_size();
    if n > MAX_EXHAUSTIVE_UNIVERSE {
        return Err(Error::input(format!(
            "exhaustive check limited to {MAX_EXHAUSTIVE_UNIVERSE} elements"
        )));
    }
    for mask in 0u32..1 << n {
        let s: Vec<usize> = (0..n).filter(|&e| mask >> e & 1 == 1).collect();
        let member = f.contains(&s);
        if emb.fits(&s, budget)? != member {
            let kind = if member {
                ViolationKind::MemberDoesNotFit
            } else {
                ViolationKind::NonMemberFits
            };
            return Ok(EmbeddingCheck::Violation(EmbeddingViolation {
                set: s,
                kind,
            }));
        }
    }
    Ok(EmbeddingCheck::Valid)
}

/// Searches for an embedding whose sides all lie in `{1/m, ..., m/m}`.
///
/// Elements are assigned in index order and candidate boxes tried in
/// lexicographic order of their numerators, so the result is the first valid
/// embedding in that order. `None` only means that no embedding exists at
/// this granularity.
pub fn search_embedding<T: Scalar>(
    f: &SetFamily,
    d: usize,
    m: u32,
) -> Result<Option<Embedding<T>>> {
    search_embedding_budgeted(f, d, m, &mut Budget::default())
}

pub fn search_embedding_budgeted<T: Scalar>(
    f: &SetFamily,
    d: usize,
    m: u32,
    budget: &mut Budget,
) -> Result<Option<Embedding<T>>> {
    if d == 0 || m == 0 {
        return Err(Error::input("dimension and grid must be positive"));
    }
    if let Some(w) = is_downward_closed(f) {
        return Err(Error::input(format!(
            "family is not downward closed: {:?} is a member but {:?} is not",
            w.member, w.missing
        )));
    }
    let n = f.universe_size();
    // Sets to test when element `e` is assigned, i.e. those whose largest
    // element is `e`: prefixes of maximal members must fit, minimal
    // non-members must not.
    let mut must_fit: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); n];
    for s in maximal_members(f) {
        for (i, &e) in s.iter().enumerate() {
            must_fit[e].insert(s[..=i].to_vec());
        }
    }
    let mut must_not_fit: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for s in minimal_non_members(f) {
        match s.last() {
            Some(&e) => must_not_fit[e].push(s),
            // Only the empty set: it always fits.
            None => return Ok(None),
        }
    }

    let mut search = GridSearch {
        d,
        m,
        must_fit,
        must_not_fit,
        cells: Vec::with_capacity(n),
        memo: HashMap::new(),
        budget,
        scalar: std::marker::PhantomData::<T>,
    };
    if !search.run(n)? {
        return Ok(None);
    }
    let map = search
        .cells
        .iter()
        .map(|c| {
            BoxDims::new(
                c.iter()
                    .map(|&k| T::from_ratio(k as i64, m as i64))
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let emb = Embedding::new(d, map)?;
    debug_assert!(verify_embedding(f, &emb)?.is_valid());
    Ok(Some(emb))
}

struct GridSearch<'a, T> {
    d: usize,
    m: u32,
    must_fit: Vec<BTreeSet<Vec<usize>>>,
    must_not_fit: Vec<Vec<Vec<usize>>>,
    cells: Vec<Vec<u32>>,
    /// Fit results keyed by the sorted multiset of numerator vectors.
    memo: HashMap<Vec<Vec<u32>>, bool>,
    budget: &'a mut Budget,
    scalar: std::marker::PhantomData<T>,
}

impl<T: Scalar> GridSearch<'_, T> {
    fn run(&mut self, n: usize) -> Result<bool> {
        let e = self.cells.len();
        if e == n {
            return Ok(true);
        }
        let mut cell = vec![1u32; self.d];
        loop {
            self.budget.tick("embedding search")?;
            self.cells.push(cell.clone());
            if self.consistent(e)? && self.run(n)? {
                return Ok(true);
            }
            self.cells.pop();
            // Odometer over {1..m}^d, last coordinate fastest.
            let mut i = self.d;
            loop {
                if i == 0 {
                    return Ok(false);
                }
                i -= 1;
                if cell[i] < self.m {
                    cell[i] += 1;
                    break;
                }
                cell[i] = 1;
            }
        }
    }

    fn consistent(&mut self, e: usize) -> Result<bool> {
        let fit_sets: Vec<Vec<usize>> = self.must_fit[e].iter().cloned().collect();
        for s in &fit_sets {
            if !self.fits(s)? {
                return Ok(false);
            }
        }
        let non_sets = std::mem::take(&mut self.must_not_fit[e]);
        let mut ok = true;
        for s in &non_sets {
            if self.fits(s)? {
                ok = false;
                break;
            }
        }
        self.must_not_fit[e] = non_sets;
        Ok(ok)
    }

    fn fits(&mut self, set: &[usize]) -> Result<bool> {
        let mut key: Vec<Vec<u32>> = set.iter().map(|&e| self.cells[e].clone()).collect();
        key.sort_unstable();
        if let Some(&hit) = self.memo.get(&key) {
            return Ok(hit);
        }
        let m = self.m as i64;
        let sides = key
            .iter()
            .map(|c| c.iter().map(|&k| T::from_ratio(k as i64, m)).collect())
            .collect();
        let instance = PackingInstance::from_sides(self.d, sides)?;
        let fits = fits_exact_budgeted(&instance, self.budget)?.is_some();
        self.memo.insert(key, fits);
        Ok(fits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfamily::{downward_closure, lines_system, MAX_CLOSURE_SETS};
    use crate::Rational;

    fn fam(n: usize, sets: &[&[usize]]) -> SetFamily {
        SetFamily::new(n, sets.iter().map(|s| s.to_vec())).unwrap()
    }

    fn closed(n: usize, sets: &[&[usize]]) -> SetFamily {
        downward_closure(&fam(n, sets), MAX_CLOSURE_SETS).unwrap()
    }

    fn emb1(values: &[(i64, i64)]) -> Embedding<Rational> {
        let map = values
            .iter()
            .map(|&(p, q)| BoxDims::new(vec![Rational::from_ratio(p, q)]).unwrap())
            .collect();
        Embedding::new(1, map).unwrap()
    }

    #[test]
    fn maximal_and_minimal_sets() {
        let f = closed(4, &[&[0, 1], &[2, 3]]);
        assert_eq!(maximal_members(&f), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(
            minimal_non_members(&f),
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]
        );
        assert_eq!(minimal_non_members(&fam(2, &[])), vec![Vec::<usize>::new()]);
        let lines = lines_system(2).unwrap();
        assert_eq!(maximal_members(&lines).len(), 12);
        assert_eq!(minimal_non_members(&lines).len(), 84 - 12);
    }

    #[test]
    fn verify_examples() {
        let all = closed(2, &[&[0, 1]]);
        assert_eq!(
            verify_embedding(&all, &emb1(&[(1, 2), (1, 2)])).unwrap(),
            EmbeddingCheck::Valid
        );
        let singletons = fam(2, &[&[], &[0], &[1]]);
        assert_eq!(
            verify_embedding(&singletons, &emb1(&[(1, 1), (1, 1)])).unwrap(),
            EmbeddingCheck::Valid
        );
        assert_eq!(
            verify_embedding(&all, &emb1(&[(3, 4), (3, 4)])).unwrap(),
            EmbeddingCheck::Violation(EmbeddingViolation {
                set: vec![0, 1],
                kind: ViolationKind::MemberDoesNotFit
            })
        );
        let open = fam(2, &[&[0, 1]]);
        assert!(matches!(
            verify_embedding(&open, &emb1(&[(1, 2), (1, 2)])).unwrap(),
            EmbeddingCheck::NotDownwardClosed(_)
        ));
        assert!(verify_embedding(&all, &emb1(&[(1, 2)])).is_err());
    }

    #[test]
    fn exhaustive_agrees_with_verify() {
        let f = closed(4, &[&[0, 1], &[2, 3]]);
        let good = search_embedding::<Rational>(&f, 2, 2).unwrap().unwrap();
        let mut budget = Budget::default();
        assert!(verify_embedding_exhaustive(&f, &good, &mut budget)
            .unwrap()
            .is_valid());
        let bad = emb1(&[(1, 2), (1, 2), (1, 2), (1, 2)]);
        let check = verify_embedding_exhaustive(&f, &bad, &mut budget).unwrap();
        assert_eq!(
            check,
            EmbeddingCheck::Violation(EmbeddingViolation {
                set: vec![0, 2],
                kind: ViolationKind::NonMemberFits
            })
        );
    }

    #[test]
    fn search_two_pairs() {
        let f = closed(4, &[&[0, 1], &[2, 3]]);
        let emb = search_embedding::<Rational>(&f, 2, 2).unwrap().unwrap();
        assert!(verify_embedding(&f, &emb).unwrap().is_valid());
        let half = Rational::from_ratio(1, 2);
        let one = Rational::from_ratio(1, 1);
        assert_eq!(emb.image(0).sides(), &[half.clone(), one.clone()]);
        assert_eq!(emb.image(2).sides(), &[one, half]);
        assert!(search_embedding::<Rational>(&f, 1, 4).unwrap().is_none());
    }

    #[test]
    fn search_rejects_open_family() {
        assert!(search_embedding::<Rational>(&fam(2, &[&[0, 1]]), 1, 2).is_err());
        assert!(search_embedding::<Rational>(&closed(2, &[&[0]]), 0, 2).is_err());
    }

    #[test]
    fn search_budget() {
        let f = lines_system(2).unwrap();
        let err =
            search_embedding_budgeted::<Rational>(&f, 1, 12, &mut Budget::new(50)).unwrap_err();
        assert!(err.is_budget());
    }
}
