//! Complete fit decision by search over separation assignments.
//!
//! Two boxes in a packing are disjoint iff in some coordinate one of them ends
//! before the other starts. Choosing such a coordinate and order for every
//! pair gives, per coordinate, a precedence relation. An assignment is
//! realizable iff each relation is acyclic and every chain of boxes in it has
//! total side length at most one; corners are then the longest chain lengths
//! ending just before each box. The search enumerates assignments pair by pair
//! in lexicographic order, maintaining per coordinate the longest chain
//! between every two boxes.

use super::{PackingInstance, Placement};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_integer::Integer;
use num_traits::Num;

/// Pair `{first, second}` separated in `coordinate` with `first` ending at or
/// before the start of `second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Separator {
    pub coordinate: usize,
    pub first: usize,
    pub second: usize,
}

/// One separator per unordered pair of boxes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationAssignment {
    boxes: usize,
    separators: Vec<Separator>,
}

impl SeparationAssignment {
    /// Validates that the separators cover every unordered pair exactly once.
    pub fn new(boxes: usize, mut separators: Vec<Separator>) -> Result<Self> {
        let key = |s: &Separator| (s.first.min(s.second), s.first.max(s.second));
        separators.sort_by_key(key);
        let expected = boxes * boxes.saturating_sub(1) / 2;
        if separators.len() != expected {
            return Err(Error::input(format!(
                "{} separators for {} pairs",
                separators.len(),
                expected
            )));
        }
        let mut idx = 0;
        for i in 0..boxes {
            for j in i + 1..boxes {
                if key(&separators[idx]) != (i, j) {
                    return Err(Error::input(format!(
                        "pair ({i}, {j}) is not separated exactly once"
                    )));
                }
                idx += 1;
            }
        }
        Ok(SeparationAssignment { boxes, separators })
    }

    /// The assignment induced by a valid packing: for each pair, the smallest
    /// coordinate in which the two boxes are apart.
    pub fn from_placement<T: Scalar>(
        instance: &PackingInstance<T>,
        placement: &Placement<T>,
    ) -> Result<Self> {
        if !super::verify_packing(instance, placement)? {
            return Err(Error::input("placement is not a valid packing"));
        }
        let boxes = instance.boxes();
        let mut separators = Vec::new();
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                let (p, q) = (placement.position(i), placement.position(j));
                let sep = (0..instance.dimension())
                    .find_map(|l| {
                        if p[l].clone() + boxes[i].side(l).clone() <= q[l] {
                            Some(Separator {
                                coordinate: l,
                                first: i,
                                second: j,
                            })
                        } else if q[l].clone() + boxes[j].side(l).clone() <= p[l] {
                            Some(Separator {
                                coordinate: l,
                                first: j,
                                second: i,
                            })
                        } else {
                            None
                        }
                    })
                    .expect("verified packing separates every pair");
                separators.push(sep);
            }
        }
        Ok(SeparationAssignment {
            boxes: boxes.len(),
            separators,
        })
    }

    pub fn separators(&self) -> &[Separator] {
        &self.separators
    }

    /// Longest-chain corners if the assignment is realizable, `None` if some
    /// coordinate has a cycle or a chain longer than one.
    pub fn realize<T: Scalar>(
        &self,
        instance: &PackingInstance<T>,
    ) -> Result<Option<Placement<T>>> {
        if instance.len() != self.boxes {
            return Err(Error::input(
                "assignment and instance disagree on box count",
            ));
        }
        let sides = instance
            .boxes()
            .iter()
            .map(|b| b.sides().to_vec())
            .collect();
        let mut chains = Chains::new(sides, instance.dimension(), T::one());
        for s in &self.separators {
            if s.coordinate >= instance.dimension() {
                return Err(Error::input(format!(
                    "coordinate {} out of range",
                    s.coordinate
                )));
            }
            if !chains.can_add(s.coordinate, s.first, s.second) {
                return Ok(None);
            }
            chains.add(s.coordinate, s.first, s.second);
        }
        Ok(Some(Placement::from_trusted(chains.corners())))
    }
}

/// Lengths the search computes with: the scalar itself, or integers in units
/// of a common denominator.
trait Length: Num + Clone + Ord {}
impl<U: Num + Clone + Ord> Length for U {}

/// Per coordinate, `k x k` matrix of longest chain lengths: entry `(a, b)` is
/// the largest total side length of a precedence chain from `a` to `b`
/// (both included), or `None` when `b` is not reachable from `a`. The
/// longest chains ending and starting at each box are cached alongside.
struct Chains<U> {
    k: usize,
    cap: U,
    sides: Vec<Vec<U>>,
    layers: Vec<Layer<U>>,
}

#[derive(Clone)]
struct Layer<U> {
    table: Vec<Option<U>>,
    ending: Vec<U>,
    starting: Vec<U>,
}

impl<U: Length> Chains<U> {
    fn new(sides: Vec<Vec<U>>, d: usize, cap: U) -> Self {
        let k = sides.len();
        let layers = (0..d)
            .map(|l| {
                let mut table = vec![None; k * k];
                for a in 0..k {
                    table[a * k + a] = Some(sides[a][l].clone());
                }
                let own: Vec<U> = sides.iter().map(|s| s[l].clone()).collect();
                Layer {
                    table,
                    ending: own.clone(),
                    starting: own,
                }
            })
            .collect();
        Chains {
            k,
            cap,
            sides,
            layers,
        }
    }

    #[inline]
    fn get(&self, l: usize, a: usize, b: usize) -> Option<&U> {
        self.layers[l].table[a * self.k + b].as_ref()
    }

    fn precedes(&self, l: usize, a: usize, b: usize) -> bool {
        a != b && self.get(l, a, b).is_some()
    }

    fn can_add(&self, l: usize, first: usize, second: usize) -> bool {
        if first == second || self.get(l, second, first).is_some() {
            return false;
        }
        let layer = &self.layers[l];
        layer.ending[first].clone() + layer.starting[second].clone() <= self.cap
    }

    /// Adds `first -> second` in coordinate `l`; returns the previous layer for undo.
    fn add(&mut self, l: usize, first: usize, second: usize) -> Layer<U> {
        let k = self.k;
        let saved = self.layers[l].clone();
        let heads: Vec<(usize, U)> = (0..k)
            .filter_map(|a| saved.table[a * k + first].clone().map(|v| (a, v)))
            .collect();
        let tails: Vec<(usize, U)> = (0..k)
            .filter_map(|b| saved.table[second * k + b].clone().map(|v| (b, v)))
            .collect();
        let layer = &mut self.layers[l];
        for (a, head) in &heads {
            for (b, tail) in &tails {
                let cand = head.clone() + tail.clone();
                if layer.ending[*b] < cand {
                    layer.ending[*b] = cand.clone();
                }
                if layer.starting[*a] < cand {
                    layer.starting[*a] = cand.clone();
                }
                let slot = &mut layer.table[a * k + b];
                match slot {
                    Some(cur) if *cur >= cand => {}
                    _ => *slot = Some(cand),
                }
            }
        }
        saved
    }

    fn restore(&mut self, l: usize, layer: Layer<U>) {
        self.layers[l] = layer;
    }

    /// Volume bound on the regions the chains confine each box to.
    ///
    /// Box `c` must start at or after `ending(c) - v_c` and end by
    /// `cap - starting(c) + v_c` in every coordinate. For the confinement
    /// region `Q` of any box, the boxes' unavoidable overlaps with `Q` are
    /// disjoint, so their volumes must sum to at most `vol(Q)`.
    fn energy_ok(&self) -> bool {
        let d = self.layers.len();
        let k = self.k;
        let mut lo = vec![Vec::with_capacity(d); k];
        let mut hi = vec![Vec::with_capacity(d); k];
        for c in 0..k {
            for l in 0..d {
                let v = &self.sides[c][l];
                let layer = &self.layers[l];
                lo[c].push(layer.ending[c].clone() - v.clone());
                hi[c].push(self.cap.clone() - layer.starting[c].clone() + v.clone());
            }
        }
        // Overlap of [x, x + v) with [q0, q1) is unimodal in x, so its
        // minimum over the allowed slide is at one of the two extremes.
        let overlap = |x: &U, v: &U, q0: &U, q1: &U| -> U {
            let end = x.clone() + v.clone();
            let a = if x > q0 { x } else { q0 };
            let b = if end < *q1 { end } else { q1.clone() };
            if b > *a {
                b - a.clone()
            } else {
                U::zero()
            }
        };
        for q in 0..k {
            let capacity = (0..d).fold(U::one(), |acc, l| {
                acc * (hi[q][l].clone() - lo[q][l].clone())
            });
            let mut forced = U::zero();
            for c in 0..k {
                let mut vol = U::one();
                for l in 0..d {
                    let v = &self.sides[c][l];
                    let latest = hi[c][l].clone() - v.clone();
                    let a = overlap(&lo[c][l], v, &lo[q][l], &hi[q][l]);
                    let b = overlap(&latest, v, &lo[q][l], &hi[q][l]);
                    let m = if a < b { a } else { b };
                    if m.is_zero() {
                        vol = U::zero();
                        break;
                    }
                    vol = vol * m;
                }
                forced = forced + vol;
            }
            if forced > capacity {
                return false;
            }
        }
        true
    }

    /// Corners as longest chains ending just before each box.
    fn corners(&self) -> Vec<Vec<U>> {
        (0..self.k)
            .map(|b| {
                self.layers
                    .iter()
                    .enumerate()
                    .map(|(l, layer)| layer.ending[b].clone() - self.sides[b][l].clone())
                    .collect()
            })
            .collect()
    }
}

struct Search<'b, U> {
    d: usize,
    pairs: Vec<(usize, usize)>,
    chains: Chains<U>,
    chosen: Vec<Option<Separator>>,
    budget: &'b mut Budget,
}

impl<U: Length> Search<'_, U> {
    fn implied(&self, i: usize, j: usize) -> Option<Separator> {
        (0..self.d).find_map(|l| {
            if self.chains.precedes(l, i, j) {
                Some(Separator {
                    coordinate: l,
                    first: i,
                    second: j,
                })
            } else if self.chains.precedes(l, j, i) {
                Some(Separator {
                    coordinate: l,
                    first: j,
                    second: i,
                })
            } else {
                None
            }
        })
    }

    /// Every pair from `from` on is either already separated by transitivity
    /// or still has a compatible option, and the volume bound holds.
    fn lookahead(&self, from: usize) -> bool {
        self.pairs[from..].iter().all(|&(i, j)| {
            self.implied(i, j).is_some()
                || (0..self.d).any(|l| self.chains.can_add(l, i, j) || self.chains.can_add(l, j, i))
        }) && self.chains.energy_ok()
    }

    fn run(&mut self, idx: usize) -> Result<bool> {
        if idx == self.pairs.len() {
            return Ok(true);
        }
        let (i, j) = self.pairs[idx];
        // A pair already ordered by a chain needs no decision: adding the
        // direct edge would not lengthen any chain.
        if let Some(sep) = self.implied(i, j) {
            self.chosen[idx] = Some(sep);
            return self.run(idx + 1);
        }
        for l in 0..self.d {
            for (first, second) in [(i, j), (j, i)] {
                if !self.chains.can_add(l, first, second) {
                    continue;
                }
                self.budget.tick("exact fit search")?;
                let saved = self.chains.add(l, first, second);
                self.chosen[idx] = Some(Separator {
                    coordinate: l,
                    first,
                    second,
                });
                if self.lookahead(idx + 1) && self.run(idx + 1)? {
                    return Ok(true);
                }
                self.chains.restore(l, saved);
            }
        }
        self.chosen[idx] = None;
        Ok(false)
    }
}

/// Decides whether the boxes fit in the unit cube, returning a verified
/// placement if they do.
pub fn fits_exact<T: Scalar>(instance: &PackingInstance<T>) -> Result<Option<Placement<T>>> {
    fits_exact_budgeted(instance, &mut Budget::default())
}

pub fn fits_exact_budgeted<T: Scalar>(
    instance: &PackingInstance<T>,
    budget: &mut Budget,
) -> Result<Option<Placement<T>>> {
    Ok(separation_search(instance, budget)?.map(|(_, placement)| placement))
}

/// Common denominator of every side, when the whole search (including the
/// volume products) stays comfortably inside `i128`.
fn integer_scale<T: Scalar>(instance: &PackingInstance<T>) -> Option<i64> {
    let mut lcm: i64 = 1;
    for b in instance.boxes() {
        for s in b.sides() {
            let (_, den) = s.to_i64_pair()?;
            lcm = lcm.checked_div(lcm.gcd(&den))?.checked_mul(den)?;
            if lcm > 1 << 40 {
                return None;
            }
        }
    }
    let bits = 64 - (lcm as u64).leading_zeros() as usize;
    // Volumes are products of `d` lengths, summed over at most `k` boxes.
    let k_bits = 64 - (instance.len() as u64).leading_zeros() as usize;
    (bits * instance.dimension() + k_bits < 120).then_some(lcm)
}

/// Like [`fits_exact_budgeted`] but also returns the separation assignment
/// that produced the placement.
pub(crate) fn separation_search<T: Scalar>(
    instance: &PackingInstance<T>,
    budget: &mut Budget,
) -> Result<Option<(SeparationAssignment, Placement<T>)>> {
    let k = instance.len();
    let d = instance.dimension();
    if k <= 1 {
        let assignment = SeparationAssignment {
            boxes: k,
            separators: Vec::new(),
        };
        return Ok(Some((assignment, Placement::origin(k, d))));
    }
    // Total volume above one rules out a packing outright.
    let volume = instance
        .boxes()
        .iter()
        .fold(T::zero(), |acc, b| acc + b.volume());
    if volume > T::one() {
        return Ok(None);
    }

    let found = match integer_scale(instance) {
        Some(scale) => {
            let sides = instance
                .boxes()
                .iter()
                .map(|b| {
                    b.sides()
                        .iter()
                        .map(|s| {
                            let (n, q) = s.to_i64_pair().expect("checked by integer_scale");
                            (n as i128) * (scale / q) as i128
                        })
                        .collect()
                })
                .collect();
            search(Chains::new(sides, d, scale as i128), budget)?.map(|(seps, corners)| {
                let corners = corners
                    .into_iter()
                    .map(|p| {
                        p.into_iter()
                            .map(|x| T::from_ratio(x as i64, scale))
                            .collect()
                    })
                    .collect();
                (seps, corners)
            })
        }
        None => {
            let sides = instance
                .boxes()
                .iter()
                .map(|b| b.sides().to_vec())
                .collect();
            search(Chains::new(sides, d, T::one()), budget)?
        }
    };
    Ok(found.map(|(separators, corners)| {
        let placement = Placement::from_trusted(corners);
        debug_assert!(super::verify_packing(instance, &placement).unwrap_or(false));
        (
            SeparationAssignment {
                boxes: k,
                separators,
            },
            placement,
        )
    }))
}

type Found<U> = Option<(Vec<Separator>, Vec<Vec<U>>)>;

fn search<U: Length>(chains: Chains<U>, budget: &mut Budget) -> Result<Found<U>> {
    let k = chains.k;
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .collect();
    let mut search = Search {
        d: chains.layers.len(),
        chosen: vec![None; pairs.len()],
        pairs,
        chains,
        budget,
    };
    if !search.lookahead(0) || !search.run(0)? {
        return Ok(None);
    }
    let corners = search.chains.corners();
    let separators = search
        .chosen
        .into_iter()
        .map(|s| s.expect("all pairs decided"))
        .collect();
    Ok(Some((separators, corners)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{verify_packing, BoxDims};
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn inst(d: usize, boxes: &[&[(i64, i64)]]) -> PackingInstance<Rational> {
        PackingInstance::from_sides(
            d,
            boxes
                .iter()
                .map(|b| b.iter().map(|&(n, q)| r(n, q)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn trivial_sizes() {
        let empty = PackingInstance::<Rational>::new(3, vec![]).unwrap();
        assert_eq!(fits_exact(&empty).unwrap().unwrap().len(), 0);
        let one = inst(2, &[&[(1, 1), (1, 1)]]);
        assert_eq!(fits_exact(&one).unwrap().unwrap(), Placement::origin(1, 2));
    }

    #[test]
    fn three_thirds_stack() {
        let i = inst(
            2,
            &[&[(1, 3), (1, 3)], &[(1, 3), (1, 3)], &[(1, 3), (1, 3)]],
        );
        let pl = fits_exact(&i).unwrap().unwrap();
        assert!(verify_packing(&i, &pl).unwrap());
        let firsts: Vec<_> = pl.positions().iter().map(|p| p[0].clone()).collect();
        assert_eq!(firsts, vec![r(0, 1), r(1, 3), r(2, 3)]);
    }

    #[test]
    fn large_pair_does_not_fit() {
        let i = inst(2, &[&[(3, 4), (3, 4)], &[(3, 4), (3, 4)]]);
        assert!(fits_exact(&i).unwrap().is_none());
    }

    #[test]
    fn four_quadrants_fill_the_square() {
        let q: &[(i64, i64)] = &[(1, 2), (1, 2)];
        let i = inst(2, &[q, q, q, q]);
        let pl = fits_exact(&i).unwrap().unwrap();
        assert!(verify_packing(&i, &pl).unwrap());
        let five = inst(2, &[q, q, q, q, &[(1, 10), (1, 10)]]);
        assert!(fits_exact(&five).unwrap().is_none());
    }

    #[test]
    fn pinwheel_needs_no_common_grid() {
        // Classic pinwheel: four 2x1-ish boxes around a centre hole.
        let i = inst(
            2,
            &[
                &[(2, 3), (1, 3)],
                &[(1, 3), (2, 3)],
                &[(2, 3), (1, 3)],
                &[(1, 3), (2, 3)],
                &[(1, 3), (1, 3)],
            ],
        );
        let pl = fits_exact(&i).unwrap().unwrap();
        assert!(verify_packing(&i, &pl).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let q: &[(i64, i64)] = &[(1, 2), (1, 2), (1, 2)];
        let i = inst(3, &[q, q, q, q, q, q, q, q]);
        let err = fits_exact_budgeted(&i, &mut Budget::new(3)).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn eight_octants() {
        let q: &[(i64, i64)] = &[(1, 2), (1, 2), (1, 2)];
        let i = inst(3, &[q, q, q, q, q, q, q, q]);
        let pl = fits_exact(&i).unwrap().unwrap();
        assert!(verify_packing(&i, &pl).unwrap());
    }

    #[test]
    fn assignment_roundtrip_through_placement() {
        let i = inst(
            2,
            &[&[(1, 2), (1, 1)], &[(1, 2), (1, 2)], &[(1, 2), (1, 2)]],
        );
        let pl = fits_exact(&i).unwrap().unwrap();
        let a = SeparationAssignment::from_placement(&i, &pl).unwrap();
        let again = a.realize(&i).unwrap().unwrap();
        assert!(verify_packing(&i, &again).unwrap());
    }

    #[test]
    fn cyclic_assignment_is_not_realizable() {
        let b = BoxDims::new(vec![r(1, 4)]).unwrap();
        let i = PackingInstance::new(1, vec![b.clone(), b.clone(), b]).unwrap();
        let a = SeparationAssignment::new(
            3,
            vec![
                Separator {
                    coordinate: 0,
                    first: 0,
                    second: 1,
                },
                Separator {
                    coordinate: 0,
                    first: 1,
                    second: 2,
                },
                Separator {
                    coordinate: 0,
                    first: 2,
                    second: 0,
                },
            ],
        )
        .unwrap();
        assert!(a.realize(&i).unwrap().is_none());
        assert!(SeparationAssignment::new(3, vec![]).is_err());
    }
}
