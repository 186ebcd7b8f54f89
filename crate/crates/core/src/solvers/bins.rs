//! Bin counting through configurations, i.e. box subsets that fit in one cube.

use std::collections::HashMap;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::geometry::{fits_exact_budgeted, verify_packing, PackingInstance, Placement};
use crate::scalar::Scalar;

/// Upper limit on boxes for configuration enumeration and exact bin counts.
pub const MAX_CONFIGURATION_BOXES: usize = 24;

/// Box indices (ascending) that fit together, with a placement listed in
/// the same order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration<T> {
    pub boxes: Vec<usize>,
    pub witness: Placement<T>,
}

impl<T: Scalar> Configuration<T> {
    fn mask(&self) -> u32 {
        self.boxes.iter().fold(0, |m, &b| m | 1 << b)
    }

    /// Drops the listed boxes, keeping the witness consistent.
    fn without(&self, removed: u32) -> Self {
        let keep: Vec<usize> = (0..self.boxes.len())
            .filter(|&i| removed >> self.boxes[i] & 1 == 0)
            .collect();
        Configuration {
            boxes: keep.iter().map(|&i| self.boxes[i]).collect(),
            witness: self.witness.restrict(&keep),
        }
    }
}

/// Disjoint configurations covering every box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinSolution<T> {
    pub bins: Vec<Configuration<T>>,
}

impl<T: Scalar> BinSolution<T> {
    pub fn count(&self) -> usize {
        self.bins.len()
    }

    /// Checks coverage, disjointness and every witness placement.
    pub fn validate(&self, instance: &PackingInstance<T>) -> Result<bool> {
        let mut seen = vec![false; instance.len()];
        for bin in &self.bins {
            for &b in &bin.boxes {
                if b >= seen.len() || std::mem::replace(&mut seen[b], true) {
                    return Ok(false);
                }
            }
            if !verify_packing(&instance.sub_instance(&bin.boxes)?, &bin.witness)? {
                return Ok(false);
            }
        }
        Ok(seen.into_iter().all(|s| s))
    }
}

fn check_size<T: Scalar>(instance: &PackingInstance<T>) -> Result<()> {
    if instance.len() > MAX_CONFIGURATION_BOXES {
        return Err(Error::input(format!(
            "{} boxes exceeds the limit of {MAX_CONFIGURATION_BOXES} for exact configuration search",
            instance.len()
        )));
    }
    Ok(())
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|&b| mask >> b & 1 == 1).collect()
}

/// Lexicographic order on ascending index lists.
fn lex_key(mask: u32) -> Vec<usize> {
    indices(mask)
}

pub fn enumerate_configurations<T: Scalar>(
    instance: &PackingInstance<T>,
) -> Result<Vec<Configuration<T>>> {
    enumerate_configurations_budgeted(instance, &mut Budget::default())
}

/// All inclusion-maximal fitting box subsets, in lexicographic order.
///
/// Subsets are generated level by level and a candidate is only tested when
/// every subset one smaller already fits, since fit is inherited by subsets.
pub fn enumerate_configurations_budgeted<T: Scalar>(
    instance: &PackingInstance<T>,
    budget: &mut Budget,
) -> Result<Vec<Configuration<T>>> {
    check_size(instance)?;
    let k = instance.len();
    let mut fitting: HashMap<u32, Placement<T>> = HashMap::new();
    fitting.insert(0, Placement::origin(0, instance.dimension()));
    let mut level: Vec<u32> = vec![0];
    while !level.is_empty() {
        let mut next = Vec::new();
        for &set in &level {
            let top = if set == 0 {
                0
            } else {
                32 - set.leading_zeros() as usize
            };
            for x in top..k {
                let cand = set | 1 << x;
                let parents_fit = indices(cand)
                    .iter()
                    .all(|&y| fitting.contains_key(&(cand & !(1 << y))));
                if !parents_fit {
                    continue;
                }
                let members = indices(cand);
                if let Some(pl) = fits_exact_budgeted(&instance.sub_instance(&members)?, budget)? {
                    fitting.insert(cand, pl);
                    next.push(cand);
                }
            }
        }
        level = next;
    }
    let mut maximal: Vec<u32> = fitting
        .keys()
        .copied()
        .filter(|&s| (0..k).all(|x| s >> x & 1 == 1 || !fitting.contains_key(&(s | 1 << x))))
        .collect();
    maximal.sort_by_key(|&m| lex_key(m));
    Ok(maximal
        .into_iter()
        .map(|m| Configuration {
            boxes: indices(m),
            witness: fitting[&m].clone(),
        })
        .collect())
}

pub fn min_bins_exact<T: Scalar>(instance: &PackingInstance<T>) -> Result<BinSolution<T>> {
    min_bins_exact_budgeted(instance, &mut Budget::default())
}

/// Fewest unit cubes holding every box: set cover over the maximal
/// configurations by branch and bound. Any cover shrinks to a partition by
/// letting the earlier bin keep each shared box.
pub fn min_bins_exact_budgeted<T: Scalar>(
    instance: &PackingInstance<T>,
    budget: &mut Budget,
) -> Result<BinSolution<T>> {
    check_size(instance)?;
    let k = instance.len();
    if k == 0 {
        return Ok(BinSolution { bins: Vec::new() });
    }
    let order: Vec<usize> = (0..k).collect();
    let upper = first_fit_bins_budgeted(instance, &order, budget)?.count();
    let configs = enumerate_configurations_budgeted(instance, budget)?;
    let masks: Vec<u32> = configs.iter().map(Configuration::mask).collect();
    let largest = masks
        .iter()
        .map(|m| m.count_ones())
        .max()
        .unwrap_or(1)
        .max(1);

    let mut cover = Cover {
        masks: &masks,
        full: if k == 32 { u32::MAX } else { (1 << k) - 1 },
        largest,
        chosen: Vec::new(),
        best: None,
        bound: upper + 1,
        budget,
    };
    cover.run(0)?;
    let chosen = cover.best.expect("first fit bounds the optimum");

    let mut taken = 0u32;
    let bins = chosen
        .into_iter()
        .map(|c| {
            let bin = configs[c].without(taken);
            taken |= masks[c];
            bin
        })
        .collect();
    Ok(BinSolution { bins })
}

struct Cover<'a, 'b> {
    masks: &'a [u32],
    full: u32,
    largest: u32,
    chosen: Vec<usize>,
    best: Option<Vec<usize>>,
    bound: usize,
    budget: &'b mut Budget,
}

impl Cover<'_, '_> {
    fn run(&mut self, covered: u32) -> Result<()> {
        if covered == self.full {
            self.bound = self.chosen.len();
            self.best = Some(self.chosen.clone());
            return Ok(());
        }
        let remaining = (self.full & !covered).count_ones();
        let needed = remaining.div_ceil(self.largest) as usize;
        if self.chosen.len() + needed >= self.bound {
            return Ok(());
        }
        self.budget.tick("bin cover search")?;
        let first = (self.full & !covered).trailing_zeros();
        for c in 0..self.masks.len() {
            if self.masks[c] >> first & 1 == 0 {
                continue;
            }
            self.chosen.push(c);
            self.run(covered | self.masks[c])?;
            self.chosen.pop();
        }
        Ok(())
    }
}

/// Box indices sorted by decreasing volume, ties by index.
pub fn decreasing_volume_order<T: Scalar>(instance: &PackingInstance<T>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..instance.len()).collect();
    let volumes: Vec<T> = instance.boxes().iter().map(|b| b.volume()).collect();
    order.sort_by(|&a, &b| volumes[b].cmp(&volumes[a]).then(a.cmp(&b)));
    order
}

pub fn first_fit_bins<T: Scalar>(
    instance: &PackingInstance<T>,
    order: &[usize],
) -> Result<BinSolution<T>> {
    first_fit_bins_budgeted(instance, order, &mut Budget::default())
}

/// Greedy first fit: each box, in the given order, joins the first open bin
/// it fits into together with that bin's boxes, or opens a new one.
pub fn first_fit_bins_budgeted<T: Scalar>(
    instance: &PackingInstance<T>,
    order: &[usize],
    budget: &mut Budget,
) -> Result<BinSolution<T>> {
    let k = instance.len();
    let mut seen = vec![false; k];
    if order.len() != k
        || order
            .iter()
            .any(|&b| b >= k || std::mem::replace(&mut seen[b], true))
    {
        return Err(Error::input(
            "order must be a permutation of the box indices",
        ));
    }
    let mut bins: Vec<Configuration<T>> = Vec::new();
    'boxes: for &b in order {
        for bin in bins.iter_mut() {
            let mut members = bin.boxes.clone();
            let at = members.partition_point(|&x| x < b);
            members.insert(at, b);
            if let Some(pl) = fits_exact_budgeted(&instance.sub_instance(&members)?, budget)? {
                *bin = Configuration {
                    boxes: members,
                    witness: pl,
                };
                continue 'boxes;
            }
        }
        bins.push(Configuration {
            boxes: vec![b],
            witness: Placement::origin(1, instance.dimension()),
        });
    }
    Ok(BinSolution { bins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::reduction::{build_instance, ReductionParams};
    use crate::Rational;

    fn reduce(g: &Graph) -> PackingInstance<Rational> {
        build_instance(g, &ReductionParams::default()).unwrap()
    }

    fn boxes_of(configs: &[Configuration<Rational>]) -> Vec<Vec<usize>> {
        configs.iter().map(|c| c.boxes.clone()).collect()
    }

    #[test]
    fn configurations_of_reduced_graphs() {
        let p3 = enumerate_configurations(&reduce(&Graph::path(3))).unwrap();
        assert_eq!(boxes_of(&p3), vec![vec![0, 1], vec![1, 2]]);
        let k3 = enumerate_configurations(&reduce(&Graph::complete(3))).unwrap();
        assert_eq!(boxes_of(&k3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn configurations_of_large_pair_are_singletons() {
        let big = vec![Rational::from_ratio(3, 4); 2];
        let inst = PackingInstance::from_sides(2, vec![big.clone(), big]).unwrap();
        let c = enumerate_configurations(&inst).unwrap();
        assert_eq!(boxes_of(&c), vec![vec![0], vec![1]]);
    }

    #[test]
    fn min_bins_on_reduced_graphs() {
        for (g, expected) in [
            (Graph::path(3), 2),
            (Graph::complete(3), 1),
            (Graph::cycle(5).unwrap(), 3),
        ] {
            let inst = reduce(&g);
            let sol = min_bins_exact(&inst).unwrap();
            assert_eq!(sol.count(), expected);
            assert!(sol.validate(&inst).unwrap());
        }
    }

    #[test]
    fn empty_instance_needs_no_bins() {
        let inst = PackingInstance::<Rational>::new(2, vec![]).unwrap();
        assert_eq!(min_bins_exact(&inst).unwrap().count(), 0);
        assert_eq!(first_fit_bins(&inst, &[]).unwrap().count(), 0);
    }

    #[test]
    fn first_fit_examples() {
        let k3 = reduce(&Graph::complete(3));
        assert_eq!(first_fit_bins(&k3, &[0, 1, 2]).unwrap().count(), 1);
        // Vertex 2 (middle of the path) joins the first bin, next to vertex 1.
        let p3 = reduce(&Graph::path(3));
        let sol = first_fit_bins(&p3, &[0, 2, 1]).unwrap();
        assert_eq!(sol.count(), 2);
        assert_eq!(boxes_of(&sol.bins), vec![vec![0, 1], vec![2]]);
        assert!(sol.validate(&p3).unwrap());
        assert!(first_fit_bins(&p3, &[0, 0, 1]).is_err());
    }

    #[test]
    fn overlapping_cover_is_disjointified() {
        // Two maximal configurations share box 1; the later bin drops it.
        let p3 = reduce(&Graph::path(3));
        let sol = min_bins_exact(&p3).unwrap();
        assert_eq!(boxes_of(&sol.bins), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn decreasing_volume() {
        let inst = PackingInstance::from_sides(
            1,
            vec![
                vec![Rational::from_ratio(1, 4)],
                vec![Rational::from_ratio(1, 2)],
                vec![Rational::from_ratio(1, 4)],
            ],
        )
        .unwrap();
        assert_eq!(decreasing_volume_order(&inst), vec![1, 0, 2]);
    }
}
