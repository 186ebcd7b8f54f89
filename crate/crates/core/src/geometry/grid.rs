//! Brute-force fit check over grid positions.
//!
//! When every side is a multiple of `1/m`, pushing each box towards the
//! origin until it touches a wall or another box yields a packing whose
//! corners are sums of sides, hence multiples of `1/m`. So it suffices to try
//! corners on the grid. This works in integer units and shares no code with
//! the separation search, which makes it usable as an independent check.

use super::{PackingInstance, Placement};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn fits_grid_oracle<T: Scalar>(
    instance: &PackingInstance<T>,
    m: u32,
) -> Result<Option<Placement<T>>> {
    fits_grid_oracle_budgeted(instance, m, &mut Budget::default())
}

pub fn fits_grid_oracle_budgeted<T: Scalar>(
    instance: &PackingInstance<T>,
    m: u32,
    budget: &mut Budget,
) -> Result<Option<Placement<T>>> {
    if m == 0 {
        return Err(Error::input("grid resolution must be positive"));
    }
    let d = instance.dimension();
    let mut units: Vec<Vec<u32>> = Vec::with_capacity(instance.len());
    for (i, b) in instance.boxes().iter().enumerate() {
        let row = b
            .sides()
            .iter()
            .map(|s| s.grid_units(m))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| {
                Error::input(format!(
                    "box {i} has a side that is not a multiple of 1/{m}"
                ))
            })?;
        units.push(row);
    }

    // Larger boxes first: they have the fewest positions.
    let mut order: Vec<usize> = (0..units.len()).collect();
    let volume = |u: &[u32]| u.iter().map(|&x| x as u128).product::<u128>();
    order.sort_by(|&a, &b| volume(&units[b]).cmp(&volume(&units[a])).then(a.cmp(&b)));
    let sorted: Vec<Vec<u32>> = order.iter().map(|&i| units[i].clone()).collect();

    let mut corners: Vec<Vec<u32>> = Vec::with_capacity(sorted.len());
    if !place(&sorted, m, d, &mut corners, budget)? {
        return Ok(None);
    }

    let mut positions = vec![Vec::new(); sorted.len()];
    for (slot, &original) in order.iter().enumerate() {
        positions[original] = corners[slot]
            .iter()
            .map(|&c| T::from_ratio(c as i64, m as i64))
            .collect();
    }
    let placement = Placement::from_trusted(positions);
    debug_assert!(super::verify_packing(instance, &placement).unwrap_or(false));
    Ok(Some(placement))
}

fn overlaps(a: &[u32], sa: &[u32], b: &[u32], sb: &[u32]) -> bool {
    (0..a.len()).all(|l| a[l] < b[l] + sb[l] && b[l] < a[l] + sa[l])
}

fn place(
    sides: &[Vec<u32>],
    m: u32,
    d: usize,
    corners: &mut Vec<Vec<u32>>,
    budget: &mut Budget,
) -> Result<bool> {
    let idx = corners.len();
    if idx == sides.len() {
        return Ok(true);
    }
    let s = &sides[idx];
    // Identical boxes are interchangeable: keep their corners increasing.
    let floor = (0..idx)
        .rev()
        .find(|&p| sides[p] == *s)
        .map(|p| corners[p].clone());

    let mut corner = vec![0u32; d];
    loop {
        let admissible = floor.as_ref().is_none_or(|f| corner > *f);
        if admissible {
            budget.tick("grid oracle search")?;
            let clear = (0..idx).all(|p| !overlaps(&corner, s, &corners[p], &sides[p]));
            if clear {
                corners.push(corner.clone());
                if place(sides, m, d, corners, budget)? {
                    return Ok(true);
                }
                corners.pop();
            }
        }
        // Odometer step, last coordinate fastest.
        let mut l = d;
        loop {
            if l == 0 {
                return Ok(false);
            }
            l -= 1;
            if corner[l] + s[l] < m {
                corner[l] += 1;
                for c in corner.iter_mut().skip(l + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::verify_packing;
    use crate::Rational;

    fn inst(d: usize, boxes: &[&[(i64, i64)]]) -> PackingInstance<Rational> {
        PackingInstance::from_sides(
            d,
            boxes
                .iter()
                .map(|b| b.iter().map(|&(n, q)| Rational::from_ratio(n, q)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn halves() {
        let h: &[(i64, i64)] = &[(1, 2), (1, 2)];
        let two = inst(2, &[h, h]);
        assert!(fits_grid_oracle(&two, 2).unwrap().is_some());
        let three = inst(2, &[h, h, h]);
        let pl = fits_grid_oracle(&three, 2).unwrap().unwrap();
        assert!(verify_packing(&three, &pl).unwrap());
    }

    #[test]
    fn two_thirds_pair_fails() {
        let b: &[(i64, i64)] = &[(2, 3), (2, 3)];
        assert!(fits_grid_oracle(&inst(2, &[b, b]), 3).unwrap().is_none());
    }

    #[test]
    fn off_grid_side_is_rejected() {
        let i = inst(1, &[&[(1, 3)]]);
        assert!(fits_grid_oracle(&i, 2).is_err());
        assert!(fits_grid_oracle(&i, 0).is_err());
    }

    #[test]
    fn placement_is_reported_in_input_order() {
        let i = inst(1, &[&[(1, 4)], &[(3, 4)]]);
        let pl = fits_grid_oracle(&i, 4).unwrap().unwrap();
        assert!(verify_packing(&i, &pl).unwrap());
        assert_eq!(pl.position(1), &[Rational::from_ratio(0, 1)]);
    }
}
