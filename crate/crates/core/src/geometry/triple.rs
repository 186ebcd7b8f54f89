//! Closed-form placements for three boxes.

use super::{BoxDims, Placement};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check_triple<T: Scalar>(boxes: [&BoxDims<T>; 3]) -> Result<usize> {
    boxes[0].check_same_dimension(boxes[1])?;
    boxes[0].check_same_dimension(boxes[2])?;
    Ok(boxes[0].dimension())
}

fn pair_sum<T: Scalar>(a: &BoxDims<T>, b: &BoxDims<T>, l: usize) -> T {
    a.side(l).clone() + b.side(l).clone()
}

/// Places three boxes given, for each pair, a coordinate in which that pair
/// fits side by side. At least two of the three coordinates must differ.
///
/// With three distinct coordinates each box is shifted in one of them past its
/// cyclic predecessor. With two, the box sharing the repeated coordinate with
/// both others stays at the origin, the other two are pushed past it in that
/// coordinate and separated from each other in the remaining one.
pub fn triple_placement<T: Scalar>(
    boxes: [&BoxDims<T>; 3],
    j12: usize,
    j23: usize,
    j31: usize,
) -> Result<Placement<T>> {
    let d = check_triple(boxes)?;
    let one = T::one();
    for (name, (a, b), j) in [
        ("j12", (0, 1), j12),
        ("j23", (1, 2), j23),
        ("j31", (2, 0), j31),
    ] {
        if j >= d {
            return Err(Error::input(format!(
                "{name} = {j} is not a coordinate below {d}"
            )));
        }
        if pair_sum(boxes[a], boxes[b], j) > one {
            return Err(Error::input(format!(
                "boxes {} and {} do not fit side by side in coordinate {name} = {j}",
                a + 1,
                b + 1
            )));
        }
    }
    if j12 == j23 && j23 == j31 {
        return Err(Error::input("all three pair coordinates are equal"));
    }

    let mut positions = vec![vec![T::zero(); d]; 3];
    if j12 != j23 && j23 != j31 && j31 != j12 {
        positions[0][j31] = boxes[2].side(j31).clone();
        positions[1][j12] = boxes[0].side(j12).clone();
        positions[2][j23] = boxes[1].side(j23).clone();
        return Ok(Placement::from_trusted(positions));
    }

    // Relabel cyclically so that the shared box comes first: `(s, a, b)` with
    // coordinate `shared` for pairs {s,a} and {s,b} and `other` for {a,b}.
    let (s, a, b, shared, other) = if j12 == j31 {
        (0, 1, 2, j12, j23)
    } else if j12 == j23 {
        (1, 2, 0, j12, j31)
    } else {
        (2, 0, 1, j23, j12)
    };
    positions[a][shared] = boxes[s].side(shared).clone();
    positions[b][shared] = boxes[s].side(shared).clone();
    positions[b][other] = boxes[a].side(other).clone();
    Ok(Placement::from_trusted(positions))
}

/// Three boxes that pairwise fit only in coordinate `j` fit together exactly
/// when their sides in `j` sum to at most one. Returns the stacked placement
/// in that case and `None` otherwise; `None` certifies that no placement
/// exists.
pub fn triple_fit_single_coordinate<T: Scalar>(
    boxes: [&BoxDims<T>; 3],
    j: usize,
) -> Result<Option<Placement<T>>> {
    let d = check_triple(boxes)?;
    if j >= d {
        return Err(Error::input(format!(
            "coordinate {j} out of range for dimension {d}"
        )));
    }
    let one = T::one();
    for (a, b) in [(0, 1), (1, 2), (0, 2)] {
        for l in 0..d {
            let s = pair_sum(boxes[a], boxes[b], l);
            if l == j && s > one {
                return Err(Error::input(format!(
                    "boxes {} and {} exceed 1 in coordinate {j}",
                    a + 1,
                    b + 1
                )));
            }
            if l != j && s <= one {
                return Err(Error::input(format!(
                    "boxes {} and {} also fit side by side in coordinate {l}",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    let total = boxes
        .iter()
        .fold(T::zero(), |acc, b| acc + b.side(j).clone());
    if total > one {
        return Ok(None);
    }
    let mut positions = vec![vec![T::zero(); d]; 3];
    positions[1][j] = boxes[0].side(j).clone();
    positions[2][j] = boxes[0].side(j).clone() + boxes[1].side(j).clone();
    Ok(Some(Placement::from_trusted(positions)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{fits_exact, verify_packing, PackingInstance};
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn bx(sides: &[(i64, i64)]) -> BoxDims<Rational> {
        BoxDims::new(sides.iter().map(|&(n, d)| r(n, d)).collect()).unwrap()
    }

    fn check(boxes: [&BoxDims<Rational>; 3], pl: &Placement<Rational>) -> bool {
        let inst = PackingInstance::new(
            boxes[0].dimension(),
            boxes.iter().map(|b| (*b).clone()).collect(),
        )
        .unwrap();
        verify_packing(&inst, pl).unwrap()
    }

    #[test]
    fn three_distinct_coordinates() {
        let h = bx(&[(1, 2), (1, 2), (1, 2)]);
        let pl = triple_placement([&h, &h, &h], 0, 1, 2).unwrap();
        assert_eq!(pl.position(0), &[r(0, 1), r(0, 1), r(1, 2)]);
        assert_eq!(pl.position(1), &[r(1, 2), r(0, 1), r(0, 1)]);
        assert_eq!(pl.position(2), &[r(0, 1), r(1, 2), r(0, 1)]);
        assert!(check([&h, &h, &h], &pl));
    }

    #[test]
    fn two_distinct_coordinates() {
        let v1 = bx(&[(1, 2), (1, 1)]);
        let v2 = bx(&[(1, 2), (1, 2)]);
        let v3 = bx(&[(1, 2), (1, 2)]);
        let pl = triple_placement([&v1, &v2, &v3], 0, 1, 0).unwrap();
        assert_eq!(pl.position(0), &[r(0, 1), r(0, 1)]);
        assert_eq!(pl.position(1), &[r(1, 2), r(0, 1)]);
        assert_eq!(pl.position(2), &[r(1, 2), r(1, 2)]);
        assert!(check([&v1, &v2, &v3], &pl));
    }

    #[test]
    fn two_distinct_coordinates_other_relabelings() {
        // Box 2 shared: pairs {1,2} and {2,3} use coordinate 0.
        let v1 = bx(&[(1, 2), (1, 2)]);
        let v2 = bx(&[(1, 2), (1, 1)]);
        let v3 = bx(&[(1, 2), (1, 2)]);
        let pl = triple_placement([&v1, &v2, &v3], 0, 0, 1).unwrap();
        assert!(check([&v1, &v2, &v3], &pl));
        // Box 3 shared.
        let v3 = bx(&[(1, 2), (1, 1)]);
        let v2 = bx(&[(1, 2), (1, 2)]);
        let pl = triple_placement([&v1, &v2, &v3], 1, 0, 0).unwrap();
        assert!(check([&v1, &v2, &v3], &pl));
    }

    #[test]
    fn equal_coordinates_are_rejected() {
        let h = bx(&[(1, 3), (1, 3)]);
        assert!(triple_placement([&h, &h, &h], 0, 0, 0).is_err());
    }

    #[test]
    fn violated_pair_sum_is_rejected() {
        let big = bx(&[(3, 4), (1, 4)]);
        let err = triple_placement([&big, &big, &big], 0, 1, 1).unwrap_err();
        assert!(err.to_string().contains("j12"));
    }

    #[test]
    fn stacked_single_coordinate() {
        let v = bx(&[(1, 3), (9, 10)]);
        let pl = triple_fit_single_coordinate([&v, &v, &v], 0)
            .unwrap()
            .unwrap();
        let firsts: Vec<_> = pl.positions().iter().map(|p| p[0].clone()).collect();
        assert_eq!(firsts, vec![r(0, 1), r(1, 3), r(2, 3)]);
        assert!(check([&v, &v, &v], &pl));
    }

    #[test]
    fn single_coordinate_overflow_is_a_certificate() {
        let v = bx(&[(2, 5), (9, 10)]);
        assert!(triple_fit_single_coordinate([&v, &v, &v], 0)
            .unwrap()
            .is_none());
        let inst = PackingInstance::new(2, vec![v.clone(), v.clone(), v]).unwrap();
        assert!(fits_exact(&inst).unwrap().is_none());
    }

    #[test]
    fn single_coordinate_precondition() {
        let v = bx(&[(1, 3), (1, 3)]);
        assert!(triple_fit_single_coordinate([&v, &v, &v], 0).is_err());
    }
}
