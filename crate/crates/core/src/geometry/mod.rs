//! Axis-parallel boxes inside the unit cube and the fit relation.
//!
//! A box with sides `v` placed at corner `p` occupies the half-open product
//! `[p_1, p_1 + v_1) x ... x [p_d, p_d + v_d)`, so two boxes may share a face.
//! A set of boxes *fits* when some placement keeps every box inside the unit
//! cube and the occupied regions pairwise disjoint.

mod grid;
mod separation;
mod triple;

pub use grid::{fits_grid_oracle, fits_grid_oracle_budgeted};
pub use separation::{fits_exact, fits_exact_budgeted, SeparationAssignment, Separator};
pub use triple::{triple_fit_single_coordinate, triple_placement};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Side lengths of a `d`-dimensional box, each in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxDims<T> {
    sides: Vec<T>,
}

impl<T: Scalar> BoxDims<T> {
    pub fn new(sides: Vec<T>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::input("a box needs at least one side"));
        }
        for (l, s) in sides.iter().enumerate() {
            if *s <= T::zero() || *s > T::one() {
                return Err(Error::input(format!("side {l} = {s} is outside (0, 1]")));
            }
        }
        Ok(BoxDims { sides })
    }

    /// Box with every side equal to `side`.
    pub fn cube(dimension: usize, side: T) -> Result<Self> {
        Self::new(vec![side; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[T] {
        &self.sides
    }

    pub fn side(&self, coordinate: usize) -> &T {
        &self.sides[coordinate]
    }

    pub fn volume(&self) -> T {
        self.sides.iter().fold(T::one(), |acc, s| acc * s.clone())
    }

    pub(crate) fn check_same_dimension(&self, other: &Self) -> Result<()> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: other.dimension(),
            });
        }
        Ok(())
    }
}

/// Corner positions, one vector per box, each coordinate in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Placement<T> {
    positions: Vec<Vec<T>>,
}

impl<T: Scalar> Placement<T> {
    pub fn new(positions: Vec<Vec<T>>) -> Result<Self> {
        for (i, p) in positions.iter().enumerate() {
            for (l, x) in p.iter().enumerate() {
                if *x < T::zero() || *x > T::one() {
                    return Err(Error::input(format!(
                        "position of box {i} in coordinate {l} is {x}, outside [0, 1]"
                    )));
                }
            }
        }
        Ok(Placement { positions })
    }

    /// Every box at the origin.
    pub fn origin(boxes: usize, dimension: usize) -> Self {
        Placement {
            positions: vec![vec![T::zero(); dimension]; boxes],
        }
    }

    pub(crate) fn from_trusted(positions: Vec<Vec<T>>) -> Self {
        Placement { positions }
    }

    pub fn positions(&self) -> &[Vec<T>] {
        &self.positions
    }

    pub fn position(&self, index: usize) -> &[T] {
        &self.positions[index]
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Keeps the positions of the listed boxes, in the order given.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        Placement {
            positions: indices.iter().map(|&i| self.positions[i].clone()).collect(),
        }
    }
}

/// Boxes sharing one dimension, to be packed into the unit cube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingInstance<T> {
    dimension: usize,
    boxes: Vec<BoxDims<T>>,
}

impl<T: Scalar> PackingInstance<T> {
    pub fn new(dimension: usize, boxes: Vec<BoxDims<T>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::input("dimension must be positive"));
        }
        for b in &boxes {
            if b.dimension() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: b.dimension(),
                });
            }
        }
        Ok(PackingInstance { dimension, boxes })
    }

    /// Convenience constructor from raw side vectors.
    pub fn from_sides(dimension: usize, sides: Vec<Vec<T>>) -> Result<Self> {
        let boxes = sides
            .into_iter()
            .map(BoxDims::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(dimension, boxes)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn boxes(&self) -> &[BoxDims<T>] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// The instance formed by the listed boxes, in the order given.
    pub fn sub_instance(&self, indices: &[usize]) -> Result<Self> {
        let mut boxes = Vec::with_capacity(indices.len());
        for &i in indices {
            let b = self
                .boxes
                .get(i)
                .ok_or_else(|| Error::input(format!("box index {i} out of range")))?;
            boxes.push(b.clone());
        }
        Ok(PackingInstance {
            dimension: self.dimension,
            boxes,
        })
    }

    /// Applies the same coordinate permutation to every box: new coordinate
    /// `l` is old coordinate `perm[l]`.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.dimension];
        if perm.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: perm.len(),
            });
        }
        for &p in perm {
            if p >= self.dimension || std::mem::replace(&mut seen[p], true) {
                return Err(Error::input("not a permutation of the coordinates"));
            }
        }
        let boxes = self
            .boxes
            .iter()
            .map(|b| BoxDims {
                sides: perm.iter().map(|&l| b.sides[l].clone()).collect(),
            })
            .collect();
        Ok(PackingInstance {
            dimension: self.dimension,
            boxes,
        })
    }
}

/// Whether two boxes at the given corners occupy disjoint regions.
fn disjoint<T: Scalar>(p: &[T], u: &BoxDims<T>, q: &[T], v: &BoxDims<T>) -> bool {
    (0..u.dimension()).any(|l| {
        p[l].clone() + u.sides[l].clone() <= q[l] || q[l].clone() + v.sides[l].clone() <= p[l]
    })
}

/// Checks that `placement` keeps every box inside the unit cube and the
/// half-open occupied regions pairwise disjoint.
pub fn verify_packing<T: Scalar>(
    instance: &PackingInstance<T>,
    placement: &Placement<T>,
) -> Result<bool> {
    if placement.len() != instance.len() {
        return Err(Error::input(format!(
            "placement has {} positions for {} boxes",
            placement.len(),
            instance.len()
        )));
    }
    for p in placement.positions() {
        if p.len() != instance.dimension() {
            return Err(Error::DimensionMismatch {
                expected: instance.dimension(),
                found: p.len(),
            });
        }
    }
    let one = T::one();
    for (b, p) in instance.boxes().iter().zip(placement.positions()) {
        for (x, s) in p.iter().zip(b.sides()) {
            if *x < T::zero() || x.clone() + s.clone() > one {
                return Ok(false);
            }
        }
    }
    let boxes = instance.boxes();
    for i in 0..boxes.len() {
        for j in i + 1..boxes.len() {
            if !disjoint(
                placement.position(i),
                &boxes[i],
                placement.position(j),
                &boxes[j],
            ) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest coordinate in which the two boxes can sit side by side, i.e.
/// `u_l + v_l <= 1`. Two boxes fit together exactly when one exists.
pub fn pair_fit_coordinate<T: Scalar>(u: &BoxDims<T>, v: &BoxDims<T>) -> Result<Option<usize>> {
    u.check_same_dimension(v)?;
    let one = T::one();
    Ok((0..u.dimension()).find(|&l| u.sides[l].clone() + v.sides[l].clone() <= one))
}
