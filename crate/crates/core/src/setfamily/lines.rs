//! Lines of the affine space over the field with three elements.
//!
//! Points of `F_3^n` are encoded as base-3 integers, most significant
//! coordinate first. The lines family holds every set of at most two points
//! and every line `{u, u + v, u + 2v}` with `v != 0`. Any two distinct points
//! lie on exactly one line, which is what defeats one-dimensional embeddings.

use std::collections::BTreeSet;

use super::embedding::{Embedding, EmbeddingViolation, ViolationKind};
use super::SetFamily;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest `n` accepted by [`lines_system`] (243 points).
pub const MAX_LINES_DIMENSION: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct F3Space {
    n: usize,
}

impl F3Space {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_LINES_DIMENSION {
            return Err(Error::input(format!(
                "n = {n} must be in 1..={MAX_LINES_DIMENSION}"
            )));
        }
        Ok(F3Space { n })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        3usize.pow(self.n as u32)
    }

    pub fn decode(&self, mut x: usize) -> Vec<u8> {
        let mut digits = vec![0u8; self.n];
        for d in digits.iter_mut().rev() {
            *d = (x % 3) as u8;
            x /= 3;
        }
        digits
    }

    pub fn encode(&self, digits: &[u8]) -> usize {
        digits.iter().fold(0, |acc, &d| acc * 3 + d as usize % 3)
    }

    fn combine(&self, a: usize, b: usize, f: impl Fn(u8, u8) -> u8) -> usize {
        let (a, b) = (self.decode(a), self.decode(b));
        let digits: Vec<u8> = a.iter().zip(&b).map(|(&x, &y)| f(x, y) % 3).collect();
        self.encode(&digits)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |x, y| x + y)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |x, y| x + 3 - y)
    }

    pub fn scale(&self, a: usize, c: u8) -> usize {
        self.combine(a, a, |x, _| x * (c % 3))
    }

    /// The line through two distinct points, sorted.
    pub fn line_through(&self, a: usize, b: usize) -> [usize; 3] {
        // u, u + v, u + 2v with v = b - a: the third point is 2b - a.
        let third = self.sub(self.scale(b, 2), a);
        let mut line = [a, b, third];
        line.sort_unstable();
        line
    }
}

/// All lines of `F_3^n`, each sorted, in lexicographic order.
pub fn lines_of(space: F3Space) -> Vec<[usize; 3]> {
    let size = space.size();
    let mut lines = BTreeSet::new();
    for u in 0..size {
        for v in 1..size {
            let a = space.add(u, v);
            let b = space.add(a, v);
            let mut line = [u, a, b];
            line.sort_unstable();
            lines.insert(line);
        }
    }
    lines.into_iter().collect()
}

pub fn lines_system(n: usize) -> Result<SetFamily> {
    let space = F3Space::new(n)?;
    let size = space.size();
    let mut sets: Vec<Vec<usize>> = vec![Vec::new()];
    for a in 0..size {
        sets.push(vec![a]);
        for b in a + 1..size {
            sets.push(vec![a, b]);
        }
    }
    sets.extend(lines_of(space).into_iter().map(|l| l.to_vec()));
    SetFamily::new(size, sets)
}

/// Recovers `n` when `f` is exactly `lines_system(n)`.
fn lines_dimension(f: &SetFamily) -> Result<F3Space> {
    let mut n = 0;
    let mut size = 1;
    while size < f.universe_size() {
        size *= 3;
        n += 1;
    }
    if size != f.universe_size() || n == 0 || n > MAX_LINES_DIMENSION || *f != lines_system(n)? {
        return Err(Error::input("the family is not a lines system over F_3^n"));
    }
    F3Space::new(n)
}

/// Finds a set on which a one-dimensional embedding of a lines family
/// disagrees with membership.
///
/// If some line has all three lengths above `1/3` that line cannot fit.
/// Otherwise every line has a point of length at most `1/3`. Take such points
/// `u1`, `u2` on two disjoint lines, shift the line through them by a vector
/// outside its direction and take a short point `u3` on the shifted copy.
/// `{u1, u2, u3}` is not a line, yet its lengths sum to at most one.
pub fn find_1d_counterexample<T: Scalar>(
    f: &SetFamily,
    emb: &Embedding<T>,
) -> Result<EmbeddingViolation> {
    let space = lines_dimension(f)?;
    if space.dimension() < 2 {
        return Err(Error::input(
            "needs n >= 2 so that two disjoint lines exist",
        ));
    }
    if emb.dimension() != 1 {
        return Err(Error::input(format!(
            "expected a 1-dimensional embedding, got {}",
            emb.dimension()
        )));
    }
    if emb.universe_size() != f.universe_size() {
        return Err(Error::input("embedding does not cover the universe"));
    }
    let third = T::from_ratio(1, 3);
    let len = |e: usize| emb.image(e).side(0).clone();
    let short = |line: &[usize; 3]| line.iter().copied().find(|&e| len(e) <= third);

    let lines = lines_of(space);
    for line in &lines {
        if short(line).is_none() {
            return Ok(EmbeddingViolation {
                set: line.to_vec(),
                kind: ViolationKind::MemberDoesNotFit,
            });
        }
    }
    let (s1, s2) = lines
        .iter()
        .enumerate()
        .find_map(|(i, a)| {
            lines[i + 1..]
                .iter()
                .find(|b| a.iter().all(|x| !b.contains(x)))
                .map(|b| (a, b))
        })
        .expect("n >= 2 has disjoint lines");
    let u1 = short(s1).expect("checked above");
    let u2 = short(s2).expect("checked above");
    let forward = space.sub(u2, u1);
    let backward = space.sub(u1, u2);
    let shift = (1..space.size())
        .find(|&d| d != forward && d != backward)
        .expect("n >= 2 has more than three vectors");
    let far = space.sub(space.scale(u2, 2), u1);
    let shifted = [
        space.add(u1, shift),
        space.add(u2, shift),
        space.add(far, shift),
    ];
    let u3 = shifted
        .iter()
        .copied()
        .find(|&e| len(e) <= third)
        .expect("the shifted set is a line, so it has a short point");

    let mut triple = vec![u1, u2, u3];
    triple.sort_unstable();
    debug_assert!(!f.contains(&triple));
    Ok(EmbeddingViolation {
        set: triple,
        kind: ViolationKind::NonMemberFits,
    })
}
