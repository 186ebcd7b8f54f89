//! Graph coloring to geometric bin packing.
//!
//! Vertex `i` of an `n`-vertex graph becomes an `n`-dimensional box whose
//! side `j` is `alpha` on the diagonal, `1/2 + alpha` when `{i, j}` is an
//! edge and `1` otherwise. A vertex set then fits in one unit cube exactly
//! when it is a clique, so the fewest cubes covering every box equals the
//! clique cover number of the graph, i.e. the chromatic number of its
//! complement.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::geometry::{fits_exact_budgeted, BoxDims, PackingInstance, Placement};
use crate::graph::Graph;
use crate::scalar::Scalar;

/// Diagonal side length `alpha`, restricted to `(0, 1/10]` so that the
/// clique placement at `3/5` clears every `1/2 + alpha` side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionParams<T> {
    alpha: T,
}

impl<T: Scalar> ReductionParams<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if alpha <= T::zero() || alpha > T::from_ratio(1, 10) {
            return Err(Error::input(format!(
                "alpha = {alpha} is outside (0, 1/10]"
            )));
        }
        Ok(ReductionParams { alpha })
    }

    pub fn alpha(&self) -> &T {
        &self.alpha
    }
}

impl<T: Scalar> Default for ReductionParams<T> {
    /// `alpha = 1/20`.
    fn default() -> Self {
        ReductionParams {
            alpha: T::from_ratio(1, 20),
        }
    }
}

/// One box per vertex, in dimension `n`.
pub fn build_instance<T: Scalar>(
    g: &Graph,
    params: &ReductionParams<T>,
) -> Result<PackingInstance<T>> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::input("the graph has no vertices"));
    }
    let adjacent = T::half() + params.alpha.clone();
    let boxes = (0..n)
        .map(|i| {
            let sides = (0..n)
                .map(|j| {
                    if i == j {
                        params.alpha.clone()
                    } else if g.has_edge(i, j) {
                        adjacent.clone()
                    } else {
                        T::one()
                    }
                })
                .collect();
            BoxDims::new(sides)
        })
        .collect::<Result<Vec<_>>>()?;
    PackingInstance::new(n, boxes)
}

fn check_vertices(g: &Graph, s: &[usize]) -> Result<()> {
    if let Some(&v) = s.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(Error::input(format!(
            "vertex {v} outside 0..{}",
            g.vertex_count()
        )));
    }
    Ok(())
}

/// Every two distinct members of `s` are adjacent. Sets of size at most one
/// are cliques.
pub fn is_clique(g: &Graph, s: &[usize]) -> Result<bool> {
    check_vertices(g, s)?;
    Ok(s.iter()
        .enumerate()
        .all(|(a, &u)| s[a + 1..].iter().all(|&v| u == v || g.has_edge(u, v))))
}

pub fn complement(g: &Graph) -> Graph {
    g.complement()
}

/// Packs the boxes of a clique: member `i` sits at `3/5` in coordinate `i`
/// and at `0` elsewhere. Positions are listed for the members in the order
/// given, matching `instance.sub_instance(clique)`.
pub fn clique_placement<T: Scalar>(
    g: &Graph,
    clique: &[usize],
    _params: &ReductionParams<T>,
) -> Result<Placement<T>> {
    if !is_clique(g, clique)? {
        return Err(Error::input(format!("{clique:?} is not a clique")));
    }
    let n = g.vertex_count();
    let offset = T::from_ratio(3, 5);
    let positions = clique
        .iter()
        .map(|&i| {
            let mut p = vec![T::zero(); n];
            p[i] = offset.clone();
            p
        })
        .collect();
    Placement::new(positions)
}

/// First vertex subset on which clique membership and fit disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionViolation {
    pub subset: Vec<usize>,
    pub is_clique: bool,
    pub fits: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub subsets_checked: u64,
    pub violation: Option<ReductionViolation>,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Largest vertex count for the exhaustive subset sweep.
pub const MAX_SWEEP_VERTICES: usize = 20;

/// Checks `is_clique(S) == fits(boxes of S)` for every vertex subset, in
/// increasing bitmask order, stopping at the first disagreement.
pub fn verify_reduction_property<T: Scalar>(
    g: &Graph,
    params: &ReductionParams<T>,
    budget: &mut Budget,
) -> Result<ReductionReport> {
    let n = g.vertex_count();
    if n > MAX_SWEEP_VERTICES {
        return Err(Error::input(format!(
            "{n} vertices is too many for an exhaustive subset sweep (max {MAX_SWEEP_VERTICES})"
        )));
    }
    let instance = build_instance(g, params)?;
    let mut checked = 0;
    for mask in 0u64..1 << n {
        let subset: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let clique = is_clique(g, &subset)?;
        let fits = fits_exact_budgeted(&instance.sub_instance(&subset)?, budget)?.is_some();
        checked += 1;
        if clique != fits {
            return Ok(ReductionReport {
                subsets_checked: checked,
                violation: Some(ReductionViolation {
                    subset,
                    is_clique: clique,
                    fits,
                }),
            });
        }
    }
    Ok(ReductionReport {
        subsets_checked: checked,
        violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{fits_exact, fits_grid_oracle, pair_fit_coordinate, verify_packing};
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn default_params() -> ReductionParams<Rational> {
        ReductionParams::default()
    }

    #[test]
    fn alpha_range() {
        assert!(ReductionParams::new(r(0, 1)).is_err());
        assert!(ReductionParams::new(r(1, 9)).is_err());
        assert!(ReductionParams::new(r(1, 10)).is_ok());
        assert_eq!(default_params().alpha(), &r(1, 20));
    }

    #[test]
    fn triangle_boxes() {
        let inst = build_instance(&Graph::complete(3), &default_params()).unwrap();
        let a = r(1, 20);
        let e = r(11, 20);
        assert_eq!(inst.boxes()[0].sides(), &[a.clone(), e.clone(), e.clone()]);
        assert_eq!(inst.boxes()[1].sides(), &[e.clone(), a.clone(), e.clone()]);
        assert_eq!(inst.boxes()[2].sides(), &[e.clone(), e, a]);
        assert!(fits_exact(&inst).unwrap().is_some());
    }

    #[test]
    fn single_vertex() {
        let inst = build_instance(&Graph::empty(1), &default_params()).unwrap();
        assert_eq!(inst.dimension(), 1);
        assert_eq!(inst.boxes()[0].sides(), &[r(1, 20)]);
        assert!(build_instance(&Graph::empty(0), &default_params()).is_err());
    }

    #[test]
    fn path_endpoints_do_not_fit() {
        let g = Graph::path(3);
        let inst = build_instance(&g, &default_params()).unwrap();
        assert_eq!(inst.boxes()[0].sides(), &[r(1, 20), r(11, 20), r(1, 1)]);
        assert_eq!(inst.boxes()[2].sides(), &[r(1, 1), r(11, 20), r(1, 20)]);
        assert_eq!(
            pair_fit_coordinate(&inst.boxes()[0], &inst.boxes()[2]).unwrap(),
            None
        );
        assert!(fits_exact(&inst.sub_instance(&[0, 2]).unwrap())
            .unwrap()
            .is_none());
    }

    #[test]
    fn triangle_clique_placement() {
        let g = Graph::complete(3);
        let pl = clique_placement(&g, &[0, 1, 2], &default_params()).unwrap();
        assert_eq!(pl.position(0), &[r(3, 5), r(0, 1), r(0, 1)]);
        assert_eq!(pl.position(2), &[r(0, 1), r(0, 1), r(3, 5)]);
        let inst = build_instance(&g, &default_params()).unwrap();
        assert!(verify_packing(&inst, &pl).unwrap());
    }

    #[test]
    fn singleton_clique_uses_diagonal_form() {
        let g = Graph::path(3);
        let pl = clique_placement(&g, &[1], &default_params()).unwrap();
        assert_eq!(pl.position(0), &[r(0, 1), r(3, 5), r(0, 1)]);
        let inst = build_instance(&g, &default_params()).unwrap();
        assert!(verify_packing(&inst.sub_instance(&[1]).unwrap(), &pl).unwrap());
    }

    #[test]
    fn non_clique_placement_is_rejected() {
        assert!(clique_placement(&Graph::path(3), &[0, 2], &default_params()).is_err());
    }

    #[test]
    fn clique_checks() {
        assert!(is_clique(&Graph::complete(3), &[0, 1, 2]).unwrap());
        assert!(!is_clique(&Graph::path(3), &[0, 2]).unwrap());
        assert!(is_clique(&Graph::path(3), &[]).unwrap());
        assert!(is_clique(&Graph::path(3), &[3]).is_err());
    }

    #[test]
    fn complement_of_five_cycle_is_a_five_cycle() {
        let c = complement(&Graph::cycle(5).unwrap());
        assert_eq!(c.edges().len(), 5);
        assert!((0..5).all(|v| c.degree(v) == 2));
        // 2-regular on 5 vertices and connected means a single 5-cycle.
        let mut seen = [false; 5];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut seen[v], true) {
                stack.extend(c.neighbors(v).ones());
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn sweeps_pass() {
        let p = default_params();
        for mask in 0..8 {
            let g = Graph::from_edge_mask(3, mask).unwrap();
            let rep = verify_reduction_property(&g, &p, &mut Budget::default()).unwrap();
            assert!(rep.passed(), "graph mask {mask}: {rep:?}");
            assert_eq!(rep.subsets_checked, 8);
        }
        let rep =
            verify_reduction_property(&Graph::complete(5), &p, &mut Budget::default()).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.subsets_checked, 32);
    }

    #[test]
    fn boundary_alpha_on_five_cycle() {
        let p = ReductionParams::new(r(1, 10)).unwrap();
        let g = Graph::cycle(5).unwrap();
        let rep = verify_reduction_property(&g, &p, &mut Budget::default()).unwrap();
        assert!(rep.passed());
        let inst = build_instance(&g, &p).unwrap();
        for mask in 0u32..32 {
            let s: Vec<usize> = (0..5).filter(|&v| mask >> v & 1 == 1).collect();
            let sub = inst.sub_instance(&s).unwrap();
            assert_eq!(
                fits_grid_oracle(&sub, 10).unwrap().is_some(),
                is_clique(&g, &s).unwrap(),
                "subset {s:?}"
            );
        }
        // 1/2 + 1/10 ends exactly where the diagonal box starts.
        let pl = clique_placement(&g, &[0, 1], &p).unwrap();
        assert!(verify_packing(&inst.sub_instance(&[0, 1]).unwrap(), &pl).unwrap());
    }
}
