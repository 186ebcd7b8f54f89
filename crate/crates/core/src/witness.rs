//! Self-contained, machine-checkable certificates.
//!
//! Every witness carries all the data needed to re-derive its claim, so it
//! can be checked on its own, e.g. after a round trip through JSON. Values
//! are rationals in `"p/q"` form and indices are 0-based.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::geometry::{
    fits_exact_budgeted, fits_grid_oracle_budgeted, pair_fit_coordinate,
    triple_fit_single_coordinate, triple_placement, verify_packing, BoxDims, PackingInstance,
};
use crate::graph::Graph;
use crate::io::{scalars, strings, PlacementFile};
use crate::reduction::{build_instance, complement, is_clique, ReductionParams};
use crate::scalar::parse_scalar;
use crate::setfamily::{
    bounded_profile, conflict_graph, find_1d_counterexample, induced_matching, isolated_elements,
    lines_of, lines_system, verify_embedding_budgeted, Embedding, EmbeddingCheck, F3Space,
    MatchingMode, SetFamily, ViolationKind,
};
use crate::solvers::{chromatic_number_budgeted, min_bins_exact_budgeted};
use crate::Rational;

/// What each variant claims is in its doc comment; [`Witness::check`] returns
/// `true` exactly when the claim holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// The positions are a valid packing of the boxes.
    Placement {
        d: usize,
        boxes: Vec<Vec<String>>,
        positions: Vec<Vec<String>>,
    },
    /// The pair criterion and the exact fit test disagree on two boxes.
    Pair { boxes: Vec<Vec<String>> },
    /// The pair coordinates satisfy the three-box precondition, yet the
    /// closed-form placement is not a packing.
    Triple {
        boxes: Vec<Vec<String>>,
        j12: usize,
        j23: usize,
        j31: usize,
    },
    /// The single-coordinate precondition holds, yet the closed-form answer
    /// disagrees with the exact fit test.
    SingleCoordinate {
        boxes: Vec<Vec<String>>,
        coordinate: usize,
    },
    /// On the reduced instance of the graph, fit and clique membership of
    /// `subset` disagree.
    Reduction {
        vertices: usize,
        edges: Vec<(usize, usize)>,
        alpha: String,
        subset: Vec<usize>,
    },
    /// The minimum bin count of the reduced instance differs from the
    /// chromatic number of the complement.
    Bins {
        vertices: usize,
        edges: Vec<(usize, usize)>,
        alpha: String,
    },
    /// The exact fit test and the grid oracle disagree.
    Oracle {
        d: usize,
        boxes: Vec<Vec<String>>,
        grid: u32,
    },
    /// The boxes fit but the sub-multiset picked by `subset` does not.
    Monotone {
        d: usize,
        boxes: Vec<Vec<String>>,
        subset: Vec<usize>,
    },
    /// One of the bounded-family guarantees fails: conflict degree at most
    /// `(kB)^2`, greedy matching at least `ceil(|V| / (max degree + 1))`, or
    /// greedy matching at least `ceil(|U_active| / (k (k^2 B^2 + 1)))`.
    MatchingBound {
        universe_size: usize,
        sets: Vec<Vec<usize>>,
    },
    /// `member` is in the family but its subset `missing` is not.
    NotDownwardClosed {
        universe_size: usize,
        sets: Vec<Vec<usize>>,
        member: Vec<usize>,
        missing: Vec<usize>,
    },
    /// No member of size two or more contains `element`.
    IsolatedElement {
        universe_size: usize,
        sets: Vec<Vec<usize>>,
        element: usize,
    },
    /// Fit of `set` under the embedding disagrees with membership in the way
    /// `violation` says.
    Embedding {
        universe_size: usize,
        sets: Vec<Vec<usize>>,
        d: usize,
        map: Vec<Vec<String>>,
        set: Vec<usize>,
        violation: ViolationKind,
    },
    /// The one-dimensional counterexample construction on `lines_system(n)`
    /// does not yield a valid violation for this embedding.
    OneDim { n: usize, map: Vec<String> },
    /// `lines_system(n)` fails one of its structural properties: downward
    /// closed, no isolated elements, every pair on exactly one line.
    Lines { n: usize },
}

fn boxes_of(boxes: &[Vec<String>]) -> Result<Vec<BoxDims<Rational>>> {
    boxes.iter().map(|b| BoxDims::new(scalars(b)?)).collect()
}

fn instance_of(d: usize, boxes: &[Vec<String>]) -> Result<PackingInstance<Rational>> {
    PackingInstance::new(d, boxes_of(boxes)?)
}

fn three(boxes: &[Vec<String>]) -> Result<[BoxDims<Rational>; 3]> {
    let v = boxes_of(boxes)?;
    v.try_into()
        .map_err(|_| Error::input("expected exactly three boxes"))
}

fn fits(instance: &PackingInstance<Rational>, budget: &mut Budget) -> Result<bool> {
    Ok(fits_exact_budgeted(instance, budget)?.is_some())
}

fn graph_params(
    vertices: usize,
    edges: &[(usize, usize)],
    alpha: &str,
) -> Result<(Graph, ReductionParams<Rational>)> {
    Ok((
        Graph::new(vertices, edges.iter().copied())?,
        ReductionParams::new(parse_scalar(alpha)?)?,
    ))
}

pub(crate) fn family_sets(f: &SetFamily) -> Vec<Vec<usize>> {
    f.sets().cloned().collect()
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Placement { .. } => "placement",
            Witness::Pair { .. } => "pair",
            Witness::Triple { .. } => "triple",
            Witness::SingleCoordinate { .. } => "single-coordinate",
            Witness::Reduction { .. } => "reduction",
            Witness::Bins { .. } => "bins",
            Witness::Oracle { .. } => "oracle",
            Witness::Monotone { .. } => "monotone",
            Witness::MatchingBound { .. } => "matching-bound",
            Witness::NotDownwardClosed { .. } => "not-downward-closed",
            Witness::IsolatedElement { .. } => "isolated-element",
            Witness::Embedding { .. } => "embedding",
            Witness::OneDim { .. } => "one-dim",
            Witness::Lines { .. } => "lines",
        }
    }

    pub fn embedding_violation(
        f: &SetFamily,
        emb: &Embedding<Rational>,
        set: Vec<usize>,
        violation: ViolationKind,
    ) -> Self {
        Witness::Embedding {
            universe_size: f.universe_size(),
            sets: family_sets(f),
            d: emb.dimension(),
            map: emb.images().iter().map(|b| strings(b.sides())).collect(),
            set,
            violation,
        }
    }

    /// Re-derives the claim. Malformed data is an error, not a rejection.
    pub fn check(&self, budget: &mut Budget) -> Result<bool> {
        match self {
            Witness::Placement {
                d,
                boxes,
                positions,
            } => {
                let instance = instance_of(*d, boxes)?;
                let placement = PlacementFile {
                    d: *d,
                    positions: positions.clone(),
                }
                .to_placement()?;
                verify_packing(&instance, &placement)
            }
            Witness::Pair { boxes } => {
                let v = boxes_of(boxes)?;
                let [a, b]: [BoxDims<Rational>; 2] = v
                    .try_into()
                    .map_err(|_| Error::input("expected exactly two boxes"))?;
                let criterion = pair_fit_coordinate(&a, &b)?.is_some();
                let d = a.dimension();
                Ok(criterion != fits(&PackingInstance::new(d, vec![a, b])?, budget)?)
            }
            Witness::Triple {
                boxes,
                j12,
                j23,
                j31,
            } => {
                let t = three(boxes)?;
                let placement = triple_placement([&t[0], &t[1], &t[2]], *j12, *j23, *j31)?;
                let d = t[0].dimension();
                Ok(!verify_packing(
                    &PackingInstance::new(d, t.to_vec())?,
                    &placement,
                )?)
            }
            Witness::SingleCoordinate { boxes, coordinate } => {
                let t = three(boxes)?;
                let closed_form = triple_fit_single_coordinate([&t[0], &t[1], &t[2]], *coordinate)?;
                let d = t[0].dimension();
                let instance = PackingInstance::new(d, t.to_vec())?;
                let wrong_placement = match &closed_form {
                    Some(p) => !verify_packing(&instance, p)?,
                    None => false,
                };
                Ok(wrong_placement || closed_form.is_some() != fits(&instance, budget)?)
            }
            Witness::Reduction {
                vertices,
                edges,
                alpha,
                subset,
            } => {
                let (g, params) = graph_params(*vertices, edges, alpha)?;
                let instance = build_instance(&g, &params)?.sub_instance(subset)?;
                Ok(is_clique(&g, subset)? != fits(&instance, budget)?)
            }
            Witness::Bins {
                vertices,
                edges,
                alpha,
            } => {
                let (g, params) = graph_params(*vertices, edges, alpha)?;
                let bins = min_bins_exact_budgeted(&build_instance(&g, &params)?, budget)?.count();
                let colors = chromatic_number_budgeted(&complement(&g), budget)?.count;
                Ok(bins != colors)
            }
            Witness::Oracle { d, boxes, grid } => {
                let instance = instance_of(*d, boxes)?;
                let oracle = fits_grid_oracle_budgeted(&instance, *grid, budget)?.is_some();
                Ok(oracle != fits(&instance, budget)?)
            }
            Witness::Monotone { d, boxes, subset } => {
                let instance = instance_of(*d, boxes)?;
                Ok(fits(&instance, budget)? && !fits(&instance.sub_instance(subset)?, budget)?)
            }
            Witness::MatchingBound {
                universe_size,
                sets,
            } => {
                let f = SetFamily::new(*universe_size, sets.clone())?;
                Ok(!matching_bounds_hold(&f)?)
            }
            Witness::NotDownwardClosed {
                universe_size,
                sets,
                member,
                missing,
            } => {
                let f = SetFamily::new(*universe_size, sets.clone())?;
                let subset = missing.iter().all(|x| member.contains(x));
                Ok(f.contains_set(member) && subset && !f.contains_set(missing))
            }
            Witness::IsolatedElement {
                universe_size,
                sets,
                element,
            } => {
                let f = SetFamily::new(*universe_size, sets.clone())?;
                Ok(isolated_elements(&f).contains(element))
            }
            Witness::Embedding {
                universe_size,
                sets,
                d,
                map,
                set,
                violation,
            } => {
                let f = SetFamily::new(*universe_size, sets.clone())?;
                let emb = Embedding::new(*d, boxes_of(map)?)?;
                if emb.universe_size() != f.universe_size() {
                    return Err(Error::input("embedding does not cover the universe"));
                }
                let member = f.contains_set(set);
                let fit = emb.fits(set, budget)?;
                Ok(match violation {
                    ViolationKind::MemberDoesNotFit => member && !fit,
                    ViolationKind::NonMemberFits => !member && fit,
                })
            }
            Witness::OneDim { n, map } => {
                let f = lines_system(*n)?;
                let sides = map
                    .iter()
                    .map(|s| Ok(vec![s.clone()]))
                    .collect::<Result<Vec<_>>>()?;
                let emb = Embedding::new(1, boxes_of(&sides)?)?;
                if let EmbeddingCheck::Valid = verify_embedding_budgeted(&f, &emb, budget)? {
                    return Ok(true);
                }
                let v = find_1d_counterexample(&f, &emb)?;
                let w = Witness::embedding_violation(&f, &emb, v.set, v.kind);
                Ok(!w.check(budget)?)
            }
            Witness::Lines { n } => Ok(!lines_properties_hold(*n)?),
        }
    }
}

/// The three bounded-family guarantees checked by [`Witness::MatchingBound`],
/// with `k` and `B` taken from the family's own profile.
pub fn matching_bounds_hold(f: &SetFamily) -> Result<bool> {
    let p = bounded_profile(f);
    let cg = conflict_graph(f);
    let v = cg.graph.vertex_count();
    let delta = cg.graph.max_degree();
    let greedy = induced_matching(f, MatchingMode::Greedy)?.len();
    let kb = p.k * p.b;
    if delta > kb * kb || greedy < v.div_ceil(delta + 1) {
        return Ok(false);
    }
    let active = f.universe_size() - isolated_elements(f).len();
    if active > 0 {
        let denom = p.k * (p.k * p.k * p.b * p.b + 1);
        if greedy < active.div_ceil(denom) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn lines_properties_hold(n: usize) -> Result<bool> {
    let f = lines_system(n)?;
    if crate::setfamily::is_downward_closed(&f).is_some() || !isolated_elements(&f).is_empty() {
        return Ok(false);
    }
    let space = F3Space::new(n)?;
    let lines = lines_of(space);
    let mut count = vec![0u32; space.size() * space.size()];
    for l in &lines {
        for (i, &a) in l.iter().enumerate() {
            for &b in &l[i + 1..] {
                count[a * space.size() + b] += 1;
            }
        }
    }
    Ok((0..space.size()).all(|a| (a + 1..space.size()).all(|b| count[a * space.size() + b] == 1)))
}
