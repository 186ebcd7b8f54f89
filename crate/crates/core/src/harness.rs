//! Seeded randomized checks of the packing lemmas against the exact oracle.
//!
//! Each run draws from a single `ChaCha8Rng` seeded with the configured seed
//! and reports counts only (no timings), so the same configuration always
//! yields the same report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::geometry::{
    fits_exact_budgeted, fits_grid_oracle_budgeted, pair_fit_coordinate,
    triple_fit_single_coordinate, triple_placement, verify_packing, BoxDims, PackingInstance,
};
use crate::graph::Graph;
use crate::io::strings;
use crate::reduction::{build_instance, complement, verify_reduction_property, ReductionParams};
use crate::scalar::Scalar;
use crate::setfamily::{
    bounded_profile, conflict_graph, downward_closure, find_1d_counterexample, induced_matching,
    lines_system, search_embedding_budgeted, BoundedProfile, Embedding, MatchingMode, SetFamily,
    MAX_CLOSURE_SETS,
};
use crate::solvers::{chromatic_number_budgeted, min_bins_exact_budgeted};
use crate::witness::{family_sets, lines_properties_hold, matching_bounds_hold, Witness};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Lemma {
    Pair,
    Triple,
    SingleCoord,
    Reduction,
    MatchingBound,
    Bins,
    Oracle,
    Monotone,
    Lines,
    OneDim,
}

impl Lemma {
    pub const ALL: [Lemma; 10] = [
        Lemma::Pair,
        Lemma::Triple,
        Lemma::SingleCoord,
        Lemma::Reduction,
        Lemma::MatchingBound,
        Lemma::Bins,
        Lemma::Oracle,
        Lemma::Monotone,
        Lemma::Lines,
        Lemma::OneDim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Pair => "pair",
            Lemma::Triple => "triple",
            Lemma::SingleCoord => "single-coord",
            Lemma::Reduction => "reduction",
            Lemma::MatchingBound => "matching-bound",
            Lemma::Bins => "bins",
            Lemma::Oracle => "oracle",
            Lemma::Monotone => "monotone",
            Lemma::Lines => "lines",
            Lemma::OneDim => "one-dim",
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Lemma::ALL.iter().map(|l| l.name()).collect();
                Error::input(format!(
                    "unknown lemma {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarnessConfig {
    pub trials: usize,
    pub seed: u64,
    /// Largest dimension of random boxes.
    pub max_dim: usize,
    /// Largest denominator of random sides; also the grid of the oracle and
    /// one-dim checks.
    pub max_den: u32,
    /// Largest number of boxes in random instances.
    pub max_boxes: usize,
    /// Vertex count of random graphs, or the largest one when exhaustive.
    pub vertices: usize,
    /// Sweep every graph on at most `vertices` vertices instead of sampling.
    pub exhaustive: bool,
    /// Universe size and nominal `(k, B)` of random bounded families.
    pub universe: usize,
    pub bound_k: usize,
    pub bound_b: usize,
    /// Grid for the one-dimensional embedding search.
    pub search_grid: u32,
    /// Node budget for each individual exact check.
    pub budget: u64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            trials: 100,
            seed: 0,
            max_dim: 4,
            max_den: 8,
            max_boxes: 4,
            vertices: 5,
            exhaustive: false,
            universe: 30,
            bound_k: 3,
            bound_b: 3,
            search_grid: 12,
            budget: Budget::DEFAULT_NODES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub lemma: String,
    pub config: HarnessConfig,
    pub trials_run: usize,
    pub rejections: usize,
    pub counterexamples: usize,
    pub first_counterexample: Option<Witness>,
    pub warnings: Vec<String>,
    /// Lemma-specific tallies, e.g. how many instances fit.
    pub stats: BTreeMap<String, u64>,
}

impl HarnessReport {
    /// No counterexample was found. Warnings (starved sampling) are reported
    /// separately.
    pub fn passed(&self) -> bool {
        self.counterexamples == 0
    }
}

struct Run<'a> {
    config: &'a HarnessConfig,
    rng: ChaCha8Rng,
    report: HarnessReport,
}

impl Run<'_> {
    fn budget(&self) -> Budget {
        Budget::new(self.config.budget)
    }

    fn fits(&self, instance: &PackingInstance<Rational>) -> Result<bool> {
        Ok(fits_exact_budgeted(instance, &mut self.budget())?.is_some())
    }

    fn tally(&mut self, key: &str) {
        *self.report.stats.entry(key.to_string()).or_default() += 1;
    }

    fn record(&mut self, holds: bool, witness: impl FnOnce() -> Witness) {
        self.report.trials_run += 1;
        if !holds {
            self.report.counterexamples += 1;
            if self.report.first_counterexample.is_none() {
                self.report.first_counterexample = Some(witness());
            }
        }
    }

    fn side(&mut self) -> Rational {
        let q = self.rng.gen_range(1..=self.config.max_den as i64);
        let p = self.rng.gen_range(1..=q);
        Rational::from_ratio(p, q)
    }

    fn random_box(&mut self, d: usize) -> BoxDims<Rational> {
        BoxDims::new((0..d).map(|_| self.side()).collect()).expect("sides in (0, 1]")
    }

    fn dim(&mut self, min: usize) -> usize {
        self.rng.gen_range(min..=self.config.max_dim.max(min))
    }

    fn attempts(&self) -> usize {
        100 * self.config.trials + 1000
    }

    fn starvation(&mut self, what: &str) {
        if self.report.trials_run < self.config.trials {
            self.report.warnings.push(format!(
                "precondition sampling starved: {} of {} {what} after {} rejections",
                self.report.trials_run, self.config.trials, self.report.rejections
            ));
        }
    }

    fn pair(&mut self) -> Result<()> {
        for _ in 0..self.config.trials {
            let d = self.dim(1);
            let (a, b) = (self.random_box(d), self.random_box(d));
            let criterion = pair_fit_coordinate(&a, &b)?.is_some();
            let exact = self.fits(&PackingInstance::new(d, vec![a.clone(), b.clone()])?)?;
            if exact {
                self.tally("fit");
            }
            self.record(criterion == exact, || Witness::Pair {
                boxes: vec![strings(a.sides()), strings(b.sides())],
            });
        }
        Ok(())
    }

    /// Rejection sampling: every pair needs a side-by-side coordinate and the
    /// three chosen coordinates must not all coincide.
    fn triple(&mut self) -> Result<()> {
        if self.config.max_dim < 2 {
            return Err(Error::input("the triple lemma needs max-dim >= 2"));
        }
        let one = Rational::from_ratio(1, 1);
        let mut attempts = 0;
        while self.report.trials_run < self.config.trials && attempts < self.attempts() {
            attempts += 1;
            let d = self.dim(2);
            let t = [self.random_box(d), self.random_box(d), self.random_box(d)];
            let mut choice = [0usize; 3];
            let mut ok = true;
            for (slot, (a, b)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
                let options: Vec<usize> = (0..d)
                    .filter(|&l| t[a].side(l).clone() + t[b].side(l).clone() <= one)
                    .collect();
                match options.choose(&mut self.rng) {
                    Some(&j) => choice[slot] = j,
                    None => ok = false,
                }
            }
            if !ok || (choice[0] == choice[1] && choice[1] == choice[2]) {
                self.report.rejections += 1;
                continue;
            }
            let [j12, j23, j31] = choice;
            let placement = triple_placement([&t[0], &t[1], &t[2]], j12, j23, j31)?;
            let valid = verify_packing(&PackingInstance::new(d, t.to_vec())?, &placement)?;
            self.record(valid, || Witness::Triple {
                boxes: t.iter().map(|b| strings(b.sides())).collect(),
                j12,
                j23,
                j31,
            });
        }
        self.starvation("triples");
        Ok(())
    }

    /// Constructed directly: sides at most 1/2 in the chosen coordinate and
    /// above 1/2 elsewhere.
    fn single_coord(&mut self) -> Result<()> {
        if self.config.max_den < 2 {
            return Err(Error::input("the single-coord lemma needs max-den >= 2"));
        }
        for _ in 0..self.config.trials {
            let d = self.dim(1);
            let j = self.rng.gen_range(0..d);
            let mut t = Vec::with_capacity(3);
            for _ in 0..3 {
                let sides = (0..d)
                    .map(|l| {
                        let q = self.rng.gen_range(2..=self.config.max_den as i64);
                        if l == j {
                            Rational::from_ratio(self.rng.gen_range(1..=q / 2), q)
                        } else {
                            Rational::from_ratio(self.rng.gen_range(q / 2 + 1..=q), q)
                        }
                    })
                    .collect();
                t.push(BoxDims::new(sides)?);
            }
            let closed_form = triple_fit_single_coordinate([&t[0], &t[1], &t[2]], j)?;
            let instance = PackingInstance::new(d, t.clone())?;
            let exact = self.fits(&instance)?;
            let sound = match &closed_form {
                Some(p) => verify_packing(&instance, p)?,
                None => true,
            };
            if exact {
                self.tally("fit");
            }
            self.record(sound && closed_form.is_some() == exact, || {
                Witness::SingleCoordinate {
                    boxes: t.iter().map(|b| strings(b.sides())).collect(),
                    coordinate: j,
                }
            });
        }
        Ok(())
    }

    /// Every graph on `1..=vertices` vertices, or `trials` random graphs on
    /// exactly `vertices` vertices with edge probability 1/2.
    fn graphs(&mut self) -> Result<Vec<Graph>> {
        let n = self.config.vertices;
        if n == 0 {
            return Err(Error::input("graphs need at least one vertex"));
        }
        if self.config.exhaustive {
            if n > 6 {
                return Err(Error::input(
                    "exhaustive graph sweeps are limited to 6 vertices",
                ));
            }
            let mut out = Vec::new();
            for k in 1..=n {
                let pairs = k * (k - 1) / 2;
                for mask in 0u64..1 << pairs {
                    out.push(Graph::from_edge_mask(k, mask)?);
                }
            }
            Ok(out)
        } else {
            Ok((0..self.config.trials)
                .map(|_| Graph::random(n, 0.5, &mut self.rng))
                .collect())
        }
    }

    fn reduction(&mut self) -> Result<()> {
        let params = ReductionParams::<Rational>::default();
        let alpha = params.alpha().to_string();
        for g in self.graphs()? {
            let report = verify_reduction_property(&g, &params, &mut self.budget())?;
            *self.report.stats.entry("subsets".into()).or_default() += report.subsets_checked;
            let violation = report.violation;
            self.record(violation.is_none(), || Witness::Reduction {
                vertices: g.vertex_count(),
                edges: g.edges().to_vec(),
                alpha: alpha.clone(),
                subset: violation.map(|v| v.subset).unwrap_or_default(),
            });
        }
        Ok(())
    }

    fn bins(&mut self) -> Result<()> {
        let params = ReductionParams::<Rational>::default();
        for g in self.graphs()? {
            let bins =
                min_bins_exact_budgeted(&build_instance(&g, &params)?, &mut self.budget())?.count();
            let colors = chromatic_number_budgeted(&complement(&g), &mut self.budget())?.count;
            self.record(bins == colors, || Witness::Bins {
                vertices: g.vertex_count(),
                edges: g.edges().to_vec(),
                alpha: params.alpha().to_string(),
            });
        }
        Ok(())
    }

    fn oracle(&mut self) -> Result<()> {
        let m = self.config.max_den;
        for _ in 0..self.config.trials {
            let d = self.dim(1);
            let k = self.rng.gen_range(1..=self.config.max_boxes.max(1));
            let sides = (0..k)
                .map(|_| {
                    (0..d)
                        .map(|_| Rational::from_ratio(self.rng.gen_range(1..=m as i64), m as i64))
                        .collect()
                })
                .collect();
            let instance = PackingInstance::from_sides(d, sides)?;
            let exact = self.fits(&instance)?;
            let grid = fits_grid_oracle_budgeted(&instance, m, &mut self.budget())?.is_some();
            if exact {
                self.tally("fit");
            }
            self.record(exact == grid, || Witness::Oracle {
                d,
                boxes: instance
                    .boxes()
                    .iter()
                    .map(|b| strings(b.sides()))
                    .collect(),
                grid: m,
            });
        }
        Ok(())
    }

    fn monotone(&mut self) -> Result<()> {
        for _ in 0..self.config.trials {
            let d = self.dim(1);
            let k = self.rng.gen_range(1..=self.config.max_boxes.max(1));
            let boxes = (0..k).map(|_| self.random_box(d)).collect();
            let instance = PackingInstance::new(d, boxes)?;
            let mut failing = None;
            if self.fits(&instance)? {
                self.tally("fit");
                for mask in 1u32..(1 << k) - 1 {
                    let subset: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
                    if !self.fits(&instance.sub_instance(&subset)?)? {
                        failing = Some(subset);
                        break;
                    }
                }
            }
            self.record(failing.is_none(), || Witness::Monotone {
                d,
                boxes: instance
                    .boxes()
                    .iter()
                    .map(|b| strings(b.sides()))
                    .collect(),
                subset: failing.unwrap_or_default(),
            });
        }
        Ok(())
    }

    /// Structural checks for `n = 1, 2, 3`; `trials` is ignored.
    fn lines(&mut self) -> Result<()> {
        for n in 1..=3 {
            let holds = lines_properties_hold(n)?;
            self.record(holds, || Witness::Lines { n });
        }
        let f = lines_system(2)?;
        let lines = f.sets().filter(|s| s.len() == 3).count() as u64;
        self.report
            .stats
            .insert("plane_sets".into(), f.len() as u64);
        self.report.stats.insert("plane_lines".into(), lines);
        Ok(())
    }

    /// A grid search over one-dimensional embeddings of `lines_system(2)`,
    /// then the counterexample construction on `trials` random embeddings.
    fn one_dim(&mut self) -> Result<()> {
        let f = lines_system(2)?;
        let found = search_embedding_budgeted::<Rational>(
            &f,
            1,
            self.config.search_grid,
            &mut self.budget(),
        )?;
        self.record(found.is_none(), || Witness::OneDim {
            n: 2,
            map: found
                .as_ref()
                .map(|e| e.images().iter().map(|b| b.side(0).to_string()).collect())
                .unwrap_or_default(),
        });
        let m = self.config.max_den as i64;
        for _ in 0..self.config.trials {
            let sides: Vec<Rational> = (0..f.universe_size())
                .map(|_| Rational::from_ratio(self.rng.gen_range(1..=m), m))
                .collect();
            let boxes = sides
                .iter()
                .map(|s| BoxDims::new(vec![s.clone()]))
                .collect::<Result<Vec<_>>>()?;
            let emb = Embedding::new(1, boxes)?;
            let v = find_1d_counterexample(&f, &emb)?;
            self.tally(match v.kind {
                crate::setfamily::ViolationKind::MemberDoesNotFit => "member_does_not_fit",
                crate::setfamily::ViolationKind::NonMemberFits => "non_member_fits",
            });
            let valid =
                Witness::embedding_violation(&f, &emb, v.set, v.kind).check(&mut self.budget())?;
            self.record(valid, || Witness::OneDim {
                n: 2,
                map: sides.iter().map(|s| s.to_string()).collect(),
            });
        }
        Ok(())
    }

    fn matching_bound(&mut self) -> Result<()> {
        let (n, k, b) = (
            self.config.universe,
            self.config.bound_k,
            self.config.bound_b,
        );
        if n == 0 || k < 2 {
            return Err(Error::input("bounded families need a universe and k >= 2"));
        }
        for _ in 0..self.config.trials {
            let f = random_bounded_family(&mut self.rng, n, k, b)?;
            let p = bounded_profile(&f);
            let cg = conflict_graph(&f);
            let delta = cg.graph.max_degree() as u64;
            let stats = &mut self.report.stats;
            let max = |stats: &mut BTreeMap<String, u64>, key: &str, v: u64| {
                let e = stats.entry(key.to_string()).or_default();
                *e = (*e).max(v);
            };
            max(stats, "max_conflict_degree", delta);
            max(
                stats,
                "max_conflict_vertices",
                cg.graph.vertex_count() as u64,
            );
            max(stats, "max_profile_k", p.k as u64);
            max(stats, "max_profile_b", p.b as u64);
            let greedy = induced_matching(&f, MatchingMode::Greedy)?.len() as u64;
            let nominal = (k * b * k * b) as u64;
            let v = cg.graph.vertex_count() as u64;
            let holds = within(&p, k, b)
                && delta <= nominal
                && greedy >= v.div_ceil(nominal + 1)
                && matching_bounds_hold(&f)?;
            self.record(holds, || Witness::MatchingBound {
                universe_size: n,
                sets: family_sets(&f),
            });
        }
        Ok(())
    }
}

fn within(p: &BoundedProfile, k: usize, b: usize) -> bool {
    p.k <= k && p.b <= b
}

/// A downward-closed family on `0..n` containing every singleton whose
/// profile stays within `(k, b)`: random sets of size `2..=k` are offered
/// `4 n` times and kept when the closure stays within the bounds.
pub fn random_bounded_family<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    b: usize,
) -> Result<SetFamily> {
    let elements: Vec<usize> = (0..n).collect();
    let mut generators: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
    let mut current = downward_closure(&SetFamily::new(n, generators.clone())?, MAX_CLOSURE_SETS)?;
    for _ in 0..4 * n {
        let size = rng.gen_range(2..=k.min(n).max(2));
        if size > n {
            break;
        }
        let candidate: Vec<usize> = elements.choose_multiple(rng, size).copied().collect();
        generators.push(candidate);
        let next = downward_closure(&SetFamily::new(n, generators.clone())?, MAX_CLOSURE_SETS)?;
        if within(&bounded_profile(&next), k, b) {
            current = next;
        } else {
            generators.pop();
        }
    }
    Ok(current)
}

pub fn run_lemma(lemma: Lemma, config: &HarnessConfig) -> Result<HarnessReport> {
    let mut run = Run {
        config,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        report: HarnessReport {
            lemma: lemma.name().to_string(),
            config: config.clone(),
            trials_run: 0,
            rejections: 0,
            counterexamples: 0,
            first_counterexample: None,
            warnings: Vec::new(),
            stats: BTreeMap::new(),
        },
    };
    if config.max_dim == 0 || config.max_den == 0 {
        return Err(Error::input("max-dim and max-den must be positive"));
    }
    match lemma {
        Lemma::Pair => run.pair()?,
        Lemma::Triple => run.triple()?,
        Lemma::SingleCoord => run.single_coord()?,
        Lemma::Reduction => run.reduction()?,
        Lemma::MatchingBound => run.matching_bound()?,
        Lemma::Bins => run.bins()?,
        Lemma::Oracle => run.oracle()?,
        Lemma::Monotone => run.monotone()?,
        Lemma::Lines => run.lines()?,
        Lemma::OneDim => run.one_dim()?,
    }
    Ok(run.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(lemma: Lemma, trials: usize) -> HarnessReport {
        let config = HarnessConfig {
            trials,
            seed: 3,
            ..HarnessConfig::default()
        };
        run_lemma(lemma, &config).unwrap()
    }

    #[test]
    fn names_roundtrip() {
        for l in Lemma::ALL {
            assert_eq!(l.name().parse::<Lemma>().unwrap(), l);
        }
        assert!("nope".parse::<Lemma>().is_err());
    }

    #[test]
    fn small_runs_pass() {
        for (lemma, trials) in [
            (Lemma::Pair, 50),
            (Lemma::Triple, 20),
            (Lemma::SingleCoord, 20),
            (Lemma::Oracle, 10),
            (Lemma::Monotone, 10),
            (Lemma::Lines, 1),
            (Lemma::OneDim, 5),
            (Lemma::MatchingBound, 2),
        ] {
            let r = quick(lemma, trials);
            assert!(r.passed() && r.warnings.is_empty(), "{lemma}: {r:?}");
        }
    }

    #[test]
    fn runs_are_reproducible() {
        assert_eq!(quick(Lemma::Pair, 30), quick(Lemma::Pair, 30));
        assert_eq!(quick(Lemma::Triple, 10), quick(Lemma::Triple, 10));
    }

    #[test]
    fn starvation_is_reported() {
        let config = HarnessConfig {
            trials: 5,
            max_dim: 2,
            max_den: 1,
            ..HarnessConfig::default()
        };
        // All sides are 1, so no pair ever fits side by side.
        let r = run_lemma(Lemma::Triple, &config).unwrap();
        assert_eq!(r.trials_run, 0);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn bounded_families_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_bounded_family(&mut rng, 30, 3, 3).unwrap();
        let p = bounded_profile(&f);
        assert!(p.k <= 3 && p.b <= 3);
        assert!(crate::setfamily::is_downward_closed(&f).is_none());
        assert!(f.len() > 31, "some pairs were accepted");
    }
}
