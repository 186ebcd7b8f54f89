use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use geopack::geometry::{fits_exact_budgeted, fits_grid_oracle_budgeted, PackingInstance};
use geopack::harness::{run_lemma, HarnessConfig, Lemma};
use geopack::io::{
    embedding_to_json, instance_to_json, parse_dimacs, parse_embedding, parse_family,
    parse_instance, to_json, write_family, EmbeddingFile, PlacementFile,
};
use geopack::reduction::{build_instance, complement, ReductionParams};
use geopack::setfamily::{
    bounded_profile, conflict_graph, find_1d_counterexample, gpd_lower_bound,
    induced_matching_budgeted, is_downward_closed, isolated_elements, lines_system,
    search_embedding_budgeted, verify_embedding_budgeted, verify_embedding_exhaustive,
    EmbeddingCheck, MatchingMode, SetFamily, ViolationKind,
};
use geopack::solvers::{
    chromatic_number_budgeted, decreasing_volume_order, enumerate_configurations_budgeted,
    first_fit_bins_budgeted, min_bins_exact_budgeted, BinSolution,
};
use geopack::witness::Witness;
use geopack::{parse_scalar, Budget, Error, Rational, Result};

use crate::{Cli, Command, EmbedAction, FamilyAction, LemmaArgs};

pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome {
            text,
            json,
            code: 0,
        }
    }

    /// Exit 1 with the witness attached to both renderings.
    fn violated(mut text: String, mut json: Value, witness: Witness) -> Self {
        let w = serde_json::to_value(&witness).expect("serializable");
        let _ = writeln!(text, "witness: {w}");
        json["witness"] = w;
        Outcome {
            text,
            json,
            code: 1,
        }
    }

    pub fn json_text(&self) -> String {
        to_json(&self.json)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)
        .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<PackingInstance<Rational>> {
    parse_instance(&read(path)?)
}

fn load_family(path: &Path) -> Result<SetFamily> {
    parse_family(&read(path)?)
}

fn sets_json(sets: &[Vec<usize>]) -> Value {
    json!(sets)
}

fn family_witness_sets(f: &SetFamily) -> Vec<Vec<usize>> {
    f.sets().cloned().collect()
}

fn solution_json(solution: &BinSolution<Rational>) -> Value {
    let bins: Vec<&Vec<usize>> = solution.bins.iter().map(|b| &b.boxes).collect();
    json!({ "bins": bins, "count": solution.count() })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let mut budget = Budget::new(cli.budget);
    match &cli.command {
        Command::Reduce {
            graph,
            alpha,
            complement: comp,
            output,
        } => {
            let mut g = parse_dimacs(&read(graph)?)?;
            if *comp {
                g = complement(&g);
            }
            let params = ReductionParams::new(parse_scalar::<Rational>(alpha)?)?;
            let instance = build_instance(&g, &params)?;
            let text = instance_to_json(&instance, Some(params.alpha()));
            let json: Value = serde_json::from_str(&text).expect("valid JSON");
            match output {
                Some(path) => {
                    write(path, &text)?;
                    let summary = format!(
                        "wrote {} boxes in dimension {} to {}\n",
                        instance.len(),
                        instance.dimension(),
                        path.display()
                    );
                    Ok(Outcome::ok(summary, json))
                }
                None => Ok(Outcome::ok(text, json)),
            }
        }

        Command::Fit { instance, grid } => {
            let inst = load_instance(instance)?;
            let found = fits_exact_budgeted(&inst, &mut budget)?;
            let mut json =
                json!({ "fits": found.is_some(), "boxes": inst.len(), "d": inst.dimension() });
            let mut text = format!("fits: {}\n", if found.is_some() { "yes" } else { "no" });
            if let Some(p) = &found {
                let file = PlacementFile::from_placement(inst.dimension(), p);
                for (i, pos) in file.positions.iter().enumerate() {
                    let _ = writeln!(text, "  box {i} at ({})", pos.join(", "));
                }
                json["placement"] = serde_json::to_value(&file).expect("serializable");
            }
            if let Some(m) = grid {
                let oracle = fits_grid_oracle_budgeted(&inst, *m, &mut budget)?.is_some();
                let _ = writeln!(
                    text,
                    "grid oracle (m = {m}): {}",
                    if oracle { "yes" } else { "no" }
                );
                json["grid_oracle"] = json!(oracle);
                if oracle != found.is_some() {
                    let w = Witness::Oracle {
                        d: inst.dimension(),
                        boxes: inst
                            .boxes()
                            .iter()
                            .map(|b| b.sides().iter().map(|s| s.to_string()).collect())
                            .collect(),
                        grid: *m,
                    };
                    return Ok(Outcome::violated(text, json, w));
                }
            }
            Ok(Outcome::ok(text, json))
        }

        Command::Solve {
            instance,
            exact,
            first_fit: _,
            order,
        } => {
            let inst = load_instance(instance)?;
            let (solution, method) = if *exact {
                (min_bins_exact_budgeted(&inst, &mut budget)?, "exact")
            } else {
                let order = match order.as_deref() {
                    None => (0..inst.len()).collect(),
                    Some("volume") => decreasing_volume_order(&inst),
                    Some(list) => parse_order(list)?,
                };
                (
                    first_fit_bins_budgeted(&inst, &order, &mut budget)?,
                    "first-fit",
                )
            };
            let mut json = solution_json(&solution);
            json["method"] = json!(method);
            let mut text = format!("{method}: {} bins\n", solution.count());
            for (i, bin) in solution.bins.iter().enumerate() {
                let _ = writeln!(text, "  bin {i}: {:?}", bin.boxes);
            }
            Ok(Outcome::ok(text, json))
        }

        Command::Chromatic {
            graph,
            complement: comp,
        } => {
            let mut g = parse_dimacs(&read(graph)?)?;
            if *comp {
                g = complement(&g);
            }
            let c = chromatic_number_budgeted(&g, &mut budget)?;
            let json = json!({ "chromatic_number": c.count, "colors": c.colors });
            Ok(Outcome::ok(format!("{}\n", c.count), json))
        }

        Command::Configs { instance } => {
            let inst = load_instance(instance)?;
            let configs = enumerate_configurations_budgeted(&inst, &mut budget)?;
            let sets: Vec<Vec<usize>> = configs.iter().map(|c| c.boxes.clone()).collect();
            let mut text = format!("{} maximal configurations\n", sets.len());
            for s in &sets {
                let _ = writeln!(text, "  {s:?}");
            }
            Ok(Outcome::ok(
                text,
                json!({ "configurations": sets, "count": sets.len() }),
            ))
        }

        Command::Lines { n, output } => {
            let f = lines_system(*n)?;
            let lines = f.sets().filter(|s| s.len() == 3).count();
            let json =
                json!({ "n": n, "universe": f.universe_size(), "sets": f.len(), "lines": lines });
            let body = write_family(&f);
            match output {
                Some(path) => {
                    write(path, &body)?;
                    let text = format!(
                        "wrote {} sets ({} lines) on {} points to {}\n",
                        f.len(),
                        lines,
                        f.universe_size(),
                        path.display()
                    );
                    Ok(Outcome::ok(text, json))
                }
                None => Ok(Outcome::ok(body, json)),
            }
        }

        Command::Family {
            action: FamilyAction::Check { family },
        } => {
            let f = load_family(family)?;
            let closure = is_downward_closed(&f);
            let isolated = isolated_elements(&f);
            let p = bounded_profile(&f);
            let json = json!({
                "universe": f.universe_size(),
                "sets": f.len(),
                "downward_closed": closure.is_none(),
                "isolated": isolated,
                "k": p.k,
                "b": p.b,
                "largest_member": p.largest_member,
                "busiest_element": p.busiest_element,
            });
            let mut text = format!("universe {}, {} sets\n", f.universe_size(), f.len());
            let _ = writeln!(text, "profile: k = {}, B = {}", p.k, p.b);
            let _ = writeln!(
                text,
                "downward closed: {}",
                if closure.is_none() { "yes" } else { "no" }
            );
            let _ = writeln!(text, "isolated elements: {isolated:?}");
            if let Some(w) = closure {
                let witness = Witness::NotDownwardClosed {
                    universe_size: f.universe_size(),
                    sets: family_witness_sets(&f),
                    member: w.member,
                    missing: w.missing,
                };
                return Ok(Outcome::violated(text, json, witness));
            }
            if let Some(&element) = isolated.first() {
                let witness = Witness::IsolatedElement {
                    universe_size: f.universe_size(),
                    sets: family_witness_sets(&f),
                    element,
                };
                return Ok(Outcome::violated(text, json, witness));
            }
            Ok(Outcome::ok(text, json))
        }

        Command::Matching { family, exact } => {
            let f = load_family(family)?;
            let cg = conflict_graph(&f);
            let p = bounded_profile(&f);
            let (matching, mode, warnings) = if *exact {
                let lb = gpd_lower_bound(&f, &mut budget)?;
                let mode = if lb.exact {
                    "exact"
                } else {
                    "greedy (exact search ran out of budget)"
                };
                (lb.matching, mode, lb.warnings)
            } else {
                let m = induced_matching_budgeted(&f, MatchingMode::Greedy, &mut budget)?;
                let mut warnings = Vec::new();
                if let Some(w) = is_downward_closed(&f) {
                    warnings.push(format!(
                        "not downward closed: {:?} is a member but {:?} is not",
                        w.member, w.missing
                    ));
                }
                let isolated = isolated_elements(&f);
                if !isolated.is_empty() {
                    warnings.push(format!("isolated elements: {isolated:?}"));
                }
                (m, "greedy", warnings)
            };
            let json = json!({
                "mode": mode,
                "matching": sets_json(matching.sets()),
                "size": matching.len(),
                "gpd_lower_bound": matching.len(),
                "conflict_vertices": cg.graph.vertex_count(),
                "conflict_edges": cg.graph.edges().len(),
                "max_conflict_degree": cg.graph.max_degree(),
                "k": p.k,
                "b": p.b,
                "warnings": warnings,
            });
            let mut text = format!("induced matching ({mode}): {} sets\n", matching.len());
            for s in matching.sets() {
                let _ = writeln!(text, "  {s:?}");
            }
            let _ = writeln!(
                text,
                "conflict graph: {} vertices, {} edges, max degree {}",
                cg.graph.vertex_count(),
                cg.graph.edges().len(),
                cg.graph.max_degree()
            );
            let _ = writeln!(text, "packing dimension >= {} or infinite", matching.len());
            for w in &warnings {
                let _ = writeln!(text, "warning: {w}");
            }
            Ok(Outcome::ok(text, json))
        }

        Command::Embed {
            action:
                EmbedAction::Verify {
                    family,
                    embedding,
                    exhaustive,
                },
        } => {
            let f = load_family(family)?;
            let emb = parse_embedding::<Rational>(&read(embedding)?)?;
            let check = if *exhaustive {
                if let Some(w) = is_downward_closed(&f) {
                    EmbeddingCheck::NotDownwardClosed(w)
                } else {
                    verify_embedding_exhaustive(&f, &emb, &mut budget)?
                }
            } else {
                verify_embedding_budgeted(&f, &emb, &mut budget)?
            };
            match check {
                EmbeddingCheck::Valid => {
                    Ok(Outcome::ok("valid\n".into(), json!({ "valid": true })))
                }
                EmbeddingCheck::Violation(v) => {
                    let text = format!("invalid: {:?} {}\n", v.set, describe(v.kind));
                    let json = json!({ "valid": false, "set": v.set, "violation": v.kind });
                    Ok(Outcome::violated(
                        text,
                        json,
                        Witness::embedding_violation(&f, &emb, v.set, v.kind),
                    ))
                }
                EmbeddingCheck::NotDownwardClosed(w) => {
                    let text = format!(
                        "invalid: the family is not downward closed ({:?} is a member, {:?} is not), so no embedding exists\n",
                        w.member, w.missing
                    );
                    let json = json!({ "valid": false, "downward_closed": false });
                    let witness = Witness::NotDownwardClosed {
                        universe_size: f.universe_size(),
                        sets: family_witness_sets(&f),
                        member: w.member,
                        missing: w.missing,
                    };
                    Ok(Outcome::violated(text, json, witness))
                }
            }
        }

        Command::Embed {
            action:
                EmbedAction::Search {
                    family,
                    dim,
                    grid,
                    output,
                },
        } => {
            let f = load_family(family)?;
            match search_embedding_budgeted::<Rational>(&f, *dim, *grid, &mut budget)? {
                Some(emb) => {
                    let body = embedding_to_json(&emb);
                    let json = json!({
                        "found": true,
                        "embedding": serde_json::to_value(EmbeddingFile::from_embedding(&emb)).expect("serializable"),
                    });
                    let text = match output {
                        Some(path) => {
                            write(path, &body)?;
                            format!("found; embedding written to {}\n", path.display())
                        }
                        None => format!("found\n{body}"),
                    };
                    Ok(Outcome::ok(text, json))
                }
                None => {
                    let text = format!("none at granularity {grid} in dimension {dim}\n");
                    Ok(Outcome::ok(
                        text,
                        json!({ "found": false, "dim": dim, "grid": grid }),
                    ))
                }
            }
        }

        Command::Counterexample1d { family, embedding } => {
            let f = load_family(family)?;
            let emb = parse_embedding::<Rational>(&read(embedding)?)?;
            let v = find_1d_counterexample(&f, &emb)?;
            let witness = Witness::embedding_violation(&f, &emb, v.set.clone(), v.kind);
            let confirmed = witness.check(&mut budget)?;
            let json = json!({
                "set": v.set,
                "violation": v.kind,
                "confirmed": confirmed,
                "witness": serde_json::to_value(&witness).expect("serializable"),
            });
            let text = format!(
                "{:?} {} ({})\n",
                v.set,
                describe(v.kind),
                if confirmed {
                    "confirmed"
                } else {
                    "NOT confirmed"
                }
            );
            Ok(Outcome {
                text,
                json,
                code: if confirmed { 0 } else { 1 },
            })
        }

        Command::VerifyLemmas(args) => verify_lemmas(cli, args),

        Command::CheckWitness { report } => {
            let value: Value = serde_json::from_str(&read(report)?)
                .map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
            let w = extract_witness(&value)?;
            let confirmed = w.check(&mut budget)?;
            let verdict = if confirmed { "confirmed" } else { "rejected" };
            let json = json!({ "kind": w.kind(), "confirmed": confirmed });
            Ok(Outcome {
                text: format!("{} witness {verdict}\n", w.kind()),
                json,
                code: if confirmed { 0 } else { 1 },
            })
        }
    }
}

fn describe(kind: ViolationKind) -> &'static str {
    match kind {
        ViolationKind::MemberDoesNotFit => "is a member but does not fit",
        ViolationKind::NonMemberFits => "is not a member but fits",
    }
}

fn parse_order(list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad index {t:?} in --order")))
        })
        .collect()
}

/// A bare witness, or a report carrying one under `witness` or
/// `first_counterexample`.
fn extract_witness(value: &Value) -> Result<Witness> {
    let candidate = if value.get("kind").is_some() {
        value
    } else if let Some(w) = value.get("witness").filter(|w| !w.is_null()) {
        w
    } else if let Some(w) = value.get("first_counterexample").filter(|w| !w.is_null()) {
        w
    } else {
        return Err(Error::Input("no witness found in the report".into()));
    };
    serde_json::from_value(candidate.clone())
        .map_err(|e| Error::Parse(format!("malformed witness: {e}")))
}

fn verify_lemmas(cli: &Cli, args: &LemmaArgs) -> Result<Outcome> {
    let lemma: Lemma = args.lemma.parse()?;
    let config = HarnessConfig {
        trials: args.trials,
        seed: cli.seed,
        max_dim: args.max_dim,
        max_den: args.max_den,
        max_boxes: args.max_boxes,
        vertices: args.vertices,
        exhaustive: args.exhaustive,
        universe: args.universe,
        bound_k: args.k,
        bound_b: args.b,
        search_grid: args.grid,
        budget: cli.budget,
    };
    let report = run_lemma(lemma, &config)?;
    let json = serde_json::to_value(&report).expect("serializable");
    let mut text = format!(
        "{lemma}: {} trials, {} rejections, {} counterexamples\n",
        report.trials_run, report.rejections, report.counterexamples
    );
    for (k, v) in &report.stats {
        let _ = writeln!(text, "  {k}: {v}");
    }
    for w in &report.warnings {
        let _ = writeln!(text, "warning: {w}");
        eprintln!("warning: {w}");
    }
    match &report.first_counterexample {
        Some(w) => {
            let _ = writeln!(
                text,
                "witness: {}",
                serde_json::to_value(w).expect("serializable")
            );
            Ok(Outcome {
                text,
                json,
                code: 1,
            })
        }
        None => Ok(Outcome::ok(text, json)),
    }
}
