//! File formats: JSON instances, placements and embeddings, DIMACS graphs and
//! plain-text set families.
//!
//! Rationals are always written as `"p/q"` (or `"p"`) strings so that no
//! value ever passes through floating point.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoxDims, PackingInstance, Placement};
use crate::graph::Graph;
use crate::scalar::{parse_scalar, Scalar};
use crate::setfamily::{downward_closure, Embedding, SetFamily, MAX_CLOSURE_SETS};

pub(crate) fn strings<T: Scalar>(values: &[T]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

pub(crate) fn scalars<T: Scalar>(values: &[String]) -> Result<Vec<T>> {
    values.iter().map(|s| parse_scalar(s)).collect()
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(format!("invalid JSON: {e}"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub d: usize,
    pub boxes: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
}

impl InstanceFile {
    pub fn from_instance<T: Scalar>(instance: &PackingInstance<T>, alpha: Option<&T>) -> Self {
        InstanceFile {
            d: instance.dimension(),
            boxes: instance
                .boxes()
                .iter()
                .map(|b| strings(b.sides()))
                .collect(),
            alpha: alpha.map(ToString::to_string),
        }
    }

    pub fn to_instance<T: Scalar>(&self) -> Result<PackingInstance<T>> {
        let sides = self
            .boxes
            .iter()
            .map(|b| scalars(b))
            .collect::<Result<Vec<_>>>()?;
        PackingInstance::from_sides(self.d, sides)
    }
}

pub fn parse_instance<T: Scalar>(text: &str) -> Result<PackingInstance<T>> {
    serde_json::from_str::<InstanceFile>(text)
        .map_err(json_error)?
        .to_instance()
}

pub fn instance_to_json<T: Scalar>(instance: &PackingInstance<T>, alpha: Option<&T>) -> String {
    to_json(&InstanceFile::from_instance(instance, alpha))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementFile {
    pub d: usize,
    pub positions: Vec<Vec<String>>,
}

impl PlacementFile {
    pub fn from_placement<T: Scalar>(d: usize, placement: &Placement<T>) -> Self {
        PlacementFile {
            d,
            positions: placement.positions().iter().map(|p| strings(p)).collect(),
        }
    }

    pub fn to_placement<T: Scalar>(&self) -> Result<Placement<T>> {
        let positions = self
            .positions
            .iter()
            .map(|p| scalars(p))
            .collect::<Result<Vec<_>>>()?;
        if let Some(p) = positions.iter().find(|p: &&Vec<T>| p.len() != self.d) {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: p.len(),
            });
        }
        Placement::new(positions)
    }
}

/// Pretty JSON with a trailing newline. Field order follows the struct
/// definitions, so output is byte-stable.
pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable");
    out.push('\n');
    out
}

pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::parse(format!("line {}: cannot parse {line:?}", lineno + 1));
        let number = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match fields.as_slice() {
            [] => {}
            ["c", ..] => {}
            ["p", "edge" | "col", n, m] => {
                if header.is_some() {
                    return Err(Error::parse(format!("line {}: second header", lineno + 1)));
                }
                header = Some((number(n)?, number(m)?));
            }
            ["e", u, v] => {
                if header.is_none() {
                    return Err(Error::parse(format!(
                        "line {}: edge before header",
                        lineno + 1
                    )));
                }
                edges.push((number(u)?, number(v)?));
            }
            _ => return Err(bad()),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse("missing \"p edge <n> <m>\" header"))?;
    if edges.len() != m {
        return Err(Error::parse(format!(
            "header announces {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::from_one_indexed(n, edges)
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.vertex_count(), g.edges().len());
    for &(u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

/// Reads a set family: a `universe <n>` line, then one set per line as
/// space-separated 0-based indices, `{}` for the empty set. A `closure` line
/// replaces the family by its downward closure. `#` starts a comment.
pub fn parse_family(text: &str) -> Result<SetFamily> {
    let mut universe = None;
    let mut close = false;
    let mut sets = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let bad = |what: &str| Error::parse(format!("line {}: {what}: {raw:?}", lineno + 1));
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("universe") {
            if universe.is_some() {
                return Err(bad("second universe line"));
            }
            universe = Some(
                rest.trim()
                    .parse::<usize>()
                    .map_err(|_| bad("bad universe size"))?,
            );
            continue;
        }
        if universe.is_none() {
            return Err(bad("set before the universe line"));
        }
        if line == "closure" {
            close = true;
        } else if line == "{}" {
            sets.push(Vec::new());
        } else {
            let set = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| bad("bad element")))
                .collect::<Result<Vec<_>>>()?;
            sets.push(set);
        }
    }
    let n = universe.ok_or_else(|| Error::parse("missing \"universe <n>\" line"))?;
    let f = SetFamily::new(n, sets)?;
    if close {
        downward_closure(&f, MAX_CLOSURE_SETS)
    } else {
        Ok(f)
    }
}

pub fn write_family(f: &SetFamily) -> String {
    let mut out = format!("universe {}\n", f.universe_size());
    for s in f.sets() {
        if s.is_empty() {
            out.push_str("{}\n");
        } else {
            let items: Vec<String> = s.iter().map(ToString::to_string).collect();
            out.push_str(&items.join(" "));
            out.push('\n');
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingFile {
    pub d: usize,
    pub map: BTreeMap<usize, Vec<String>>,
}

impl EmbeddingFile {
    pub fn from_embedding<T: Scalar>(emb: &Embedding<T>) -> Self {
        EmbeddingFile {
            d: emb.dimension(),
            map: emb
                .images()
                .iter()
                .enumerate()
                .map(|(e, b)| (e, strings(b.sides())))
                .collect(),
        }
    }

    /// The map must cover `0..n` without gaps.
    pub fn to_embedding<T: Scalar>(&self) -> Result<Embedding<T>> {
        let mut boxes = Vec::with_capacity(self.map.len());
        for (i, (&e, sides)) in self.map.iter().enumerate() {
            if e != i {
                return Err(Error::input(format!(
                    "embedding has no image for element {i}"
                )));
            }
            boxes.push(BoxDims::new(scalars(sides)?)?);
        }
        Embedding::new(self.d, boxes)
    }
}

pub fn parse_embedding<T: Scalar>(text: &str) -> Result<Embedding<T>> {
    serde_json::from_str::<EmbeddingFile>(text)
        .map_err(json_error)?
        .to_embedding()
}

pub fn embedding_to_json<T: Scalar>(emb: &Embedding<T>) -> String {
    to_json(&EmbeddingFile::from_embedding(emb))
}
