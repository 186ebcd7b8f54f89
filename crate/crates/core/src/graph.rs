//! Simple undirected graphs on vertices `0..n`.

use fixedbitset::FixedBitSet;
use rand::Rng;

use crate::error::{Error, Result};

/// Sorted edge list plus one adjacency bitset per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<FixedBitSet>,
}

impl Graph {
    /// Builds a graph from 0-indexed edges. Duplicates and both orientations
    /// of the same edge collapse; self-loops are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![FixedBitSet::with_capacity(n); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!(
                    "edge ({u}, {v}) has a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        let edges = (0..n)
            .flat_map(|u| {
                adjacency[u]
                    .ones()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect();
        Ok(Graph {
            n,
            edges,
            adjacency,
        })
    }

    /// Builds a graph from 1-indexed edges, as in DIMACS files.
    pub fn from_one_indexed(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut shifted = Vec::new();
        for (u, v) in edges {
            if u == 0 || v == 0 {
                return Err(Error::input("vertex 0 in a 1-indexed edge list"));
            }
            shifted.push((u - 1, v - 1));
        }
        Self::new(n, shifted)
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, []).expect("no edges")
    }

    pub fn complete(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).expect("valid")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::input("a cycle needs at least 3 vertices"));
        }
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// The graph whose edge set is given by the bits of `mask` over the
    /// vertex pairs in lexicographic order.
    pub fn from_edge_mask(n: usize, mask: u64) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        if pairs.len() > 64 || (pairs.len() < 64 && mask >> pairs.len() != 0) {
            return Err(Error::input("edge mask does not match the vertex count"));
        }
        Self::new(
            n,
            pairs
                .into_iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, e)| e),
        )
    }

    /// Each pair becomes an edge independently with probability `p`.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Self::new(n, edges).expect("valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adjacency[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones(..)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Same vertices, with exactly the non-edges of `self` as edges.
    pub fn complement(&self) -> Graph {
        let edges = (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v));
        Graph::new(self.n, edges).expect("valid")
    }

    /// Whether `coloring` assigns different colors to adjacent vertices.
    pub fn is_proper_coloring(&self, coloring: &[usize]) -> bool {
        coloring.len() == self.n && self.edges.iter().all(|&(u, v)| coloring[u] != coloring[v])
    }
}
