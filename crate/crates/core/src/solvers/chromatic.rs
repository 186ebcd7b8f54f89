//! DSATUR branch and bound.

use crate::budget::Budget;
use crate::error::Result;
use crate::graph::Graph;

/// Proper coloring using exactly `count` colors `0..count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub count: usize,
    pub colors: Vec<usize>,
}

/// A clique grown greedily from each start vertex; the largest one found.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut best = Vec::new();
    for &start in &by_degree {
        let mut clique = vec![start];
        for &v in &by_degree {
            if v != start && clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    best
}

pub fn chromatic_number(g: &Graph) -> Result<Coloring> {
    chromatic_number_budgeted(g, &mut Budget::default())
}

pub fn chromatic_number_budgeted(g: &Graph, budget: &mut Budget) -> Result<Coloring> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(Coloring {
            count: 0,
            colors: Vec::new(),
        });
    }
    let lower = greedy_clique(g).len();
    let mut state = State::new(g);
    let upper = state.greedy();
    let mut search = Search {
        g,
        lower,
        best: upper,
        state: State::new(g),
        budget,
    };
    if search.best.count > lower {
        search.run(0, 0)?;
    }
    Ok(search.best)
}

struct State<'g> {
    g: &'g Graph,
    colors: Vec<Option<usize>>,
    /// `neighbor_colors[v][c]`: neighbors of `v` currently colored `c`.
    neighbor_colors: Vec<Vec<u32>>,
    saturation: Vec<usize>,
}

impl<'g> State<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.vertex_count();
        State {
            g,
            colors: vec![None; n],
            neighbor_colors: vec![vec![0; n]; n],
            saturation: vec![0; n],
        }
    }

    /// Uncolored vertex with the most distinct neighbor colors, then the
    /// most uncolored neighbors, then the smallest index.
    fn pick(&self) -> Option<usize> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v].is_none())
            .max_by_key(|&v| {
                let free = self
                    .g
                    .neighbors(v)
                    .ones()
                    .filter(|&u| self.colors[u].is_none())
                    .count();
                (self.saturation[v], free, std::cmp::Reverse(v))
            })
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = Some(c);
        for u in self.g.neighbors(v).ones() {
            self.neighbor_colors[u][c] += 1;
            if self.neighbor_colors[u][c] == 1 {
                self.saturation[u] += 1;
            }
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.colors[v] = None;
        for u in self.g.neighbors(v).ones() {
            self.neighbor_colors[u][c] -= 1;
            if self.neighbor_colors[u][c] == 0 {
                self.saturation[u] -= 1;
            }
        }
    }

    fn greedy(&mut self) -> Coloring {
        let mut used = 0;
        while let Some(v) = self.pick() {
            let c = (0..)
                .find(|&c| c >= used || self.neighbor_colors[v][c] == 0)
                .unwrap();
            used = used.max(c + 1);
            self.assign(v, c);
        }
        Coloring {
            count: used,
            colors: self
                .colors
                .iter()
                .map(|c| c.expect("all colored"))
                .collect(),
        }
    }
}

struct Search<'g, 'b> {
    g: &'g Graph,
    lower: usize,
    best: Coloring,
    state: State<'g>,
    budget: &'b mut Budget,
}

impl Search<'_, '_> {
    fn run(&mut self, colored: usize, used: usize) -> Result<()> {
        if used >= self.best.count {
            return Ok(());
        }
        if colored == self.g.vertex_count() {
            self.best = Coloring {
                count: used,
                colors: self
                    .state
                    .colors
                    .iter()
                    .map(|c| c.expect("all colored"))
                    .collect(),
            };
            return Ok(());
        }
        self.budget.tick("chromatic number search")?;
        let v = self.state.pick().expect("uncolored vertex remains");
        for c in 0..=used {
            if self.best.count == self.lower {
                break;
            }
            if c < used && self.state.neighbor_colors[v][c] > 0 {
                continue;
            }
            self.state.assign(v, c);
            self.run(colored + 1, used.max(c + 1))?;
            self.state.unassign(v, c);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exhaustive(g: &Graph) -> usize {
        let n = g.vertex_count();
        (1..=n)
            .find(|&k| {
                let total = (k as u64).pow(n as u32);
                (0..total).any(|mut code| {
                    let colors: Vec<usize> = (0..n)
                        .map(|_| {
                            let c = (code % k as u64) as usize;
                            code /= k as u64;
                            c
                        })
                        .collect();
                    g.is_proper_coloring(&colors)
                })
            })
            .unwrap_or(0)
    }

    #[test]
    fn small_examples() {
        assert_eq!(chromatic_number(&Graph::empty(4)).unwrap().count, 1);
        assert_eq!(chromatic_number(&Graph::complete(4)).unwrap().count, 4);
        let c5 = chromatic_number(&Graph::cycle(5).unwrap()).unwrap();
        assert_eq!(c5.count, 3);
        assert!(Graph::cycle(5).unwrap().is_proper_coloring(&c5.colors));
        assert_eq!(chromatic_number(&Graph::empty(0)).unwrap().count, 0);
    }

    #[test]
    fn matches_exhaustive_search_on_all_graphs_with_five_vertices() {
        for mask in 0..1024 {
            let g = Graph::from_edge_mask(5, mask).unwrap();
            let col = chromatic_number(&g).unwrap();
            assert_eq!(col.count, exhaustive(&g), "mask {mask}");
            assert!(g.is_proper_coloring(&col.colors));
            assert_eq!(col.colors.iter().max().map_or(0, |c| c + 1), col.count);
            assert!(col.count >= greedy_clique(&g).len());
        }
    }

    #[test]
    fn budget_is_enforced() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = Graph::random(40, 0.5, &mut rng);
        let err = chromatic_number_budgeted(&g, &mut Budget::new(10)).unwrap_err();
        assert!(err.is_budget());
    }
}
