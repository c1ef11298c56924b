//! Small labeled multigraphs: the pattern graphs whose densities we compute.
//!
//! Cliques, cycles (including the double edge), glued clique pairs, and the
//! graphs associated with loose hypergraph cycles. Vertices are `0..n`; edges
//! are unordered pairs with a multiplicity; a subset of vertices may be
//! marked, in which case conditional densities pin the marked vertices to
//! given blocks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledMultigraph {
    n: usize,
    /// `(u, v, multiplicity)` with `u < v`, pairs unique, multiplicity >= 1.
    edges: Vec<(usize, usize, u32)>,
    /// Ordered list of distinct marked vertex labels, possibly empty.
    marked: Vec<usize>,
}

impl LabeledMultigraph {
    /// A simple graph from an edge list. Duplicate pairs are rejected.
    pub fn new_simple(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new_multi(
            n,
            &pairs.iter().map(|&(u, v)| (u, v, 1)).collect::<Vec<_>>(),
        )
    }

    /// A multigraph from an edge list with multiplicities.
    pub fn new_multi(n: usize, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let mut map: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for &(u, v, m) in edges {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) outside vertex range 0..{n}"
                )));
            }
            if m == 0 {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) has multiplicity 0"
                )));
            }
            let key = (u.min(v), u.max(v));
            if map.insert(key, m).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate edge ({}, {})",
                    key.0, key.1
                )));
            }
        }
        Ok(LabeledMultigraph {
            n,
            edges: map.into_iter().map(|((u, v), m)| (u, v, m)).collect(),
            marked: Vec::new(),
        })
    }

    /// The complete graph on `r` vertices.
    pub fn complete(r: usize) -> Self {
        let mut edges = Vec::with_capacity(r * (r.saturating_sub(1)) / 2);
        for u in 0..r {
            for v in (u + 1)..r {
                edges.push((u, v, 1));
            }
        }
        LabeledMultigraph {
            n: r,
            edges,
            marked: Vec::new(),
        }
    }

    /// The cycle on `len` vertices; `len = 2` is the double edge.
    pub fn cycle(len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidInput(format!(
                "cycle length {len} must be at least 2"
            )));
        }
        if len == 2 {
            return Self::new_multi(2, &[(0, 1, 2)]);
        }
        let edges: Vec<(usize, usize)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Self::new_simple(len, &edges)
    }

    /// Simple union of cliques: one clique per vertex set, shared edges merged.
    ///
    /// This is the graph associated with the hypergraph whose hyperedges are
    /// the given sets (isolated vertices outside the sets are not added).
    pub fn union_of_cliques(n: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let mut pairs: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for set in sets {
            for (a, &u) in set.iter().enumerate() {
                if u >= n {
                    return Err(Error::InvalidInput(format!(
                        "vertex {u} outside range 0..{n}"
                    )));
                }
                for &v in &set[a + 1..] {
                    if u == v {
                        return Err(Error::InvalidInput(format!(
                            "repeated vertex {u} within a set"
                        )));
                    }
                    pairs.insert((u.min(v), u.max(v)), 1);
                }
            }
        }
        Ok(LabeledMultigraph {
            n,
            edges: pairs.into_iter().map(|((u, v), m)| (u, v, m)).collect(),
            marked: Vec::new(),
        })
    }

    /// The graph associated with a loose cycle of `len` cliques of order `r`:
    /// `len` r-cliques chained cyclically, consecutive cliques sharing one
    /// vertex (two vertices when `len = 2`).
    ///
    /// Shared vertices get the smallest labels, which also makes them the
    /// outermost levels of the block-assignment enumeration.
    pub fn loose_cycle_graph(len: usize, r: usize) -> Result<Self> {
        if len < 2 || r < 2 {
            return Err(Error::InvalidInput(format!(
                "loose cycle needs len >= 2 and r >= 2, got ({len}, {r})"
            )));
        }
        if len == 2 {
            return Self::glued_cliques(r, 2, false);
        }
        let n = len * (r - 1);
        let mut sets = Vec::with_capacity(len);
        for i in 0..len {
            let mut set = vec![i, (i + 1) % len];
            let base = len + i * (r - 2);
            set.extend(base..base + (r - 2));
            sets.push(set);
        }
        Self::union_of_cliques(n, &sets)
    }

    /// Two r-cliques sharing `j` vertices. With `doubled` (only valid for
    /// `j = 2`) the shared edge has multiplicity 2.
    pub fn glued_cliques(r: usize, j: usize, doubled: bool) -> Result<Self> {
        if r < 2 || j > r {
            return Err(Error::InvalidInput(format!(
                "glued cliques need 0 <= j <= r and r >= 2, got ({r}, {j})"
            )));
        }
        if doubled && j != 2 {
            return Err(Error::InvalidInput(format!(
                "doubling the shared edge requires j = 2, got j = {j}"
            )));
        }
        let n = 2 * r - j;
        let first: Vec<usize> = (0..r).collect();
        let second: Vec<usize> = (0..j).chain(r..2 * r - j).collect();
        let mut g = Self::union_of_cliques(n, &[first, second])?;
        if doubled {
            for e in &mut g.edges {
                if e.0 == 0 && e.1 == 1 {
                    e.2 = 2;
                }
            }
        }
        Ok(g)
    }

    /// Marks the given vertices, in order, replacing any existing marks.
    pub fn with_marked(mut self, marked: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; self.n];
        for &v in &marked {
            if v >= self.n {
                return Err(Error::InvalidInput(format!(
                    "marked vertex {v} outside range 0..{}",
                    self.n
                )));
            }
            if seen[v] {
                return Err(Error::InvalidInput(format!("marked vertex {v} repeated")));
            }
            seen[v] = true;
        }
        self.marked = marked;
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, u32)] {
        &self.edges
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    /// Number of distinct edges (ignoring multiplicities).
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of edge multiplicities.
    pub fn total_multiplicity(&self) -> u64 {
        self.edges.iter().map(|&(_, _, m)| m as u64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_shape() {
        let k4 = LabeledMultigraph::complete(4);
        assert_eq!(k4.n_vertices(), 4);
        assert_eq!(k4.edge_count(), 6);
    }

    #[test]
    fn cycle_two_is_double_edge() {
        let c2 = LabeledMultigraph::cycle(2).unwrap();
        assert_eq!(c2.edges(), &[(0, 1, 2)]);
    }

    #[test]
    fn loose_cycle_examples() {
        // Two triangles sharing an edge.
        let g = LabeledMultigraph::loose_cycle_graph(2, 3).unwrap();
        assert_eq!(g.n_vertices(), 4);
        assert_eq!(g.edge_count(), 5);

        // Loose cycle of edges is the ordinary cycle.
        let g = LabeledMultigraph::loose_cycle_graph(3, 2).unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.edge_count(), 3);

        let g = LabeledMultigraph::loose_cycle_graph(2, 2).unwrap();
        assert_eq!(g.n_vertices(), 2);
        assert_eq!(g.edges(), &[(0, 1, 1)]);

        let g = LabeledMultigraph::loose_cycle_graph(4, 4).unwrap();
        assert_eq!(g.n_vertices(), 12);
        assert_eq!(g.edge_count(), 4 * 6);
    }

    #[test]
    fn glued_clique_examples() {
        // Bowtie.
        let g = LabeledMultigraph::glued_cliques(3, 1, false).unwrap();
        assert_eq!(g.n_vertices(), 5);
        assert_eq!(g.edge_count(), 6);

        let g = LabeledMultigraph::glued_cliques(2, 2, true).unwrap();
        assert_eq!(g.edges(), &[(0, 1, 2)]);

        let g = LabeledMultigraph::glued_cliques(3, 2, true).unwrap();
        assert_eq!(g.n_vertices(), 4);
        assert_eq!(g.total_multiplicity(), 6);

        // Sharing all vertices collapses to a single clique.
        let g = LabeledMultigraph::glued_cliques(3, 3, false).unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.edge_count(), 3);

        assert!(LabeledMultigraph::glued_cliques(4, 3, true).is_err());
    }

    #[test]
    fn marking_validation() {
        let k3 = LabeledMultigraph::complete(3);
        assert!(k3.clone().with_marked(vec![0, 1]).is_ok());
        assert!(k3.clone().with_marked(vec![0, 0]).is_err());
        assert!(k3.with_marked(vec![7]).is_err());
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(LabeledMultigraph::new_simple(3, &[(1, 1)]).is_err());
        assert!(LabeledMultigraph::new_simple(3, &[(0, 1), (1, 0)]).is_err());
        assert!(LabeledMultigraph::new_multi(3, &[(0, 1, 0)]).is_err());
    }
}
