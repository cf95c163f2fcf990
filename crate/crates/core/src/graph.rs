//! Undirected graphs, partial orientations and vertex bitsets.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Subset of the vertices `0..n` of a fixed graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet { bits: FixedBitSet::with_capacity(n) }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, vertices: I) -> Self {
        let mut s = VertexSet::new(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    /// Size of the universe the set lives in.
    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, v: usize) {
        self.bits.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        !self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn intersection_count(&self, other: &VertexSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }
}

/// Lexicographic order on the sorted element lists.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Simple undirected graph on vertices `0..n` with optional labels.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
    labels: Vec<Option<String>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![VertexSet::new(n); n],
            labels: vec![None; n],
            edge_count: 0,
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inserts `{u, v}`; a repeated edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u >= n {
            return Err(Error::VertexOutOfRange(u, n));
        }
        if v >= n {
            return Err(Error::VertexOutOfRange(v, n));
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !self.adj[u].contains(v) {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
            self.edge_count += 1;
        }
        Ok(())
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) {
        self.labels[v] = Some(label.into());
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    /// Label if present, otherwise the index.
    pub fn display_label(&self, v: usize) -> String {
        self.labels[v].clone().unwrap_or_else(|| v.to_string())
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.as_deref() == Some(label))
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v).expect("valid indices");
                }
            }
        }
        g.labels = self.labels.clone();
        g
    }

    /// Subgraph induced by `keep`, with the old index of each new vertex.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let old: Vec<usize> = keep.iter().collect();
        let mut new_index = vec![usize::MAX; self.n()];
        for (i, &v) in old.iter().enumerate() {
            new_index[v] = i;
        }
        let mut g = Graph::empty(old.len());
        for (i, &v) in old.iter().enumerate() {
            for w in self.adj[v].iter() {
                let j = new_index[w];
                if j != usize::MAX && j > i {
                    g.add_edge(i, j).expect("valid indices");
                }
            }
            g.labels[i] = self.labels[v].clone();
        }
        (g, old)
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v).expect("valid indices");
            }
        }
        g
    }

    /// Outer 5-cycle 0..5, inner pentagram 5..10, spokes i -- i+5.
    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        Graph::from_edges(10, edges).expect("valid petersen")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

/// Which out-neighborhood to report for a vertex of a partial orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutMode {
    /// Requires every incident edge to be forced.
    Exact,
    /// Union of the out-neighborhoods over all completions of free edges.
    Pessimistic,
}

/// Digraph over an undirected base graph in which each edge is free, forced
/// one way, or forced both ways (a bidirected pair).
#[derive(Clone, PartialEq, Eq)]
pub struct PartialOrientation {
    base: Graph,
    out_forced: Vec<VertexSet>,
    in_forced: Vec<VertexSet>,
}

impl PartialOrientation {
    /// All edges free.
    pub fn unoriented(base: Graph) -> Self {
        let n = base.n();
        PartialOrientation {
            base,
            out_forced: vec![VertexSet::new(n); n],
            in_forced: vec![VertexSet::new(n); n],
        }
    }

    /// Digraph given by its arcs; the base graph is the underlying graph.
    pub fn from_arcs<I: IntoIterator<Item = (usize, usize)>>(n: usize, arcs: I) -> Result<Self> {
        let arcs: Vec<(usize, usize)> = arcs.into_iter().collect();
        let base = Graph::from_edges(n, arcs.iter().copied())?;
        let mut d = PartialOrientation::unoriented(base);
        for (u, v) in arcs {
            d.force(u, v)?;
        }
        Ok(d)
    }

    /// Every edge replaced by both of its arcs.
    pub fn bidirected(g: &Graph) -> Self {
        let mut d = PartialOrientation::unoriented(g.clone());
        for (u, v) in g.edges() {
            d.force(u, v).expect("edge of base");
            d.force(v, u).expect("edge of base");
        }
        d
    }

    /// Every edge oriented from its lower to its higher index.
    pub fn lexicographic(g: &Graph) -> Self {
        let mut d = PartialOrientation::unoriented(g.clone());
        d.complete_lexicographic();
        d
    }

    /// Forces the arc `tail -> head`. Forcing the reverse of an existing arc
    /// makes the pair bidirected.
    pub fn force(&mut self, tail: usize, head: usize) -> Result<()> {
        let n = self.base.n();
        if tail >= n || head >= n {
            return Err(Error::VertexOutOfRange(tail.max(head), n));
        }
        if !self.base.has_edge(tail, head) {
            return Err(Error::ArcNotOnEdge(tail, head));
        }
        self.out_forced[tail].insert(head);
        self.in_forced[head].insert(tail);
        Ok(())
    }

    /// Forces every free edge from lower to higher index.
    pub fn complete_lexicographic(&mut self) {
        for (u, v) in self.free_edges() {
            self.force(u, v).expect("edge of base");
        }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn has_arc(&self, tail: usize, head: usize) -> bool {
        self.out_forced[tail].contains(head)
    }

    pub fn is_free(&self, u: usize, v: usize) -> bool {
        self.base.has_edge(u, v) && !self.has_arc(u, v) && !self.has_arc(v, u)
    }

    pub fn free_edges(&self) -> Vec<(usize, usize)> {
        self.base.edges().into_iter().filter(|&(u, v)| self.is_free(u, v)).collect()
    }

    /// Edges carrying at least one forced arc, as `(u, v)` with `u < v`.
    pub fn forced_edges(&self) -> Vec<(usize, usize)> {
        self.base.edges().into_iter().filter(|&(u, v)| !self.is_free(u, v)).collect()
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in self.out_forced[u].iter() {
                out.push((u, v));
            }
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.out_forced.iter().map(VertexSet::len).sum()
    }

    /// No free edges (bidirected pairs allowed).
    pub fn is_fully_forced(&self) -> bool {
        self.free_edges().is_empty()
    }

    /// No free edges and no bidirected pairs.
    pub fn is_orientation(&self) -> bool {
        self.base
            .edges()
            .into_iter()
            .all(|(u, v)| self.has_arc(u, v) != self.has_arc(v, u))
    }

    pub fn out_neighborhood(&self, v: usize, mode: OutMode) -> Result<VertexSet> {
        let n = self.n();
        if v >= n {
            return Err(Error::VertexOutOfRange(v, n));
        }
        match mode {
            OutMode::Exact => {
                if self.base.neighbors(v).iter().any(|u| self.is_free(u, v)) {
                    return Err(Error::FreeEdge(v));
                }
                Ok(self.out_forced[v].clone())
            }
            OutMode::Pessimistic => {
                let only_in = self.in_forced[v].difference(&self.out_forced[v]);
                Ok(self.base.neighbors(v).difference(&only_in))
            }
        }
    }

    /// Vertices `u` whose out-neighborhood contains `v` in exact mode.
    pub fn in_neighborhood(&self, v: usize) -> &VertexSet {
        &self.in_forced[v]
    }
}

impl fmt::Debug for PartialOrientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PartialOrientation(n={}, arcs={:?}, free={:?})",
            self.n(),
            self.arcs(),
            self.free_edges()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_out_of_range() {
        assert_eq!(Graph::from_edges(3, [(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(Graph::from_edges(3, [(0, 3)]), Err(Error::VertexOutOfRange(3, 3)));
    }

    #[test]
    fn adjacency_is_symmetric_and_parallel_edges_collapse() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(1, 0) && g.has_edge(0, 1));
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn directed_triangle_exact_out_neighborhood() {
        let d = PartialOrientation::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(d.out_neighborhood(0, OutMode::Exact).unwrap().to_vec(), vec![1]);
        assert!(d.is_orientation());
    }

    #[test]
    fn free_edge_is_pessimistically_outgoing() {
        let d = PartialOrientation::unoriented(Graph::complete(2));
        assert_eq!(d.out_neighborhood(0, OutMode::Pessimistic).unwrap().to_vec(), vec![1]);
        assert_eq!(d.out_neighborhood(0, OutMode::Exact), Err(Error::FreeEdge(0)));
    }

    #[test]
    fn bidirected_pair_counts_both_ways() {
        let mut d = PartialOrientation::unoriented(Graph::complete(2));
        d.force(0, 1).unwrap();
        assert_eq!(d.out_neighborhood(1, OutMode::Pessimistic).unwrap().to_vec(), Vec::<usize>::new());
        d.force(1, 0).unwrap();
        assert_eq!(d.out_neighborhood(1, OutMode::Exact).unwrap().to_vec(), vec![0]);
        assert!(d.is_fully_forced());
        assert!(!d.is_orientation());
    }

    #[test]
    fn arc_off_base_is_rejected() {
        let mut d = PartialOrientation::unoriented(Graph::path(3));
        assert_eq!(d.force(0, 2), Err(Error::ArcNotOnEdge(0, 2)));
    }

    #[test]
    fn petersen_is_cubic() {
        let g = Graph::petersen();
        assert_eq!(g.edge_count(), 15);
        assert!((0..10).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn vertex_sets_order_lexicographically() {
        let a = VertexSet::from_vertices(5, [0, 3]);
        let b = VertexSet::from_vertices(5, [0, 2, 4]);
        let c = VertexSet::from_vertices(5, [1]);
        assert!(b < a && a < c);
    }
}
