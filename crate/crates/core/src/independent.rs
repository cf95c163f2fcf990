//! Independent-set machinery: membership test, enumeration and exact
//! maximum (weight) independent sets.

use std::ops::Add;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Default cap on enumerated sets.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 10_000_000;

pub fn is_independent(g: &Graph, s: &VertexSet) -> bool {
    s.iter().all(|v| !g.neighbors(v).intersects(s))
}

/// `V \ N[v]` for every vertex.
fn non_neighborhoods(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    (0..n)
        .map(|v| {
            let mut s = VertexSet::full(n);
            s.difference_with(g.neighbors(v));
            s.remove(v);
            s
        })
        .collect()
}

/// Every independent set (including the empty set) or only the
/// inclusion-maximal ones, sorted lexicographically.
pub fn enumerate_independent_sets(g: &Graph, maximal_only: bool, limit: usize) -> Result<Vec<VertexSet>> {
    let nn = non_neighborhoods(g);
    let mut out = Vec::new();
    let n = g.n();
    if maximal_only {
        let mut r = VertexSet::new(n);
        bron_kerbosch(&nn, &mut r, VertexSet::full(n), VertexSet::new(n), &mut out, limit)?;
    } else {
        let mut r = VertexSet::new(n);
        all_sets(&nn, &mut r, &VertexSet::full(n), 0, &mut out, limit)?;
    }
    out.sort();
    Ok(out)
}

/// Maximal independent sets of `g` that contain `v`.
pub fn maximal_independent_sets_containing(g: &Graph, v: usize, limit: usize) -> Result<Vec<VertexSet>> {
    let nn = non_neighborhoods(g);
    let n = g.n();
    let mut r = VertexSet::from_vertices(n, [v]);
    let mut out = Vec::new();
    bron_kerbosch(&nn, &mut r, nn[v].clone(), VertexSet::new(n), &mut out, limit)?;
    out.sort();
    Ok(out)
}

// Cliques of the complement, with Tomita pivoting.
fn bron_kerbosch(
    nn: &[VertexSet],
    r: &mut VertexSet,
    p: VertexSet,
    mut x: VertexSet,
    out: &mut Vec<VertexSet>,
    limit: usize,
) -> Result<()> {
    if p.is_empty() {
        if x.is_empty() {
            if out.len() >= limit {
                return Err(Error::LimitExceeded(limit));
            }
            out.push(r.clone());
        }
        return Ok(());
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| (p.intersection_count(&nn[u]), std::cmp::Reverse(u)))
        .expect("p is nonempty");
    let mut p = p;
    let branch: Vec<usize> = p.difference(&nn[pivot]).to_vec();
    for v in branch {
        r.insert(v);
        bron_kerbosch(nn, r, p.intersection(&nn[v]), x.intersection(&nn[v]), out, limit)?;
        r.remove(v);
        p.remove(v);
        x.insert(v);
    }
    Ok(())
}

fn all_sets(
    nn: &[VertexSet],
    r: &mut VertexSet,
    candidates: &VertexSet,
    from: usize,
    out: &mut Vec<VertexSet>,
    limit: usize,
) -> Result<()> {
    if out.len() >= limit {
        return Err(Error::LimitExceeded(limit));
    }
    out.push(r.clone());
    for v in candidates.iter().filter(|&v| v >= from) {
        r.insert(v);
        let next = candidates.intersection(&nn[v]);
        all_sets(nn, r, &next, v + 1, out, limit)?;
        r.remove(v);
    }
    Ok(())
}

/// Independence number with a witness, by branch and bound.
pub fn max_independent_set(g: &Graph) -> (usize, VertexSet) {
    let n = g.n();
    let nn = non_neighborhoods(g);
    let mut best = VertexSet::new(n);
    let mut current = VertexSet::new(n);
    mis_branch(g, &nn, &mut current, VertexSet::full(n), &mut best);
    (best.len(), best)
}

fn mis_branch(g: &Graph, nn: &[VertexSet], current: &mut VertexSet, mut p: VertexSet, best: &mut VertexSet) {
    // Isolated candidates can always be taken.
    let isolated: Vec<usize> = p.iter().filter(|&v| !g.neighbors(v).intersects(&p)).collect();
    for &v in &isolated {
        current.insert(v);
        p.remove(v);
    }
    if current.len() + p.len() > best.len() {
        if p.is_empty() {
            *best = current.clone();
        } else if current.len() + greedy_clique_cover_bound(g, &p) > best.len() {
            let v = p
                .iter()
                .max_by_key(|&v| (g.neighbors(v).intersection_count(&p), std::cmp::Reverse(v)))
                .expect("p is nonempty");
            current.insert(v);
            mis_branch(g, nn, current, p.intersection(&nn[v]), best);
            current.remove(v);
            p.remove(v);
            mis_branch(g, nn, current, p, best);
        }
    }
    for v in isolated {
        current.remove(v);
    }
}

// Number of cliques in a greedy clique cover of `p`; bounds α(G[p]).
fn greedy_clique_cover_bound(g: &Graph, p: &VertexSet) -> usize {
    let mut remaining = p.clone();
    let mut cliques = 0;
    while let Some(v) = remaining.first() {
        let mut clique_cands = g.neighbors(v).intersection(&remaining);
        remaining.remove(v);
        while let Some(u) = clique_cands.first() {
            remaining.remove(u);
            clique_cands.intersect_with(g.neighbors(u));
        }
        cliques += 1;
    }
    cliques
}

/// Maximum total weight of an independent set, over vertices with positive
/// weight. Deterministic for fixed weights.
pub fn max_weight_independent_set<W>(g: &Graph, weights: &[W]) -> (W, VertexSet)
where
    W: Clone + Ord + Zero + for<'a> Add<&'a W, Output = W>,
{
    let n = g.n();
    let nn = non_neighborhoods(g);
    let zero = W::zero();
    let mut order: Vec<usize> = (0..n).filter(|&v| weights[v] > zero).collect();
    order.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
    let cand = VertexSet::from_vertices(n, order.iter().copied());
    let mut search = WeightSearch {
        nn: &nn,
        weights,
        order: &order,
        best_value: W::zero(),
        best: VertexSet::new(n),
    };
    let mut current = VertexSet::new(n);
    search.branch(&mut current, W::zero(), cand, 0);
    (search.best_value, search.best)
}

struct WeightSearch<'a, W> {
    nn: &'a [VertexSet],
    weights: &'a [W],
    order: &'a [usize],
    best_value: W,
    best: VertexSet,
}

impl<W> WeightSearch<'_, W>
where
    W: Clone + Ord + Zero + for<'a> Add<&'a W, Output = W>,
{
    fn branch(&mut self, current: &mut VertexSet, value: W, cand: VertexSet, pos: usize) {
        let mut bound = value.clone();
        for &v in &self.order[pos..] {
            if cand.contains(v) {
                bound = bound + &self.weights[v];
            }
        }
        if bound <= self.best_value {
            return;
        }
        if value > self.best_value {
            self.best_value = value.clone();
            self.best = current.clone();
        }
        let Some(i) = (pos..self.order.len()).find(|&i| cand.contains(self.order[i])) else {
            return;
        };
        let v = self.order[i];
        current.insert(v);
        let with = value.clone() + &self.weights[v];
        self.branch(current, with, cand.intersection(&self.nn[v]), i + 1);
        current.remove(v);
        let mut without = cand;
        without.remove(v);
        self.branch(current, value, without, i + 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(v: &[VertexSet]) -> Vec<Vec<usize>> {
        v.iter().map(VertexSet::to_vec).collect()
    }

    #[test]
    fn independence_examples() {
        assert!(is_independent(&Graph::cycle(5), &VertexSet::from_vertices(5, [0, 2])));
        assert!(!is_independent(&Graph::complete(3), &VertexSet::from_vertices(3, [0, 1])));
        assert!(is_independent(&Graph::complete(4), &VertexSet::new(4)));
    }

    #[test]
    fn maximal_sets_of_four_cycle() {
        let got = enumerate_independent_sets(&Graph::cycle(4), true, 100).unwrap();
        assert_eq!(sets(&got), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn all_sets_of_triangle() {
        let got = enumerate_independent_sets(&Graph::complete(3), false, 100).unwrap();
        assert_eq!(sets(&got), vec![vec![], vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn five_cycle_has_five_maximal_pairs() {
        let got = enumerate_independent_sets(&Graph::cycle(5), true, 100).unwrap();
        assert_eq!(got.len(), 5);
        assert!(got.iter().all(|s| s.len() == 2));
    }

    #[test]
    fn limit_overflow_is_reported() {
        let g = Graph::empty(10);
        assert_eq!(enumerate_independent_sets(&g, false, 100), Err(Error::LimitExceeded(100)));
    }

    #[test]
    fn maximal_sets_through_a_vertex() {
        let got = maximal_independent_sets_containing(&Graph::cycle(5), 0, 100).unwrap();
        assert_eq!(sets(&got), vec![vec![0, 2], vec![0, 3]]);
    }

    #[test]
    fn independence_numbers() {
        assert_eq!(max_independent_set(&Graph::petersen()).0, 4);
        assert_eq!(max_independent_set(&Graph::complete(6)).0, 1);
        assert_eq!(max_independent_set(&Graph::cycle(7)).0, 3);
        assert_eq!(max_independent_set(&Graph::empty(0)).0, 0);
    }

    #[test]
    fn weighted_independent_set_prefers_heavy_vertices() {
        let g = Graph::path(3);
        let (w, s) = max_weight_independent_set(&g, &[1i64, 3, 1]);
        assert_eq!((w, s.to_vec()), (3, vec![1]));
        let (w, s) = max_weight_independent_set(&g, &[2i64, 3, 2]);
        assert_eq!((w, s.to_vec()), (4, vec![0, 2]));
    }
}
