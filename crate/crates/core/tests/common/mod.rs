//! Brute-force oracles shared by the integration tests. Everything here
//! works by plain subset or assignment enumeration.

#![allow(dead_code)]

use std::collections::BTreeSet;

use locochrome::lp::{LinearProgram, Relation};
use locochrome::rational::{int, Rational};
use locochrome::{Graph, OutMode, PartialOrientation, VertexSet};
use num_traits::{One, Zero};

pub fn graph_from_mask(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits.get(i).copied().unwrap_or(false) {
                edges.push((u, v));
            }
            i += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn subset_is_independent(g: &Graph, mask: u32) -> bool {
    g.edges().iter().all(|&(u, v)| mask >> u & 1 == 0 || mask >> v & 1 == 0)
}

/// Every independent set, as bitmasks, including the empty set.
pub fn independent_masks(g: &Graph) -> Vec<u32> {
    (0u32..1 << g.n()).filter(|&m| subset_is_independent(g, m)).collect()
}

pub fn mask_to_set(n: usize, mask: u32) -> VertexSet {
    VertexSet::from_vertices(n, (0..n).filter(|&v| mask >> v & 1 == 1))
}

pub fn alpha(g: &Graph) -> usize {
    independent_masks(g).into_iter().map(u32::count_ones).max().unwrap_or(0) as usize
}

pub fn max_clique(g: &Graph) -> usize {
    let n = g.n();
    (0u32..1 << n)
        .filter(|&m| (0..n).all(|u| (u + 1..n).all(|v| m >> u & 1 == 0 || m >> v & 1 == 0 || g.has_edge(u, v))))
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

/// Calls `f` with every assignment of colors `0..n` to the vertices.
fn each_assignment(n: usize, mut f: impl FnMut(&[u32])) {
    let mut c = vec![0u32; n];
    loop {
        f(&c);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            c[i] += 1;
            if (c[i] as usize) < n {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

fn proper(g: &Graph, c: &[u32]) -> bool {
    g.edges().iter().all(|&(u, v)| c[u] != c[v])
}

fn min_over_proper(n: usize, g: &Graph, scopes: &[VertexSet]) -> usize {
    if n == 0 {
        return 0;
    }
    let mut best = usize::MAX;
    each_assignment(n, |c| {
        if proper(g, c) {
            let worst = scopes
                .iter()
                .map(|s| s.iter().map(|v| c[v]).collect::<BTreeSet<_>>().len())
                .max()
                .unwrap_or(0);
            best = best.min(worst);
        }
    });
    best
}

pub fn psi(g: &Graph) -> usize {
    let scopes: Vec<VertexSet> = (0..g.n()).map(|v| g.closed_neighborhood(v)).collect();
    min_over_proper(g.n(), g, &scopes)
}

pub fn psi_d(d: &PartialOrientation) -> usize {
    let scopes: Vec<VertexSet> = (0..d.n())
        .map(|v| {
            let mut s = d.out_neighborhood(v, OutMode::Exact).unwrap();
            s.insert(v);
            s
        })
        .collect();
    min_over_proper(d.n(), d.base(), &scopes)
}

pub fn chi(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let mut best = usize::MAX;
    each_assignment(n, |c| {
        if proper(g, c) {
            best = best.min(c.iter().collect::<BTreeSet<_>>().len());
        }
    });
    best
}

/// Fractional chromatic LP over every nonempty independent set, found by
/// subset enumeration.
pub fn chi_star_all_sets(g: &Graph) -> Rational {
    let sets: Vec<u32> = independent_masks(g).into_iter().filter(|&m| m != 0).collect();
    let mut lp = LinearProgram::new(sets.len());
    lp.objective = vec![Rational::one(); sets.len()];
    for v in 0..g.n() {
        let coeffs = sets
            .iter()
            .enumerate()
            .filter(|(_, &m)| m >> v & 1 == 1)
            .map(|(j, _)| (j, Rational::one()))
            .collect();
        lp.add_constraint(coeffs, Relation::Ge, Rational::one());
    }
    lp.solve().unwrap().value
}

/// Optimality certificate check: `weights` covers every vertex, `clique`
/// weighs at most 1 on every independent set, and the totals agree.
pub fn certifies_chi_star(g: &Graph, weights: &[(VertexSet, Rational)], clique: &[Rational], value: &Rational) -> bool {
    let n = g.n();
    let primal_total: Rational = weights.iter().map(|(_, w)| w.clone()).sum();
    let covered = (0..n).all(|v| weights.iter().filter(|(s, _)| s.contains(v)).map(|(_, w)| w.clone()).sum::<Rational>() >= int(1));
    let supports_independent = weights.iter().all(|(s, w)| {
        let mask = s.iter().fold(0u32, |m, v| m | 1 << v);
        *w >= Rational::zero() && subset_is_independent(g, mask)
    });
    let dual_total: Rational = clique.iter().sum();
    let dual_feasible = clique.iter().all(|t| *t >= Rational::zero())
        && independent_masks(g)
            .into_iter()
            .all(|m| (0..n).filter(|&v| m >> v & 1 == 1).map(|v| clique[v].clone()).sum::<Rational>() <= int(1));
    covered && supports_independent && dual_feasible && primal_total == *value && dual_total == *value
}

/// ψ_d* LP over every nonempty independent set: minimise `t` subject to
/// covering every vertex and `t >= 1 + weight of sets meeting N+(v)`.
pub fn psi_d_star_all_sets(d: &PartialOrientation) -> Rational {
    let g = d.base();
    let sets: Vec<u32> = independent_masks(g).into_iter().filter(|&m| m != 0).collect();
    let mut lp = LinearProgram::new(sets.len() + 1);
    lp.objective = vec![Rational::zero(); sets.len() + 1];
    lp.objective[0] = Rational::one();
    for v in 0..g.n() {
        let coeffs = sets
            .iter()
            .enumerate()
            .filter(|(_, &m)| m >> v & 1 == 1)
            .map(|(j, _)| (j + 1, Rational::one()))
            .collect();
        lp.add_constraint(coeffs, Relation::Ge, Rational::one());
    }
    for v in 0..g.n() {
        let out = d.out_neighborhood(v, OutMode::Exact).unwrap().iter().fold(0u32, |m, u| m | 1 << u);
        let mut coeffs = vec![(0, Rational::one())];
        coeffs.extend(sets.iter().enumerate().filter(|(_, &m)| m & out != 0).map(|(j, _)| (j + 1, -Rational::one())));
        lp.add_constraint(coeffs, Relation::Ge, Rational::one());
    }
    lp.solve().unwrap().value
}

/// `{v}` plus every neighbor `u` that some completion of `d` makes an
/// out-neighbor of `v`.
pub fn pessimistic_scope(d: &PartialOrientation, v: usize) -> Vec<usize> {
    let mut s = vec![v];
    s.extend(d.base().neighbors(v).iter().filter(|&u| d.has_arc(v, u) || d.is_free(v, u)));
    s
}

pub fn colors_on(colors: &[u32], scope: &[usize]) -> usize {
    scope.iter().map(|&v| colors[v]).collect::<BTreeSet<_>>().len()
}

/// Local `k`-colorings of `g` up to renaming colors, as restricted growth
/// strings in vertex order (first occurrences of colors increase).
pub fn local_coloring_classes(g: &Graph, k: usize) -> Vec<Vec<u32>> {
    let n = g.n();
    let closed: Vec<Vec<usize>> = (0..n).map(|v| g.closed_neighborhood(v).to_vec()).collect();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (w, s) in closed.iter().enumerate() {
        for &v in s {
            containing[v].push(w);
        }
    }
    let mut out = Vec::new();
    let mut colors = vec![u32::MAX; n];
    #[allow(clippy::too_many_arguments)]
    fn go(
        v: usize,
        used: u32,
        k: usize,
        g: &Graph,
        closed: &[Vec<usize>],
        containing: &[Vec<usize>],
        colors: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if v == colors.len() {
            out.push(colors.clone());
            return;
        }
        for c in 0..=used {
            if g.neighbors(v).iter().any(|u| colors[u] == c) {
                continue;
            }
            colors[v] = c;
            let ok = containing[v].iter().all(|&w| {
                closed[w].iter().filter(|&&u| colors[u] != u32::MAX).map(|&u| colors[u]).collect::<BTreeSet<_>>().len() <= k
            });
            if ok {
                go(v + 1, used.max(c + 1), k, g, closed, containing, colors, out);
            }
            colors[v] = u32::MAX;
        }
    }
    go(0, 0, k, g, &closed, &containing, &mut colors, &mut out);
    out
}
