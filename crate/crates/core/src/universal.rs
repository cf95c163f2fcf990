//! Universal graphs for local colorings, the gap counterexample, and set
//! family shadows.
//!
//! Subsets of the palette `[m] = {1, ..., m}` are bitmasks with bit `i - 1`
//! standing for color `i`. Vertices are enumerated lexicographically in
//! `(center, sorted set)`, so indices are stable across runs.

use std::collections::BTreeSet;

use crate::coloring::{Coloring, MultiColoring};
use crate::error::{Error, Result};
use crate::graph::{Graph, PartialOrientation};
use crate::rational::{binomial, binomial_real, solve_binomial_real};

pub type Mask = u32;

pub const MAX_PALETTE: usize = 31;

pub fn mask_elements(mask: Mask) -> Vec<u32> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn mask_of(elements: &[u32]) -> Mask {
    elements.iter().fold(0, |acc, &e| acc | 1 << (e - 1))
}

fn fmt_set(mask: Mask) -> String {
    let items: Vec<String> = mask_elements(mask).iter().map(u32::to_string).collect();
    format!("{{{}}}", items.join(","))
}

/// `size`-subsets of `[m]` in lexicographic order of their sorted elements.
pub fn subsets_of_size(m: usize, size: usize) -> Vec<Mask> {
    fn rec(start: u32, m: u32, left: usize, acc: Mask, out: &mut Vec<Mask>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for e in start..=m {
            if (m - e + 1) as usize >= left {
                rec(e + 1, m, left - 1, acc | 1 << (e - 1), out);
            }
        }
    }
    let mut out = Vec::new();
    rec(1, m as u32, size, 0, &mut out);
    out
}

fn check_mk(m: usize, k: usize) -> Result<()> {
    if k == 0 || k > m || m > MAX_PALETTE {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= k <= m <= {MAX_PALETTE}, got m={m}, k={k}"
        )));
    }
    Ok(())
}

/// Vertices `(x, A)` of `U(m, k)`: `x ∈ [m]`, `|A| = k - 1`, `x ∉ A`.
pub fn universal_vertices(m: usize, k: usize) -> Result<Vec<(u32, Mask)>> {
    check_mk(m, k)?;
    let sets = subsets_of_size(m, k - 1);
    let mut out = Vec::new();
    for x in 1..=m as u32 {
        for &a in &sets {
            if a & 1 << (x - 1) == 0 {
                out.push((x, a));
            }
        }
    }
    Ok(out)
}

pub fn universal_label(x: u32, a: Mask) -> String {
    format!("({},{})", x, fmt_set(a))
}

fn labeled(n: usize, labels: impl Iterator<Item = String>) -> Graph {
    let mut g = Graph::empty(n);
    for (v, l) in labels.enumerate() {
        g.set_label(v, l);
    }
    g
}

/// `U(m, k)`: `(x, A) ~ (y, B)` iff `x ∈ B` and `y ∈ A`.
pub fn universal_undirected(m: usize, k: usize) -> Result<Graph> {
    let verts = universal_vertices(m, k)?;
    let mut g = labeled(verts.len(), verts.iter().map(|&(x, a)| universal_label(x, a)));
    for (i, &(x, a)) in verts.iter().enumerate() {
        for (j, &(y, b)) in verts.iter().enumerate().skip(i + 1) {
            if b & 1 << (x - 1) != 0 && a & 1 << (y - 1) != 0 {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// `U_d(m, k)`: arc `(c, H) -> (c', H')` iff `c' ∈ H`. Pairs where both
/// memberships hold become bidirected pairs.
pub fn universal_directed(m: usize, k: usize) -> Result<PartialOrientation> {
    let verts = universal_vertices(m, k)?;
    let mut arcs = Vec::new();
    for (i, &(_, h)) in verts.iter().enumerate() {
        for (j, &(c2, _)) in verts.iter().enumerate() {
            if i != j && h & 1 << (c2 - 1) != 0 {
                arcs.push((i, j));
            }
        }
    }
    let mut d = PartialOrientation::from_arcs(verts.len(), arcs)?;
    let g = labeled(verts.len(), verts.iter().map(|&(x, a)| universal_label(x, a)));
    relabel(&mut d, &g);
    Ok(d)
}

fn relabel(d: &mut PartialOrientation, labels_from: &Graph) {
    let mut base = d.base().clone();
    for v in 0..base.n() {
        if let Some(l) = labels_from.label(v) {
            base.set_label(v, l);
        }
    }
    let arcs = d.arcs();
    let mut out = PartialOrientation::unoriented(base);
    for (u, v) in arcs {
        out.force(u, v).expect("arc of the same base");
    }
    *d = out;
}

fn check_mhr(m: usize, h: usize, r: usize) -> Result<()> {
    if r == 0 || 2 * r > h || h > m || m > MAX_PALETTE {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= r <= h/2 and h <= m <= {MAX_PALETTE}, got m={m}, h={h}, r={r}"
        )));
    }
    Ok(())
}

/// Vertices `(Q, H)` of `U_d(m, h, r)`: `|Q| = r`, `|H| = h - r`, disjoint.
pub fn multi_vertices(m: usize, h: usize, r: usize) -> Result<Vec<(Mask, Mask)>> {
    check_mhr(m, h, r)?;
    let qs = subsets_of_size(m, r);
    let hs = subsets_of_size(m, h - r);
    let mut out = Vec::new();
    for &q in &qs {
        for &hh in &hs {
            if q & hh == 0 {
                out.push((q, hh));
            }
        }
    }
    Ok(out)
}

pub fn multi_label(q: Mask, h: Mask) -> String {
    format!("({},{})", fmt_set(q), fmt_set(h))
}

/// `U_d(m, h, r)`: arc `(Q, H) -> (Q', H')` iff `Q' ⊆ H`.
pub fn universal_multi(m: usize, h: usize, r: usize) -> Result<PartialOrientation> {
    let verts = multi_vertices(m, h, r)?;
    let mut arcs = Vec::new();
    for (i, &(_, hh)) in verts.iter().enumerate() {
        for (j, &(q2, _)) in verts.iter().enumerate() {
            if i != j && q2 & !hh == 0 {
                arcs.push((i, j));
            }
        }
    }
    let mut d = PartialOrientation::from_arcs(verts.len(), arcs)?;
    let g = labeled(verts.len(), verts.iter().map(|&(q, hh)| multi_label(q, hh)));
    relabel(&mut d, &g);
    Ok(d)
}

/// `(x, A) ↦ x`, colors in `1..=m`.
pub fn natural_coloring(m: usize, k: usize) -> Result<Coloring> {
    Ok(Coloring::new(universal_vertices(m, k)?.into_iter().map(|(x, _)| x).collect()))
}

/// `(Q, H) ↦ Q`, an `h`-local `r`-multi-coloring.
pub fn natural_multicoloring(m: usize, h: usize, r: usize) -> Result<MultiColoring> {
    let sets = multi_vertices(m, h, r)?.into_iter().map(|(q, _)| mask_elements(q)).collect();
    MultiColoring::new(sets, r, h, m)
}

/// `U(5, 3)` plus a triangle `x, y, z` hung off three of its vertices.
#[derive(Clone, Debug)]
pub struct GapGraph {
    pub graph: Graph,
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl GapGraph {
    /// Index of the `U(5, 3)` vertex `(center, set)`.
    pub fn universal_vertex(&self, center: u32, set: &[u32]) -> usize {
        self.graph
            .vertex_by_label(&universal_label(center, mask_of(set)))
            .expect("vertex of U(5,3)")
    }

    /// Natural coloring on `U(5, 3)` with `x, y, z` colored as given.
    pub fn coloring(&self, cx: u32, cy: u32, cz: u32) -> Coloring {
        let mut colors = natural_coloring(5, 3).expect("valid parameters").as_slice().to_vec();
        colors.extend([cx, cy, cz]);
        Coloring::new(colors)
    }

    /// The arc `x -> y` forced, every other edge free.
    pub fn orientation_x_to_y(&self) -> PartialOrientation {
        let mut d = PartialOrientation::unoriented(self.graph.clone());
        d.force(self.x, self.y).expect("edge xy");
        d
    }

    pub fn orientation_y_to_x(&self) -> PartialOrientation {
        let mut d = PartialOrientation::unoriented(self.graph.clone());
        d.force(self.y, self.x).expect("edge xy");
        d
    }

    /// `(x→y, g)` and `(y→x, g')` with `g(z) = 4`.
    pub fn certificates(&self) -> Vec<(PartialOrientation, Coloring)> {
        vec![
            (self.orientation_x_to_y(), self.coloring(1, 2, 4)),
            (self.orientation_y_to_x(), self.coloring(3, 1, 4)),
        ]
    }
}

pub fn counterexample_graph() -> GapGraph {
    let u = universal_undirected(5, 3).expect("valid parameters");
    let base = u.n();
    let mut graph = Graph::empty(base + 3);
    for v in 0..base {
        graph.set_label(v, u.label(v).expect("labeled"));
    }
    for (a, b) in u.edges() {
        graph.add_edge(a, b).expect("valid edge");
    }
    let (x, y, z) = (base, base + 1, base + 2);
    graph.set_label(x, "x");
    graph.set_label(y, "y");
    graph.set_label(z, "z");
    let at = |center: u32, set: &[u32]| u.vertex_by_label(&universal_label(center, mask_of(set))).expect("vertex");
    for (p, q) in [
        (x, y),
        (x, z),
        (y, z),
        (x, at(2, &[1, 3])),
        (y, at(3, &[1, 2])),
        (z, at(1, &[4, 5])),
    ] {
        graph.add_edge(p, q).expect("valid edge");
    }
    GapGraph { graph, x, y, z }
}

/// Family of equal-size subsets of `[m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    pub ground: usize,
    pub member_size: usize,
    members: BTreeSet<Mask>,
}

impl SetFamily {
    pub fn new(ground: usize, member_size: usize, members: impl IntoIterator<Item = Mask>) -> Result<Self> {
        if ground > MAX_PALETTE {
            return Err(Error::InvalidParameters(format!("ground set larger than {MAX_PALETTE}")));
        }
        let members: BTreeSet<Mask> = members.into_iter().collect();
        for &s in &members {
            if s.count_ones() as usize != member_size || (s >> ground) != 0 {
                return Err(Error::InvalidParameters(format!(
                    "member {} is not a {member_size}-subset of [{ground}]",
                    fmt_set(s)
                )));
            }
        }
        Ok(SetFamily { ground, member_size, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = Mask> + '_ {
        self.members.iter().copied()
    }

    pub fn is_subfamily(&self, other: &SetFamily) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// All `r`-subsets of members of `f`.
pub fn shadow(f: &SetFamily, r: usize) -> Result<SetFamily> {
    if r > f.member_size {
        return Err(Error::InvalidParameters(format!(
            "shadow size {r} exceeds member size {}",
            f.member_size
        )));
    }
    let mut out = BTreeSet::new();
    for s in f.members() {
        let elems = mask_elements(s);
        for sub in subsets_of_size(elems.len(), r) {
            out.insert(
                mask_elements(sub)
                    .iter()
                    .fold(0, |acc, &i| acc | 1 << (elems[i as usize - 1] - 1)),
            );
        }
    }
    SetFamily::new(f.ground, r, out)
}

/// Outcome of the Kruskal–Katona lower bound on one family.
#[derive(Clone, Debug)]
pub struct ShadowBound {
    /// Real `l >= member_size - 1` with `C(l, member_size) = |f|`.
    pub l: f64,
    pub shadow_size: usize,
    pub lower_bound: f64,
}

impl ShadowBound {
    pub fn holds(&self, tolerance: f64) -> bool {
        self.shadow_size as f64 >= self.lower_bound - tolerance
    }
}

/// `|shadow(f, r)|` against `C(l, r)` where `C(l, |member|) = |f|`.
pub fn kruskal_katona_check(f: &SetFamily, r: usize) -> Result<ShadowBound> {
    let s = shadow(f, r)?;
    let l = solve_binomial_real(f.len() as f64, f.member_size as u32, 1e-9);
    Ok(ShadowBound {
        l,
        shadow_size: s.len(),
        lower_bound: binomial_real(l, r as u32),
    })
}

/// Number of vertices of `U(m, k)`: `m · C(m-1, k-1)`.
pub fn universal_vertex_count(m: usize, k: usize) -> u64 {
    m as u64 * binomial(m as u64 - 1, k as u64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::OutMode;

    fn idx(g: &Graph, x: u32, set: &[u32]) -> usize {
        g.vertex_by_label(&universal_label(x, mask_of(set))).unwrap()
    }

    #[test]
    fn u53_adjacency_examples() {
        let g = universal_undirected(5, 3).unwrap();
        assert_eq!(g.n(), 30);
        assert!(g.has_edge(idx(&g, 1, &[2, 3]), idx(&g, 2, &[1, 4])));
        assert!(!g.has_edge(idx(&g, 1, &[2, 3]), idx(&g, 2, &[3, 4])));
        assert!((0..30).all(|v| g.degree(v) == 6));
    }

    #[test]
    fn u43_has_twelve_vertices() {
        assert_eq!(universal_undirected(4, 3).unwrap().n(), 12);
        assert_eq!(universal_vertex_count(4, 3), 12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(universal_undirected(3, 4).is_err());
        assert!(universal_directed(3, 0).is_err());
        assert!(universal_multi(5, 4, 3).is_err());
        assert!(universal_multi(3, 4, 2).is_err());
    }

    #[test]
    fn ud53_arcs_and_complete_subgraph() {
        let d = universal_directed(5, 3).unwrap();
        assert_eq!(d.n(), 30);
        let g = d.base();
        let a = idx(g, 1, &[2, 3]);
        let b = idx(g, 2, &[3, 4]);
        assert!(d.has_arc(a, b) && !d.has_arc(b, a));
        let tri = [idx(g, 1, &[2, 3]), idx(g, 2, &[1, 3]), idx(g, 3, &[1, 2])];
        for &p in &tri {
            for &q in &tri {
                assert_eq!(d.has_arc(p, q), p != q);
            }
        }
        assert!(d.is_fully_forced());
    }

    #[test]
    fn bidirected_pairs_form_undirected_universal() {
        for (m, k) in [(4, 3), (5, 3), (5, 2)] {
            let d = universal_directed(m, k).unwrap();
            let g = universal_undirected(m, k).unwrap();
            let both: Vec<(usize, usize)> = d
                .base()
                .edges()
                .into_iter()
                .filter(|&(u, v)| d.has_arc(u, v) && d.has_arc(v, u))
                .collect();
            assert_eq!(both, g.edges());
        }
    }

    #[test]
    fn multi_with_r1_matches_directed() {
        let d1 = universal_directed(5, 3).unwrap();
        let d2 = universal_multi(5, 3, 1).unwrap();
        assert_eq!(d1.arcs(), d2.arcs());
    }

    #[test]
    fn udm542_counts_and_arc() {
        let d = universal_multi(5, 4, 2).unwrap();
        assert_eq!(d.n(), 30);
        let a = d.base().vertex_by_label("({1,2},{3,4})").unwrap();
        let b = d.base().vertex_by_label("({3,4},{1,5})").unwrap();
        assert!(d.has_arc(a, b));
    }

    #[test]
    fn natural_colorings() {
        let g = universal_undirected(5, 3).unwrap();
        let c = natural_coloring(5, 3).unwrap();
        assert_eq!(c.color(idx(&g, 2, &[1, 3])), 2);
        let mc = natural_multicoloring(5, 4, 2).unwrap();
        assert_eq!((mc.r, mc.h, mc.m), (2, 4, 5));
    }

    #[test]
    fn gap_graph_structure() {
        let gap = counterexample_graph();
        let g = &gap.graph;
        assert_eq!(g.n(), 33);
        let nx: Vec<usize> = g.neighbors(gap.x).to_vec();
        assert_eq!(nx, {
            let mut v = vec![gap.y, gap.z, gap.universal_vertex(2, &[1, 3])];
            v.sort();
            v
        });
        assert_eq!(g.degree(gap.z), 3);
        assert!(g.has_edge(gap.z, gap.universal_vertex(1, &[4, 5])));
        let keep = crate::graph::VertexSet::from_vertices(33, 0..30);
        let (sub, _) = g.induced_subgraph(&keep);
        assert_eq!(sub, universal_undirected(5, 3).unwrap());
    }

    #[test]
    fn gap_graph_pessimistic_out_neighborhood_of_y() {
        let gap = counterexample_graph();
        let d = gap.orientation_x_to_y();
        let out = d.out_neighborhood(gap.y, OutMode::Pessimistic).unwrap();
        let mut want = vec![gap.z, gap.universal_vertex(3, &[1, 2])];
        want.sort();
        assert_eq!(out.to_vec(), want);
    }

    #[test]
    fn shadow_examples() {
        let f = SetFamily::new(2, 2, [mask_of(&[1, 2])]).unwrap();
        let s = shadow(&f, 1).unwrap();
        assert_eq!(s.members().collect::<Vec<_>>(), vec![mask_of(&[1]), mask_of(&[2])]);
        let all3 = SetFamily::new(4, 3, subsets_of_size(4, 3)).unwrap();
        assert_eq!(shadow(&all3, 2).unwrap().len(), 6);
        assert!(shadow(&all3, 4).is_err());
    }

    #[test]
    fn family_rejects_mixed_sizes() {
        assert!(SetFamily::new(4, 2, [mask_of(&[1, 2]), mask_of(&[1, 2, 3])]).is_err());
    }

    #[test]
    fn kruskal_katona_tight_on_complete_families() {
        let f = SetFamily::new(6, 3, subsets_of_size(5, 3)).unwrap();
        let b = kruskal_katona_check(&f, 2).unwrap();
        assert!((b.l - 5.0).abs() < 1e-6);
        assert_eq!(b.shadow_size, 10);
        assert!(b.holds(1e-6));
    }
}
