//! Exact integral parameters: local chromatic number, its directed variant,
//! chromatic number, enumeration of local colorings, and orientation
//! certificates.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::budget::Budget;
use crate::coloring::{directed_locality, Coloring};
use crate::error::{Error, Result};
use crate::graph::{Graph, OutMode, PartialOrientation, VertexSet};
use crate::search::{Flow, LocalProblem, SearchEnd};

/// Default cap on the number of coloring classes `enumerate_local_colorings`
/// will collect.
pub const DEFAULT_CLASS_CAP: usize = 1_000_000;

/// Result of an exact minimization that may run out of budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Solved {
    Exact { value: usize, witness: Coloring },
    /// Every `k < lower` was refuted; `upper` comes from a witness if one was found.
    Unknown { lower: usize, upper: Option<usize>, witness: Option<Coloring> },
}

impl Solved {
    pub fn value(&self) -> Option<usize> {
        match self {
            Solved::Exact { value, .. } => Some(*value),
            Solved::Unknown { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Coloring> {
        match self {
            Solved::Exact { witness, .. } => Some(witness),
            Solved::Unknown { witness, .. } => witness.as_ref(),
        }
    }
}

fn closed_neighborhoods(g: &Graph) -> Vec<VertexSet> {
    (0..g.n()).map(|v| g.closed_neighborhood(v)).collect()
}

fn closed_out_neighborhoods(d: &PartialOrientation, mode: OutMode) -> Result<Vec<VertexSet>> {
    (0..d.n())
        .map(|v| {
            let mut s = d.out_neighborhood(v, mode)?;
            s.insert(v);
            Ok(s)
        })
        .collect()
}

/// Smallest `k >= lower` for which the scoped problem is satisfiable.
fn deepen(
    g: &Graph,
    scopes: impl Fn() -> Vec<VertexSet>,
    lower: usize,
    colors_for: impl Fn(usize) -> usize,
    budget: &mut Budget,
) -> Solved {
    let n = g.n();
    let mut k = lower;
    loop {
        let problem = LocalProblem::new(g, scopes(), k, colors_for(k));
        match problem.find_one(budget) {
            Ok(Some(witness)) => return Solved::Exact { value: k, witness },
            Ok(None) => {
                k += 1;
                debug_assert!(k <= n.max(1), "k = n is always satisfiable");
            }
            Err(()) => {
                return Solved::Unknown { lower: k, upper: None, witness: None };
            }
        }
    }
}

fn trivial_lower(n: usize, has_edges: bool) -> usize {
    match (n, has_edges) {
        (0, _) => 0,
        (_, false) => 1,
        _ => 2,
    }
}

/// Local chromatic number: least `k` admitting a proper coloring with at most
/// `k` colors on every closed neighborhood.
pub fn local_chromatic(g: &Graph, budget: &mut Budget) -> Solved {
    let n = g.n();
    deepen(g, || closed_neighborhoods(g), trivial_lower(n, g.edge_count() > 0), |_| n, budget)
}

/// Directed local chromatic number of a fully forced digraph.
pub fn directed_local_chromatic(d: &PartialOrientation, budget: &mut Budget) -> Result<Solved> {
    let scopes = closed_out_neighborhoods(d, OutMode::Exact)?;
    let g = d.base();
    let n = g.n();
    Ok(deepen(g, || scopes.clone(), trivial_lower(n, g.edge_count() > 0), |_| n, budget))
}

/// Chromatic number.
pub fn chromatic(g: &Graph, budget: &mut Budget) -> Solved {
    deepen(g, Vec::new, trivial_lower(g.n(), g.edge_count() > 0), |k| k, budget)
}

pub fn is_local_coloring(g: &Graph, c: &Coloring, k: usize) -> bool {
    crate::coloring::locality(g, c).map(|r| r.max <= k).unwrap_or(false)
}

/// All local `k`-colorings using at most `max_colors` colors, one canonical
/// representative per color permutation class, sorted.
pub fn enumerate_local_colorings(
    g: &Graph,
    k: usize,
    max_colors: usize,
    cap: usize,
    budget: &mut Budget,
) -> Result<Vec<Coloring>> {
    if max_colors > g.n() {
        return Err(Error::InvalidParameters(format!(
            "max_colors {max_colors} exceeds the vertex count {}",
            g.n()
        )));
    }
    let problem = LocalProblem::new(g, closed_neighborhoods(g), k, max_colors);
    let mut classes = BTreeSet::new();
    let mut overflow = false;
    let end = problem.search(budget, |colors| {
        classes.insert(Coloring::new(colors.to_vec()).canonical());
        if classes.len() > cap {
            overflow = true;
            Flow::Stop
        } else {
            Flow::Continue
        }
    });
    if overflow {
        return Err(Error::LimitExceeded(cap));
    }
    if end == SearchEnd::BudgetExhausted {
        return Err(Error::BudgetExhausted);
    }
    Ok(classes.into_iter().collect())
}

/// True iff `c` is a directed local `k`-coloring of every completion of the
/// free edges of `d`.
pub fn verify_orientation_certificate(d: &PartialOrientation, c: &Coloring, k: usize) -> Result<bool> {
    Ok(directed_locality(d, c, OutMode::Pessimistic)?.max <= k)
}

#[derive(Clone, Debug)]
pub enum MaxStrategy {
    /// All `2^|E|` orientations; requires `|E| <= 20`.
    Exhaustive,
    /// `(partial orientation, coloring)` pairs whose forced patterns must
    /// cover every orientation.
    Certificates(Vec<(PartialOrientation, Coloring)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxBounds {
    pub lower: usize,
    pub upper: usize,
}

impl MaxBounds {
    pub fn exact(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

pub const EXHAUSTIVE_EDGE_LIMIT: usize = 20;

/// Bounds on the maximum of the directed local chromatic number over all
/// orientations of `g`.
pub fn directed_local_chromatic_max(g: &Graph, strategy: &MaxStrategy, budget: &mut Budget) -> Result<MaxBounds> {
    match strategy {
        MaxStrategy::Exhaustive => {
            let edges = g.edges();
            if edges.len() > EXHAUSTIVE_EDGE_LIMIT {
                return Err(Error::InvalidParameters(format!(
                    "exhaustive strategy needs at most {EXHAUSTIVE_EDGE_LIMIT} edges, got {}",
                    edges.len()
                )));
            }
            let mut best = trivial_lower(g.n(), !edges.is_empty());
            for mask in 0u32..(1u32 << edges.len()) {
                let d = orientation_from_mask(g, &edges, mask);
                match directed_local_chromatic(&d, budget)? {
                    Solved::Exact { value, .. } => best = best.max(value),
                    Solved::Unknown { .. } => return Err(Error::BudgetExhausted),
                }
            }
            Ok(MaxBounds { lower: best, upper: best })
        }
        MaxStrategy::Certificates(certs) => {
            if certs.is_empty() {
                return Err(Error::CoverGap("no certificates given".into()));
            }
            for (d, _) in certs {
                if d.base() != g {
                    return Err(Error::InvalidParameters("certificate is over a different graph".into()));
                }
            }
            check_cover(certs.iter().map(|(d, _)| d))?;
            let mut upper = 0;
            for (d, c) in certs {
                upper = upper.max(directed_locality(d, c, OutMode::Pessimistic)?.max);
            }
            let lex = PartialOrientation::lexicographic(g);
            let lower = match directed_local_chromatic(&lex, budget)? {
                Solved::Exact { value, .. } => value,
                Solved::Unknown { lower, .. } => lower,
            };
            Ok(MaxBounds { lower, upper })
        }
    }
}

/// Orientation in which edge `i` points from its lower endpoint iff bit `i`
/// of `mask` is clear.
pub fn orientation_from_mask(g: &Graph, edges: &[(usize, usize)], mask: u32) -> PartialOrientation {
    let mut d = PartialOrientation::unoriented(g.clone());
    for (i, &(u, v)) in edges.iter().enumerate() {
        if mask >> i & 1 == 0 {
            d.force(u, v).expect("edge of g");
        } else {
            d.force(v, u).expect("edge of g");
        }
    }
    d
}

type Pattern = BTreeMap<(usize, usize), bool>;

// Edge (u < v) -> true when forced u -> v. Bidirected pairs constrain nothing.
fn pattern_of(d: &PartialOrientation) -> Pattern {
    d.forced_edges()
        .into_iter()
        .filter_map(|(u, v)| match (d.has_arc(u, v), d.has_arc(v, u)) {
            (true, false) => Some(((u, v), true)),
            (false, true) => Some(((u, v), false)),
            _ => None,
        })
        .collect()
}

/// Checks that every orientation agrees with the forced arcs of at least one
/// of the given partial orientations.
pub fn check_cover<'a>(parts: impl Iterator<Item = &'a PartialOrientation>) -> Result<()> {
    let patterns: Vec<Pattern> = parts.map(pattern_of).collect();
    let all: Vec<usize> = (0..patterns.len()).collect();
    match cover_gap(&patterns, &all, &mut Pattern::new()) {
        None => Ok(()),
        Some(gap) => {
            let desc: Vec<String> = gap
                .iter()
                .map(|(&(u, v), &fwd)| if fwd { format!("{u}->{v}") } else { format!("{v}->{u}") })
                .collect();
            Err(Error::CoverGap(format!(
                "orientations with [{}] match no certificate",
                desc.join(", ")
            )))
        }
    }
}

fn cover_gap(patterns: &[Pattern], live: &[usize], fixed: &mut Pattern) -> Option<Pattern> {
    let consistent: Vec<usize> = live
        .iter()
        .copied()
        .filter(|&i| patterns[i].iter().all(|(e, dir)| fixed.get(e).is_none_or(|f| f == dir)))
        .collect();
    if consistent.is_empty() {
        return Some(fixed.clone());
    }
    if consistent
        .iter()
        .any(|&i| patterns[i].keys().all(|e| fixed.contains_key(e)))
    {
        return None;
    }
    let edge = *patterns[consistent[0]]
        .keys()
        .find(|e| !fixed.contains_key(e))
        .expect("some constraint is unfixed");
    for dir in [true, false] {
        fixed.insert(edge, dir);
        let gap = cover_gap(patterns, &consistent, fixed);
        fixed.remove(&edge);
        if gap.is_some() {
            return gap;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_local_chromatic(g: &Graph) -> usize {
        // All colorings with colors < n, by odometer.
        let n = g.n();
        let mut best = n;
        let mut colors = vec![0u32; n];
        loop {
            let c = Coloring::new(colors.clone());
            if let Ok(r) = crate::coloring::locality(g, &c) {
                best = best.min(r.max);
            }
            let mut i = 0;
            while i < n {
                colors[i] += 1;
                if (colors[i] as usize) < n {
                    break;
                }
                colors[i] = 0;
                i += 1;
            }
            if i == n {
                return best;
            }
        }
    }

    #[test]
    fn complete_graphs() {
        for n in 1..=5 {
            let g = Graph::complete(n);
            assert_eq!(local_chromatic(&g, &mut Budget::unlimited()).value(), Some(n));
            assert_eq!(chromatic(&g, &mut Budget::unlimited()).value(), Some(n));
            let d = PartialOrientation::bidirected(&g);
            assert_eq!(directed_local_chromatic(&d, &mut Budget::unlimited()).unwrap().value(), Some(n));
        }
    }

    #[test]
    fn small_graphs_match_brute_force() {
        let graphs = [Graph::cycle(5), Graph::cycle(6), Graph::path(4), Graph::petersen().induced_subgraph(&VertexSet::from_vertices(10, 0..7)).0];
        for g in graphs {
            let got = local_chromatic(&g, &mut Budget::unlimited());
            assert_eq!(got.value(), Some(brute_force_local_chromatic(&g)), "{g:?}");
            assert!(is_local_coloring(&g, got.witness().unwrap(), got.value().unwrap()));
        }
    }

    #[test]
    fn directed_triangle() {
        let d = PartialOrientation::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(directed_local_chromatic(&d, &mut Budget::unlimited()).unwrap().value(), Some(2));
    }

    #[test]
    fn directed_needs_full_orientation() {
        let d = PartialOrientation::unoriented(Graph::complete(2));
        assert_eq!(directed_local_chromatic(&d, &mut Budget::unlimited()), Err(Error::FreeEdge(0)));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let g = Graph::petersen();
        match local_chromatic(&g, &mut Budget::nodes(3)) {
            Solved::Unknown { lower, .. } => assert_eq!(lower, 2),
            other => panic!("expected unknown, got {other:?}"),
        }
    }

    #[test]
    fn five_cycle_chromatic() {
        assert_eq!(chromatic(&Graph::cycle(5), &mut Budget::unlimited()).value(), Some(3));
    }

    #[test]
    fn triangle_has_one_local_class() {
        let got = enumerate_local_colorings(&Graph::complete(3), 3, 3, 10, &mut Budget::unlimited()).unwrap();
        assert_eq!(got, vec![Coloring::new(vec![0, 1, 2])]);
    }

    #[test]
    fn class_cap_overflows() {
        let got = enumerate_local_colorings(&Graph::empty(4), 4, 4, 3, &mut Budget::unlimited());
        assert_eq!(got, Err(Error::LimitExceeded(3)));
    }

    #[test]
    fn single_edge_max_is_two() {
        let b = directed_local_chromatic_max(&Graph::complete(2), &MaxStrategy::Exhaustive, &mut Budget::unlimited()).unwrap();
        assert_eq!(b.exact(), Some(2));
    }

    #[test]
    fn five_cycle_max_is_three() {
        let b = directed_local_chromatic_max(&Graph::cycle(5), &MaxStrategy::Exhaustive, &mut Budget::unlimited()).unwrap();
        assert_eq!(b.exact(), Some(3));
    }

    #[test]
    fn cover_gap_is_reported() {
        let g = Graph::path(3);
        let mut d = PartialOrientation::unoriented(g.clone());
        d.force(0, 1).unwrap();
        let c = Coloring::new(vec![0, 1, 0]);
        let r = directed_local_chromatic_max(&g, &MaxStrategy::Certificates(vec![(d.clone(), c.clone())]), &mut Budget::unlimited());
        assert!(matches!(r, Err(Error::CoverGap(_))));
        let mut d2 = PartialOrientation::unoriented(g.clone());
        d2.force(1, 0).unwrap();
        let r = directed_local_chromatic_max(&g, &MaxStrategy::Certificates(vec![(d, c.clone()), (d2, c)]), &mut Budget::unlimited()).unwrap();
        assert_eq!(r.upper, 2);
        assert_eq!(r.lower, 2);
    }

    #[test]
    fn unconstrained_certificate_covers_everything() {
        let g = Graph::cycle(4);
        let d = PartialOrientation::unoriented(g.clone());
        assert!(check_cover(std::iter::once(&d)).is_ok());
    }
}
