//! Vertex colorings and locality measurements.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, OutMode, PartialOrientation, VertexSet};

/// Total map from vertices to color ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Coloring {
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(colors: Vec<u32>) -> Self {
        Coloring { colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn set(&mut self, v: usize, color: u32) {
        self.colors[v] = color;
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.colors.iter().collect::<BTreeSet<_>>().len()
    }

    /// Colors renumbered `0, 1, ...` in order of first appearance by vertex
    /// index; two colorings inducing the same partition map to the same form.
    pub fn canonical(&self) -> Coloring {
        let mut map = BTreeMap::new();
        let colors = self
            .colors
            .iter()
            .map(|c| {
                let next = map.len() as u32;
                *map.entry(*c).or_insert(next)
            })
            .collect();
        Coloring { colors }
    }

    /// Vertices of each color, keyed by color.
    pub fn classes(&self) -> BTreeMap<u32, Vec<usize>> {
        let mut out: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (v, &c) in self.colors.iter().enumerate() {
            out.entry(c).or_default().push(v);
        }
        out
    }

    fn distinct_on(&self, v: usize, others: &VertexSet) -> usize {
        let mut seen: BTreeSet<u32> = others.iter().map(|u| self.colors[u]).collect();
        seen.insert(self.colors[v]);
        seen.len()
    }
}

/// Per-vertex count of colors on closed (out-)neighborhoods.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalityReport {
    pub per_vertex: Vec<usize>,
    pub max: usize,
}

impl LocalityReport {
    fn from_counts(per_vertex: Vec<usize>) -> Self {
        let max = per_vertex.iter().copied().max().unwrap_or(0);
        LocalityReport { per_vertex, max }
    }
}

fn check_length(g: &Graph, c: &Coloring) -> Result<()> {
    if c.len() != g.n() {
        return Err(Error::ColoringLength { expected: g.n(), got: c.len() });
    }
    Ok(())
}

pub fn first_monochromatic_edge(g: &Graph, c: &Coloring) -> Option<(usize, usize)> {
    g.edges().into_iter().find(|&(u, v)| c.color(u) == c.color(v))
}

pub fn is_proper(g: &Graph, c: &Coloring) -> bool {
    c.len() == g.n() && first_monochromatic_edge(g, c).is_none()
}

fn require_proper(g: &Graph, c: &Coloring) -> Result<()> {
    check_length(g, c)?;
    match first_monochromatic_edge(g, c) {
        Some((u, v)) => Err(Error::ImproperColoring(u, v)),
        None => Ok(()),
    }
}

/// Colors seen on each closed neighborhood `{v} ∪ N(v)`.
pub fn locality(g: &Graph, c: &Coloring) -> Result<LocalityReport> {
    require_proper(g, c)?;
    let counts = (0..g.n()).map(|v| c.distinct_on(v, g.neighbors(v))).collect();
    Ok(LocalityReport::from_counts(counts))
}

/// Colors seen on each closed out-neighborhood `{v} ∪ N+(v)`.
pub fn directed_locality(d: &PartialOrientation, c: &Coloring, mode: OutMode) -> Result<LocalityReport> {
    require_proper(d.base(), c)?;
    let mut counts = Vec::with_capacity(d.n());
    for v in 0..d.n() {
        counts.push(c.distinct_on(v, &d.out_neighborhood(v, mode)?));
    }
    Ok(LocalityReport::from_counts(counts))
}

/// Assignment of an `r`-subset of the palette `1..=m` to every vertex,
/// checked against locality parameter `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiColoring {
    sets: Vec<Vec<u32>>,
    pub r: usize,
    pub h: usize,
    pub m: usize,
}

impl MultiColoring {
    /// Each set is sorted and deduplicated; all must have size `r`.
    pub fn new(sets: Vec<Vec<u32>>, r: usize, h: usize, m: usize) -> Result<Self> {
        if r == 0 || h < r {
            return Err(Error::InvalidParameters(format!("need 1 <= r <= h, got r={r}, h={h}")));
        }
        let mut out = Vec::with_capacity(sets.len());
        for (v, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            if s.len() != r {
                return Err(Error::InvalidParameters(format!(
                    "vertex {v} has {} colors, expected {r}",
                    s.len()
                )));
            }
            if s.iter().any(|&c| c == 0 || c as usize > m) {
                return Err(Error::InvalidParameters(format!("vertex {v} uses a color outside 1..={m}")));
            }
            out.push(s);
        }
        Ok(MultiColoring { sets: out, r, h, m })
    }

    /// A proper coloring with colors `1..=m` as a 1-multi-coloring.
    pub fn from_coloring(c: &Coloring, h: usize, m: usize) -> Result<Self> {
        MultiColoring::new(c.as_slice().iter().map(|&x| vec![x]).collect(), 1, h, m)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn colors(&self, v: usize) -> &[u32] {
        &self.sets[v]
    }

    /// `{v : color ∈ χ(v)}` for each palette color `1..=m`.
    pub fn classes(&self, n: usize) -> Vec<(u32, VertexSet)> {
        (1..=self.m as u32)
            .map(|c| {
                let members = (0..self.sets.len()).filter(|&v| self.sets[v].contains(&c));
                (c, VertexSet::from_vertices(n, members))
            })
            .collect()
    }

    /// Union of the colors on `vs`.
    pub fn union_on(&self, vs: &VertexSet) -> BTreeSet<u32> {
        vs.iter().flat_map(|v| self.sets[v].iter().copied()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_propriety() {
        let k3 = Graph::complete(3);
        assert!(is_proper(&k3, &Coloring::new(vec![0, 1, 2])));
        assert!(!is_proper(&k3, &Coloring::new(vec![0, 0, 1])));
        assert!(!is_proper(&k3, &Coloring::new(vec![0, 1])));
    }

    #[test]
    fn improper_coloring_rejected_by_locality() {
        let k3 = Graph::complete(3);
        assert_eq!(
            locality(&k3, &Coloring::new(vec![0, 0, 1])),
            Err(Error::ImproperColoring(0, 1))
        );
    }

    #[test]
    fn directed_triangle_sees_two_colors() {
        let d = PartialOrientation::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let r = directed_locality(&d, &Coloring::new(vec![0, 1, 2]), OutMode::Exact).unwrap();
        assert_eq!(r.per_vertex, vec![2, 2, 2]);
        assert_eq!(r.max, 2);
        let r = locality(d.base(), &Coloring::new(vec![0, 1, 2])).unwrap();
        assert_eq!(r.max, 3);
    }

    #[test]
    fn canonical_form_relabels_by_first_appearance() {
        let c = Coloring::new(vec![7, 3, 7, 9]);
        assert_eq!(c.canonical().as_slice(), &[0, 1, 0, 2]);
        assert_eq!(c.num_colors(), 3);
    }
}
