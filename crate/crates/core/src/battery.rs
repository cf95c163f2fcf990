//! Named graphs, the standard test battery, and seeded random digraphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, PartialOrientation};
use crate::universal::{counterexample_graph, universal_directed, universal_multi, universal_undirected};

fn params(name: &str, parts: &[&str], count: usize) -> Result<Vec<usize>> {
    if parts.len() != count {
        return Err(Error::InvalidParameters(format!("'{name}' expects {count} numeric parameters")));
    }
    parts
        .iter()
        .map(|p| p.parse().map_err(|_| Error::InvalidParameters(format!("bad parameter '{p}' in '{name}'"))))
        .collect()
}

/// Resolves names such as `petersen`, `gap1`, `u-5-3`, `ud-5-3`,
/// `udm-5-4-2`, `cycle-5`, `dcycle-3`, `complete-4` and `path-4`.
/// Undirected families come back with every edge free.
pub fn named_graph(name: &str) -> Result<PartialOrientation> {
    let parts: Vec<&str> = name.split('-').collect();
    let rest = &parts[1..];
    let free = |g: Graph| PartialOrientation::unoriented(g);
    match parts[0] {
        "petersen" if rest.is_empty() => Ok(free(Graph::petersen())),
        "gap1" if rest.is_empty() => Ok(free(counterexample_graph().graph)),
        "u" => {
            let p = params(name, rest, 2)?;
            Ok(free(universal_undirected(p[0], p[1])?))
        }
        "ud" => {
            let p = params(name, rest, 2)?;
            universal_directed(p[0], p[1])
        }
        "udm" => {
            let p = params(name, rest, 3)?;
            universal_multi(p[0], p[1], p[2])
        }
        "cycle" => Ok(free(Graph::cycle(params(name, rest, 1)?[0]))),
        "complete" => Ok(free(Graph::complete(params(name, rest, 1)?[0]))),
        "path" => Ok(free(Graph::path(params(name, rest, 1)?[0]))),
        "dcycle" => Ok(directed_cycle(params(name, rest, 1)?[0])),
        _ => Err(Error::InvalidParameters(format!("unknown graph '{name}'"))),
    }
}

pub fn directed_cycle(n: usize) -> PartialOrientation {
    PartialOrientation::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle arcs")
}

/// P_4, C_4..C_9, K_2..K_6, the Petersen graph and U(4,3), by name.
pub fn frakceq_battery() -> Vec<(String, Graph)> {
    let mut out = vec![("path-4".to_string(), Graph::path(4))];
    for n in 4..=9 {
        out.push((format!("cycle-{n}"), Graph::cycle(n)));
    }
    for n in 2..=6 {
        out.push((format!("complete-{n}"), Graph::complete(n)));
    }
    out.push(("petersen".into(), Graph::petersen()));
    out.push(("u-4-3".into(), universal_undirected(4, 3).expect("valid parameters")));
    out
}

/// `count` distinct vertices of `0..n` drawn with a generator keyed by
/// `(seed, stream)`, in draw order.
pub fn sample_vertices(n: usize, count: usize, seed: u64, stream: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut out = Vec::new();
    while out.len() < count.min(n) {
        let v = rng.gen_range(0..n);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Random oriented graph on `2..=max_n` vertices: each pair becomes an arc
/// with probability `density`, in a uniformly random direction. Draws are
/// repeated until at least one arc appears.
pub fn random_digraph(max_n: usize, density: f64, seed: u64, index: u64) -> PartialOrientation {
    assert!(max_n >= 2 && density > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let n = rng.gen_range(2..=max_n);
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(density) {
                    arcs.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
                }
            }
        }
        if !arcs.is_empty() {
            return PartialOrientation::from_arcs(n, arcs).expect("arcs between distinct vertices");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(named_graph("petersen").unwrap().n(), 10);
        assert_eq!(named_graph("gap1").unwrap().n(), 33);
        assert_eq!(named_graph("u-5-3").unwrap().n(), 30);
        assert_eq!(named_graph("udm-5-4-2").unwrap().n(), 30);
        assert!(named_graph("ud-5-3").unwrap().is_fully_forced());
        assert_eq!(named_graph("dcycle-3").unwrap().arcs(), vec![(0, 1), (1, 2), (2, 0)]);
        assert!(named_graph("u-5").is_err());
        assert!(named_graph("wheel-5").is_err());
    }

    #[test]
    fn random_digraphs_are_reproducible() {
        for i in 0..20 {
            let d = random_digraph(9, 0.3, 42, i);
            assert_eq!(d, random_digraph(9, 0.3, 42, i));
            assert!(d.n() <= 9 && d.arc_count() > 0 && d.is_orientation());
        }
        assert_eq!(sample_vertices(10, 3, 1, 2).len(), 3);
    }
}
