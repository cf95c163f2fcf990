//! Line-oriented text formats for graphs, colorings and fractional
//! colorings. The grammar is described in `docs/formats.md`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::coloring::{Coloring, MultiColoring};
use crate::error::{Error, Result};
use crate::fractional::FractionalColoring;
use crate::graph::{Graph, PartialOrientation, VertexSet};
use crate::rational::{fmt_rational, parse_rational, Rational};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Nonblank, non-comment lines as (1-based line number, tokens).
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.first() {
            None => None,
            Some(&"c") => None,
            Some(_) => Some((i + 1, tokens)),
        }
    })
}

fn number(line: usize, token: Option<&&str>, what: &str) -> Result<usize> {
    let t = token.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    t.parse().map_err(|_| parse_err(line, format!("bad {what} '{t}'")))
}

fn vertex(line: usize, token: Option<&&str>, n: usize) -> Result<usize> {
    let v = number(line, token, "vertex")?;
    if v >= n {
        return Err(parse_err(line, format!("vertex {v} out of range 0..{n}")));
    }
    Ok(v)
}

fn expect_len(line: usize, tokens: &[&str], len: usize) -> Result<()> {
    if tokens.len() != len {
        return Err(parse_err(line, format!("expected {len} fields, found {}", tokens.len())));
    }
    Ok(())
}

pub fn read_graph(text: &str) -> Result<PartialOrientation> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut labels: Vec<(usize, String)> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut seen_edges = BTreeSet::new();
    let mut seen_arcs = BTreeSet::new();
    let mut last_line = 0;
    for (line, tokens) in records(text) {
        last_line = line;
        if tokens[0] == "p" {
            if header.is_some() {
                return Err(parse_err(line, "duplicate header"));
            }
            expect_len(line, &tokens, 5)?;
            if tokens[1] != "lcn" {
                return Err(parse_err(line, format!("unknown format '{}'", tokens[1])));
            }
            let n = number(line, tokens.get(2), "vertex count")?;
            let m = number(line, tokens.get(3), "edge count")?;
            let a = number(line, tokens.get(4), "arc count")?;
            header = Some((n, m, a));
            continue;
        }
        let Some((n, _, _)) = header else {
            return Err(parse_err(line, "record before header"));
        };
        match tokens[0] {
            "e" | "a" => {
                expect_len(line, &tokens, 3)?;
                let u = vertex(line, tokens.get(1), n)?;
                let v = vertex(line, tokens.get(2), n)?;
                if u == v {
                    return Err(parse_err(line, format!("self-loop at {u}")));
                }
                let pair = (u.min(v), u.max(v));
                if tokens[0] == "e" {
                    if !seen_edges.insert(pair) || seen_arcs.contains(&pair) {
                        return Err(parse_err(line, format!("pair {u} {v} listed twice")));
                    }
                    edges.push((u, v));
                } else {
                    if seen_edges.contains(&pair) || arcs.contains(&(u, v)) {
                        return Err(parse_err(line, format!("pair {u} {v} listed twice")));
                    }
                    seen_arcs.insert(pair);
                    arcs.push((u, v));
                }
            }
            "l" => {
                let v = vertex(line, tokens.get(1), n)?;
                if tokens.len() < 3 {
                    return Err(parse_err(line, "missing label"));
                }
                if labels.iter().any(|(w, _)| *w == v) {
                    return Err(parse_err(line, format!("vertex {v} labeled twice")));
                }
                labels.push((v, tokens[2..].join(" ")));
            }
            other => return Err(parse_err(line, format!("unknown record '{other}'"))),
        }
    }
    let Some((n, m, a)) = header else {
        return Err(parse_err(last_line.max(1), "missing header"));
    };
    if edges.len() != m || arcs.len() != a {
        return Err(parse_err(
            last_line,
            format!("header promises {m} edges and {a} arcs, found {} and {}", edges.len(), arcs.len()),
        ));
    }
    let mut g = Graph::from_edges(n, edges.iter().chain(&arcs).copied())?;
    for (v, label) in labels {
        g.set_label(v, label);
    }
    let mut d = PartialOrientation::unoriented(g);
    for (u, v) in arcs {
        d.force(u, v)?;
    }
    Ok(d)
}

/// Canonical text: header, labels by vertex, free edges, then arcs, each
/// sorted.
pub fn write_graph(d: &PartialOrientation) -> String {
    let g = d.base();
    let free = d.free_edges();
    let arcs = d.arcs();
    let mut out = String::new();
    writeln!(out, "p lcn {} {} {}", g.n(), free.len(), arcs.len()).unwrap();
    for v in 0..g.n() {
        if let Some(label) = g.label(v) {
            writeln!(out, "l {v} {label}").unwrap();
        }
    }
    for (u, v) in free {
        writeln!(out, "e {u} {v}").unwrap();
    }
    for (u, v) in arcs {
        writeln!(out, "a {u} {v}").unwrap();
    }
    out
}

pub fn write_undirected(g: &Graph) -> String {
    write_graph(&PartialOrientation::unoriented(g.clone()))
}

/// SHA-256 of the canonical text, in hex.
pub fn content_hash(d: &PartialOrientation) -> String {
    let digest = Sha256::digest(write_graph(d).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// One `v <vertex> <color>` record per vertex.
pub fn read_coloring(text: &str, n: usize) -> Result<Coloring> {
    let mut colors: Vec<Option<u32>> = vec![None; n];
    let mut last_line = 0;
    for (line, tokens) in records(text) {
        last_line = line;
        if tokens[0] != "v" {
            return Err(parse_err(line, format!("unknown record '{}'", tokens[0])));
        }
        expect_len(line, &tokens, 3)?;
        let v = vertex(line, tokens.get(1), n)?;
        let c = number(line, tokens.get(2), "color")?;
        if colors[v].is_some() {
            return Err(parse_err(line, format!("vertex {v} colored twice")));
        }
        colors[v] = Some(u32::try_from(c).map_err(|_| parse_err(line, "color too large"))?);
    }
    match colors.iter().position(Option::is_none) {
        Some(v) => Err(parse_err(last_line.max(1), format!("vertex {v} has no color"))),
        None => Ok(Coloring::new(colors.into_iter().flatten().collect())),
    }
}

pub fn write_coloring(c: &Coloring) -> String {
    let mut out = String::new();
    for (v, x) in c.as_slice().iter().enumerate() {
        writeln!(out, "v {v} {x}").unwrap();
    }
    out
}

/// Header `p mcol <n> <m> <r> <h>`, then `v <vertex> <c1> .. <cr>` records.
pub fn read_multicoloring(text: &str) -> Result<MultiColoring> {
    let mut header: Option<(usize, usize, usize, usize)> = None;
    let mut sets: Vec<Option<Vec<u32>>> = Vec::new();
    let mut last_line = 0;
    for (line, tokens) in records(text) {
        last_line = line;
        match tokens[0] {
            "p" => {
                if header.is_some() {
                    return Err(parse_err(line, "duplicate header"));
                }
                expect_len(line, &tokens, 6)?;
                if tokens[1] != "mcol" {
                    return Err(parse_err(line, format!("unknown format '{}'", tokens[1])));
                }
                let n = number(line, tokens.get(2), "vertex count")?;
                let m = number(line, tokens.get(3), "palette size")?;
                let r = number(line, tokens.get(4), "r")?;
                let h = number(line, tokens.get(5), "h")?;
                header = Some((n, m, r, h));
                sets = vec![None; n];
            }
            "v" => {
                let Some((n, _, r, _)) = header else {
                    return Err(parse_err(line, "record before header"));
                };
                expect_len(line, &tokens, 2 + r)?;
                let v = vertex(line, tokens.get(1), n)?;
                if sets[v].is_some() {
                    return Err(parse_err(line, format!("vertex {v} colored twice")));
                }
                let mut colors = Vec::with_capacity(r);
                for t in &tokens[2..] {
                    let c = number(line, Some(t), "color")?;
                    colors.push(u32::try_from(c).map_err(|_| parse_err(line, "color too large"))?);
                }
                sets[v] = Some(colors);
            }
            other => return Err(parse_err(line, format!("unknown record '{other}'"))),
        }
    }
    let Some((_, m, r, h)) = header else {
        return Err(parse_err(last_line.max(1), "missing header"));
    };
    if let Some(v) = sets.iter().position(Option::is_none) {
        return Err(parse_err(last_line, format!("vertex {v} has no colors")));
    }
    MultiColoring::new(sets.into_iter().flatten().collect(), r, h, m)
}

pub fn write_multicoloring(mc: &MultiColoring) -> String {
    let mut out = String::new();
    writeln!(out, "p mcol {} {} {} {}", mc.len(), mc.m, mc.r, mc.h).unwrap();
    for v in 0..mc.len() {
        let colors: Vec<String> = mc.colors(v).iter().map(u32::to_string).collect();
        writeln!(out, "v {v} {}", colors.join(" ")).unwrap();
    }
    out
}

/// One `w <weight> <v1> <v2> ..` record per independent set in the support.
pub fn write_fractional(fc: &FractionalColoring) -> String {
    let mut out = String::new();
    for (set, w) in fc.support() {
        let vs: Vec<String> = set.iter().map(|v| v.to_string()).collect();
        writeln!(out, "w {} {}", fmt_rational(w), vs.join(" ")).unwrap();
    }
    out
}

pub fn read_fractional(text: &str, n: usize) -> Result<FractionalColoring> {
    let mut fc = FractionalColoring::new(n);
    for (line, tokens) in records(text) {
        if tokens[0] != "w" || tokens.len() < 3 {
            return Err(parse_err(line, "expected 'w <weight> <vertices..>'"));
        }
        let w: Rational = parse_rational(tokens[1]).map_err(|_| parse_err(line, format!("bad weight '{}'", tokens[1])))?;
        let mut set = VertexSet::new(n);
        for t in &tokens[2..] {
            set.insert(vertex(line, Some(t), n)?);
        }
        fc.add(set, w);
    }
    Ok(fc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::universal::counterexample_graph;

    #[test]
    fn graph_round_trip_keeps_labels_and_arcs() {
        let gap = counterexample_graph();
        let d = gap.orientation_x_to_y();
        let text = write_graph(&d);
        let back = read_graph(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(write_graph(&back), text);
        assert_eq!(back.base().label(gap.x), d.base().label(gap.x));
        assert_eq!(back.base().label(0), Some("(1,{2,3})"));
    }

    #[test]
    fn bidirected_pairs_are_two_arcs() {
        let d = PartialOrientation::bidirected(&Graph::path(2));
        assert_eq!(write_graph(&d), "p lcn 2 0 2\na 0 1\na 1 0\n");
        assert_eq!(read_graph("p lcn 2 0 2\na 1 0\na 0 1\n").unwrap(), d);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("e 0 1\n", 1),
            ("c hi\np lcn 2 1 0\ne 0 2\n", 3),
            ("p lcn 2 1 0\n\ne 0 0\n", 3),
            ("p lcn 3 1 0\ne 0 1\nx 1\n", 3),
            ("p lcn 2 2 0\ne 0 1\ne 1 0\n", 3),
            ("p lcn 2 1 0\n", 1),
            ("p lcn 2 1 1\ne 0 1\na 1 0\n", 3),
            ("p lcn 2 0 2\na 0 1\na 0 1\n", 3),
            ("p lcn 2 1 0\ne 0 one\n", 2),
        ];
        for (text, line) in cases {
            match read_graph(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn coloring_formats() {
        let c = Coloring::new(vec![1, 2, 1]);
        assert_eq!(read_coloring(&write_coloring(&c), 3).unwrap(), c);
        assert!(matches!(read_coloring("v 0 1\nv 0 2\n", 2), Err(Error::Parse { line: 2, .. })));
        assert!(read_coloring("v 0 1\n", 2).is_err());

        let mc = MultiColoring::new(vec![vec![1, 2], vec![3, 4]], 2, 4, 4).unwrap();
        assert_eq!(read_multicoloring(&write_multicoloring(&mc)).unwrap(), mc);
    }

    #[test]
    fn fractional_round_trip() {
        let mut fc = FractionalColoring::new(5);
        fc.add(VertexSet::from_vertices(5, [0, 2]), rat(1, 2));
        fc.add(VertexSet::from_vertices(5, [1, 3]), rat(1, 2));
        let text = write_fractional(&fc);
        assert_eq!(read_fractional(&text, 5).unwrap(), fc);
    }

    #[test]
    fn hash_is_stable() {
        let a = content_hash(&PartialOrientation::unoriented(Graph::cycle(5)));
        let b = content_hash(&read_graph(&write_undirected(&Graph::cycle(5))).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
    }
}
