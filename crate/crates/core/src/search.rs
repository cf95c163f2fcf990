//! Backtracking engine shared by every integral coloring solver.
//!
//! A problem is a proper-coloring constraint plus a list of scopes (closed
//! neighborhoods, closed out-neighborhoods, ...) each allowed at most `k`
//! distinct colors. Vertices are picked by smallest remaining domain, colors
//! are tried reuse-first, and a fresh color is always the next unused id, so
//! every partition of the vertex set is visited at most once.

use crate::budget::Budget;
use crate::coloring::Coloring;
use crate::graph::{Graph, VertexSet};

const UNSET: u32 = u32::MAX;

pub(crate) struct LocalProblem {
    adj: Vec<Vec<usize>>,
    scopes: Vec<Vec<usize>>,
    scopes_of: Vec<Vec<usize>>,
    pub k: usize,
    pub max_colors: usize,
}

pub(crate) enum Flow {
    Continue,
    Stop,
}

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum SearchEnd {
    Complete,
    Stopped,
    BudgetExhausted,
}

impl LocalProblem {
    pub fn new(g: &Graph, scopes: Vec<VertexSet>, k: usize, max_colors: usize) -> Self {
        let n = g.n();
        let adj = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
        let scopes: Vec<Vec<usize>> = scopes.iter().map(VertexSet::to_vec).collect();
        let mut scopes_of = vec![Vec::new(); n];
        for (w, s) in scopes.iter().enumerate() {
            for &u in s {
                scopes_of[u].push(w);
            }
        }
        LocalProblem { adj, scopes, scopes_of, k, max_colors }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    /// Visits every valid coloring (one per color partition). The visitor
    /// sees colors numbered in order of first use by the search.
    pub fn search<F>(&self, budget: &mut Budget, mut visit: F) -> SearchEnd
    where
        F: FnMut(&[u32]) -> Flow,
    {
        let n = self.n();
        let mut state = State {
            colors: vec![UNSET; n],
            used: 0,
            neighbor_count: vec![vec![0u16; self.max_colors]; n],
            scope_count: vec![vec![0u16; self.max_colors]; self.scopes.len()],
            scope_distinct: vec![0usize; self.scopes.len()],
            assigned: 0,
        };
        if n == 0 {
            return match visit(&[]) {
                Flow::Continue => SearchEnd::Complete,
                Flow::Stop => SearchEnd::Stopped,
            };
        }
        if self.max_colors == 0 {
            return SearchEnd::Complete;
        }
        self.recurse(&mut state, budget, &mut visit)
    }

    fn allowed(&self, st: &State, u: usize, c: usize) -> bool {
        if st.neighbor_count[u][c] > 0 {
            return false;
        }
        self.scopes_of[u]
            .iter()
            .all(|&w| st.scope_count[w][c] > 0 || st.scope_distinct[w] < self.k)
    }

    fn domain(&self, st: &State, u: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..st.used).filter(|&c| self.allowed(st, u, c)).collect();
        if st.used < self.max_colors && self.allowed(st, u, st.used) {
            out.push(st.used);
        }
        out
    }

    fn recurse<F>(&self, st: &mut State, budget: &mut Budget, visit: &mut F) -> SearchEnd
    where
        F: FnMut(&[u32]) -> Flow,
    {
        if !budget.tick() {
            return SearchEnd::BudgetExhausted;
        }
        if st.assigned == self.n() {
            return match visit(&st.colors) {
                Flow::Continue => SearchEnd::Complete,
                Flow::Stop => SearchEnd::Stopped,
            };
        }
        // Most constrained vertex; ties broken by degree, then index.
        let mut best: Option<(usize, Vec<usize>)> = None;
        for u in 0..self.n() {
            if st.colors[u] != UNSET {
                continue;
            }
            let dom = self.domain(st, u);
            if dom.is_empty() {
                return SearchEnd::Complete;
            }
            let better = match &best {
                None => true,
                Some((b, bd)) => {
                    dom.len() < bd.len() || (dom.len() == bd.len() && self.adj[u].len() > self.adj[*b].len())
                }
            };
            if better {
                best = Some((u, dom));
            }
        }
        let (u, dom) = best.expect("an unassigned vertex exists");
        for c in dom {
            self.assign(st, u, c);
            let end = self.recurse(st, budget, visit);
            self.unassign(st, u, c);
            if end != SearchEnd::Complete {
                return end;
            }
        }
        SearchEnd::Complete
    }

    fn assign(&self, st: &mut State, u: usize, c: usize) {
        st.colors[u] = c as u32;
        st.assigned += 1;
        if c == st.used {
            st.used += 1;
        }
        for &v in &self.adj[u] {
            st.neighbor_count[v][c] += 1;
        }
        for &w in &self.scopes_of[u] {
            if st.scope_count[w][c] == 0 {
                st.scope_distinct[w] += 1;
            }
            st.scope_count[w][c] += 1;
        }
    }

    fn unassign(&self, st: &mut State, u: usize, c: usize) {
        st.colors[u] = UNSET;
        st.assigned -= 1;
        for &v in &self.adj[u] {
            st.neighbor_count[v][c] -= 1;
        }
        for &w in &self.scopes_of[u] {
            st.scope_count[w][c] -= 1;
            if st.scope_count[w][c] == 0 {
                st.scope_distinct[w] -= 1;
            }
        }
        if c + 1 == st.used && !st.colors.contains(&(c as u32)) {
            st.used -= 1;
        }
    }

    /// First valid coloring found, if any.
    pub fn find_one(&self, budget: &mut Budget) -> Result<Option<Coloring>, ()> {
        let mut found = None;
        let end = self.search(budget, |colors| {
            found = Some(Coloring::new(colors.to_vec()));
            Flow::Stop
        });
        match end {
            SearchEnd::BudgetExhausted => Err(()),
            _ => Ok(found),
        }
    }
}

struct State {
    colors: Vec<u32>,
    used: usize,
    neighbor_count: Vec<Vec<u16>>,
    scope_count: Vec<Vec<u16>>,
    scope_distinct: Vec<usize>,
    assigned: usize,
}
