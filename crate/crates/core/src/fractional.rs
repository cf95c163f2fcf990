//! Fractional relaxations solved exactly: fractional chromatic number with
//! its fractional-clique dual, the fractional directed local chromatic
//! number, multi-coloring certificates, and the ratio bound between them.

use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::coloring::MultiColoring;
use crate::error::{Error, Result};
use crate::graph::{Graph, OutMode, PartialOrientation, VertexSet};
use crate::independent::{
    enumerate_independent_sets, is_independent, max_weight_independent_set, DEFAULT_ENUMERATION_LIMIT,
};
use crate::lp::{LinearProgram, LpSolution, Relation, Solver};
use crate::rational::{fmt_rational, int, pow_rational, pow_u, Interval, Rational, DEFAULT_PRECISION_BITS};

/// Column generation gives up after this many pricing rounds.
pub const COLUMN_GENERATION_ITERATIONS: usize = 20_000;

/// Columns beyond which the enumerated pools are abandoned in `Auto` mode.
pub const AUTO_POOL_LIMIT: usize = 2_000;

/// Nonnegative weights on independent sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalColoring {
    n: usize,
    weights: BTreeMap<VertexSet, Rational>,
}

impl FractionalColoring {
    pub fn new(n: usize) -> Self {
        FractionalColoring { n, weights: BTreeMap::new() }
    }

    /// Adds `w` to the weight of `set`; zero weights are dropped.
    pub fn add(&mut self, set: VertexSet, w: Rational) {
        if w.is_zero() {
            return;
        }
        let entry = self.weights.entry(set).or_insert_with(Rational::zero);
        *entry += w;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> impl Iterator<Item = (&VertexSet, &Rational)> {
        self.weights.iter()
    }

    pub fn total_weight(&self) -> Rational {
        self.weights.values().sum()
    }

    /// `Σ_{A ∋ v} x_A`.
    pub fn coverage(&self, v: usize) -> Rational {
        self.weights.iter().filter(|(a, _)| a.contains(v)).map(|(_, w)| w).sum()
    }

    /// Checks independence of the support, nonnegativity and coverage.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.n != g.n() {
            return Err(Error::InvalidParameters(format!(
                "fractional coloring over {} vertices, graph has {}",
                self.n,
                g.n()
            )));
        }
        for (a, w) in &self.weights {
            if !is_independent(g, a) {
                return Err(Error::NotIndependent(a.to_vec()));
            }
            if w.is_negative() {
                return Err(Error::InvalidParameters(format!("negative weight on {:?}", a)));
            }
        }
        for v in 0..self.n {
            if self.coverage(v) < Rational::one() {
                return Err(Error::InvalidParameters(format!("vertex {v} is covered less than once")));
            }
        }
        Ok(())
    }

    /// Weight of the sets meeting `s`.
    pub fn weight_meeting(&self, s: &VertexSet) -> Rational {
        self.weights.iter().filter(|(a, _)| a.intersects(s)).map(|(_, w)| w).sum()
    }
}

pub fn total_weight(fc: &FractionalColoring) -> Rational {
    fc.total_weight()
}

/// `1 + max_v Σ_{A : A ∩ N+(v) ≠ ∅} x_A`.
pub fn local_weight(d: &PartialOrientation, fc: &FractionalColoring, mode: OutMode) -> Result<Rational> {
    let mut worst = Rational::zero();
    for v in 0..d.n() {
        let seen = fc.weight_meeting(&d.out_neighborhood(v, mode)?);
        if seen > worst {
            worst = seen;
        }
    }
    Ok(worst + Rational::one())
}

/// Nonnegative vertex weights with total at most one on every independent set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalClique {
    pub weights: Vec<Rational>,
}

impl FractionalClique {
    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn weight_of(&self, s: &VertexSet) -> Rational {
        s.iter().map(|v| &self.weights[v]).sum()
    }

    /// Feasibility against every independent set, via an exact maximum
    /// weight independent set.
    pub fn is_feasible(&self, g: &Graph) -> bool {
        if self.weights.iter().any(|w| w.is_negative()) || self.weights.len() != g.n() {
            return false;
        }
        let (best, _) = max_weight_rational(g, &self.weights);
        best <= Rational::one()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpMethod {
    /// Full column pool (maximal sets for the fractional chromatic number,
    /// all independent sets for the directed local version).
    Enumerate,
    ColumnGeneration,
    /// Enumerate when the pool is small, otherwise column generation.
    Auto,
}

#[derive(Clone, Debug)]
pub struct FractionalChromatic {
    pub value: Rational,
    pub primal: FractionalColoring,
    pub dual: FractionalClique,
    pub columns: usize,
}

#[derive(Clone, Debug)]
pub struct PsiDStar {
    pub value: Rational,
    pub primal: FractionalColoring,
    /// Duals of the coverage rows.
    pub coverage_dual: Vec<Rational>,
    /// Duals of the per-vertex local rows.
    pub local_dual: Vec<Rational>,
    pub columns: usize,
}

/// Common-denominator integer image of rational weights.
fn integer_weights(ws: &[Rational]) -> Vec<BigInt> {
    let den = ws.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    ws.iter().map(|w| w.numer() * (&den / w.denom())).collect()
}

fn fits_i128(ws: &[BigInt]) -> Option<Vec<i128>> {
    let total: BigInt = ws.iter().map(|w| w.abs()).sum();
    total.to_i128()?;
    ws.iter().map(|w| w.to_i128()).collect()
}

fn max_weight_rational(g: &Graph, ws: &[Rational]) -> (Rational, VertexSet) {
    let den = ws.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let ints = integer_weights(ws);
    let (value, set) = match fits_i128(&ints) {
        Some(small) => {
            let (v, s) = max_weight_independent_set(g, &small);
            (BigInt::from(v), s)
        }
        None => max_weight_independent_set(g, &ints),
    };
    (Rational::new(value, den), set)
}

/// Fractional chromatic number with an optimal fractional coloring and an
/// optimal fractional clique of equal total weight.
pub fn fractional_chromatic(g: &Graph) -> Result<FractionalChromatic> {
    fractional_chromatic_with(g, LpMethod::Auto)
}

pub fn fractional_chromatic_with(g: &Graph, method: LpMethod) -> Result<FractionalChromatic> {
    let n = g.n();
    if n == 0 {
        return Ok(FractionalChromatic {
            value: Rational::zero(),
            primal: FractionalColoring::new(0),
            dual: FractionalClique { weights: vec![] },
            columns: 0,
        });
    }
    match method {
        LpMethod::Enumerate => {
            let pool = enumerate_independent_sets(g, true, DEFAULT_ENUMERATION_LIMIT)?;
            solve_covering(g, &pool)
        }
        LpMethod::ColumnGeneration => covering_column_generation(g),
        LpMethod::Auto => match enumerate_independent_sets(g, true, AUTO_POOL_LIMIT) {
            Ok(pool) => solve_covering(g, &pool),
            Err(Error::LimitExceeded(_)) => covering_column_generation(g),
            Err(e) => Err(e),
        },
    }
}

/// Fractional chromatic LP restricted to the given columns.
pub fn solve_covering(g: &Graph, pool: &[VertexSet]) -> Result<FractionalChromatic> {
    let mut solver = covering_solver(g, pool)?;
    let sol = solver.solve()?;
    Ok(covering_result(g.n(), pool, sol))
}

fn covering_solver(g: &Graph, pool: &[VertexSet]) -> Result<Solver> {
    let mut lp = LinearProgram::new(0);
    for _ in 0..g.n() {
        lp.add_constraint(vec![], Relation::Ge, Rational::one());
    }
    let mut solver = Solver::new(lp);
    for a in pool {
        solver.add_column(Rational::one(), a.iter().map(|v| (v, Rational::one())).collect())?;
    }
    Ok(solver)
}

fn covering_result(n: usize, pool: &[VertexSet], sol: LpSolution) -> FractionalChromatic {
    let mut primal = FractionalColoring::new(n);
    for (a, x) in pool.iter().zip(sol.primal) {
        primal.add(a.clone(), x);
    }
    FractionalChromatic {
        value: sol.value,
        primal,
        dual: FractionalClique { weights: sol.dual },
        columns: pool.len(),
    }
}

/// Greedily extends each singleton to a maximal independent set.
fn greedy_cover(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    let mut pool: Vec<VertexSet> = Vec::new();
    for v in 0..n {
        if pool.iter().any(|a| a.contains(v)) {
            continue;
        }
        let mut a = VertexSet::from_vertices(n, [v]);
        for u in 0..n {
            if !a.contains(u) && !g.neighbors(u).intersects(&a) {
                a.insert(u);
            }
        }
        pool.push(a);
    }
    pool
}

fn covering_column_generation(g: &Graph) -> Result<FractionalChromatic> {
    let mut pool = greedy_cover(g);
    let mut solver = covering_solver(g, &pool)?;
    for _ in 0..COLUMN_GENERATION_ITERATIONS {
        let sol = solver.solve()?;
        let (best, set) = max_weight_rational(g, &sol.dual);
        if best <= Rational::one() {
            return Ok(covering_result(g.n(), &pool, sol));
        }
        if pool.contains(&set) {
            return Err(Error::Internal("pricing returned an existing column".into()));
        }
        solver.add_column(Rational::one(), set.iter().map(|v| (v, Rational::one())).collect())?;
        pool.push(set);
    }
    Err(Error::NoConvergence(COLUMN_GENERATION_ITERATIONS))
}

fn require_fully_forced(d: &PartialOrientation) -> Result<()> {
    match d.free_edges().first() {
        Some(&(u, _)) => Err(Error::FreeEdge(u)),
        None => Ok(()),
    }
}

/// Fractional directed local chromatic number of a fully forced digraph.
pub fn psi_d_star(d: &PartialOrientation, method: LpMethod) -> Result<PsiDStar> {
    require_fully_forced(d)?;
    let g = d.base();
    match method {
        LpMethod::Enumerate => {
            let pool = nonempty_independent_sets(g, DEFAULT_ENUMERATION_LIMIT)?;
            solve_local(d, &pool)
        }
        LpMethod::ColumnGeneration => local_column_generation(d),
        LpMethod::Auto => match nonempty_independent_sets(g, AUTO_POOL_LIMIT) {
            Ok(pool) => solve_local(d, &pool),
            Err(Error::LimitExceeded(_)) => local_column_generation(d),
            Err(e) => Err(e),
        },
    }
}

fn nonempty_independent_sets(g: &Graph, limit: usize) -> Result<Vec<VertexSet>> {
    let mut all = enumerate_independent_sets(g, false, limit.saturating_add(1))?;
    all.retain(|a| !a.is_empty());
    Ok(all)
}

/// `min t` s.t. coverage and `t - Σ_{A meets N+(v)} x_A >= 1`, over the
/// given columns.
pub fn solve_local(d: &PartialOrientation, pool: &[VertexSet]) -> Result<PsiDStar> {
    let (mut solver, outs) = local_solver(d)?;
    for a in pool {
        add_local_column(&mut solver, &outs, a)?;
    }
    let sol = solver.solve()?;
    Ok(local_result(d.n(), pool, sol))
}

/// Solver holding only the `t` column, plus the out-neighborhoods.
fn local_solver(d: &PartialOrientation) -> Result<(Solver, Vec<VertexSet>)> {
    let n = d.n();
    let mut lp = LinearProgram::new(1);
    lp.objective[0] = Rational::one();
    for _ in 0..n {
        lp.add_constraint(vec![], Relation::Ge, Rational::one());
    }
    for _ in 0..n {
        lp.add_constraint(vec![(0, Rational::one())], Relation::Ge, Rational::one());
    }
    let outs = (0..n).map(|v| d.out_neighborhood(v, OutMode::Exact)).collect::<Result<Vec<_>>>()?;
    Ok((Solver::new(lp), outs))
}

fn add_local_column(solver: &mut Solver, outs: &[VertexSet], a: &VertexSet) -> Result<()> {
    let n = outs.len();
    let mut entries: Vec<(usize, Rational)> = a.iter().map(|v| (v, Rational::one())).collect();
    for (v, out) in outs.iter().enumerate() {
        if a.intersects(out) {
            entries.push((n + v, -Rational::one()));
        }
    }
    solver.add_column(Rational::zero(), entries)?;
    Ok(())
}

fn local_result(n: usize, pool: &[VertexSet], sol: LpSolution) -> PsiDStar {
    let mut primal = FractionalColoring::new(n);
    for (a, x) in pool.iter().zip(sol.primal.iter().skip(1)) {
        primal.add(a.clone(), x.clone());
    }
    let mut dual = sol.dual;
    let local_dual = dual.split_off(n);
    PsiDStar {
        value: sol.value,
        primal,
        coverage_dual: dual,
        local_dual,
        columns: pool.len(),
    }
}

fn local_column_generation(d: &PartialOrientation) -> Result<PsiDStar> {
    let n = d.n();
    let (mut solver, outs) = local_solver(d)?;
    let mut pool: Vec<VertexSet> = (0..n).map(|v| VertexSet::from_vertices(n, [v])).collect();
    for a in &pool {
        add_local_column(&mut solver, &outs, a)?;
    }
    for _ in 0..COLUMN_GENERATION_ITERATIONS {
        let sol = solver.solve()?;
        let mut dual = sol.dual.clone();
        let local = dual.split_off(n);
        match price_local(d, &dual, &local) {
            None => return Ok(local_result(n, &pool, sol)),
            Some(set) => {
                if pool.contains(&set) {
                    return Err(Error::Internal("pricing returned an existing column".into()));
                }
                add_local_column(&mut solver, &outs, &set)?;
                pool.push(set);
            }
        }
    }
    Err(Error::NoConvergence(COLUMN_GENERATION_ITERATIONS))
}

/// Independent set maximizing `y(A) - z({v : N+(v) meets A})`, if positive.
fn price_local(d: &PartialOrientation, y: &[Rational], z: &[Rational]) -> Option<VertexSet> {
    let n = d.n();
    let mut all = y.to_vec();
    all.extend_from_slice(z);
    let ints = integer_weights(&all);
    match fits_i128(&ints) {
        Some(small) => price_local_int(d, &small[..n], &small[n..]),
        None => price_local_int(d, &ints[..n], &ints[n..]),
    }
}

fn price_local_int<W>(d: &PartialOrientation, y: &[W], z: &[W]) -> Option<VertexSet>
where
    W: Clone + Ord + Zero + for<'a> Add<&'a W, Output = W> + for<'a> Sub<&'a W, Output = W>,
{
    let n = d.n();
    let g = d.base();
    let zero = W::zero();
    let mut order: Vec<usize> = (0..n).filter(|&v| y[v] > zero).collect();
    order.sort_by(|&a, &b| y[b].cmp(&y[a]).then(a.cmp(&b)));
    let mut search = LocalPricing {
        g,
        d,
        y,
        z,
        order: &order,
        best_value: W::zero(),
        best: None,
    };
    let cand = VertexSet::from_vertices(n, order.iter().copied());
    let mut current = VertexSet::new(n);
    search.branch(&mut current, &VertexSet::new(n), W::zero(), cand, 0);
    search.best
}

struct LocalPricing<'a, W> {
    g: &'a Graph,
    d: &'a PartialOrientation,
    y: &'a [W],
    z: &'a [W],
    order: &'a [usize],
    best_value: W,
    best: Option<VertexSet>,
}

impl<W> LocalPricing<'_, W>
where
    W: Clone + Ord + Zero + for<'a> Add<&'a W, Output = W> + for<'a> Sub<&'a W, Output = W>,
{
    fn branch(&mut self, current: &mut VertexSet, hit: &VertexSet, value: W, cand: VertexSet, pos: usize) {
        let mut bound = value.clone();
        for &v in &self.order[pos..] {
            if cand.contains(v) {
                bound = bound + &self.y[v];
            }
        }
        if bound <= self.best_value {
            return;
        }
        if value > self.best_value {
            self.best_value = value.clone();
            self.best = Some(current.clone());
        }
        let Some(i) = (pos..self.order.len()).find(|&i| cand.contains(self.order[i])) else {
            return;
        };
        let v = self.order[i];
        // Taking v newly hits every in-neighbor of v not already hit.
        let fresh = self.d.in_neighborhood(v).difference(hit);
        let mut with = value.clone() + &self.y[v];
        for w in fresh.iter() {
            with = with - &self.z[w];
        }
        let mut hit_with = hit.clone();
        hit_with.union_with(&fresh);
        let mut next = cand.clone();
        next.difference_with(self.g.neighbors(v));
        next.remove(v);
        current.insert(v);
        self.branch(current, &hit_with, with, next, i + 1);
        current.remove(v);
        let mut without = cand;
        without.remove(v);
        self.branch(current, hit, value, without, i + 1);
    }
}

/// Every color class independent and every out-neighborhood using at most
/// `h - r` colors.
pub fn is_local_multicoloring(d: &PartialOrientation, mc: &MultiColoring) -> Result<bool> {
    Ok(first_nonlocal_vertex(d, mc)?.is_none())
}

fn first_nonlocal_vertex(d: &PartialOrientation, mc: &MultiColoring) -> Result<Option<(usize, usize)>> {
    if mc.len() != d.n() {
        return Err(Error::ColoringLength { expected: d.n(), got: mc.len() });
    }
    for (c, class) in mc.classes(d.n()) {
        if !is_independent(d.base(), &class) {
            return Err(Error::DependentColorClass(c));
        }
    }
    for v in 0..d.n() {
        let used = mc.union_on(&d.out_neighborhood(v, OutMode::Exact)?).len();
        if used > mc.h - mc.r {
            return Ok(Some((v, used)));
        }
    }
    Ok(None)
}

/// `h / r` together with the fractional coloring that puts `1/r` on every
/// color class.
pub fn psi_d_star_upper_from_multicoloring(
    d: &PartialOrientation,
    mc: &MultiColoring,
) -> Result<(Rational, FractionalColoring)> {
    if let Some((vertex, used)) = first_nonlocal_vertex(d, mc)? {
        return Err(Error::NotLocal { vertex, h: mc.h, used });
    }
    let r = int(mc.r as i64);
    let mut fc = FractionalColoring::new(d.n());
    for (_, class) in mc.classes(d.n()) {
        if !class.is_empty() {
            fc.add(class, r.recip());
        }
    }
    Ok((int(mc.h as i64) / r, fc))
}

/// `k^k / (k-1)^(k-1)`: exact for integral `k`, an enclosure otherwise.
#[derive(Clone, Debug)]
pub struct RatioBound {
    pub k: Rational,
    pub value: Interval,
    /// `e · k`, always strictly above `value`.
    pub e_times_k: Interval,
}

pub fn ratio_bound(k: &Rational) -> Result<RatioBound> {
    ratio_bound_with_precision(k, DEFAULT_PRECISION_BITS)
}

pub fn ratio_bound_with_precision(k: &Rational, bits: u32) -> Result<RatioBound> {
    if *k <= Rational::one() {
        return Err(Error::InvalidParameters(format!("ratio bound needs k > 1, got {}", fmt_rational(k))));
    }
    let km1 = k - Rational::one();
    let value = if k.is_integer() {
        let e = k.to_integer().to_u32().expect("integral k fits in u32");
        Interval::point(pow_u(k, e) / pow_u(&km1, e - 1))
    } else {
        let top = pow_rational(k, k, bits);
        let bottom = pow_rational(&km1, &km1, bits);
        top.div_pos(&bottom)
    };
    Ok(RatioBound {
        k: k.clone(),
        value,
        e_times_k: Interval::e().scale(k),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    /// The enclosure of an irrational bound straddles the compared value.
    Undecided,
}

#[derive(Clone, Debug)]
pub struct RatioReport {
    pub psi_d_star: Rational,
    pub chi_star: Rational,
    pub bound: RatioBound,
    pub verdict: Verdict,
    /// `bound - χ*` (an enclosure when the bound is irrational).
    pub slack: Interval,
}

/// Checks `χ*(underlying) <= k^k / (k-1)^(k-1)` with `k = ψ_d*(d)`.
pub fn verify_ratio(d: &PartialOrientation) -> Result<RatioReport> {
    if d.arc_count() == 0 {
        return Err(Error::InvalidParameters("digraph has no arcs".into()));
    }
    let k = psi_d_star(d, LpMethod::Auto)?.value;
    let chi = fractional_chromatic(d.base())?.value;
    ratio_check(k, chi)
}

/// The comparison behind `verify_ratio`, for externally supplied values.
pub fn ratio_check(k: Rational, chi_star: Rational) -> Result<RatioReport> {
    let bound = ratio_bound(&k)?;
    let verdict = match bound.value.cmp_rational(&chi_star) {
        Some(std::cmp::Ordering::Less) => Verdict::Violated,
        Some(_) => Verdict::Holds,
        None => Verdict::Undecided,
    };
    let slack = Interval::new(&bound.value.lo - &chi_star, &bound.value.hi - &chi_star);
    Ok(RatioReport { psi_d_star: k, chi_star, bound, verdict, slack })
}

/// `max_l (m - l) · C(l, k - 1)` over `k - 1 <= l <= m`, with the least
/// maximizing `l`.
pub fn alpha_universal_directed(m: usize, k: usize) -> Result<(u64, usize)> {
    if k < 2 || m < k {
        return Err(Error::InvalidParameters(format!("need m >= k >= 2, got m={m}, k={k}")));
    }
    let mut best = (0u64, k - 1);
    for l in (k - 1)..=m {
        let v = (m - l) as u64 * crate::rational::binomial(l as u64, k as u64 - 1);
        if v > best.0 {
            best = (v, l);
        }
    }
    Ok(best)
}
