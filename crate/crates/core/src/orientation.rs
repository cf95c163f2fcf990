//! Orientations whose fractional directed local chromatic number reaches
//! the fractional chromatic number: pick an optimal fractional clique, find
//! an independent set through `v0` of clique weight exactly 1, and point
//! every edge leaving that set outward.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fractional::{fractional_chromatic, psi_d_star, FractionalClique, LpMethod};
use crate::graph::{Graph, OutMode, PartialOrientation, VertexSet};
use crate::independent::{is_independent, max_weight_independent_set, maximal_independent_sets_containing};
use crate::rational::Rational;

/// Maximal independent sets through `v0` examined before falling back to a
/// weighted search.
pub const TIGHT_SET_ENUMERATION_LIMIT: usize = 100_000;

#[derive(Clone, Debug)]
pub struct TightSetCertificate {
    pub v0: usize,
    pub a0: VertexSet,
    pub clique: FractionalClique,
    pub chi_star: Rational,
    /// Clique weight of `a0`; always exactly 1.
    pub tightness: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FreePolicy {
    LeaveFree,
    Lexicographic,
}

fn clique_weight(clique: &FractionalClique, s: &VertexSet) -> Rational {
    s.iter().map(|v| &clique.weights[v]).sum()
}

/// Lexicographically least maximal independent set through `v0` whose
/// weight under an optimal fractional clique is exactly 1.
pub fn tight_independent_set(g: &Graph, v0: usize) -> Result<TightSetCertificate> {
    let n = g.n();
    if v0 >= n {
        return Err(Error::VertexOutOfRange(v0, n));
    }
    let fc = fractional_chromatic(g)?;
    let clique = fc.dual;
    let one = Rational::one();
    let a0 = match maximal_independent_sets_containing(g, v0, TIGHT_SET_ENUMERATION_LIMIT) {
        Ok(sets) => sets.into_iter().find(|a| clique_weight(&clique, a) == one),
        Err(Error::LimitExceeded(_)) => tight_set_by_search(g, &clique, v0),
        Err(e) => return Err(e),
    };
    let Some(a0) = a0 else {
        return Err(Error::Internal(format!("no independent set through {v0} has clique weight 1")));
    };
    let tightness = clique_weight(&clique, &a0);
    Ok(TightSetCertificate { v0, a0, clique, chi_star: fc.value, tightness })
}

/// Heaviest independent set through `v0`, extended greedily to a maximal one.
fn tight_set_by_search(g: &Graph, clique: &FractionalClique, v0: usize) -> Option<VertexSet> {
    let n = g.n();
    let mut weights: Vec<Rational> = clique.weights.clone();
    for u in g.closed_neighborhood(v0).iter() {
        weights[u] = Rational::zero();
    }
    let (best, mut set) = max_weight_independent_set(g, &weights);
    if &best + &clique.weights[v0] != Rational::one() {
        return None;
    }
    set.insert(v0);
    for u in 0..n {
        if !set.contains(u) && !g.neighbors(u).intersects(&set) {
            set.insert(u);
        }
    }
    Some(set)
}

/// Forces every edge with one endpoint in `a0` out of `a0`; the remaining
/// edges are left free or oriented from lower to higher index.
pub fn orient_out_of(g: &Graph, a0: &VertexSet, policy: FreePolicy) -> Result<PartialOrientation> {
    if !is_independent(g, a0) {
        return Err(Error::NotIndependent(a0.to_vec()));
    }
    let mut d = PartialOrientation::unoriented(g.clone());
    for (u, v) in g.edges() {
        match (a0.contains(u), a0.contains(v)) {
            (true, false) => d.force(u, v)?,
            (false, true) => d.force(v, u)?,
            _ => {}
        }
    }
    if policy == FreePolicy::Lexicographic {
        d.complete_lexicographic();
    }
    Ok(d)
}

pub fn max_orientation(g: &Graph, v0: usize, policy: FreePolicy) -> Result<(PartialOrientation, TightSetCertificate)> {
    let cert = tight_independent_set(g, v0)?;
    let d = orient_out_of(g, &cert.a0, policy)?;
    Ok((d, cert))
}

#[derive(Clone, Debug)]
pub struct FrakceqReport {
    pub chi_star: Rational,
    pub psi_d_star: Rational,
    /// Largest weight of optimal-primal sets meeting `N+(v)` over `v ∈ A0`.
    pub a0_max_seen: Rational,
    pub equal: bool,
    /// Some vertex of `A0` sees at least `chi* - 1`.
    pub sees_enough: bool,
    /// `N+(v) = N(v)` for every `v ∈ A0`.
    pub a0_outward: bool,
}

impl FrakceqReport {
    pub fn holds(&self) -> bool {
        self.equal && self.sees_enough && self.a0_outward
    }
}

/// Solves both LPs on the orientation built from `cert` and compares them.
pub fn verify_frakceq(g: &Graph, d: &PartialOrientation, cert: &TightSetCertificate, method: LpMethod) -> Result<FrakceqReport> {
    let chi = fractional_chromatic(g)?;
    let psi = psi_d_star(d, method)?;
    let mut a0_max_seen = Rational::zero();
    let mut a0_outward = true;
    for v in cert.a0.iter() {
        let out = d.out_neighborhood(v, OutMode::Exact)?;
        a0_outward &= &out == g.neighbors(v);
        let seen = psi.primal.weight_meeting(&out);
        if seen > a0_max_seen {
            a0_max_seen = seen;
        }
    }
    let sees_enough = a0_max_seen >= &chi.value - Rational::one();
    Ok(FrakceqReport {
        equal: chi.value == psi.value,
        chi_star: chi.value,
        psi_d_star: psi.value,
        a0_max_seen,
        sees_enough,
        a0_outward,
    })
}
