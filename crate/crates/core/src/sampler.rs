//! Random independent sets from an `h`-local `r`-multi-coloring: keep each
//! color with probability `1 - γ`, then take every vertex that owns a kept
//! color while none of its out-neighbors does.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::MultiColoring;
use crate::error::{Error, Result};
use crate::fractional::{is_local_multicoloring, ratio_bound};
use crate::graph::{OutMode, PartialOrientation, VertexSet};
use crate::independent::is_independent;
use crate::rational::{fmt_rational, nth_root, pow_u, Interval, Rational, DEFAULT_PRECISION_BITS};

/// Drop probability of a single color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gamma {
    Exact(Rational),
    /// `radicand^(1/index)`.
    Root { radicand: Rational, index: u32, approx: Interval },
}

impl Gamma {
    pub fn exact(q: Rational) -> Result<Gamma> {
        if q <= Rational::zero() || q >= Rational::one() {
            return Err(Error::InvalidParameters(format!("gamma must lie in (0,1), got {}", fmt_rational(&q))));
        }
        Ok(Gamma::Exact(q))
    }

    pub fn root(radicand: Rational, index: u32) -> Result<Gamma> {
        if index == 0 {
            return Err(Error::InvalidParameters("root index must be positive".into()));
        }
        Gamma::exact(radicand.clone())?;
        let approx = nth_root(&radicand, index, DEFAULT_PRECISION_BITS);
        if approx.is_exact() {
            return Ok(Gamma::Exact(approx.lo));
        }
        Ok(Gamma::Root { radicand, index, approx })
    }

    pub fn interval(&self) -> Interval {
        match self {
            Gamma::Exact(q) => Interval::point(q.clone()),
            Gamma::Root { approx, .. } => approx.clone(),
        }
    }

    /// `γ^e`, exact whenever `γ` is rational or `index` divides `e`.
    pub fn pow(&self, e: u32) -> Interval {
        match self {
            Gamma::Exact(q) => Interval::point(pow_u(q, e)),
            Gamma::Root { radicand, index, .. } if e.is_multiple_of(*index) => Interval::point(pow_u(radicand, e / index)),
            Gamma::Root { radicand, index, .. } => nth_root(&pow_u(radicand, e), *index, DEFAULT_PRECISION_BITS),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.interval().to_f64()
    }
}

/// `(1 - r/h)^(1/r)`.
pub fn optimal_gamma(h: usize, r: usize) -> Result<Gamma> {
    if r == 0 || r >= h {
        return Err(Error::InvalidParameters(format!("need 1 <= r < h, got r={r}, h={h}")));
    }
    let radicand = Rational::one() - Rational::new(BigInt::from(r), BigInt::from(h));
    Gamma::root(radicand, r as u32)
}

#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub gamma: Gamma,
    pub trials: u64,
    pub master_seed: u64,
}

impl SamplerConfig {
    pub fn new(gamma: Gamma, trials: u64, master_seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidParameters("trials must be at least 1".into()));
        }
        Ok(SamplerConfig { gamma, trials, master_seed })
    }
}

/// A validated multi-coloring with color masks precomputed.
pub struct Sampler<'a> {
    d: &'a PartialOrientation,
    mc: &'a MultiColoring,
    own: Vec<u64>,
    seen: Vec<u64>,
    /// A color is kept when a uniform `u64` is at least this value.
    threshold: u128,
}

fn mask(colors: impl IntoIterator<Item = u32>) -> u64 {
    colors.into_iter().fold(0, |m, c| m | 1u64 << (c - 1))
}

impl<'a> Sampler<'a> {
    pub fn new(d: &'a PartialOrientation, mc: &'a MultiColoring, gamma: &Gamma) -> Result<Self> {
        if mc.m > 64 {
            return Err(Error::InvalidParameters(format!("palette of {} colors exceeds 64", mc.m)));
        }
        if !is_local_multicoloring(d, mc)? {
            return Err(Error::InvalidParameters(format!("multi-coloring is not {}-local", mc.h)));
        }
        let n = d.n();
        let own: Vec<u64> = (0..n).map(|v| mask(mc.colors(v).iter().copied())).collect();
        let mut seen = vec![0u64; n];
        for (v, s) in seen.iter_mut().enumerate() {
            for w in d.out_neighborhood(v, OutMode::Exact)?.iter() {
                *s |= own[w];
            }
        }
        let scaled = gamma.interval().midpoint() * Rational::from_integer(BigInt::one() << 64);
        let threshold = scaled.ceil().to_integer().to_u128().expect("gamma < 1");
        Ok(Sampler { d, mc, own, seen, threshold })
    }

    /// Kept colors for one trial. The generator is ChaCha8 seeded with
    /// `master_seed` on stream `trial`, drawn once per color in order.
    pub fn kept_colors(&self, master_seed: u64, trial: u64) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(trial);
        let mut kept = 0u64;
        for c in 0..self.mc.m {
            if u128::from(rng.next_u64()) >= self.threshold {
                kept |= 1 << c;
            }
        }
        kept
    }

    /// `{v : χ(v) meets C', no out-neighbor has a color in C'}`.
    pub fn induced_set(&self, kept: u64) -> VertexSet {
        let n = self.d.n();
        VertexSet::from_vertices(n, (0..n).filter(|&v| self.own[v] & kept != 0 && self.seen[v] & kept == 0))
    }

    pub fn sample(&self, master_seed: u64, trial: u64) -> VertexSet {
        self.induced_set(self.kept_colors(master_seed, trial))
    }

    /// `|S_v|`, the number of colors on `N+(v)`.
    pub fn seen_colors(&self, v: usize) -> u32 {
        self.seen[v].count_ones()
    }
}

pub fn sample_independent_set(d: &PartialOrientation, mc: &MultiColoring, cfg: &SamplerConfig, trial: u64) -> Result<VertexSet> {
    Ok(Sampler::new(d, mc, &cfg.gamma)?.sample(cfg.master_seed, trial))
}

/// `(1 - γ^r) γ^|S_v|`.
pub fn membership_probability_exact(d: &PartialOrientation, mc: &MultiColoring, gamma: &Gamma, v: usize) -> Result<Interval> {
    let sampler = Sampler::new(d, mc, gamma)?;
    Ok(closed_form(gamma, mc.r as u32, sampler.seen_colors(v)))
}

fn closed_form(gamma: &Gamma, r: u32, seen: u32) -> Interval {
    let keep_one = gamma.pow(r);
    let first = Interval::new(Rational::one() - &keep_one.hi, Rational::one() - &keep_one.lo);
    first.mul_nonneg(&gamma.pow(seen))
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub trials: u64,
    pub exact: Vec<Interval>,
    pub counts: Vec<u64>,
    pub empirical: Vec<f64>,
    pub standard_error: Vec<f64>,
    /// `(h/r - 1)^(h/r - 1) / (h/r)^(h/r)`.
    pub bound: Interval,
    /// Vertices whose exact probability is provably below the bound.
    pub bound_violations: Vec<usize>,
    /// Vertices whose frequency is more than 4 standard errors off.
    pub outliers: Vec<usize>,
    pub all_independent: bool,
}

impl MembershipReport {
    pub fn passes(&self) -> bool {
        self.bound_violations.is_empty() && self.outliers.is_empty() && self.all_independent
    }
}

pub fn estimate_membership(d: &PartialOrientation, mc: &MultiColoring, cfg: &SamplerConfig) -> Result<MembershipReport> {
    let sampler = Sampler::new(d, mc, &cfg.gamma)?;
    let n = d.n();
    let mut counts = vec![0u64; n];
    let mut all_independent = true;
    for t in 0..cfg.trials {
        let set = sampler.sample(cfg.master_seed, t);
        all_independent &= is_independent(d.base(), &set);
        for v in set.iter() {
            counts[v] += 1;
        }
    }
    let k = Rational::new(BigInt::from(mc.h), BigInt::from(mc.r));
    let bound = ratio_bound(&k)?.value.recip_pos();
    let exact: Vec<Interval> = (0..n).map(|v| closed_form(&cfg.gamma, mc.r as u32, sampler.seen_colors(v))).collect();
    let trials = cfg.trials as f64;
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / trials).collect();
    let mut standard_error = Vec::with_capacity(n);
    let mut outliers = Vec::new();
    let mut bound_violations = Vec::new();
    for v in 0..n {
        let p = exact[v].to_f64();
        let se = (p * (1.0 - p) / trials).sqrt();
        standard_error.push(se);
        if (empirical[v] - p).abs() > 4.0 * se {
            outliers.push(v);
        }
        if exact[v].hi < bound.lo {
            bound_violations.push(v);
        }
    }
    Ok(MembershipReport {
        trials: cfg.trials,
        exact,
        counts,
        empirical,
        standard_error,
        bound,
        bound_violations,
        outliers,
        all_independent,
    })
}

/// `1 / min_v P[v ∈ I]`, an upper bound on the fractional chromatic number
/// of the underlying graph.
pub fn chi_upper_bound_from_sampler(d: &PartialOrientation, mc: &MultiColoring, gamma: &Gamma) -> Result<Interval> {
    let sampler = Sampler::new(d, mc, gamma)?;
    let worst = (0..d.n()).map(|v| sampler.seen_colors(v)).max().unwrap_or(0);
    Ok(closed_form(gamma, mc.r as u32, worst).recip_pos())
}
