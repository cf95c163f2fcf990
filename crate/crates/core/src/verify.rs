//! Scripted theorem checks producing versioned JSON reports. Expected values
//! come from closed forms and the constants in `EXPECTED`; computed values
//! come from the solvers.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::battery::{directed_cycle, frakceq_battery, random_digraph, sample_vertices};
use crate::budget::Budget;
use crate::coloring::{Coloring, MultiColoring};
use crate::error::{Error, Result};
use crate::exact::{
    directed_local_chromatic, enumerate_local_colorings, is_local_coloring, local_chromatic, directed_local_chromatic_max,
    MaxStrategy, Solved, DEFAULT_CLASS_CAP,
};
use crate::fractional::{alpha_universal_directed, fractional_chromatic, psi_d_star, ratio_bound, verify_ratio, LpMethod, Verdict};
use crate::graph::{Graph, PartialOrientation};
use crate::independent::{is_independent, max_independent_set};
use crate::io::content_hash;
use crate::orientation::{max_orientation, tight_independent_set, verify_frakceq, FreePolicy};
use crate::rational::{fmt_rational, int, pow_u, Interval, Rational};
use crate::sampler::{estimate_membership, Gamma, Sampler, SamplerConfig};
use crate::universal::{
    counterexample_graph, natural_coloring, universal_directed, universal_undirected,
};

pub const REPORT_SCHEMA: &str = "locochrome.verification/1";

pub const RECIPES: [&str; 8] = ["gap1", "unicolor", "k1k", "ize", "frakceq", "ratio-a", "ratio-b", "sampler"];

/// Fixed claims of the gap graph.
const EXPECTED: &[(&str, &str, i64)] = &[
    ("gap1", "psi", 4),
    ("gap1", "psi_d_max", 3),
    ("sampler", "h", 3),
    ("sampler", "r", 1),
    ("sampler", "trials", 100_000),
];

fn expected(recipe: &str, key: &str) -> i64 {
    EXPECTED
        .iter()
        .find(|(r, k, _)| *r == recipe && *k == key)
        .map(|e| e.2)
        .expect("claim is in the table")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimRow {
    pub claim: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphRef {
    pub name: String,
    pub vertices: usize,
    pub hash: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub toolkit_version: &'static str,
    pub theorem: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub graphs: Vec<GraphRef>,
    pub claims: Vec<ClaimRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl VerificationReport {
    fn new(theorem: &str, seed: u64) -> Self {
        VerificationReport {
            schema: REPORT_SCHEMA,
            toolkit_version: env!("CARGO_PKG_VERSION"),
            theorem: theorem.into(),
            params: BTreeMap::new(),
            seed,
            graphs: Vec::new(),
            claims: Vec::new(),
            wall_time_ms: None,
        }
    }

    fn param(&mut self, key: &str, value: impl Display) {
        self.params.insert(key.into(), value.to_string());
    }

    fn graph(&mut self, name: &str, d: &PartialOrientation) {
        self.graphs.push(GraphRef { name: name.into(), vertices: d.n(), hash: content_hash(d) });
    }

    fn check(&mut self, claim: impl Into<String>, expected: impl Display, computed: impl Display, ok: bool) {
        self.claims.push(ClaimRow {
            claim: claim.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            reason: None,
        });
    }

    fn skip(&mut self, claim: impl Into<String>, expected: impl Display, reason: impl Into<String>) {
        self.claims.push(ClaimRow {
            claim: claim.into(),
            expected: expected.to_string(),
            computed: String::new(),
            status: Status::Skipped,
            reason: Some(reason.into()),
        });
    }

    /// Records `Err(BudgetExhausted)` as a skipped claim and passes other
    /// errors through.
    fn guard<T>(&mut self, claim: &str, expected: impl Display, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(Error::BudgetExhausted) => {
                self.skip(claim, expected, "budget exhausted");
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.status == Status::Pass)
    }

    /// 0 when every claim passes, 1 on any failure, 3 when claims were
    /// skipped for lack of budget.
    pub fn exit_code(&self) -> i32 {
        if self.claims.iter().any(|c| c.status == Status::Fail) {
            1
        } else if self.claims.iter().any(|c| c.status == Status::Skipped) {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} ({} claims)\n", self.theorem, self.claims.len());
        for c in &self.claims {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            out.push_str(&format!("  [{status}] {}: expected {}, computed {}", c.claim, c.expected, c.computed));
            if let Some(r) = &c.reason {
                out.push_str(&format!(" ({r})"));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct RecipeOptions {
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub seed: u64,
    pub budget: Option<Duration>,
    pub trials: Option<u64>,
    pub timing: bool,
}

impl RecipeOptions {
    fn budget(&self) -> Budget {
        match self.budget {
            Some(d) => Budget::wall_clock(d),
            None => Budget::unlimited(),
        }
    }
}

pub fn run_recipe(name: &str, opts: &RecipeOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = match name {
        "gap1" => gap1(opts),
        "unicolor" => unicolor(opts),
        "k1k" => k1k(opts),
        "ize" => ize(opts),
        "frakceq" => frakceq(opts),
        "ratio-a" => ratio_a(opts),
        "ratio-b" => ratio_b(opts),
        "sampler" => sampler(opts),
        _ => Err(Error::InvalidParameters(format!("unknown recipe '{name}'"))),
    }?;
    if opts.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn free(g: &Graph) -> PartialOrientation {
    PartialOrientation::unoriented(g.clone())
}

fn gap1(opts: &RecipeOptions) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("gap1", opts.seed);
    let gap = counterexample_graph();
    rep.graph("gap1", &free(&gap.graph));
    let mut budget = opts.budget();
    let psi = expected("gap1", "psi") as usize;
    match local_chromatic(&gap.graph, &mut budget) {
        Solved::Exact { value, witness } => {
            rep.check("psi(gap graph)", psi, value, value == psi);
            let ok = is_local_coloring(&gap.graph, &witness, value);
            rep.check("witness is a local coloring", format!("local {psi}-coloring"), ok, ok);
        }
        Solved::Unknown { lower, .. } => rep.skip("psi(gap graph)", psi, format!("budget exhausted with lower bound {lower}")),
    }
    let max = expected("gap1", "psi_d_max") as usize;
    let certs = gap.certificates();
    for (i, (d, c)) in certs.iter().enumerate() {
        let ok = crate::exact::verify_orientation_certificate(d, c, max)?;
        rep.check(format!("certificate {} is local on every completion", i + 1), format!("<= {max}"), ok, ok);
    }
    match directed_local_chromatic_max(&gap.graph, &MaxStrategy::Certificates(certs), &mut budget) {
        Ok(b) => {
            rep.check("certificates cover all orientations", "cover", "cover", true);
            rep.check("psi_d_max upper bound", format!("<= {max}"), b.upper, b.upper <= max);
            rep.check("psi_d of lexicographic orientation", format!(">= {max}"), b.lower, b.lower >= max);
        }
        Err(Error::CoverGap(gap)) => rep.check("certificates cover all orientations", "cover", gap, false),
        Err(Error::BudgetExhausted) => rep.skip("psi_d of lexicographic orientation", max, "budget exhausted"),
        Err(e) => return Err(e),
    }
    Ok(rep)
}

fn unicolor(opts: &RecipeOptions) -> Result<VerificationReport> {
    let (m, k) = (opts.m.unwrap_or(5), opts.k.unwrap_or(3));
    if k < 3 || m < k + 2 {
        return Err(Error::InvalidParameters(format!("unicolor needs k >= 3 and m >= k + 2, got m={m}, k={k}")));
    }
    let mut rep = VerificationReport::new("unicolor", opts.seed);
    rep.param("m", m);
    rep.param("k", k);
    let g = universal_undirected(m, k)?;
    rep.graph(&format!("u-{m}-{k}"), &free(&g));
    let claim = format!("local {k}-coloring classes of U({m},{k})");
    let found = enumerate_local_colorings(&g, k, g.n(), DEFAULT_CLASS_CAP, &mut opts.budget());
    let Some(classes) = rep.guard(&claim, 1, found)? else {
        return Ok(rep);
    };
    rep.check(&claim, 1, classes.len(), classes.len() == 1);
    let natural = natural_coloring(m, k)?.canonical();
    let ok = classes.first() == Some(&natural);
    rep.check("the class is the natural coloring", true, ok, ok);
    Ok(rep)
}

/// Natural color class `x` when `c` agrees with the natural coloring up to
/// renaming everywhere outside that class.
fn recolored_class(c: &Coloring, natural: &Coloring) -> Option<u32> {
    let classes = natural.classes();
    classes.keys().copied().find(|&x| {
        let keep: Vec<usize> = (0..c.len()).filter(|&v| natural.color(v) != x).collect();
        let restrict = |col: &Coloring| Coloring::new(keep.iter().map(|&v| col.color(v)).collect()).canonical();
        restrict(c) == restrict(natural)
    })
}

fn k1k(opts: &RecipeOptions) -> Result<VerificationReport> {
    let k = opts.k.unwrap_or(3);
    if k < 3 {
        return Err(Error::InvalidParameters(format!("k1k needs k >= 3, got {k}")));
    }
    let mut rep = VerificationReport::new("k1k", opts.seed);
    rep.param("k", k);
    let g = universal_undirected(k + 1, k)?;
    rep.graph(&format!("u-{}-{k}", k + 1), &free(&g));
    let claim = format!("local {k}-coloring classes of U({},{k})", k + 1);
    let found = enumerate_local_colorings(&g, k, g.n(), DEFAULT_CLASS_CAP, &mut opts.budget());
    let Some(classes) = rep.guard(&claim, k + 2, found)? else {
        return Ok(rep);
    };
    rep.check(&claim, k + 2, classes.len(), classes.len() == k + 2);
    let natural = natural_coloring(k + 1, k)?;
    let has_natural = classes.contains(&natural.canonical());
    rep.check("natural coloring is among them", true, has_natural, has_natural);
    let mut recolored: Vec<u32> = classes
        .iter()
        .filter(|c| c.num_colors() == k)
        .filter_map(|c| recolored_class(c, &natural))
        .collect();
    recolored.sort_unstable();
    recolored.dedup();
    rep.check(
        "distinct natural classes recolored by the proper k-colorings",
        k + 1,
        recolored.len(),
        recolored.len() == k + 1,
    );
    Ok(rep)
}

fn battery_with_v0(opts: &RecipeOptions) -> Vec<(String, Graph, Vec<usize>)> {
    frakceq_battery()
        .into_iter()
        .enumerate()
        .map(|(i, (name, g))| {
            let v0s = sample_vertices(g.n(), 3, opts.seed, i as u64);
            (name, g, v0s)
        })
        .collect()
}

fn ize(opts: &RecipeOptions) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("ize", opts.seed);
    for (name, g, v0s) in battery_with_v0(opts) {
        rep.graph(&name, &free(&g));
        for v0 in v0s {
            let cert = tight_independent_set(&g, v0)?;
            let ok = cert.tightness == Rational::one()
                && cert.a0.contains(v0)
                && is_independent(&g, &cert.a0)
                && cert.clique.total() == cert.chi_star
                && cert.clique.is_feasible(&g);
            rep.check(
                format!("{name}, v0={v0}: tight set {:?}", cert.a0.to_vec()),
                "weight 1, optimal clique",
                format!("weight {}, clique total {}", fmt_rational(&cert.tightness), fmt_rational(&cert.clique.total())),
                ok,
            );
        }
    }
    Ok(rep)
}

fn frakceq(opts: &RecipeOptions) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("frakceq", opts.seed);
    let mut battery = battery_with_v0(opts);
    let u53 = universal_undirected(5, 3)?;
    let extra = sample_vertices(u53.n(), 3, opts.seed, battery.len() as u64);
    battery.push(("u-5-3".into(), u53, extra));
    for (name, g, v0s) in battery {
        rep.graph(&name, &free(&g));
        for v0 in v0s {
            let (d, cert) = max_orientation(&g, v0, FreePolicy::Lexicographic)?;
            let r = verify_frakceq(&g, &d, &cert, LpMethod::Auto)?;
            rep.check(
                format!("{name}, v0={v0}: psi_d* = chi*"),
                fmt_rational(&r.chi_star),
                fmt_rational(&r.psi_d_star),
                r.holds(),
            );
        }
    }
    Ok(rep)
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Violated => "violated",
        Verdict::Undecided => "undecided",
    }
}

fn ratio_a(opts: &RecipeOptions) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("ratio-a", opts.seed);
    let count = opts.trials.unwrap_or(100);
    rep.param("random_digraphs", count);
    rep.param("max_vertices", 9);
    rep.param("density", "0.3");
    let mut named: Vec<(String, PartialOrientation)> =
        vec![("dcycle-3".into(), directed_cycle(3)), ("dcycle-5".into(), directed_cycle(5))];
    for i in 0..count {
        named.push((format!("random-{i}"), random_digraph(9, 0.3, opts.seed, i)));
    }
    let mut failures = Vec::new();
    for (name, d) in &named {
        let r = verify_ratio(d)?;
        if name.starts_with("dcycle") {
            rep.graph(name, d);
            rep.check(
                format!("{name}: chi* <= k^k/(k-1)^(k-1), k = psi_d* = {}", fmt_rational(&r.psi_d_star)),
                "holds",
                format!("{} (chi* = {})", verdict_name(&r.verdict), fmt_rational(&r.chi_star)),
                r.verdict == Verdict::Holds,
            );
        } else if r.verdict != Verdict::Holds {
            failures.push(format!("{name}: {}", verdict_name(&r.verdict)));
        }
    }
    rep.check(
        format!("{count} random digraphs without a violation"),
        0,
        if failures.is_empty() { "0".to_string() } else { failures.join(", ") },
        failures.is_empty(),
    );
    Ok(rep)
}

fn ratio_b(opts: &RecipeOptions) -> Result<VerificationReport> {
    let (m, k) = (opts.m.unwrap_or(5), opts.k.unwrap_or(3));
    if k < 2 || m <= k {
        return Err(Error::InvalidParameters(format!("ratio-b needs k >= 2 and m > k, got m={m}, k={k}")));
    }
    let mut rep = VerificationReport::new("ratio-b", opts.seed);
    rep.param("m", m);
    rep.param("k", k);
    let d = universal_directed(m, k)?;
    rep.graph(&format!("ud-{m}-{k}"), &d);
    let g = d.base();
    let (alpha_formula, _) = alpha_universal_directed(m, k)?;
    let (alpha, witness) = max_independent_set(g);
    rep.check(
        format!("alpha(U_d({m},{k})) = max_l (m-l) C(l,k-1)"),
        alpha_formula,
        alpha,
        alpha as u64 == alpha_formula && is_independent(g, &witness),
    );
    let n = Rational::from_integer(BigInt::from(g.n()));
    let expected_chi = &n / Rational::from_integer(BigInt::from(alpha_formula));
    let chi = fractional_chromatic(g)?.value;
    rep.check("chi* = n / alpha", fmt_rational(&expected_chi), fmt_rational(&chi), chi == expected_chi);
    let kq = int(k as i64);
    let upper = ratio_bound(&kq)?.value;
    let shrink = pow_u(&(Rational::one() - Rational::new(BigInt::one(), BigInt::from(m))), (k - 1) as u32);
    let lower = upper.scale(&shrink);
    let show = |i: &Interval| if i.is_exact() { fmt_rational(&i.lo) } else { i.to_decimal(20) };
    rep.check(
        "chi* >= (1-1/m)^(k-1) k^k/(k-1)^(k-1)",
        format!(">= {}", show(&lower)),
        fmt_rational(&chi),
        lower.hi <= chi,
    );
    rep.check("chi* <= k^k/(k-1)^(k-1)", format!("<= {}", show(&upper)), fmt_rational(&chi), chi <= upper.lo);
    let mut budget = opts.budget();
    match directed_local_chromatic(&d, &mut budget)? {
        Solved::Exact { value, .. } => rep.check(format!("psi_d(U_d({m},{k}))"), k, value, value == k),
        Solved::Unknown { .. } => rep.skip(format!("psi_d(U_d({m},{k}))"), k, "budget exhausted"),
    }
    let psi_star = psi_d_star(&d, LpMethod::Auto)?.value;
    rep.check(
        format!("psi_d*(U_d({m},{k})) <= psi_d"),
        format!("<= {k}"),
        fmt_rational(&psi_star),
        psi_star <= kq,
    );
    Ok(rep)
}

fn sampler(opts: &RecipeOptions) -> Result<VerificationReport> {
    let h = expected("sampler", "h") as usize;
    let r = expected("sampler", "r") as usize;
    let trials = opts.trials.unwrap_or(expected("sampler", "trials") as u64);
    let mut rep = VerificationReport::new("sampler", opts.seed);
    rep.param("trials", trials);
    let d = universal_directed(5, 3)?;
    rep.graph("ud-5-3", &d);
    let mc = MultiColoring::from_coloring(&natural_coloring(5, 3)?, h, 5)?;
    let gamma = Rational::new(BigInt::from(h - r), BigInt::from(h));
    rep.param("gamma", fmt_rational(&gamma));
    let cfg = SamplerConfig::new(Gamma::exact(gamma.clone())?, trials, opts.seed)?;
    let report = estimate_membership(&d, &mc, &cfg)?;
    let bound = report.bound.clone();
    let all_equal = report.exact.iter().all(|p| *p == bound);
    rep.check(
        "exact P[v in I] equals (h/r-1)^(h/r-1)/(h/r)^(h/r) at every vertex",
        fmt_rational(&bound.lo),
        fmt_rational(&report.exact[0].lo),
        all_equal && bound.is_exact(),
    );
    rep.check(
        "empirical frequencies within 4 standard errors",
        "0 outliers",
        format!("{} outliers", report.outliers.len()),
        report.outliers.is_empty(),
    );
    rep.check("every sampled set is independent", true, report.all_independent, report.all_independent);
    let s = Sampler::new(&d, &mc, &cfg.gamma)?;
    let keep = Rational::one() - &gamma;
    let mut mismatches = 0;
    for v in 0..d.n() {
        let oracle: Rational = (0u64..1 << mc.m)
            .filter(|&kept| s.induced_set(kept).contains(v))
            .map(|kept| pow_u(&keep, kept.count_ones()) * pow_u(&gamma, mc.m as u32 - kept.count_ones()))
            .sum();
        if Interval::point(oracle) != report.exact[v] {
            mismatches += 1;
        }
    }
    rep.check("closed form equals enumeration over kept-color sets", 0, mismatches, mismatches == 0);
    Ok(rep)
}
