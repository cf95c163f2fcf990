use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use locochrome::battery::named_graph;
use locochrome::coloring::directed_locality;
use locochrome::exact::{
    chromatic, directed_local_chromatic, directed_local_chromatic_max, enumerate_local_colorings, local_chromatic,
    MaxStrategy, Solved, DEFAULT_CLASS_CAP, EXHAUSTIVE_EDGE_LIMIT,
};
use locochrome::fractional::{alpha_universal_directed, fractional_chromatic_with, psi_d_star, verify_ratio, LpMethod, Verdict};
use locochrome::independent::max_independent_set;
use locochrome::io::{content_hash, read_coloring, read_graph, read_multicoloring, write_coloring, write_fractional, write_graph};
use locochrome::orientation::{max_orientation, FreePolicy};
use locochrome::rational::{decimal_string, fmt_rational, parse_rational, Interval};
use locochrome::sampler::{chi_upper_bound_from_sampler, estimate_membership, optimal_gamma, Gamma, SamplerConfig};
use locochrome::universal::{counterexample_graph, universal_directed, universal_multi, universal_undirected};
use locochrome::verify::{run_recipe, RecipeOptions, RECIPES};
use locochrome::{Budget, Coloring, Error, Graph, MultiColoring, OutMode, PartialOrientation};

const COMPUTE_SCHEMA: &str = "locochrome.compute/1";

#[derive(Parser)]
#[command(name = "locochrome", version, about = "Exact local chromatic numbers and their fractional relaxations")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for randomized recipes and sampling.
    #[arg(long, env = "LOCOCHROME_SEED", default_value_t = 0, global = true)]
    seed: u64,
    /// Wall-clock budget for exact searches, in milliseconds.
    #[arg(long, env = "LOCOCHROME_BUDGET_MS", global = true)]
    budget_ms: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Parameter {
    Psi,
    Psid,
    Chi,
    Chistar,
    Psidstar,
    Alpha,
    Psidmax,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Enumerate,
    ColumnGeneration,
}

impl From<Method> for LpMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Auto => LpMethod::Auto,
            Method::Enumerate => LpMethod::Enumerate,
            Method::ColumnGeneration => LpMethod::ColumnGeneration,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Lex,
    Free,
}

#[derive(clap::Args)]
struct ComputeArgs {
    /// Graph file, or a name such as petersen, gap1, u-5-3, ud-5-3.
    graph: String,
    /// Write the witness (coloring, independent set or fractional coloring) here.
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Orient free edges from lower to higher index before directed solves.
    #[arg(long)]
    lex: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print a graph file for a family: u M K, ud M K, udm M H R, gap1, cycle N, complete N, petersen.
    /// The file is printed as is, whatever the output format.
    Gen {
        family: String,
        params: Vec<usize>,
    },
    /// Compute a parameter of a graph.
    Compute {
        #[arg(value_enum)]
        parameter: Parameter,
        #[command(flatten)]
        args: ComputeArgs,
    },
    /// Run a theorem-verification recipe.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(RECIPES))]
        recipe: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Sample or random-graph count, where the recipe uses one.
        #[arg(long)]
        trials: Option<u64>,
        /// Include wall time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Local chromatic number.
    Psi(ComputeArgs),
    /// Directed local chromatic number.
    Psid(ComputeArgs),
    /// Chromatic number.
    Chi(ComputeArgs),
    /// Fractional chromatic number.
    Chistar(ComputeArgs),
    /// Fractional directed local chromatic number.
    Psidstar(ComputeArgs),
    /// All local k-colorings up to renaming.
    EnumLocal {
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_colors: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CLASS_CAP)]
        cap: usize,
    },
    /// Check that a coloring is a local k-coloring of every completion of a partial orientation.
    VerifyCert {
        graph: String,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Check chi* <= k^k/(k-1)^(k-1) with k = psi_d* on a digraph.
    VerifyRatio {
        graph: String,
        #[arg(long)]
        lex: bool,
    },
    /// Independence number of U_d(m,k) against its closed form.
    AlphaUd { m: usize, k: usize },
    /// Orientation attaining psi_d* = chi*, with its tight-set certificate.
    OrientMax {
        graph: String,
        #[arg(long, default_value_t = 0)]
        v0: usize,
        #[arg(long, value_enum, default_value_t = Policy::Lex)]
        policy: Policy,
        /// Write the oriented graph file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample random independent sets from an h-local multi-coloring.
    Sample {
        #[arg(long)]
        graph: String,
        /// Multi-coloring file, or a plain coloring together with --h.
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        h: Option<usize>,
        /// Drop probability as a fraction, or `auto` for (1-r/h)^(1/r).
        #[arg(long, default_value = "auto")]
        gamma: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExhausted | Error::LimitExceeded(_) | Error::NoConvergence(_) => 3,
            Error::Internal(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Outcome = Result<(Value, String, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((json, text, code)) => {
            let out = match (cli.format, &cli.command) {
                (_, Command::Gen { .. }) | (Format::Text, _) => text,
                (Format::Json, _) => format!("{}\n", serde_json::to_string_pretty(&json).expect("json")),
            };
            // A closed pipe downstream is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn budget(cli: &Cli) -> Budget {
    match cli.budget_ms {
        Some(ms) => Budget::wall_clock(Duration::from_millis(ms)),
        None => Budget::unlimited(),
    }
}

/// A path that exists is read as a graph file; anything else is a name.
fn load_graph(arg: &str) -> Result<PartialOrientation, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{arg}: {e}")))?;
        return read_graph(&text).map_err(|e| usage(format!("{arg}: {e}")));
    }
    Ok(named_graph(arg)?)
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn graph_ref(name: &str, d: &PartialOrientation) -> Value {
    json!({ "name": name, "vertices": d.n(), "hash": content_hash(d) })
}

fn interval_json(i: &Interval) -> Value {
    if i.is_exact() {
        json!(fmt_rational(&i.lo))
    } else {
        json!({ "lo": decimal_string(&i.lo, 50), "hi": decimal_string(&i.hi, 50) })
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Gen { family, params } => generate(family, params),
        Command::Compute { parameter, args } => compute(cli, *parameter, args),
        Command::Psi(a) => compute(cli, Parameter::Psi, a),
        Command::Psid(a) => compute(cli, Parameter::Psid, a),
        Command::Chi(a) => compute(cli, Parameter::Chi, a),
        Command::Chistar(a) => compute(cli, Parameter::Chistar, a),
        Command::Psidstar(a) => compute(cli, Parameter::Psidstar, a),
        Command::Verify { recipe, m, k, trials, timing } => {
            let opts = RecipeOptions {
                m: *m,
                k: *k,
                seed: cli.seed,
                budget: cli.budget_ms.map(Duration::from_millis),
                trials: *trials,
                timing: *timing,
            };
            let report = run_recipe(recipe, &opts)?;
            let json: Value = serde_json::from_str(&report.to_json()).expect("report json");
            Ok((json, report.to_text(), report.exit_code() as u8))
        }
        Command::EnumLocal { graph, k, max_colors, cap } => {
            let d = load_graph(graph)?;
            let g = d.base();
            let classes = enumerate_local_colorings(g, *k, max_colors.unwrap_or(g.n()), *cap, &mut budget(cli))?;
            let list: Vec<&[u32]> = classes.iter().map(Coloring::as_slice).collect();
            let json = json!({
                "schema": COMPUTE_SCHEMA,
                "parameter": "local_colorings",
                "graph": graph_ref(graph, &d),
                "k": k,
                "count": classes.len(),
                "classes": list,
            });
            Ok((json, format!("{}\n", classes.len()), 0))
        }
        Command::VerifyCert { graph, coloring, k } => {
            let d = load_graph(graph)?;
            let c = read_coloring(&read_file(coloring)?, d.n())?;
            let report = directed_locality(&d, &c, OutMode::Pessimistic)?;
            let pass = report.max <= *k;
            let json = json!({
                "schema": COMPUTE_SCHEMA,
                "parameter": "certificate",
                "graph": graph_ref(graph, &d),
                "k": k,
                "max_colors_seen": report.max,
                "free_edges": d.free_edges().len(),
                "pass": pass,
            });
            Ok((json, format!("{}\n", if pass { "pass" } else { "fail" }), if pass { 0 } else { 1 }))
        }
        Command::VerifyRatio { graph, lex } => {
            let d = oriented(load_graph(graph)?, *lex)?;
            let r = verify_ratio(&d)?;
            let (verdict, code) = match r.verdict {
                Verdict::Holds => ("holds", 0),
                Verdict::Violated => ("violated", 1),
                Verdict::Undecided => ("undecided", 3),
            };
            let json = json!({
                "schema": COMPUTE_SCHEMA,
                "parameter": "ratio",
                "graph": graph_ref(graph, &d),
                "psi_d_star": fmt_rational(&r.psi_d_star),
                "chi_star": fmt_rational(&r.chi_star),
                "bound": interval_json(&r.bound.value),
                "slack": interval_json(&r.slack),
                "verdict": verdict,
            });
            let text = format!("chi* = {} <= {} : {verdict}\n", fmt_rational(&r.chi_star), r.bound.value);
            Ok((json, text, code))
        }
        Command::AlphaUd { m, k } => {
            let (formula, l) = alpha_universal_directed(*m, *k)?;
            let d = universal_directed(*m, *k)?;
            let (alpha, witness) = max_independent_set(d.base());
            let pass = alpha as u64 == formula;
            let json = json!({
                "schema": COMPUTE_SCHEMA,
                "parameter": "alpha",
                "graph": graph_ref(&format!("ud-{m}-{k}"), &d),
                "alpha": alpha,
                "formula": formula,
                "argmax_l": l,
                "witness": witness.to_vec(),
                "pass": pass,
            });
            Ok((json, format!("{alpha}\n"), if pass { 0 } else { 1 }))
        }
        Command::OrientMax { graph, v0, policy, out } => {
            let d = load_graph(graph)?;
            let policy = match policy {
                Policy::Lex => FreePolicy::Lexicographic,
                Policy::Free => FreePolicy::LeaveFree,
            };
            let (oriented, cert) = max_orientation(d.base(), *v0, policy)?;
            let file = write_graph(&oriented);
            if let Some(path) = out {
                write_file(path, &file)?;
            }
            let weights: Vec<String> = cert.clique.weights.iter().map(fmt_rational).collect();
            let json = json!({
                "schema": COMPUTE_SCHEMA,
                "parameter": "orient_max",
                "graph": graph_ref(graph, &d),
                "oriented_hash": content_hash(&oriented),
                "certificate": {
                    "v0": cert.v0,
                    "a0": cert.a0.to_vec(),
                    "clique": weights,
                    "chi_star": fmt_rational(&cert.chi_star),
                    "tightness": fmt_rational(&cert.tightness),
                },
                "oriented_graph": file,
            });
            let a0: Vec<String> = cert.a0.iter().map(|v| v.to_string()).collect();
            let text = format!(
                "{file}c v0 {}\nc a0 {}\nc chi* {}\nc tightness {}\n",
                cert.v0,
                a0.join(" "),
                fmt_rational(&cert.chi_star),
                fmt_rational(&cert.tightness)
            );
            Ok((json, text, 0))
        }
        Command::Sample { graph, coloring, h, gamma, trials } => sample(cli, graph, coloring, *h, gamma, *trials),
    }
}

fn generate(family: &str, params: &[usize]) -> Outcome {
    let need = |count: usize| -> Result<(), Failure> {
        if params.len() != count {
            return Err(usage(format!("{family} takes {count} parameters, got {}", params.len())));
        }
        Ok(())
    };
    let d = match family {
        "u" => {
            need(2)?;
            PartialOrientation::unoriented(universal_undirected(params[0], params[1])?)
        }
        "ud" => {
            need(2)?;
            universal_directed(params[0], params[1])?
        }
        "udm" => {
            need(3)?;
            universal_multi(params[0], params[1], params[2])?
        }
        "gap1" => {
            need(0)?;
            PartialOrientation::unoriented(counterexample_graph().graph)
        }
        "cycle" | "complete" => {
            need(1)?;
            if family == "cycle" && params[0] < 3 {
                return Err(usage("a cycle needs at least 3 vertices"));
            }
            let g = if family == "cycle" { Graph::cycle(params[0]) } else { Graph::complete(params[0]) };
            PartialOrientation::unoriented(g)
        }
        "petersen" => {
            need(0)?;
            PartialOrientation::unoriented(Graph::petersen())
        }
        _ => return Err(usage(format!("unknown family '{family}'"))),
    };
    let text = write_graph(&d);
    let json = json!({ "graph": graph_ref(family, &d), "file": text });
    Ok((json, text, 0))
}

fn oriented(d: PartialOrientation, lex: bool) -> Result<PartialOrientation, Failure> {
    if d.is_fully_forced() {
        return Ok(d);
    }
    if !lex {
        return Err(usage("graph has free edges; pass --lex to orient them from lower to higher index"));
    }
    let mut d = d;
    d.complete_lexicographic();
    Ok(d)
}

fn solved_json(s: &Solved) -> (Value, String, u8) {
    match s {
        Solved::Exact { value, .. } => (json!({ "status": "exact", "value": value }), format!("{value}\n"), 0),
        Solved::Unknown { lower, upper, .. } => (
            json!({ "status": "unknown", "lower": lower, "upper": upper }),
            format!("unknown: >= {lower}{}\n", upper.map(|u| format!(", <= {u}")).unwrap_or_default()),
            3,
        ),
    }
}

fn compute(cli: &Cli, parameter: Parameter, args: &ComputeArgs) -> Outcome {
    let d = load_graph(&args.graph)?;
    let g = d.base();
    let mut budget = budget(cli);
    let (mut result, text, code, witness): (Value, String, u8, Option<String>) = match parameter {
        Parameter::Psi | Parameter::Chi | Parameter::Psid => {
            let solved = match parameter {
                Parameter::Psi => local_chromatic(g, &mut budget),
                Parameter::Chi => chromatic(g, &mut budget),
                _ => directed_local_chromatic(&oriented(d.clone(), args.lex)?, &mut budget)?,
            };
            let (v, t, c) = solved_json(&solved);
            (v, t, c, solved.witness().map(write_coloring))
        }
        Parameter::Chistar => {
            let fc = fractional_chromatic_with(g, args.method.into())?;
            let value = fmt_rational(&fc.value);
            let clique: Vec<String> = fc.dual.weights.iter().map(fmt_rational).collect();
            let json = json!({ "status": "exact", "value": value, "fractional_clique": clique, "columns": fc.columns });
            (json, format!("{value}\n"), 0, Some(write_fractional(&fc.primal)))
        }
        Parameter::Psidstar => {
            let r = psi_d_star(&oriented(d.clone(), args.lex)?, args.method.into())?;
            let value = fmt_rational(&r.value);
            let json = json!({ "status": "exact", "value": value, "columns": r.columns });
            (json, format!("{value}\n"), 0, Some(write_fractional(&r.primal)))
        }
        Parameter::Alpha => {
            let (alpha, set) = max_independent_set(g);
            let line: Vec<String> = set.iter().map(|v| v.to_string()).collect();
            (json!({ "status": "exact", "value": alpha }), format!("{alpha}\n"), 0, Some(format!("{}\n", line.join(" "))))
        }
        Parameter::Psidmax => {
            let strategy = if g.edge_count() <= EXHAUSTIVE_EDGE_LIMIT {
                MaxStrategy::Exhaustive
            } else if *g == counterexample_graph().graph {
                MaxStrategy::Certificates(counterexample_graph().certificates())
            } else {
                return Err(usage(format!(
                    "psidmax needs at most {EXHAUSTIVE_EDGE_LIMIT} edges unless certificates are known for the graph"
                )));
            };
            let b = directed_local_chromatic_max(g, &strategy, &mut budget)?;
            let (json, text) = match b.exact() {
                Some(v) => (json!({ "status": "exact", "value": v }), format!("{v}\n")),
                None => (
                    json!({ "status": "bounds", "lower": b.lower, "upper": b.upper }),
                    format!(">= {}, <= {}\n", b.lower, b.upper),
                ),
            };
            (json, text, 0, None)
        }
    };
    if let (Some(path), Some(w)) = (&args.witness, witness) {
        write_file(path, &w)?;
        result["witness_path"] = json!(path.display().to_string());
    }
    let name = match parameter {
        Parameter::Psi => "psi",
        Parameter::Psid => "psid",
        Parameter::Chi => "chi",
        Parameter::Chistar => "chistar",
        Parameter::Psidstar => "psidstar",
        Parameter::Alpha => "alpha",
        Parameter::Psidmax => "psidmax",
    };
    result["schema"] = json!(COMPUTE_SCHEMA);
    result["parameter"] = json!(name);
    result["graph"] = graph_ref(&args.graph, &d);
    Ok((result, text, code))
}

fn sample(cli: &Cli, graph: &str, coloring: &str, h: Option<usize>, gamma: &str, trials: u64) -> Outcome {
    let d = load_graph(graph)?;
    let text = read_file(Path::new(coloring))?;
    let mc = if text.lines().any(|l| l.trim_start().starts_with("p ")) {
        read_multicoloring(&text)?
    } else {
        let c = read_coloring(&text, d.n())?;
        let h = h.ok_or_else(|| usage("a plain coloring needs --h"))?;
        // Colors are renamed to 1..=m in increasing order.
        let palette: Vec<u32> = c.as_slice().iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let renamed = Coloring::new(c.as_slice().iter().map(|x| palette.binary_search(x).unwrap() as u32 + 1).collect());
        MultiColoring::from_coloring(&renamed, h, palette.len())?
    };
    let gamma = if gamma == "auto" {
        optimal_gamma(mc.h, mc.r)?
    } else {
        Gamma::exact(parse_rational(gamma)?)?
    };
    let cfg = SamplerConfig::new(gamma.clone(), trials, cli.seed)?;
    let report = estimate_membership(&d, &mc, &cfg)?;
    let chi_bound = chi_upper_bound_from_sampler(&d, &mc, &gamma)?;
    let vertices: Vec<Value> = (0..d.n())
        .map(|v| {
            json!({
                "vertex": v,
                "exact": interval_json(&report.exact[v]),
                "count": report.counts[v],
                "empirical": report.empirical[v],
                "standard_error": report.standard_error[v],
            })
        })
        .collect();
    let pass = report.passes();
    let json = json!({
        "schema": COMPUTE_SCHEMA,
        "parameter": "membership",
        "graph": graph_ref(graph, &d),
        "gamma": interval_json(&gamma.interval()),
        "trials": trials,
        "seed": cli.seed,
        "bound": interval_json(&report.bound),
        "chi_star_upper_bound": interval_json(&chi_bound),
        "all_independent": report.all_independent,
        "bound_violations": report.bound_violations,
        "outliers": report.outliers,
        "vertices": vertices,
        "pass": pass,
    });
    let text = format!(
        "min exact {} bound {} chi* <= {} : {}\n",
        report.exact.iter().map(|i| i.to_f64()).fold(f64::INFINITY, f64::min),
        report.bound,
        chi_bound,
        if pass { "pass" } else { "fail" }
    );
    Ok((json, text, if pass { 0 } else { 1 }))
}
