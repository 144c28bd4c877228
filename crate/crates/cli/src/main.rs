use std::fmt;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kmdc_core::orbit::Reason;
use kmdc_core::tensor::center_generators_amputated;
use kmdc_core::weyl::{format_word, word_to_json};
use kmdc_core::{
    bfs, center_generators, character_expansion, compare_with_orbit, degree_component, denominator_expansion,
    descend, invariant_suite, membership, serre_generators, validate, verify_gl_sq_decompositions, FormalSum,
    Graph, GraphSpec, Membership, OrbitState, Style, TruncatedStar, VertexId, Weight,
};

/// Weyl orbits, X-reduced words, character expansions and tensor data for
/// Kac-Moody algebras interpolated over decorated graphs.
#[derive(Parser)]
#[command(name = "kmdc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    /// `(a_v; leg; leg; …)` with legs read away from the vertex.
    #[value(name = "example55", alias = "compact")]
    Compact,
    Plain,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph file and report every problem.
    Validate { graph: String },
    /// Orbit states of `ε_v` level by level.
    Orbit {
        graph: String,
        vertex: String,
        #[arg(long)]
        max_level: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Run the algorithm of descent on a state (file or inline JSON).
    Descend {
        graph: String,
        state: String,
        #[command(flatten)]
        out: Output,
    },
    /// Decide whether a state lies in the orbit of `ε_v`.
    Member {
        graph: String,
        state: String,
        #[command(flatten)]
        out: Output,
    },
    /// The X-reduced word of an orbit state.
    Word {
        graph: String,
        state: String,
        #[command(flatten)]
        out: Output,
    },
    /// Kac-Weyl expansion of the character of `L(φ)`.
    Character {
        graph: String,
        /// Weight as a JSON object of coordinate keys (file or inline).
        #[arg(long)]
        phi: String,
        #[arg(long)]
        cutoff: usize,
        #[arg(long, value_enum, default_value = "example55")]
        style: StyleArg,
        /// Also print `a_v'`.
        #[arg(long)]
        with_prime: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Expansion of `1/ch(M(0))`.
    Denominator {
        graph: String,
        #[arg(long)]
        cutoff: usize,
        #[arg(long, value_enum, default_value = "example55")]
        style: StyleArg,
        #[arg(long)]
        with_prime: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Degree-one components, or the Serre ideal generators.
    Tensor {
        graph: String,
        #[arg(long, conflicts_with = "degree")]
        serre: bool,
        #[arg(long)]
        degree: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Maps from the unit generating the center.
    Center {
        graph: String,
        /// Leaf vertices to amputate first.
        #[arg(long)]
        amputate: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Brute-force and invariant checks. Runs a small default set when no
    /// check is selected.
    Verify {
        /// Legs, leg length and maximal length of the matrix oracle.
        #[arg(long, num_args = 3, value_names = ["N", "M", "LEN"])]
        oracle: Option<Vec<usize>>,
        /// Orbit level for the invariant suite on the three- and four-leg
        /// stars.
        #[arg(long)]
        invariants: Option<usize>,
        /// Checks the `GL_n` square decompositions for `4 ≤ n ≤ NMAX`.
        #[arg(long, value_name = "NMAX")]
        gl_dims: Option<usize>,
        /// Element cap for the oracle.
        #[arg(long, default_value_t = 5_000_000)]
        cap: usize,
        #[command(flatten)]
        out: Output,
    },
}

/// A check ran and failed; exits with status 2.
#[derive(Debug)]
struct CheckFailed(String);

impl fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<CheckFailed>() => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_text(arg: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(arg)).with_context(|| format!("cannot read {arg}"))
}

fn load_graph(path: &str) -> Result<Graph> {
    Graph::from_json(&read_text(path)?).with_context(|| format!("invalid graph {path}"))
}

/// Inline JSON if the argument looks like it, a file path otherwise.
fn load_json(arg: &str) -> Result<Value> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        read_text(arg)?
    };
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {arg}"))
}

fn load_state(arg: &str) -> Result<OrbitState> {
    OrbitState::from_json(&load_json(arg)?).with_context(|| format!("invalid state {arg}"))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn style(s: StyleArg, with_prime: bool) -> Style {
    match s {
        StyleArg::Compact => Style::Compact { with_prime },
        StyleArg::Plain => Style::Plain,
    }
}

fn reason_name(r: &Reason) -> &'static str {
    match r {
        Reason::Conditions(_) => "Conditions",
        Reason::NegativeEntry => "NegativeEntry",
        Reason::Stuck => "Stuck",
        Reason::OutsideRootCone => "OutsideRootCone",
        Reason::NotReached => "NotReached",
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Validate { graph } => {
            let spec: GraphSpec =
                serde_json::from_str(&read_text(&graph)?).with_context(|| format!("malformed graph {graph}"))?;
            if let Err(errors) = validate(&spec) {
                for e in &errors {
                    println!("{e}");
                }
                bail!("{graph}: {} problem(s)", errors.len());
            }
            println!("ok: {} vertices, {} edges", spec.vertices.len(), spec.edges.len());
        }
        Command::Orbit {
            graph,
            vertex,
            max_level,
            out,
        } => {
            let g = load_graph(&graph)?;
            let sg = bfs(&g, &VertexId::new(vertex), max_level)?;
            if out.json {
                let states: Vec<Value> = sg
                    .states
                    .iter()
                    .zip(&sg.levels)
                    .map(|(s, l)| json!({"level": l, "state": s.to_json()}))
                    .collect();
                let edges: Vec<Value> = sg
                    .edges
                    .iter()
                    .map(|e| json!({"lower": e.lower, "upper": e.upper, "generator": e.generator.to_string()}))
                    .collect();
                print_json(&json!({"vertex": sg.vertex.0, "counts": sg.counts(), "states": states, "edges": edges}));
            } else {
                for (l, states) in sg.by_level().iter().enumerate() {
                    println!("level {} ({} states)", l + 1, states.len());
                    for s in states {
                        println!("  {s}");
                    }
                }
            }
        }
        Command::Descend { graph, state, out } => {
            let g = load_graph(&graph)?;
            let s = load_state(&state)?;
            let d = match descend(&g, &s)? {
                Ok(d) => d,
                Err(n) => bail!("not in the orbit: {n}"),
            };
            if out.json {
                print_json(&json!({
                    "start": s.to_json(),
                    "steps": d.word.iter().zip(&d.trace).map(|(g, t)| json!({"generator": g.to_string(), "state": t.to_json()})).collect::<Vec<_>>(),
                    "word": word_to_json(&d.word),
                    "xreduced": word_to_json(&d.xreduced()),
                    "level": d.level(),
                }));
            } else {
                println!("start {s}");
                for (gen, t) in d.word.iter().zip(&d.trace) {
                    println!("{gen} -> {t}");
                }
                println!("steps: {}", d.word.len());
                println!("x-reduced word: {}", format_word(&d.xreduced()));
                println!("level: {}", d.level());
            }
        }
        Command::Member { graph, state, out } => {
            let g = load_graph(&graph)?;
            let s = load_state(&state)?;
            match membership(&g, &s)? {
                Membership::InOrbit(word) => {
                    let x: Vec<_> = word.iter().rev().cloned().collect();
                    if out.json {
                        print_json(&json!({"member": true, "xreduced": word_to_json(&x), "level": x.len() + 1}));
                    } else {
                        println!("InOrbit level {} word {}", x.len() + 1, format_word(&x));
                    }
                }
                Membership::NotInOrbit(n) => {
                    if out.json {
                        print_json(&json!({
                            "member": false,
                            "reason": reason_name(&n.reason),
                            "witness": n.witness.to_json(),
                            "steps": word_to_json(&n.steps),
                        }));
                    } else {
                        println!("NotInOrbit: {n}");
                        println!("witness {}", n.witness);
                    }
                }
            }
        }
        Command::Word { graph, state, out } => {
            let g = load_graph(&graph)?;
            let s = load_state(&state)?;
            let d = match descend(&g, &s)? {
                Ok(d) => d,
                Err(n) => bail!("not in the orbit: {n}"),
            };
            if out.json {
                print_json(&word_to_json(&d.xreduced()));
            } else {
                println!("{}", format_word(&d.xreduced()));
            }
        }
        Command::Character {
            graph,
            phi,
            cutoff,
            style: st,
            with_prime,
            out,
        } => {
            let g = load_graph(&graph)?;
            let w = Weight::from_json(&load_json(&phi)?).with_context(|| format!("invalid weight {phi}"))?;
            let e = character_expansion(&g, &w, cutoff)?;
            if out.json {
                print_json(&json!({"complete": e.complete, "terms": e.to_json()}));
            } else {
                print!("{}", e.render(&g, style(st, with_prime)));
            }
        }
        Command::Denominator {
            graph,
            cutoff,
            style: st,
            with_prime,
            out,
        } => {
            let g = load_graph(&graph)?;
            let e = denominator_expansion(&g, cutoff)?;
            if out.json {
                print_json(&json!({"complete": e.complete, "terms": e.to_json()}));
            } else {
                print!("{}", e.render(&g, style(st, with_prime)));
            }
        }
        Command::Tensor {
            graph,
            serre,
            degree,
            out,
        } => {
            let g = load_graph(&graph)?;
            let sum = if serre {
                serre_generators(&g)?
            } else {
                let vertices = match degree {
                    Some(v) => vec![VertexId::new(v)],
                    None => g.vertices().to_vec(),
                };
                let mut s = FormalSum::new();
                for v in &vertices {
                    s.push(degree_component(&g, v)?);
                }
                s
            };
            if out.json {
                print_json(&sum.to_json());
            } else {
                println!("{sum}");
            }
        }
        Command::Center { graph, amputate, out } => {
            let g = load_graph(&graph)?;
            let maps = if amputate.is_empty() {
                center_generators(&g)
            } else {
                let leaves: Vec<VertexId> = amputate.into_iter().map(VertexId::new).collect();
                center_generators_amputated(&g, &leaves)?
            };
            if out.json {
                print_json(&Value::Array(maps.iter().map(|m| m.to_json()).collect()));
            } else {
                for m in &maps {
                    println!("{m}");
                }
            }
        }
        Command::Verify {
            oracle,
            invariants,
            gl_dims,
            cap,
            out,
        } => verify(oracle, invariants, gl_dims, cap, out.json)?,
    }
    Ok(())
}

fn verify(oracle: Option<Vec<usize>>, invariants: Option<usize>, gl_dims: Option<usize>, cap: usize, as_json: bool) -> Result<()> {
    let (oracle, invariants, gl_dims) = if oracle.is_none() && invariants.is_none() && gl_dims.is_none() {
        (Some(vec![3, 3, 6]), Some(6), Some(6))
    } else {
        (oracle, invariants, gl_dims)
    };
    let mut report = serde_json::Map::new();
    let mut failed = Vec::new();
    if let Some(o) = oracle {
        let start = Instant::now();
        let t = TruncatedStar::new(o[0], o[1])?;
        let r = compare_with_orbit(&t, o[2], cap)?;
        eprintln!("oracle: {:.2?}", start.elapsed());
        if !as_json {
            println!("oracle N={} M={} length ≤ {}", o[0], o[1], o[2]);
            println!("  x-reduced per length: {:?}", r.xreduced);
            println!("  orbit states per level: {:?}", r.orbit_states);
            println!("  elements per length: {:?}", r.elements);
            println!("  violations: {}, mismatches: {}", r.violations(), r.mismatches.len());
            for m in &r.mismatches {
                println!("  {m}");
            }
        }
        if !r.holds() {
            failed.push("oracle");
        }
        report.insert("oracle".into(), r.to_json());
    }
    if let Some(level) = invariants {
        let mut all = Vec::new();
        for legs in [3, 4] {
            let start = Instant::now();
            let r = invariant_suite(legs, level)?;
            eprintln!("invariants N={legs}: {:.2?}", start.elapsed());
            if !as_json {
                println!(
                    "invariants N={legs} level ≤ {level}: {} states, {} dot pairs, {} oracle words, {} violations",
                    r.states,
                    r.dot_pairs,
                    r.oracle_words,
                    r.violations()
                );
            }
            if !r.holds() {
                failed.push("invariants");
            }
            all.push(r.to_json());
        }
        report.insert("invariants".into(), Value::Array(all));
    }
    if let Some(nmax) = gl_dims {
        let mut all = Vec::new();
        for n in 4..=nmax {
            let r = verify_gl_sq_decompositions(n)?;
            if !as_json {
                println!("{r}");
            }
            if !r.holds() {
                failed.push("gl-dims");
            }
            all.push(json!({
                "n": n,
                "lambda2": r.lambda2_constituents.to_string(),
                "lambda2_expected": r.lambda2_expected.to_string(),
                "sym2": r.sym2_constituents.to_string(),
                "sym2_expected": r.sym2_expected.to_string(),
                "holds": r.holds(),
            }));
        }
        report.insert("gl_dims".into(), Value::Array(all));
    }
    if as_json {
        print_json(&Value::Object(report));
    }
    if !failed.is_empty() {
        failed.dedup();
        return Err(CheckFailed(format!("failed: {}", failed.join(", "))).into());
    }
    Ok(())
}
