use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use graphflow::cocycle::{delta_matrix_at, q};
use graphflow::graph::examples;
use graphflow::integrator::{
    a_gamma_mc, linking_integral, order_two_cocycle, sln_integral, v2_breakdown,
};
use graphflow::knot::{
    a2_oracle, bundled_json, casson_invariant, conway_polynomial, project_to_diagram,
    DEFAULT_DIRECTIONS,
};
use graphflow::{
    delta_sum, enumerate, kernel_basis, verify_cocycle, DecoratedGraph, Flavor, GraphSum,
    KnotCurve, Limits,
};
use serde_json::{json, Map, Value};

use crate::cache::digest;
use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 42;

/// A command reduced to the inputs that determine its output, plus the
/// deferred computation.
pub struct Job {
    pub op: &'static str,
    pub params: Value,
    pub run: Box<dyn FnOnce() -> Result<Map<String, Value>, CliError>>,
}

#[derive(Debug, Subcommand)]
pub enum GraphsCommand {
    /// List the nonvanishing canonical graphs of a grade.
    Enumerate {
        #[arg(long)]
        flavor: Flavor,
        #[arg(long)]
        ord: i64,
        #[arg(long, default_value_t = 0)]
        deg: i64,
        /// Include disconnected graphs.
        #[arg(long)]
        disconnected: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Apply the coboundary to a graph or graph sum.
    Delta {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Kernel of the coboundary matrix on connected graphs.
    Cocycles {
        #[arg(long)]
        flavor: Flavor,
        #[arg(long)]
        ord: i64,
        #[arg(long, default_value_t = 0)]
        deg: i64,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long, default_value_t = Limits::default().max_vertices)]
    max_vertices: usize,
    #[arg(long, default_value_t = Limits::default().max_edges)]
    max_edges: usize,
    #[arg(long, default_value_t = Limits::default().max_order)]
    max_order: i64,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_vertices: self.max_vertices,
            max_edges: self.max_edges,
            max_order: self.max_order,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GraphInput {
    /// Graph file: text form, a graph JSON object or a graph-sum JSON array.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// A named reference graph such as `knot_tripod`.
    #[arg(long)]
    example: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum KnotCommand {
    /// Self-linking (writhe) integral by quadrature.
    Sln {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// Casson invariant from projections of a curve, or from a Gauss diagram.
    A2 {
        #[arg(long, required_unless_present = "diagram", conflicts_with = "diagram")]
        curve: Option<String>,
        #[arg(long)]
        diagram: Option<PathBuf>,
        /// Projection direction `x,y,z`; repeatable.
        #[arg(long = "direction", value_parser = parse_direction)]
        directions: Vec<[f64; 3]>,
    },
    /// Order-two invariant by Monte Carlo, term by term.
    V2 {
        #[arg(long)]
        curve: String,
        /// Samples per term; accepts `1e7`.
        #[arg(long, default_value = "1e6", value_parser = parse_count)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Gauss linking integral of two curves.
    Lk {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        other: String,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// Monte Carlo integral of a single knot graph.
    AGamma {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        curve: String,
        #[arg(long, default_value = "1e6", value_parser = parse_count)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// A positive integer, in plain or scientific notation.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.replace('_', "");
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !(x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= 9.007_199_254_740_992e15) {
        return Err(format!("'{s}' is not a whole number of samples"));
    }
    Ok(x as u64)
}

fn parse_direction(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad component '{p}'"))
        })
        .collect::<Result<_, _>>()?;
    <[f64; 3]>::try_from(parts).map_err(|_| "expected three comma-separated numbers".to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Curve from a file, or a shipped curve by name (with or without `.json`).
fn load_curve(source: &str) -> Result<(KnotCurve, String), CliError> {
    let path = Path::new(source);
    let text = if path.exists() {
        read(path)?
    } else {
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(source);
        match bundled_json(name) {
            Some(t) => t.to_string(),
            None => {
                return Err(CliError::Io(format!(
                    "{source}: no such file or shipped curve"
                )))
            }
        }
    };
    let k = KnotCurve::from_json(&text)?;
    let hash = digest(k.to_json().as_bytes());
    Ok((k, hash))
}

fn example(name: &str) -> Option<DecoratedGraph> {
    Some(match name {
        "theta" => examples::theta(),
        "manifold_k4" => examples::manifold_k4(),
        "manifold_double_square" => examples::manifold_double_square(),
        "manifold_contracted" => examples::manifold_contracted(),
        "knot_theta" => examples::knot_theta(),
        "knot_chords" => examples::knot_chords(),
        "knot_tripod" => examples::knot_tripod(),
        "knot_bubble" => examples::knot_bubble(),
        "knot_fork" => examples::knot_fork(),
        "knot_fork_bubble" => examples::knot_fork_bubble(),
        _ => return None,
    })
}

enum GraphValue {
    Single(DecoratedGraph),
    Sum(GraphSum),
}

fn load_graph(input: &GraphInput) -> Result<GraphValue, CliError> {
    if let Some(name) = &input.example {
        return example(name)
            .map(GraphValue::Single)
            .ok_or_else(|| CliError::Parse(format!("unknown example graph '{name}'")));
    }
    let path = input.graph.as_ref().expect("clap requires one input");
    let text = read(path)?;
    let parse = |e: serde_json::Error| CliError::Parse(format!("{}: {e}", path.display()));
    match text.trim_start().chars().next() {
        Some('{') => Ok(GraphValue::Single(
            serde_json::from_str(&text).map_err(parse)?,
        )),
        Some('[') => Ok(GraphValue::Sum(serde_json::from_str(&text).map_err(parse)?)),
        _ => Ok(GraphValue::Single(DecoratedGraph::parse_text(&text)?)),
    }
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("results are objects"),
    }
}

pub fn graphs(cmd: GraphsCommand) -> Result<Job, CliError> {
    match cmd {
        GraphsCommand::Enumerate {
            flavor,
            ord,
            deg,
            disconnected,
            limits,
        } => {
            let limits = limits.limits();
            Ok(Job {
                op: "enumerate",
                params: json!({"flavor": flavor, "ord": ord, "deg": deg, "connected": !disconnected, "limits": limits}),
                run: Box::new(move || {
                    let graphs = enumerate(flavor, ord, deg, !disconnected, &limits)?;
                    Ok(object(json!({"count": graphs.len(), "graphs": graphs})))
                }),
            })
        }
        GraphsCommand::Delta { input } => {
            let sum = match load_graph(&input)? {
                GraphValue::Single(g) => GraphSum::from_graph(&g, q(1, 1)),
                GraphValue::Sum(s) => s,
            };
            Ok(Job {
                op: "delta",
                params: json!({"input": sum}),
                run: Box::new(move || {
                    let closed = verify_cocycle(&sum)?;
                    let d = delta_sum(&sum);
                    Ok(object(json!({"delta": d, "closed": closed})))
                }),
            })
        }
        GraphsCommand::Cocycles {
            flavor,
            ord,
            deg,
            limits,
        } => {
            let limits = limits.limits();
            Ok(Job {
                op: "cocycles",
                params: json!({"flavor": flavor, "ord": ord, "deg": deg, "limits": limits}),
                run: Box::new(move || {
                    let dm = delta_matrix_at(flavor, ord, deg, &limits)?;
                    let cocycles: Vec<GraphSum> = kernel_basis(&dm.matrix)
                        .iter()
                        .map(|v| dm.sum_from(v))
                        .collect();
                    Ok(object(json!({
                        "basis0": dm.basis0,
                        "basis1_size": dm.basis1.len(),
                        "rank": dm.matrix.rank(),
                        "dimension": cocycles.len(),
                        "cocycles": cocycles,
                    })))
                }),
            })
        }
    }
}

pub fn knot(cmd: KnotCommand) -> Result<Job, CliError> {
    match cmd {
        KnotCommand::Sln { curve, grid } => {
            let (k, hash) = load_curve(&curve)?;
            Ok(Job {
                op: "sln",
                params: json!({"curve_hash": hash, "grid": grid}),
                run: Box::new(move || {
                    let e = sln_integral(&k, grid)?;
                    Ok(object(json!({
                        "curve_hash": hash,
                        "value": e.value,
                        "std_error": e.std_error,
                        "n_samples": e.n_samples,
                    })))
                }),
            })
        }
        KnotCommand::A2 {
            curve,
            diagram,
            directions,
        } => {
            if let Some(path) = diagram {
                let text = read(&path)?;
                let d = graphflow::GaussDiagram::from_json(&text)?;
                let hash = digest(
                    serde_json::to_string(&d)
                        .expect("diagrams serialize")
                        .as_bytes(),
                );
                return Ok(Job {
                    op: "a2",
                    params: json!({"diagram_hash": hash}),
                    run: Box::new(move || {
                        let a2 = a2_oracle(&d)?;
                        let conway = conway_polynomial(&d)?;
                        Ok(object(json!({
                            "a2": a2,
                            "writhe": d.writhe(),
                            "crossings": d.len(),
                            "conway": conway.coefficients(),
                        })))
                    }),
                });
            }
            let (k, hash) = load_curve(curve.as_deref().expect("clap requires a curve"))?;
            let directions = if directions.is_empty() {
                DEFAULT_DIRECTIONS.to_vec()
            } else {
                directions
            };
            Ok(Job {
                op: "a2",
                params: json!({"curve_hash": hash, "directions": directions}),
                run: Box::new(move || {
                    let a2 = casson_invariant(&k, &directions)?;
                    let d = project_to_diagram(&k, directions[0])?;
                    let conway = conway_polynomial(&d)?;
                    if conway.coefficient(2) != a2 {
                        return Err(CliError::Validation {
                            invariant: "conway_agreement",
                            message: format!("Conway polynomial {conway} disagrees with a2 = {a2}"),
                        });
                    }
                    Ok(object(json!({
                        "a2": a2,
                        "curve_hash": hash,
                        "writhe": d.writhe(),
                        "crossings": d.len(),
                        "conway": conway.coefficients(),
                    })))
                }),
            })
        }
        KnotCommand::V2 {
            curve,
            samples,
            seed,
        } => {
            let (k, hash) = load_curve(&curve)?;
            Ok(Job {
                op: "v2",
                params: json!({"curve_hash": hash, "samples": samples, "seed": seed}),
                run: Box::new(move || {
                    let v2 = v2_breakdown(&k, &order_two_cocycle(), samples, seed)?;
                    Ok(object(json!({
                        "curve_hash": hash,
                        "value": v2.total.value,
                        "std_error": v2.total.std_error,
                        "n_samples": v2.total.n_samples,
                        "seed": seed,
                        "terms": v2.terms,
                    })))
                }),
            })
        }
        KnotCommand::Lk { curve, other, grid } => {
            let (a, ha) = load_curve(&curve)?;
            let (b, hb) = load_curve(&other)?;
            Ok(Job {
                op: "lk",
                params: json!({"curve_hashes": [ha, hb], "grid": grid}),
                run: Box::new(move || {
                    let e = linking_integral(&a, &b, grid)?;
                    Ok(object(json!({
                        "curve_hashes": [ha, hb],
                        "value": e.value,
                        "std_error": e.std_error,
                        "nearest_integer": e.value.round() as i64,
                        "n_samples": e.n_samples,
                    })))
                }),
            })
        }
        KnotCommand::AGamma {
            input,
            curve,
            samples,
            seed,
        } => {
            let g = match load_graph(&input)? {
                GraphValue::Single(g) => g,
                GraphValue::Sum(_) => {
                    return Err(CliError::Parse("a-gamma takes a single graph".into()))
                }
            };
            let (k, hash) = load_curve(&curve)?;
            Ok(Job {
                op: "a_gamma",
                params: json!({"graph": g, "curve_hash": hash, "samples": samples, "seed": seed}),
                run: Box::new(move || {
                    let e = a_gamma_mc(&g, &k, samples, seed)?;
                    Ok(object(json!({
                        "graph": g,
                        "curve_hash": hash,
                        "value": e.value,
                        "std_error": e.std_error,
                        "n_samples": e.n_samples,
                        "seed": e.seed,
                    })))
                }),
            })
        }
    }
}
