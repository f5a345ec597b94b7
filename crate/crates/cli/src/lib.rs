//! Job orchestration behind the `pamoeba` binary.
//!
//! A [`JobSpec`] names the input matrix, the prime, the mode and the output
//! format; [`run`] executes it and returns the rendered artifact plus any
//! warnings. Errors map onto exit codes through [`exit_code`].

use std::fmt::Write as _;
use std::path::PathBuf;

use padic_amoeba::amoeba::{branch_labels, DigitTree, NodeKind, Piece, PlanarAmoeba};
use padic_amoeba::arrangement::{
    check_bound, column_oracle_components, count_complement, grid_oracle_auto, FaceCount,
};
use padic_amoeba::extremal::{run_family, select_prime, ExtremalRun};
use padic_amoeba::geometry::Point;
use padic_amoeba::linalg::{build_ahat, integer_kernel};
use padic_amoeba::rational::{format_rational, Rational};
use padic_amoeba::render::{emit_dot, emit_svg};
use padic_amoeba::trop::{witness_error, witness_index_set, DiscriminantMap};
use padic_amoeba::{Error, IntMatrix, Prime, RatMatrix, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Amoeba,
    Tree,
    Components,
    Extremal,
    OracleCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Svg,
    Dot,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    /// Support matrix `A`; the kernel is computed.
    Support(PathBuf),
    /// Kernel matrix `B`, used as given.
    Kernel(PathBuf),
    /// No matrix (extremal mode).
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub input: Input,
    pub prime: Option<Prime>,
    pub mode: Mode,
    pub format: Format,
    pub extremal_k: usize,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub body: String,
    pub warnings: Vec<String>,
}

/// `0` ok, `2` parse or usage, `3` degenerate input, `4` internal invariant failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => 4,
        e if e.is_degenerate() => 3,
        _ => 2,
    }
}

fn read_matrix(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn kernel_of(input: &Input) -> Result<RatMatrix> {
    match input {
        Input::Kernel(path) => RatMatrix::parse(&read_matrix(path)?),
        Input::Support(path) => {
            let a = IntMatrix::parse(&read_matrix(path)?)?;
            Ok(integer_kernel(&build_ahat(&a)?)?.to_rational())
        }
        Input::None => Err(Error::InvalidArgument(
            "this mode needs --matrix-a or --matrix-b".into(),
        )),
    }
}

fn need_prime(spec: &JobSpec) -> Result<Prime> {
    spec.prime
        .ok_or_else(|| Error::InvalidArgument("--prime is required for this mode".into()))
}

fn unsupported(mode: Mode, format: Format) -> Error {
    Error::InvalidArgument(format!("mode {mode:?} cannot emit {format:?}").to_lowercase())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// `n` for a kernel with `rows` forms and `m = 2`.
fn support_dimension(rows: usize) -> usize {
    rows.saturating_sub(3)
}

pub fn run(spec: &JobSpec) -> Result<Artifact> {
    let mut warnings = Vec::new();
    if spec.mode == Mode::Extremal {
        return extremal(spec, warnings);
    }
    let b = kernel_of(&spec.input)?;
    let p = need_prime(spec)?;
    let body = match spec.mode {
        Mode::Amoeba => {
            let a = PlanarAmoeba::from_kernel(&b, p)?;
            match spec.format {
                Format::Json => pretty(&amoeba_json(&a)),
                Format::Svg => {
                    let labels = branch_labels(&a.map, &a.tree, &a.graph)?;
                    emit_svg(&a.graph, None, &labels)
                }
                Format::Text => amoeba_text(&a),
                Format::Dot => return Err(unsupported(spec.mode, spec.format)),
            }
        }
        Mode::Tree => {
            let a = PlanarAmoeba::from_kernel(&b, p)?;
            match spec.format {
                Format::Dot => emit_dot(&a.tree),
                Format::Json => pretty(&tree_json(&a.tree)),
                Format::Text => tree_text(&a.tree),
                Format::Svg => return Err(unsupported(spec.mode, spec.format)),
            }
        }
        Mode::Components => {
            let a = PlanarAmoeba::from_kernel(&b, p)?;
            let report = check_bound(&a.graph, support_dimension(b.rows()))?;
            match spec.format {
                Format::Json => pretty(&report.to_json()),
                Format::Text => format!(
                    "total {}\nbounded {}\nbound {}\nwithin_bound {}\n",
                    report.total, report.bounded, report.bound, report.within_bound
                ),
                _ => return Err(unsupported(spec.mode, spec.format)),
            }
        }
        Mode::OracleCheck => {
            let report = oracle_check(&b, p, spec, &mut warnings)?;
            match spec.format {
                Format::Json => pretty(&report),
                Format::Text => flat_text(&report),
                _ => return Err(unsupported(spec.mode, spec.format)),
            }
        }
        Mode::Extremal => unreachable!("handled above"),
    };
    Ok(Artifact { body, warnings })
}

fn extremal(spec: &JobSpec, mut warnings: Vec<String>) -> Result<Artifact> {
    let k = spec.extremal_k;
    if k == 2 {
        warnings.push("k = 2 is below the range where the lower bound is argued".into());
    }
    let run = match spec.prime {
        Some(p) => run_family(k, p)?,
        None => select_prime(k)?,
    };
    let ExtremalRun {
        family,
        amoeba,
        count,
    } = &run;
    let body = match spec.format {
        Format::Json => pretty(&json!({
            "k": k,
            "prime": family.prime.get(),
            "D": family.d.to_json(),
            "A": family.a.to_json(),
            "B": family.b().to_json(),
            "lower_bound": family.lower_bound(),
            "report": {
                "total": count.total,
                "bounded": count.bounded,
                "bound": count.bound_value,
                "within_bound": count.within_bound(),
            },
        })),
        Format::Text => format!(
            "k {k}\nprime {}\nD\n{}A\n{}total {}\nbounded {}\nlower_bound {}\nbound {}\n",
            family.prime,
            family.d.to_text(),
            family.a.to_text(),
            count.total,
            count.bounded,
            family.lower_bound(),
            count.bound_value
        ),
        Format::Svg => {
            let labels = branch_labels(&amoeba.map, &amoeba.tree, &amoeba.graph)?;
            emit_svg(&amoeba.graph, None, &labels)
        }
        Format::Dot => emit_dot(&amoeba.tree),
    };
    Ok(Artifact { body, warnings })
}

fn amoeba_json(a: &PlanarAmoeba) -> Value {
    json!({
        "prime": a.map.prime().get(),
        "graph": a.graph.to_json(),
    })
}

fn amoeba_text(a: &PlanarAmoeba) -> String {
    let mut out = String::new();
    for piece in a.graph.pieces() {
        let _ = match piece {
            Piece::Segment(u, v) => writeln!(out, "segment {u} {v}"),
            Piece::Ray { base, dir } => writeln!(out, "ray {base} ({}, {})", dir.0, dir.1),
        };
    }
    out
}

fn tree_json(t: &DigitTree) -> Value {
    let mut ids = vec![t.root()];
    ids.extend(t.branches().into_iter().map(|(_, c)| c));
    ids.sort_unstable();
    let nodes: Vec<Value> = ids
        .iter()
        .map(|&id| {
            let node = t.node(id);
            match &node.kind {
                NodeKind::Internal { depth, children } => json!({
                    "id": id,
                    "parent": node.parent,
                    "depth": depth,
                    "children": children.iter().map(|(d, c)| json!([d, c])).collect::<Vec<_>>(),
                }),
                NodeKind::Leaf { form } => json!({
                    "id": id,
                    "parent": node.parent,
                    "form": form,
                    "zero": t.zero_of(*form).map(format_rational),
                }),
            }
        })
        .collect();
    json!({"prime": t.prime().get(), "root": t.root(), "nodes": nodes})
}

fn tree_text(t: &DigitTree) -> String {
    fn walk(t: &DigitTree, id: usize, indent: usize, digit: Option<u64>, out: &mut String) {
        let pad = "  ".repeat(indent);
        let edge = digit.map(|d| format!("[{d}] ")).unwrap_or_default();
        let _ = match t.node(id).kind {
            NodeKind::Internal { depth, .. } => writeln!(out, "{pad}{edge}split at {depth}"),
            NodeKind::Leaf { form } => {
                let z = t.zero_of(form).map(format_rational).unwrap_or_default();
                writeln!(out, "{pad}{edge}form {form} zero {z}")
            }
        };
        for &(d, c) in t.children(id) {
            walk(t, c, indent + 1, Some(d), out);
        }
    }
    let mut out = String::new();
    walk(t, t.root(), 0, None, &mut out);
    out
}

fn flat_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, v) in map {
            let _ = writeln!(out, "{k} {v}");
        }
    }
    out
}

fn random_parameter(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(
        rng.gen_range(-1000..=1000).into(),
        rng.gen_range(1..=97).into(),
    )
}

/// Recounts components with both oracles (m = 2) and samples exact values
/// of `F`: on the graph for m = 2, against the witness bound for any m.
fn oracle_check(
    b: &RatMatrix,
    p: Prime,
    spec: &JobSpec,
    warnings: &mut Vec<String>,
) -> Result<Value> {
    let map = DiscriminantMap::from_kernel(b, p)?;
    let m = map.m();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut report = serde_json::Map::new();
    report.insert("m".into(), json!(m));
    report.insert("prime".into(), json!(p.get()));
    report.insert("samples".into(), json!(spec.samples));
    let planar = if m == 2 {
        Some(PlanarAmoeba::new(map.clone())?)
    } else {
        warnings.push(format!(
            "m = {m}: no planar graph; only pointwise witness checks are run"
        ));
        None
    };
    let mut agree = true;
    if let Some(a) = &planar {
        let c = count_complement(&a.graph, support_dimension(b.rows()))?;
        let exact = FaceCount {
            total: c.total,
            bounded: c.bounded,
        };
        let column = column_oracle_components(&a.graph)?;
        agree &= column == exact;
        report.insert("count".into(), json!(exact));
        report.insert("column_oracle".into(), json!(column));
        match grid_oracle_auto(&a.graph, 4_000_000)? {
            Some(grid) => {
                agree &= grid.total == exact.total;
                report.insert("grid_oracle".into(), json!(grid));
            }
            None => {
                warnings.push("grid oracle skipped: grid too large".into());
                report.insert("grid_oracle".into(), Value::Null);
            }
        }
    }
    let mut on_graph = 0usize;
    let mut witnessed = 0usize;
    let mut skipped = 0usize;
    let eps = Rational::new(1.into(), 10.into());
    for _ in 0..spec.samples {
        let lam: Vec<Rational> = (0..m - 1).map(|_| random_parameter(&mut rng)).collect();
        let value = match map.eval_exact(&lam) {
            Ok(v) => v,
            Err(Error::UndefinedPoint { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if let Some(a) = &planar {
            if a.graph
                .contains(&Point::new(value[0].clone(), value[1].clone()))
            {
                on_graph += 1;
            } else {
                agree = false;
            }
        }
        let w = witness_index_set(&map, &lam, &eps)?;
        if witness_error(&map, &lam, &w)? <= &w.constant * &eps {
            witnessed += 1;
        } else {
            agree = false;
        }
    }
    if planar.is_some() {
        report.insert("on_graph".into(), json!(on_graph));
    }
    report.insert("witness_within_bound".into(), json!(witnessed));
    report.insert("skipped".into(), json!(skipped));
    report.insert("agree".into(), json!(agree));
    if !agree {
        return Err(Error::Invariant(format!(
            "oracle check disagrees: {}",
            Value::Object(report)
        )));
    }
    Ok(Value::Object(report))
}
