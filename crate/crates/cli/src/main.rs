//! `medcube`: run median-graph, cubulation and median-set computations on
//! JSON inputs and print JSON certificates or DOT figures.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use medcube::io::{to_dot, to_dot_clusters, ComplexSpec, Document, DotGraph, PeriodicSpec};
use medcube::median_set::{self, MedSet};
use medcube::periodic::{direction_label, label};
use medcube::{
    catalog, cubical_quotient, cubulate, isometry, roller_directions, selftest, subalgebra_cubulation, AffineIsometry,
    CubeComplex, ErrorKind, Factor, FiniteIsometry, HyperplaneId, IsometryClass, PeriodicComplex, Point, VertexSet,
};

#[derive(Parser, Debug)]
#[command(name = "medcube", version, about = "Median sets of cube complex isometries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input JSON file; repeat to merge several documents.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,
    /// Built-in example, merged before any --input.
    #[arg(long, global = true, value_parser = clap::builder::PossibleValuesParser::new(catalog::NAMES))]
    example: Option<String>,
    /// Initial window radius for periodic complexes.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(i64).range(1..))]
    window: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that the input is a median graph, wallspace or periodic complex.
    Validate,
    /// List hyperplanes with their edges and halfspaces.
    Hyperplanes,
    /// Median of three vertices.
    Median {
        /// Three comma-separated vertex names.
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<String>,
    },
    /// Convex and median hulls of a vertex set.
    Hull {
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Gate projection of a vertex onto a convex set.
    Project {
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
        #[arg(long)]
        point: String,
    },
    /// Cubulate a wallspace.
    Cubulate,
    /// Collapse the listed hyperplanes.
    Quotient {
        #[arg(long, value_delimiter = ',')]
        walls: Vec<usize>,
    },
    /// Cubulate a median subalgebra with its induced walls.
    Subalgebra {
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Elliptic, inverting or loxodromic.
    Classify,
    /// Minimal displacement and the vertices realising it.
    Minset,
    /// An axis through a point of the minimising set.
    Axis {
        /// Comma-separated coordinates; defaults to a minimising vertex.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        point: Vec<i64>,
    },
    /// Hyperplanes inverted by a power of the isometry.
    Inverted,
    /// Translation length and minimal displacement.
    Length,
    /// Transfer number of a commensurated wall set.
    Transfer,
    /// Cubical components of the Roller boundary.
    Directions,
    /// The median set of the isometry or generators.
    Medset,
    /// Product decomposition of the median set, with checks.
    Decompose,
    /// Invariant median flat of commuting generators.
    Abelianflat,
    /// Run the randomized and example property suites.
    Selftest {
        /// Restrict to these suites.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        /// Include per-suite timings (makes output run-dependent).
        #[arg(long)]
        timings: bool,
    },
}

/// Failure with an exit status and a machine-readable body.
struct Failure {
    kind: ErrorKind,
    message: String,
    /// Partial output, printed before failing.
    output: Option<String>,
}

impl From<medcube::Error> for Failure {
    fn from(e: medcube::Error) -> Self {
        Failure { kind: e.kind(), message: e.to_string(), output: None }
    }
}

fn parse_failure(message: impl Into<String>) -> Failure {
    Failure { kind: ErrorKind::Parse, message: message.into(), output: None }
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Parse => 2,
        ErrorKind::Invariant => 3,
        ErrorKind::Precondition => 4,
    }
}

fn kind_name(kind: ErrorKind) -> &'static str {
    match kind {
        ErrorKind::Parse => "parse",
        ErrorKind::Invariant => "invariant",
        ErrorKind::Precondition => "precondition",
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, status) = match run(&cli) {
        Ok(text) => (Some(text), 0),
        Err(f) => {
            let body = json!({"error": {"kind": kind_name(f.kind), "message": f.message}});
            eprintln!("medcube: {}", f.message);
            (Some(f.output.unwrap_or_else(|| pretty(&body))), exit_code(f.kind))
        }
    };
    if let Some(text) = text {
        let written = match &cli.out {
            Some(path) => fs::write(path, &text).map_err(|e| e.to_string()),
            None => {
                print!("{text}");
                Ok(())
            }
        };
        if let Err(e) = written {
            eprintln!("medcube: cannot write output: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(status)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn load(cli: &Cli) -> Result<Document, Failure> {
    let mut doc = match &cli.example {
        Some(name) => catalog::document(name).ok_or_else(|| parse_failure(format!("unknown example `{name}`")))?,
        None => Document::default(),
    };
    for path in &cli.input {
        let text =
            fs::read_to_string(path).map_err(|e| parse_failure(format!("cannot read {}: {e}", path.display())))?;
        doc = doc.merge(Document::parse(&text)?);
    }
    Ok(doc)
}

fn run(cli: &Cli) -> Outcome {
    if let Command::Selftest { suite, timings } = &cli.command {
        return run_selftest(cli, suite, *timings);
    }
    let doc = load(cli)?;
    let r = cli.window;
    match &cli.command {
        Command::Validate => validate(cli, &doc),
        Command::Hyperplanes => hyperplanes(&host(&doc, r)?),
        Command::Median { points } => {
            if points.len() != 3 {
                return Err(parse_failure(format!("--points needs 3 vertices, got {}", points.len())));
            }
            let x = host(&doc, r)?;
            let m = x.median(vertex(&x, &points[0])?, vertex(&x, &points[1])?, vertex(&x, &points[2])?)?;
            Ok(pretty(&json!({"points": points, "median": x.name(m)})))
        }
        Command::Hull { set } => {
            let x = host(&doc, r)?;
            let s = x.vertex_set(set)?;
            let convex = x.convex_hull(&s);
            let median = x.median_hull(&s)?;
            emit_sets(
                cli,
                &x,
                json!({"set": names(&x, &s), "convex_hull": names(&x, &convex), "median_hull": names(&x, &median)}),
                &convex,
            )
        }
        Command::Project { set, point } => {
            let x = host(&doc, r)?;
            let s = x.vertex_set(set)?;
            let g = x.gate_project(&s, vertex(&x, point)?)?;
            Ok(pretty(&json!({"point": point, "gate": x.name(g)})))
        }
        Command::Cubulate => {
            let ws = doc.wallspace()?;
            let c = cubulate(&ws)?;
            if cli.format == Format::Dot {
                return Ok(to_dot(&c.complex, "cubulation", None));
            }
            let principal: serde_json::Map<String, Value> =
                ws.points().iter().zip(&c.principal).map(|(p, &v)| (p.clone(), json!(c.complex.name(v)))).collect();
            let walls: Vec<usize> = c.wall_hyperplane.iter().map(|h| h.0).collect();
            Ok(pretty(&json!({"complex": complex_json(&c.complex), "principal": principal, "wall_hyperplanes": walls})))
        }
        Command::Quotient { walls } => {
            let x = host(&doc, r)?;
            let j: Vec<HyperplaneId> = walls.iter().map(|&h| HyperplaneId(h)).collect();
            for &h in &j {
                x.check_hyperplane(h)?;
            }
            let q = cubical_quotient(&x, &j)?;
            if cli.format == Format::Dot {
                return Ok(to_dot(q.complex(), "quotient", None));
            }
            let pi: serde_json::Map<String, Value> =
                x.vertices().map(|v| (x.name(v).to_string(), json!(q.complex().name(q.apply(v))))).collect();
            let retained: Vec<usize> = q.retained.iter().map(|h| h.0).collect();
            Ok(pretty(&json!({"complex": complex_json(q.complex()), "pi": pi, "retained": retained})))
        }
        Command::Subalgebra { set } => {
            let x = host(&doc, r)?;
            let s = x.vertex_set(set)?;
            let sub = subalgebra_cubulation(&x, &s)?;
            let c = &sub.cubulation.complex;
            if cli.format == Format::Dot {
                return Ok(to_dot(c, "subalgebra", None));
            }
            let map: serde_json::Map<String, Value> = sub
                .points
                .iter()
                .zip(&sub.cubulation.principal)
                .map(|(&p, &v)| (x.name(p).to_string(), json!(c.name(v))))
                .collect();
            let hyps: Vec<usize> = sub.hyperplanes.iter().map(|h| h.0).collect();
            Ok(pretty(&json!({"complex": complex_json(c), "embedding": map, "hyperplanes": hyps})))
        }
        Command::Classify => classify(&doc, r),
        Command::Minset => minset(cli, &doc),
        Command::Axis { point } => {
            let (p, g) = periodic_pair(&doc)?;
            let start = if point.is_empty() {
                match isometry::classify_affine(&p, &g, r)? {
                    IsometryClass::Loxodromic { min_vertex, .. } => parse_label(&min_vertex)?,
                    other => return Err(medcube::Error::NotLoxodromic(other.name()).into()),
                }
            } else {
                point.clone()
            };
            let path = isometry::axis(&p, &g, &start, r)?;
            let ok = isometry::is_axis(&p, &g, &path, r)?;
            if !ok {
                return Err(medcube::Error::Invariant("computed path is not an axis".into()).into());
            }
            if cli.format == Format::Dot {
                let window = p.members_in(&p.padded_box(r));
                return Ok(points_dot("axis", &window, &path));
            }
            let labels: Vec<String> = path.iter().map(|v| label(v)).collect();
            Ok(pretty(&json!({"start": label(&start), "period": labels, "next": label(&g.apply(&path[0]))})))
        }
        Command::Inverted => {
            let (p, g) = periodic_pair(&doc)?;
            let inv = isometry::inverted_hyperplanes(&p, &g)?;
            let walls: Vec<Value> =
                inv.iter().map(|w| json!({"axis": w.wall.axis, "cut": w.wall.cut, "power": w.power})).collect();
            let transverse = inv
                .iter()
                .enumerate()
                .all(|(i, a)| inv[i + 1..].iter().all(|b| isometry::transverse(&p, a.wall, b.wall)));
            Ok(pretty(&json!({"inverted": walls, "count": inv.len(), "pairwise_transverse": transverse})))
        }
        Command::Length => {
            if doc.periodic.is_some() {
                let (p, g) = periodic_pair(&doc)?;
                let norm = isometry::combinatorial_min(&p, &g, r)?;
                Ok(pretty(&json!({
                    "translation_length": isometry::translation_length(&g).to_string(),
                    "min_displacement": norm,
                })))
            } else {
                let (x, g) = finite_pair(&doc)?;
                let (d, _) = isometry::min_set_finite(&x, &g);
                Ok(pretty(&json!({"translation_length": "0", "min_displacement": d})))
            }
        }
        Command::Transfer => {
            let (p, g) = periodic_pair(&doc)?;
            let m = doc.wallset(p.dim())?;
            let tr = isometry::transfer_number(&p, &g, &m)?;
            Ok(pretty(&json!({"transfer": tr})))
        }
        Command::Directions => {
            let p = doc.periodic()?;
            let report = roller_directions(&p);
            let comps: Vec<Value> =
                report.components.iter().map(|c| json!({"pattern": c.pattern, "bounded": c.bounded})).collect();
            let bounded = report.components.iter().filter(|c| c.bounded).count();
            Ok(pretty(&json!({
                "components": comps,
                "count": comps.len(),
                "bounded": bounded,
                "flagged": report.components[report.flagged].pattern,
            })))
        }
        Command::Medset => medset(cli, &doc),
        Command::Decompose => decompose(cli, &doc),
        Command::Abelianflat => abelianflat(&doc, r),
        Command::Selftest { .. } => unreachable!(),
    }
}

fn run_selftest(cli: &Cli, only: &[String], timings: bool) -> Outcome {
    let known = selftest::suite_names();
    if let Some(bad) = only.iter().find(|s| !known.contains(&s.as_str())) {
        return Err(parse_failure(format!("unknown suite `{bad}`; known: {}", known.join(", "))));
    }
    let report = selftest::run(cli.seed, only);
    let mut value = serde_json::to_value(&report).expect("report serializes");
    if !timings {
        for s in value["suites"].as_array_mut().into_iter().flatten() {
            s.as_object_mut().unwrap().remove("millis");
        }
    }
    let text = pretty(&value);
    if report.failed > 0 {
        return Err(Failure {
            kind: ErrorKind::Invariant,
            message: format!("{} selftest cases failed", report.failed),
            output: Some(text),
        });
    }
    Ok(text)
}

// ------------------------------------------------------------- helpers

/// The finite complex of the input, or a window of the periodic complex.
fn host(doc: &Document, radius: i64) -> Result<CubeComplex, Failure> {
    if doc.complex.is_some() {
        let x = doc.complex()?;
        x.ensure_median()?;
        Ok(x)
    } else if doc.periodic.is_some() {
        Ok(doc.periodic()?.window_radius(radius)?.complex)
    } else {
        Err(parse_failure("input has no `complex` or `periodic`"))
    }
}

fn vertex(x: &CubeComplex, name: &str) -> Result<medcube::VertexId, Failure> {
    Ok(x.vertex(name)?)
}

fn names(x: &CubeComplex, s: &VertexSet) -> Vec<String> {
    s.iter().map(|v| x.name(v).to_string()).collect()
}

fn complex_json(x: &CubeComplex) -> Value {
    serde_json::to_value(ComplexSpec::of(x)).expect("spec serializes")
}

fn parse_label(s: &str) -> Result<Point, Failure> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| parse_failure(format!("bad coordinate in `{s}`"))))
        .collect()
}

fn emit_sets(cli: &Cli, x: &CubeComplex, body: Value, highlight: &VertexSet) -> Outcome {
    match cli.format {
        Format::Json => Ok(pretty(&body)),
        Format::Dot => Ok(to_dot(x, "complex", Some(highlight))),
    }
}

/// DOT of lattice points with `marked` filled.
fn points_dot(name: &str, points: &[Point], marked: &[Point]) -> String {
    let g = DotGraph::of_points(points);
    let marked: Vec<String> = marked.iter().map(|p| label(p)).collect();
    let mut out = format!("graph \"{name}\" {{\n  node [shape=circle];\n");
    for v in &g.nodes {
        let style = if marked.contains(v) { " [style=filled]" } else { "" };
        out.push_str(&format!("  \"{v}\"{style};\n"));
    }
    for (a, b) in &g.edges {
        out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
    }
    out.push_str("}\n");
    out
}

fn finite_pair(doc: &Document) -> Result<(CubeComplex, FiniteIsometry), Failure> {
    let x = doc.complex()?;
    x.ensure_median()?;
    let g = doc.isometry_spec()?.finite(&x)?;
    Ok((x, g))
}

fn periodic_pair(doc: &Document) -> Result<(PeriodicComplex, AffineIsometry), Failure> {
    let p = doc.periodic()?;
    let g = doc.isometry_spec()?.affine()?;
    Ok((p, g))
}

fn finite_gens(doc: &Document, x: &CubeComplex) -> Result<Vec<FiniteIsometry>, Failure> {
    doc.generator_specs()?.into_iter().map(|s| Ok(s.finite(x)?)).collect()
}

fn affine_gens(doc: &Document) -> Result<Vec<AffineIsometry>, Failure> {
    doc.generator_specs()?.into_iter().map(|s| Ok(s.affine()?)).collect()
}

fn periodic_json(p: &PeriodicComplex) -> Value {
    serde_json::to_value(PeriodicSpec::of(p)).expect("spec serializes")
}

// ------------------------------------------------------------ commands

fn validate(cli: &Cli, doc: &Document) -> Outcome {
    let mut report = serde_json::Map::new();
    if doc.complex.is_some() {
        let x = doc.complex()?;
        if let Err(v) = x.is_median_graph() {
            let triple: Vec<&str> = v.triple.iter().map(|&t| x.name(t)).collect();
            let body = json!({"valid": false, "kind": "complex", "witness": {"triple": triple, "medians": v.medians}});
            return Err(Failure {
                kind: ErrorKind::Invariant,
                message: format!("not a median graph at ({})", triple.join(", ")),
                output: Some(pretty(&body)),
            });
        }
        if cli.format == Format::Dot {
            return Ok(to_dot(&x, "complex", None));
        }
        report.insert(
            "complex".into(),
            json!({
                "vertices": x.vertex_count(),
                "edges": x.edge_count(),
                "hyperplanes": x.hyperplane_count(),
                "dimension": x.dimension(),
            }),
        );
    }
    if doc.wallspace.is_some() {
        let ws = doc.wallspace()?;
        report.insert("wallspace".into(), json!({"points": ws.points().len(), "walls": ws.wall_count()}));
    }
    if doc.periodic.is_some() {
        let p = doc.periodic()?;
        if let Err(v) = p.validate() {
            let body = json!({"valid": false, "kind": "periodic", "witness": format!("{v:?}")});
            return Err(Failure {
                kind: ErrorKind::Invariant,
                message: format!("invalid periodic complex: {v:?}"),
                output: Some(pretty(&body)),
            });
        }
        if cli.format == Format::Dot {
            return Ok(points_dot("periodic", &p.members_in(&p.padded_box(cli.window)), &[]));
        }
        let mut entry = json!({"dim": p.dim(), "rank": p.lattice().rank(), "max_degree": p.max_degree()});
        if doc.isometry.is_some() || doc.generators.is_some() {
            for g in affine_gens(doc)? {
                medcube::check_symmetry(&p, &g)?;
            }
            entry["symmetries"] = json!(true);
        }
        report.insert("periodic".into(), entry);
    } else if let (Some(_), Ok(x)) = (&doc.isometry, doc.complex()) {
        finite_gens(doc, &x)?;
        report.insert("isometry".into(), json!(true));
    }
    if report.is_empty() {
        return Err(parse_failure("nothing to validate"));
    }
    report.insert("valid".into(), json!(true));
    Ok(pretty(&Value::Object(report)))
}

fn hyperplanes(x: &CubeComplex) -> Outcome {
    let list: Vec<Value> = x
        .hyperplanes()
        .map(|h| {
            let edges: Vec<[&str; 2]> = x.hyperplane_edges(h).iter().map(|&(a, b)| [x.name(a), x.name(b)]).collect();
            json!({
                "id": h.0,
                "edges": edges,
                "halfspaces": [names(x, &x.halfspace(h, false)), names(x, &x.halfspace(h, true))],
            })
        })
        .collect();
    Ok(pretty(&Value::Array(list)))
}

fn class_json(class: &IsometryClass) -> Value {
    match class {
        IsometryClass::Elliptic { min_cube_dim, cube } => json!({
            "class": "elliptic",
            "min_cube_dim": min_cube_dim,
            "evidence": {"cube": cube},
        }),
        IsometryClass::Inverting { inverted, translation_length, min_displacement } => {
            let walls: Vec<Value> =
                inverted.iter().map(|w| json!({"axis": w.wall.axis, "cut": w.wall.cut, "power": w.power})).collect();
            json!({
                "class": "inverting",
                "translation_length": translation_length.to_string(),
                "evidence": {"inverted": walls, "min_displacement": min_displacement},
            })
        }
        IsometryClass::Loxodromic { min_vertex, min_displacement, translation_length } => json!({
            "class": "loxodromic",
            "translation_length": translation_length.to_string(),
            "evidence": {"min_vertex": min_vertex, "min_displacement": min_displacement},
        }),
    }
}

fn classify(doc: &Document, radius: i64) -> Outcome {
    let class = if doc.periodic.is_some() {
        let (p, g) = periodic_pair(doc)?;
        isometry::classify_affine(&p, &g, radius)?
    } else {
        let (x, g) = finite_pair(doc)?;
        isometry::classify_finite(&x, &g)?
    };
    Ok(pretty(&class_json(&class)))
}

fn minset(cli: &Cli, doc: &Document) -> Outcome {
    if doc.periodic.is_some() {
        let (p, g) = periodic_pair(doc)?;
        let bounds = isometry::orbit_box(&p, &g, cli.window);
        let (norm, members) = isometry::min_set_affine(&p, &g, &bounds, cli.window)?;
        if cli.format == Format::Dot {
            return Ok(points_dot("minset", &p.members_in(&bounds), &members));
        }
        let labels: Vec<String> = members.iter().map(|v| label(v)).collect();
        return Ok(pretty(&json!({
            "min_displacement": norm,
            "window": {"lo": bounds.lo, "hi": bounds.hi},
            "members": labels,
        })));
    }
    let (x, g) = finite_pair(doc)?;
    let (d, min) = isometry::min_set_finite(&x, &g);
    if cli.format == Format::Dot {
        return Ok(to_dot(&x, "minset", Some(&min)));
    }
    let witness = x
        .median_closure_witness(&min)?
        .map(|(t, m)| json!({"triple": [x.name(t[0]), x.name(t[1]), x.name(t[2])], "median": x.name(m)}));
    Ok(pretty(&json!({
        "min_displacement": d,
        "members": names(&x, &min),
        "count": min.len(),
        "median_closed": witness.is_none(),
        "witness": witness,
    })))
}

fn medset(cli: &Cli, doc: &Document) -> Outcome {
    if doc.periodic.is_some() {
        let (p, g) = periodic_pair(doc)?;
        let med = median_set::median_set_affine(&p, &g, cli.window)?;
        let bounds = p.padded_box(cli.window);
        let sample = med.members_in(&bounds);
        if cli.format == Format::Dot {
            return Ok(points_dot("medset", &p.members_in(&bounds), &sample));
        }
        let labels: Vec<String> = sample.iter().map(|v| label(v)).collect();
        return Ok(pretty(&json!({"med": periodic_json(&med), "shape": med.shape(), "sample": labels})));
    }
    let x = doc.complex()?;
    let gens = finite_gens(doc, &x)?;
    let med = median_set::median_set_finite(&x, &gens)?;
    if cli.format == Format::Dot {
        return Ok(to_dot(&x, "medset", Some(&med)));
    }
    Ok(pretty(&json!({"members": names(&x, &med), "count": med.len()})))
}

fn factor_graph(f: &Factor, radius: i64) -> Result<DotGraph, Failure> {
    Ok(match f {
        Factor::Finite(c) => DotGraph::of_complex(c),
        Factor::Periodic(p) => DotGraph::of_points(&p.members_in(&p.padded_box(radius))),
    })
}

fn decompose(cli: &Cli, doc: &Document) -> Outcome {
    let (dec, host_names): (_, Option<CubeComplex>) = if doc.periodic.is_some() {
        let p = doc.periodic()?;
        let gens = match &doc.isometry {
            Some(g) => vec![g.affine()?],
            None => affine_gens(doc)?,
        };
        let dec = if gens.len() == 1 {
            median_set::decompose_affine(&p, &gens[0], cli.window)?
        } else {
            median_set::decompose_elliptic_periodic(&p, &gens, cli.window)?
        };
        (dec, None)
    } else {
        let x = doc.complex()?;
        let gens = finite_gens(doc, &x)?;
        (median_set::decompose_elliptic_finite(&x, &gens)?, Some(x))
    };
    let text = if cli.format == Format::Dot {
        let med = match (&dec.med, &host_names) {
            (MedSet::Finite(s), Some(x)) => {
                let sub = medcube::subalgebra_cubulation(x, s)?;
                let mut g = DotGraph::of_complex(&sub.cubulation.complex);
                let rename: std::collections::HashMap<String, String> = sub
                    .points
                    .iter()
                    .zip(&sub.cubulation.principal)
                    .map(|(&p, &v)| (sub.cubulation.complex.name(v).to_string(), x.name(p).to_string()))
                    .collect();
                let r = |s: &String| rename.get(s).cloned().unwrap_or_else(|| s.clone());
                g.nodes = g.nodes.iter().map(r).collect();
                g.edges = g.edges.iter().map(|(a, b)| (r(a), r(b))).collect();
                g
            }
            (MedSet::Periodic(m), _) => DotGraph::of_points(&m.members_in(&m.padded_box(cli.window))),
            _ => DotGraph::default(),
        };
        let q = DotGraph::of_complex(&catalog::hypercube(dec.q));
        to_dot_clusters(&[
            ("Med", med),
            ("T", factor_graph(&dec.t, cli.window)?),
            ("F", factor_graph(&dec.f, cli.window)?),
            ("Q", q),
        ])
    } else {
        let med = match (&dec.med, &host_names) {
            (MedSet::Finite(s), Some(x)) => json!({"members": names(x, s)}),
            (MedSet::Periodic(m), _) => periodic_json(m),
            _ => Value::Null,
        };
        let dir = |d: &Option<medcube::DirectionClass>| d.as_ref().map(|d| direction_label(d));
        pretty(&json!({
            "class": dec.class,
            "factors": {"Q": dec.q_shape(), "F": dec.f.shape(), "T": dec.t.shape()},
            "cube": dec.cube,
            "translation_length": dec.translation_length.to_string(),
            "min_displacement": dec.min_displacement,
            "zeta": dir(&dec.zeta),
            "xi": dir(&dec.xi),
            "max_degree": dec.max_degree,
            "med": med,
            "phi": dec.phi,
            "checks": dec.checks,
        }))
    };
    if let Err(e) = dec.ensure() {
        return Err(Failure { kind: ErrorKind::Invariant, message: e.to_string(), output: Some(text) });
    }
    Ok(text)
}

fn abelianflat(doc: &Document, radius: i64) -> Outcome {
    let flat = if doc.periodic.is_some() {
        let p = doc.periodic()?;
        median_set::abelian_invariant_flat_periodic(&p, &affine_gens(doc)?, radius)?
    } else {
        let x = doc.complex()?;
        let gens = finite_gens(doc, &x)?;
        median_set::abelian_invariant_flat_finite(&x, &gens)?
    };
    let text = pretty(&json!({
        "shape": flat.shape(),
        "cube_dim": flat.cube_dim,
        "flat": periodic_json(&flat.flat),
        "levels": flat.levels,
        "sample": flat.sample,
        "checks": flat.checks,
    }));
    if let Err(e) = flat.ensure() {
        return Err(Failure { kind: ErrorKind::Invariant, message: e.to_string(), output: Some(text) });
    }
    Ok(text)
}
