//! Command-line front end. `run` parses arguments, writes to the given
//! streams and returns the process exit code: 0 on success, 1 when the
//! input fails validation, 2 on a usage error.

use std::fs;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::chambers::{
    chamber_signature, kapranov_weights, wall_cross_diff, walls, Sign, WallKind,
};
use crate::complex::{GeneralizedConeComplex, Length, TropicalCurve};
use crate::datum::{format_rational, parse_weight_list, Rational, WeightData};
use crate::enumeration::{contraction_poset, enumerate_stable_graphs};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::io::{self, catalog_value, datum_value, graph_value, GraphDocument};
use crate::losev_manin::{chain_graph, lm_fvector_check, lm_weights, ordered_partitions};
use crate::taut::{clutch_over, forget, forgotten_datum, reduce_curve, LengthTransform};

#[derive(Parser, Debug)]
#[command(name = "troph", version, about = "Tropical moduli spaces of weighted stable curves")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the isomorphism classes of stable graphs, layer by edge count.
    Enumerate {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        #[arg(long)]
        dot: bool,
        /// Only this edge-count layer.
        #[arg(long)]
        layer: Option<usize>,
    },
    /// Number of cones per dimension.
    Fvector {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        json: bool,
    },
    /// Canonical cone and coordinates of a tropical curve.
    Locate {
        #[arg(long)]
        curve: String,
        #[command(flatten)]
        datum: OptDatumArgs,
        #[arg(long)]
        json: bool,
    },
    /// Reduce a curve from weights A to dominated weights B.
    Reduce {
        #[arg(long, value_parser = weight_list)]
        from: WeightList,
        #[arg(long, value_parser = weight_list)]
        to: WeightList,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        json: bool,
    },
    /// Forget all legs but the listed ones.
    Forget {
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<usize>,
        #[arg(long)]
        curve: String,
        #[command(flatten)]
        datum: OptDatumArgs,
        #[arg(long)]
        json: bool,
    },
    /// Glue curves into the vertices of a stable graph.
    Clutch {
        #[arg(long)]
        graph: String,
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<String>,
        #[command(flatten)]
        datum: OptDatumArgs,
        #[arg(long)]
        json: bool,
    },
    /// Walls and chambers of the weight domain.
    Chamber {
        #[command(subcommand)]
        command: ChamberCommand,
    },
    /// Kapranov weights A_{r,s}[n] and their catalog sizes.
    Kapranov {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        json: bool,
    },
    /// Losev-Manin weights (1, 1/n, ..., 1/n, 1).
    LosevManin {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with_all = ["graphs", "check"])]
        fvector: bool,
        #[arg(long, conflicts_with = "check")]
        graphs: bool,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        json: bool,
    },
    /// DOT output for a graph file, a catalog, or its contraction poset.
    Export {
        /// Graph or curve document; lengths become edge labels.
        #[arg(long, conflicts_with_all = ["genus", "weights"])]
        graph: Option<String>,
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long, value_parser = weight_list)]
        weights: Option<WeightList>,
        #[arg(long)]
        poset: bool,
    },
}

#[derive(Subcommand, Debug)]
enum ChamberCommand {
    /// List the walls for (g, n).
    Walls {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::Fine)]
        kind: Kind,
        #[arg(long)]
        json: bool,
    },
    /// Chamber signature of a weight vector, or the wall it lies on.
    Locate {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, value_enum, default_value_t = Kind::Fine)]
        kind: Kind,
        #[arg(long)]
        json: bool,
    },
    /// Stable graphs lost and gained between two weight vectors.
    Diff {
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long, value_parser = weight_list)]
        from: WeightList,
        #[arg(long, value_parser = weight_list)]
        to: WeightList,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Fine,
    Coarse,
}

impl From<Kind> for WallKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Fine => WallKind::Fine,
            Kind::Coarse => WallKind::Coarse,
        }
    }
}

#[derive(Args, Debug)]
struct DatumArgs {
    #[arg(long)]
    genus: u32,
    /// Comma separated rationals, e.g. 1,1/2,1/2.
    #[arg(long, value_parser = weight_list)]
    weights: WeightList,
}

impl DatumArgs {
    fn datum(&self) -> Result<WeightData> {
        WeightData::new(self.genus, self.weights.0.clone())
    }
}

/// Datum flags that may be omitted when the input document carries a datum.
#[derive(Args, Debug)]
struct OptDatumArgs {
    #[arg(long)]
    genus: Option<u32>,
    #[arg(long, value_parser = weight_list)]
    weights: Option<WeightList>,
}

impl OptDatumArgs {
    fn resolve(&self, doc: &GraphDocument) -> Result<WeightData> {
        match (&self.weights, &doc.datum) {
            (Some(w), _) => WeightData::new(
                self.genus.unwrap_or_else(|| doc.graph.genus()),
                w.0.clone(),
            ),
            (None, Some(d)) => Ok(d.clone()),
            (None, None) => WeightData::classical(
                self.genus.unwrap_or_else(|| doc.graph.genus()),
                doc.graph.num_legs(),
            ),
        }
    }
}

#[derive(Clone, Debug)]
struct WeightList(Vec<Rational>);

fn weight_list(s: &str) -> std::result::Result<WeightList, String> {
    parse_weight_list(s)
        .map(WeightList)
        .ok_or_else(|| format!("\"{s}\" is not a comma separated list of rationals p/q"))
}

fn read_document(path: &str) -> Result<GraphDocument> {
    let text = fs::read_to_string(path).map_err(|e| Error::parse(path, e.to_string()))?;
    io::parse_graph(&text).map_err(|e| match e {
        Error::Parse { path: p, message } => Error::parse(format!("{path}#{p}"), message),
        other => other,
    })
}

fn fmt_weights(ws: &[Rational]) -> String {
    ws.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

fn fmt_lengths(ls: &[Length]) -> String {
    ls.iter().map(Length::to_string).collect::<Vec<_>>().join(", ")
}

fn fmt_set(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn describe(g: &WeightedGraph) -> String {
    describe_labeled(g, 0)
}

/// Like `describe`, with leg labels shifted down by `shift`.
fn describe_labeled(g: &WeightedGraph, shift: usize) -> String {
    let edges: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    let legs: Vec<String> = (0..g.num_vertices())
        .map(|v| {
            let ls: Vec<String> = g.legs_at(v).iter().map(|l| (l - shift).to_string()).collect();
            format!("v{v}:[{}]", ls.join(","))
        })
        .collect();
    format!(
        "genera={:?} edges=[{}] legs={}",
        g.vertex_genera(),
        edges.join(" "),
        legs.join(" ")
    )
}

fn curve_value(c: &TropicalCurve) -> Value {
    let mut v = graph_value(c.graph());
    let lengths: serde_json::Map<String, Value> = c
        .lengths()
        .iter()
        .enumerate()
        .map(|(e, l)| (e.to_string(), json!(l.to_string())))
        .collect();
    v["lengths"] = Value::Object(lengths);
    v
}

fn emit_json(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializing a JSON value"))
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Invalid(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

enum Failure {
    Invalid(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    match command {
        Command::Enumerate {
            datum,
            json,
            dot,
            layer,
        } => {
            let d = datum.datum()?;
            let catalog = enumerate_stable_graphs(&d)?;
            if let Some(l) = layer {
                if l > catalog.max_edges() {
                    return Err(Error::OutOfRange(format!(
                        "layer {l} is empty; the largest has {} edges",
                        catalog.max_edges()
                    ))
                    .into());
                }
            }
            if json {
                emit_json(out, &catalog_value(&catalog, layer))?;
            } else if dot {
                write!(out, "{}", io::catalog_dot(&catalog))?;
            } else {
                writeln!(out, "datum {d}")?;
                writeln!(out, "{:>6} {:>8}", "edges", "classes")?;
                for (l, size) in catalog.layer_sizes().iter().enumerate() {
                    writeln!(out, "{l:>6} {size:>8}")?;
                }
                for (l, p, g, _) in catalog.iter() {
                    if layer.map_or(true, |x| x == l) {
                        writeln!(out, "[{l}.{p}] {}", describe(g))?;
                    }
                }
            }
        }
        Command::Fvector { datum, json } => {
            let d = datum.datum()?;
            let cx = GeneralizedConeComplex::build(&d, false)?;
            let f = cx.f_vector();
            if json {
                emit_json(
                    out,
                    &json!({"datum": datum_value(&d), "f_vector": f, "dimension": cx.dimension()}),
                )?;
            } else {
                writeln!(out, "datum {d}")?;
                writeln!(out, "f-vector {f:?}")?;
                writeln!(out, "dimension {}", cx.dimension())?;
            }
        }
        Command::Locate { curve, datum, json } => {
            let doc = read_document(&curve)?;
            let d = datum.resolve(&doc)?;
            let c = doc.curve()?;
            let cx = GeneralizedConeComplex::build(&d, c.is_extended())?;
            let point = cx.locate(&c)?;
            let cone = &cx.cones()[point.cone];
            if json {
                emit_json(
                    out,
                    &json!({
                        "datum": datum_value(&d),
                        "cone": point.cone,
                        "layer": cone.layer,
                        "position": cone.position,
                        "canonical_form": cone.form.to_hex(),
                        "graph": graph_value(&cone.graph),
                        "coordinates": point.coordinates.iter().map(Length::to_string).collect::<Vec<_>>(),
                    }),
                )?;
            } else {
                writeln!(out, "datum {d}")?;
                writeln!(out, "cone {} (layer {}, #{})", point.cone, cone.layer, cone.position)?;
                writeln!(out, "graph {}", describe(&cone.graph))?;
                writeln!(out, "coordinates ({})", fmt_lengths(&point.coordinates))?;
            }
        }
        Command::Reduce {
            from,
            to,
            genus,
            curve,
            json,
        } => {
            let a = WeightData::new(genus, from.0)?;
            let b = WeightData::new(genus, to.0)?;
            let c = read_document(&curve)?.curve()?;
            let (reduced, report) = reduce_curve(&c, &a, &b)?;
            if json {
                // serialize in canonical labels; output edge indices follow
                let (graph, lab) = reduced.graph().canonical_graph();
                let mut lengths = reduced.lengths().to_vec();
                for (e, &p) in lab.edge_position.iter().enumerate() {
                    lengths[p] = reduced.lengths()[e];
                }
                let reduced = TropicalCurve::new(graph, lengths)?;
                let transforms: Vec<Value> = report
                    .length_transform
                    .iter()
                    .map(|t| match t {
                        LengthTransform::Kept(e) => json!({"kept": lab.edge_position[*e]}),
                        LengthTransform::Dropped => json!("dropped"),
                        LengthTransform::Merged { target, partners } => {
                            json!({"merged": lab.edge_position[*target], "partners": partners})
                        }
                    })
                    .collect();
                emit_json(
                    out,
                    &json!({
                        "schema_version": io::SCHEMA_VERSION,
                        "datum": datum_value(&b),
                        "curve": curve_value(&reduced),
                        "input_class": report.input_class.to_hex(),
                        "output_class": report.output_class.to_hex(),
                        "length_transform": transforms,
                    }),
                )?;
            } else {
                writeln!(out, "reduced to type {b}")?;
                writeln!(out, "graph {}", describe(reduced.graph()))?;
                writeln!(out, "lengths ({})", fmt_lengths(reduced.lengths()))?;
                for (e, t) in report.length_transform.iter().enumerate() {
                    let what = match t {
                        LengthTransform::Kept(x) => format!("kept as edge {x}"),
                        LengthTransform::Dropped => "contracted".to_string(),
                        LengthTransform::Merged { target, partners } => {
                            format!("merged into edge {target} with {partners:?}")
                        }
                    };
                    writeln!(out, "  edge {e}: {what}")?;
                }
            }
        }
        Command::Forget {
            keep,
            curve,
            datum,
            json,
        } => {
            let doc = read_document(&curve)?;
            let a = datum.resolve(&doc)?;
            let c = doc.curve()?;
            let target = forgotten_datum(&a, &keep)?;
            let result = forget(&c, &a, &keep)?;
            if json {
                emit_json(
                    out,
                    &GraphDocument::from_curve(&result, Some(target))
                        .canonicalized()
                        .to_value(),
                )?;
            } else {
                writeln!(out, "forgot down to type {target}")?;
                writeln!(out, "graph {}", describe(result.graph()))?;
                writeln!(out, "lengths ({})", fmt_lengths(result.lengths()))?;
            }
        }
        Command::Clutch {
            graph,
            parts,
            datum,
            json,
        } => {
            let doc = read_document(&graph)?;
            let a = datum.resolve(&doc)?;
            let curves = parts
                .iter()
                .map(|p| {
                    let d = read_document(p)?;
                    match d.lengths {
                        Some(_) => d.curve(),
                        None => TropicalCurve::new(d.graph.clone(), vec![
                            Length::Finite(Rational::from_integer(1));
                            d.graph.num_edges()
                        ]),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let glued = clutch_over(&doc.graph, &a, &curves)?;
            if json {
                emit_json(
                    out,
                    &GraphDocument::from_curve(&glued, Some(a)).canonicalized().to_value(),
                )?;
            } else {
                writeln!(out, "clutched curve of type {a}")?;
                writeln!(out, "graph {}", describe(glued.graph()))?;
                writeln!(out, "lengths ({})", fmt_lengths(glued.lengths()))?;
            }
        }
        Command::Chamber { command } => return chamber(command, out),
        Command::Kapranov { n, r, s, json } => {
            let d = kapranov_weights(n, r, s)?;
            let cx = GeneralizedConeComplex::build(&d, false)?;
            if json {
                emit_json(out, &json!({"datum": datum_value(&d), "f_vector": cx.f_vector()}))?;
            } else {
                writeln!(out, "A_{{{r},{s}}}[{n}] = ({})", fmt_weights(d.weights()))?;
                writeln!(out, "f-vector {:?}", cx.f_vector())?;
            }
        }
        Command::LosevManin {
            n,
            fvector,
            graphs,
            check,
            json,
        } => {
            let d = lm_weights(n)?;
            if check {
                let c = lm_fvector_check(n)?;
                if json {
                    emit_json(
                        out,
                        &json!({
                            "n": n,
                            "partition_counts": c.partition_counts,
                            "f_vector": c.f_vector,
                            "bijection": c.bijection,
                            "equal": c.equal,
                        }),
                    )?;
                } else {
                    writeln!(out, "ordered partitions {:?}", c.partition_counts)?;
                    writeln!(out, "f-vector {:?}", c.f_vector)?;
                    writeln!(out, "bijection: {}", c.bijection)?;
                    writeln!(out, "equal: {}", c.equal)?;
                }
                return Ok(if c.equal { 0 } else { 1 });
            } else if graphs {
                let mut all = Vec::new();
                for k in 1..=n {
                    for p in ordered_partitions(n, k)? {
                        let g = chain_graph(&p, n)?;
                        all.push((p, g));
                    }
                }
                if json {
                    let items: Vec<Value> = all
                        .iter()
                        .map(|(p, g)| {
                            json!({"blocks": p.blocks(), "graph": graph_value(g)})
                        })
                        .collect();
                    // graph legs are numbered 1..=n+2; external label = key - 1
                    emit_json(
                        out,
                        &json!({"datum": datum_value(&d), "external_label_offset": 1, "chains": items}),
                    )?;
                } else {
                    writeln!(out, "legs use labels 0..={}", n + 1)?;
                    for (p, g) in &all {
                        let blocks: Vec<String> = p.blocks().iter().map(|b| fmt_set(b)).collect();
                        writeln!(out, "{} {}", blocks.join(" | "), describe_labeled(g, 1))?;
                    }
                }
            } else {
                // --fvector is the default view
                debug_assert!(fvector || !graphs);
                let cx = GeneralizedConeComplex::build(&d, false)?;
                if json {
                    emit_json(out, &json!({"datum": datum_value(&d), "f_vector": cx.f_vector()}))?;
                } else {
                    writeln!(out, "datum {d}")?;
                    writeln!(out, "f-vector {:?}", cx.f_vector())?;
                }
            }
        }
        Command::Export {
            graph,
            genus,
            weights,
            poset,
        } => {
            if let Some(path) = graph {
                let doc = read_document(&path)?;
                write!(out, "{}", io::graph_dot(&doc.graph, doc.lengths.as_deref()))?;
            } else {
                let (Some(genus), Some(weights)) = (genus, weights) else {
                    return Err(Error::OutOfRange(
                        "export needs --graph or both --genus and --weights".into(),
                    )
                    .into());
                };
                let d = WeightData::new(genus, weights.0)?;
                let catalog = enumerate_stable_graphs(&d)?;
                if poset {
                    let p = contraction_poset(&catalog)?;
                    write!(out, "{}", io::poset_dot(&catalog, &p))?;
                } else {
                    write!(out, "{}", io::catalog_dot(&catalog))?;
                }
            }
        }
    }
    Ok(0)
}

fn chamber(command: ChamberCommand, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    match command {
        ChamberCommand::Walls {
            genus,
            n,
            kind,
            json,
        } => {
            let w = walls(genus, n, kind.into());
            if json {
                emit_json(out, &json!({"genus": genus, "n": n, "walls": w.walls}))?;
            } else {
                writeln!(out, "{} walls", w.len())?;
                for s in &w.walls {
                    writeln!(out, "S={}", fmt_set(s))?;
                }
            }
        }
        ChamberCommand::Locate { datum, kind, json } => {
            let d = datum.datum()?;
            let w = walls(d.genus(), d.n(), kind.into());
            match chamber_signature(&d, &w) {
                Ok(sig) => {
                    let signs: String = sig
                        .0
                        .iter()
                        .map(|s| if *s == Sign::Positive { '+' } else { '-' })
                        .collect();
                    if json {
                        emit_json(
                            out,
                            &json!({"datum": datum_value(&d), "on_wall": null, "signature": signs}),
                        )?;
                    } else {
                        writeln!(out, "datum {d}")?;
                        writeln!(out, "signature {signs}")?;
                        for (s, sign) in w.walls.iter().zip(&sig.0) {
                            let c = if *sign == Sign::Positive { '>' } else { '<' };
                            writeln!(out, "  S={} sum {c} 1", fmt_set(s))?;
                        }
                    }
                }
                Err(Error::OnWall { subset }) => {
                    if json {
                        emit_json(out, &json!({"datum": datum_value(&d), "on_wall": subset}))?;
                    } else {
                        writeln!(out, "datum {d}")?;
                        writeln!(out, "on wall S={}", fmt_set(&subset))?;
                    }
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            }
        }
        ChamberCommand::Diff {
            genus,
            from,
            to,
            json,
        } => {
            let a = WeightData::new(genus, from.0)?;
            let b = WeightData::new(genus, to.0)?;
            let diff = wall_cross_diff(&a, &b)?;
            let side = |m: &std::collections::BTreeMap<usize, Vec<(crate::CanonicalForm, WeightedGraph)>>| {
                m.values()
                    .flatten()
                    .map(|(_, g)| graph_value(g))
                    .collect::<Vec<_>>()
            };
            if json {
                emit_json(
                    out,
                    &json!({"from": datum_value(&a), "to": datum_value(&b),
                            "lost": side(&diff.lost), "gained": side(&diff.gained)}),
                )?;
            } else {
                for (label, m) in [("lost", &diff.lost), ("gained", &diff.gained)] {
                    let count: usize = m.values().map(Vec::len).sum();
                    writeln!(out, "{label}: {count}")?;
                    for (l, gs) in m {
                        for (_, g) in gs {
                            writeln!(out, "  [{l} edges] {}", describe(g))?;
                        }
                    }
                }
            }
        }
    }
    Ok(0)
}
