//! JSON documents for graphs, curves and catalogs, and DOT export.
//!
//! A graph document looks like
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "datum": {"genus": 0, "weights": ["1", "1/2", "1/2"]},
//!   "genus_labels": {"0": 0, "1": 0},
//!   "edges": [["0", "1"]],
//!   "legs": {"1": "0", "2": "1", "3": "1"},
//!   "lengths": {"0": "1/3"}
//! }
//! ```
//!
//! `datum` and `lengths` are optional. Vertex ids are strings (integers are
//! accepted too); ids that all parse as integers are ordered numerically,
//! otherwise lexicographically, and that order fixes the vertex indices.
//! Rationals are always strings `"p/q"`, never floats; an infinite length is
//! `"inf"`. Object keys are checked for duplicates, so a leg label listed
//! twice is rejected rather than silently overwritten.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::de::{self, Deserialize, Deserializer, MapAccess, SeqAccess, Visitor};
use serde_json::{json, Map, Value};

use crate::complex::{Length, TropicalCurve};
use crate::datum::{format_rational, parse_rational, Rational, WeightData};
use crate::enumeration::{ContractionPoset, StableGraphCatalog};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

pub const SCHEMA_VERSION: &str = "1";

/// JSON tree that keeps object entries in order, duplicates included.
#[derive(Clone, Debug, PartialEq)]
enum Raw {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Arr(Vec<Raw>),
    Obj(Vec<(String, Raw)>),
}

impl Raw {
    fn kind(&self) -> &'static str {
        match self {
            Raw::Null => "null",
            Raw::Bool(_) => "a boolean",
            Raw::Int(_) => "an integer",
            Raw::Float(_) => "a float",
            Raw::Str(_) => "a string",
            Raw::Arr(_) => "an array",
            Raw::Obj(_) => "an object",
        }
    }
}

impl<'de> Deserialize<'de> for Raw {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RawVisitor;

        impl<'de> Visitor<'de> for RawVisitor {
            type Value = Raw;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("any JSON value")
            }

            fn visit_unit<E>(self) -> std::result::Result<Raw, E> {
                Ok(Raw::Null)
            }

            fn visit_bool<E>(self, v: bool) -> std::result::Result<Raw, E> {
                Ok(Raw::Bool(v))
            }

            fn visit_i64<E>(self, v: i64) -> std::result::Result<Raw, E> {
                Ok(Raw::Int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Raw, E> {
                i64::try_from(v)
                    .map(Raw::Int)
                    .map_err(|_| E::custom("integer too large"))
            }

            fn visit_f64<E>(self, v: f64) -> std::result::Result<Raw, E> {
                Ok(Raw::Float(v))
            }

            fn visit_str<E>(self, v: &str) -> std::result::Result<Raw, E> {
                Ok(Raw::Str(v.to_string()))
            }

            fn visit_string<E>(self, v: String) -> std::result::Result<Raw, E> {
                Ok(Raw::Str(v))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Raw, A::Error> {
                let mut out = Vec::new();
                while let Some(x) = seq.next_element()? {
                    out.push(x);
                }
                Ok(Raw::Arr(out))
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Raw, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, Raw>()? {
                    out.push((k, v));
                }
                Ok(Raw::Obj(out))
            }
        }

        d.deserialize_any(RawVisitor)
    }
}

/// Escapes a key for use in a JSON pointer.
fn pointer(base: &str, key: &str) -> String {
    format!("{base}/{}", key.replace('~', "~0").replace('/', "~1"))
}

fn expect_obj<'a>(raw: &'a Raw, path: &str) -> Result<&'a [(String, Raw)]> {
    match raw {
        Raw::Obj(entries) => Ok(entries),
        other => Err(Error::parse(path, format!("expected an object, found {}", other.kind()))),
    }
}

fn expect_arr<'a>(raw: &'a Raw, path: &str) -> Result<&'a [Raw]> {
    match raw {
        Raw::Arr(items) => Ok(items),
        other => Err(Error::parse(path, format!("expected an array, found {}", other.kind()))),
    }
}

/// Object entries keyed by name, rejecting duplicates.
fn unique_entries<'a>(entries: &'a [(String, Raw)], path: &str) -> Result<BTreeMap<&'a str, &'a Raw>> {
    let mut out = BTreeMap::new();
    for (k, v) in entries {
        if out.insert(k.as_str(), v).is_some() {
            return Err(Error::parse(path, format!("duplicate key \"{k}\"")));
        }
    }
    Ok(out)
}

fn expect_id(raw: &Raw, path: &str) -> Result<String> {
    match raw {
        Raw::Str(s) => Ok(s.clone()),
        Raw::Int(i) => Ok(i.to_string()),
        other => Err(Error::parse(
            path,
            format!("expected a vertex id, found {}", other.kind()),
        )),
    }
}

fn expect_u32(raw: &Raw, path: &str) -> Result<u32> {
    match raw {
        Raw::Int(i) => u32::try_from(*i).map_err(|_| Error::parse(path, format!("{i} is not a genus"))),
        other => Err(Error::parse(
            path,
            format!("expected a non-negative integer, found {}", other.kind()),
        )),
    }
}

fn expect_rational(raw: &Raw, path: &str) -> Result<Rational> {
    match raw {
        Raw::Str(s) => parse_rational(s)
            .ok_or_else(|| Error::parse(path, format!("\"{s}\" is not a rational p/q"))),
        Raw::Int(i) => Ok(Rational::from_integer(*i)),
        Raw::Float(_) => Err(Error::parse(
            path,
            "floats are not accepted; write rationals as \"p/q\" strings",
        )),
        other => Err(Error::parse(
            path,
            format!("expected a rational, found {}", other.kind()),
        )),
    }
}

fn expect_length(raw: &Raw, path: &str) -> Result<Length> {
    match raw {
        Raw::Str(s) => s
            .parse::<Length>()
            .map_err(|_| Error::parse(path, format!("\"{s}\" is not a positive length"))),
        _ => match expect_rational(raw, path)? {
            r if r > Rational::from_integer(0) => Ok(Length::Finite(r)),
            r => Err(Error::parse(
                path,
                format!("length {} is not positive", format_rational(&r)),
            )),
        },
    }
}

fn parse_datum(raw: &Raw, path: &str) -> Result<WeightData> {
    let fields = unique_entries(expect_obj(raw, path)?, path)?;
    for k in fields.keys() {
        if !matches!(*k, "genus" | "weights") {
            return Err(Error::parse(pointer(path, k), "unknown field"));
        }
    }
    let gpath = pointer(path, "genus");
    let genus = expect_u32(
        fields
            .get("genus")
            .ok_or_else(|| Error::parse(&gpath, "missing field"))?,
        &gpath,
    )?;
    let wpath = pointer(path, "weights");
    let items = expect_arr(
        fields
            .get("weights")
            .ok_or_else(|| Error::parse(&wpath, "missing field"))?,
        &wpath,
    )?;
    let weights = items
        .iter()
        .enumerate()
        .map(|(i, w)| expect_rational(w, &pointer(&wpath, &i.to_string())))
        .collect::<Result<Vec<_>>>()?;
    WeightData::new(genus, weights).map_err(|e| Error::parse(path, e.to_string()))
}

/// Orders vertex ids numerically when all are integers, otherwise as strings.
fn order_ids(ids: Vec<String>) -> Vec<String> {
    let mut ids = ids;
    if ids.iter().all(|s| s.parse::<i64>().is_ok()) {
        ids.sort_by_key(|s| s.parse::<i64>().unwrap());
    } else {
        ids.sort();
    }
    ids
}

/// A graph, optionally with a datum and edge lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDocument {
    pub schema_version: String,
    pub datum: Option<WeightData>,
    pub graph: WeightedGraph,
    pub lengths: Option<Vec<Length>>,
}

impl GraphDocument {
    pub fn from_graph(graph: WeightedGraph) -> Self {
        GraphDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            datum: None,
            graph,
            lengths: None,
        }
    }

    pub fn from_curve(curve: &TropicalCurve, datum: Option<WeightData>) -> Self {
        GraphDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            datum,
            graph: curve.graph().clone(),
            lengths: Some(curve.lengths().to_vec()),
        }
    }

    /// The metric curve, if lengths are present.
    pub fn curve(&self) -> Result<TropicalCurve> {
        let lengths = self
            .lengths
            .clone()
            .ok_or_else(|| Error::parse("/lengths", "document has no lengths"))?;
        TropicalCurve::new(self.graph.clone(), lengths)
    }

    /// The same document with the graph in canonical labeling and lengths
    /// permuted along.
    pub fn canonicalized(&self) -> GraphDocument {
        let (graph, lab) = self.graph.canonical_graph();
        let lengths = self.lengths.as_ref().map(|ls| {
            let mut out = ls.clone();
            for (e, &p) in lab.edge_position.iter().enumerate() {
                out[p] = ls[e];
            }
            out
        });
        GraphDocument {
            schema_version: self.schema_version.clone(),
            datum: self.datum.clone(),
            graph,
            lengths,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("schema_version".into(), json!(self.schema_version));
        if let Some(d) = &self.datum {
            obj.insert("datum".into(), datum_value(d));
        }
        if let Value::Object(g) = graph_value(&self.graph) {
            obj.extend(g);
        }
        if let Some(ls) = &self.lengths {
            let m: Map<String, Value> = ls
                .iter()
                .enumerate()
                .map(|(e, l)| (e.to_string(), json!(l.to_string())))
                .collect();
            obj.insert("lengths".into(), Value::Object(m));
        }
        Value::Object(obj)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializing a JSON value")
    }
}

pub fn datum_value(d: &WeightData) -> Value {
    json!({
        "genus": d.genus(),
        "weights": d.weights().iter().map(format_rational).collect::<Vec<_>>(),
    })
}

/// `{"genus_labels", "edges", "legs"}` with vertex ids equal to indices.
pub fn graph_value(g: &WeightedGraph) -> Value {
    let genus: Map<String, Value> = g
        .vertex_genera()
        .iter()
        .enumerate()
        .map(|(v, h)| (v.to_string(), json!(h)))
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|(a, b)| json!([a.to_string(), b.to_string()]))
        .collect();
    let legs: Map<String, Value> = g
        .leg_roots()
        .iter()
        .enumerate()
        .map(|(i, v)| ((i + 1).to_string(), json!(v.to_string())))
        .collect();
    json!({ "genus_labels": genus, "edges": edges, "legs": legs })
}

/// Parses and validates a graph or curve document.
pub fn parse_graph(text: &str) -> Result<GraphDocument> {
    let raw: Raw = serde_json::from_str(text).map_err(|e| Error::parse("", e.to_string()))?;
    parse_document(&raw, "")
}

fn parse_document(raw: &Raw, path: &str) -> Result<GraphDocument> {
    let fields = unique_entries(expect_obj(raw, path)?, path)?;
    for k in fields.keys() {
        if !matches!(
            *k,
            "schema_version" | "datum" | "genus_labels" | "edges" | "legs" | "lengths"
        ) {
            return Err(Error::parse(pointer(path, k), "unknown field"));
        }
    }
    let field = |name: &str| -> Result<(&Raw, String)> {
        let p = pointer(path, name);
        match fields.get(name) {
            Some(r) => Ok((*r, p)),
            None => Err(Error::parse(p, "missing field")),
        }
    };

    let schema_version = match fields.get("schema_version") {
        None => SCHEMA_VERSION.to_string(),
        Some(Raw::Str(s)) if s == SCHEMA_VERSION => s.clone(),
        Some(other) => {
            return Err(Error::parse(
                pointer(path, "schema_version"),
                format!("unsupported schema version {other:?}"),
            ))
        }
    };
    let datum = match fields.get("datum") {
        Some(r) => Some(parse_datum(r, &pointer(path, "datum"))?),
        None => None,
    };

    let (glabels, gpath) = field("genus_labels")?;
    let glabels = expect_obj(glabels, &gpath)?;
    let mut genus_of = BTreeMap::new();
    for (id, h) in glabels {
        let hp = pointer(&gpath, id);
        if genus_of.insert(id.clone(), expect_u32(h, &hp)?).is_some() {
            return Err(Error::parse(&gpath, format!("vertex \"{id}\" listed twice")));
        }
    }
    if genus_of.is_empty() {
        return Err(Error::parse(&gpath, "a graph needs at least one vertex"));
    }
    let ids = order_ids(genus_of.keys().cloned().collect());
    let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let genus: Vec<u32> = ids.iter().map(|id| genus_of[id]).collect();

    let resolve = |raw: &Raw, p: &str| -> Result<usize> {
        let id = expect_id(raw, p)?;
        index
            .get(id.as_str())
            .copied()
            .ok_or_else(|| Error::parse(p, format!("unknown vertex \"{id}\"")))
    };

    let (edges_raw, epath) = field("edges")?;
    let mut edges = Vec::new();
    for (i, e) in expect_arr(edges_raw, &epath)?.iter().enumerate() {
        let ep = pointer(&epath, &i.to_string());
        let ends = expect_arr(e, &ep)?;
        if ends.len() != 2 {
            return Err(Error::parse(&ep, "an edge has exactly two endpoints"));
        }
        let a = resolve(&ends[0], &pointer(&ep, "0"))?;
        let b = resolve(&ends[1], &pointer(&ep, "1"))?;
        edges.push((a, b));
    }

    let (legs_raw, lpath) = field("legs")?;
    let legs_obj = expect_obj(legs_raw, &lpath)?;
    let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
    for (label, v) in legs_obj {
        let lp = pointer(&lpath, label);
        let l: usize = label
            .parse()
            .ok()
            .filter(|&l| l >= 1)
            .ok_or_else(|| Error::parse(&lp, format!("leg label \"{label}\" is not a positive integer")))?;
        let root = resolve(v, &lp)?;
        if roots.insert(l, root).is_some() {
            return Err(Error::parse(&lpath, format!("duplicate leg label {l}")));
        }
    }
    let n = roots.len();
    if let Some((&l, _)) = roots.iter().find(|(&l, _)| l > n) {
        return Err(Error::parse(
            &lpath,
            format!("leg labels must be exactly 1..{n}, found {l}"),
        ));
    }
    let legs: Vec<usize> = roots.into_values().collect();

    if let Some(d) = &datum {
        if d.n() != n {
            return Err(Error::parse(
                pointer(path, "datum"),
                format!("datum has {} weights but the graph has {n} legs", d.n()),
            ));
        }
    }

    let graph = WeightedGraph::new(genus, edges, legs)?;

    let lengths = match fields.get("lengths") {
        None => None,
        Some(r) => {
            let lp = pointer(path, "lengths");
            let entries = expect_obj(r, &lp)?;
            let mut by_edge: BTreeMap<usize, Length> = BTreeMap::new();
            for (k, v) in entries {
                let kp = pointer(&lp, k);
                let e: usize = k
                    .parse()
                    .ok()
                    .filter(|&e| e < graph.num_edges())
                    .ok_or_else(|| Error::parse(&kp, format!("\"{k}\" is not an edge index")))?;
                if by_edge.insert(e, expect_length(v, &kp)?).is_some() {
                    return Err(Error::parse(&lp, format!("duplicate edge index {e}")));
                }
            }
            if by_edge.len() != graph.num_edges() {
                return Err(Error::parse(
                    &lp,
                    format!(
                        "{} lengths given for {} edges",
                        by_edge.len(),
                        graph.num_edges()
                    ),
                ));
            }
            Some(by_edge.into_values().collect())
        }
    };

    Ok(GraphDocument {
        schema_version,
        datum,
        graph,
        lengths,
    })
}

/// `{"schema_version", "datum", "layers": [[graph, ...], ...]}`.
pub fn catalog_value(catalog: &StableGraphCatalog, layer: Option<usize>) -> Value {
    let layers: Vec<Value> = catalog
        .layers()
        .iter()
        .enumerate()
        .filter(|(l, _)| layer.map_or(true, |x| x == *l))
        .map(|(_, gs)| Value::Array(gs.iter().map(graph_value).collect()))
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "datum": datum_value(catalog.datum()),
        "layers": layers,
    })
}

/// Parses the graphs of a catalog document, layer by layer.
pub fn parse_catalog(text: &str) -> Result<(WeightData, Vec<Vec<WeightedGraph>>)> {
    let raw: Raw = serde_json::from_str(text).map_err(|e| Error::parse("", e.to_string()))?;
    let fields = unique_entries(expect_obj(&raw, "")?, "")?;
    let datum = parse_datum(
        fields
            .get("datum")
            .ok_or_else(|| Error::parse("/datum", "missing field"))?,
        "/datum",
    )?;
    let layers_raw = expect_arr(
        fields
            .get("layers")
            .ok_or_else(|| Error::parse("/layers", "missing field"))?,
        "/layers",
    )?;
    let mut layers = Vec::with_capacity(layers_raw.len());
    for (l, layer) in layers_raw.iter().enumerate() {
        let lp = format!("/layers/{l}");
        let mut gs = Vec::new();
        for (i, g) in expect_arr(layer, &lp)?.iter().enumerate() {
            gs.push(parse_document(g, &format!("{lp}/{i}"))?.graph);
        }
        layers.push(gs);
    }
    Ok((datum, layers))
}

fn dot_body(out: &mut String, g: &WeightedGraph, lengths: Option<&[Length]>, prefix: &str, indent: &str) {
    for (v, h) in g.vertex_genera().iter().enumerate() {
        let _ = writeln!(out, "{indent}{prefix}v{v} [label=\"v{v} (g={h})\"];");
    }
    for (i, &v) in g.leg_roots().iter().enumerate() {
        let l = i + 1;
        let _ = writeln!(out, "{indent}{prefix}leg{l} [shape=point, width=0.05];");
        let _ = writeln!(out, "{indent}{prefix}v{v} -- {prefix}leg{l} [label=\"{l}\", style=dashed];");
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        match lengths {
            Some(ls) => {
                let _ = writeln!(out, "{indent}{prefix}v{a} -- {prefix}v{b} [label=\"{}\"];", ls[e]);
            }
            None => {
                let _ = writeln!(out, "{indent}{prefix}v{a} -- {prefix}v{b};");
            }
        }
    }
}

/// DOT text for a graph, with edge lengths as labels when given.
pub fn graph_dot(g: &WeightedGraph, lengths: Option<&[Length]>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    dot_body(&mut out, g, lengths, "", "  ");
    out.push_str("}\n");
    out
}

/// DOT text with one cluster per catalog graph.
pub fn catalog_dot(catalog: &StableGraphCatalog) -> String {
    let mut out = String::from("graph catalog {\n  node [shape=circle];\n");
    for (l, p, g, _) in catalog.iter() {
        let _ = writeln!(out, "  subgraph cluster_{l}_{p} {{");
        let _ = writeln!(out, "    label=\"layer {l} #{p}\";");
        dot_body(&mut out, g, None, &format!("g{l}_{p}_"), "    ");
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

/// Hasse diagram of the contraction poset; arrows point to contractions.
pub fn poset_dot(catalog: &StableGraphCatalog, poset: &ContractionPoset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for (l, forms) in catalog.layer_forms().iter().enumerate() {
        let _ = write!(out, "  {{ rank=same;");
        for p in 0..forms.len() {
            let _ = write!(out, " n{l}_{p};");
        }
        out.push_str(" }\n");
        for p in 0..forms.len() {
            let g = catalog.get(l, p);
            let _ = writeln!(
                out,
                "  n{l}_{p} [label=\"{l}:{p} |V|={} |E|={}\"];",
                g.num_vertices(),
                g.num_edges()
            );
        }
    }
    let covers: BTreeSet<_> = poset.covers.iter().collect();
    for ((la, pa), (lb, pb)) in covers {
        let _ = writeln!(out, "  n{la}_{pa} -> n{lb}_{pb};");
    }
    out.push_str("}\n");
    out
}
