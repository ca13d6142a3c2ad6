//! Tropical tautological maps: reduction, forgetful, clutching and gluing.

use num_traits::{One, Zero};

use crate::complex::{Length, TropicalCurve};
use crate::datum::{Rational, WeightData};
use crate::enumeration::{enumerate_stable_graphs, StableGraphCatalog};
use crate::error::{Error, Result};
use crate::graph::{CanonicalForm, WeightedGraph};

/// What happened to one source edge under a reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LengthTransform {
    /// The edge survives unchanged as the given output edge.
    Kept(usize),
    /// The edge was contracted (case (i)); its coordinate is dropped.
    Dropped,
    /// The edge was spliced with `partners` into output edge `target`,
    /// whose length is the sum of all of them.
    Merged { target: usize, partners: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapReport {
    pub input_class: CanonicalForm,
    pub output_class: CanonicalForm,
    /// Indexed by source edge.
    pub length_transform: Vec<LengthTransform>,
}

/// Mutable state of the reduction loop.
struct Reduction {
    genus: Vec<u32>,
    alive: Vec<bool>,
    edges: Vec<Option<(usize, usize)>>,
    sources: Vec<Vec<usize>>,
    legs: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
enum Move {
    /// Leaf vertex of genus 0 with `|v|_B <= 1`.
    ContractLeaf(usize),
    /// Bivalent genus-0 vertex without weight.
    Smooth(usize),
}

impl Reduction {
    fn new(g: &WeightedGraph) -> Self {
        Reduction {
            genus: g.vertex_genera().to_vec(),
            alive: vec![true; g.num_vertices()],
            edges: g.edges().iter().copied().map(Some).collect(),
            sources: (0..g.num_edges()).map(|e| vec![e]).collect(),
            legs: g.leg_roots().to_vec(),
        }
    }

    fn incident(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (e, edge) in self.edges.iter().enumerate() {
            if let Some((a, b)) = *edge {
                if a == v {
                    out.push(e);
                }
                if b == v {
                    out.push(e);
                }
            }
        }
        out
    }

    fn leg_weight(&self, v: usize, weights: &[Rational]) -> Rational {
        self.legs
            .iter()
            .zip(weights)
            .filter(|&(&r, _)| r == v)
            .map(|(_, w)| *w)
            .sum()
    }

    fn firing(&self, order: &[usize], weights: &[Rational]) -> Vec<Move> {
        let mut moves = Vec::new();
        for &v in order {
            if !self.alive[v] || self.genus[v] != 0 {
                continue;
            }
            let flags = self.incident(v).len();
            let w = self.leg_weight(v, weights);
            if flags == 1 && w <= Rational::one() {
                moves.push(Move::ContractLeaf(v));
            } else if flags == 2 && w.is_zero() {
                moves.push(Move::Smooth(v));
            }
        }
        moves
    }

    fn apply(&mut self, mv: Move) -> Result<()> {
        match mv {
            Move::ContractLeaf(v) => {
                let inc = self.incident(v);
                let e = inc[0];
                let (a, b) = self.edges[e].unwrap();
                if a == b {
                    return Err(Error::Internal("leaf contraction along a loop".into()));
                }
                let u = if a == v { b } else { a };
                self.edges[e] = None;
                for r in self.legs.iter_mut().filter(|r| **r == v) {
                    *r = u;
                }
                self.genus[u] += self.genus[v];
                self.alive[v] = false;
            }
            Move::Smooth(v) => {
                let inc = self.incident(v);
                if inc[0] == inc[1] {
                    return Err(Error::Internal("smoothing a vertex carrying only a loop".into()));
                }
                let (e1, e2) = (inc[0], inc[1]);
                let far = |edge: (usize, usize)| if edge.0 == v { edge.1 } else { edge.0 };
                let x = far(self.edges[e1].unwrap());
                let y = far(self.edges[e2].unwrap());
                self.edges[e1] = Some((x.min(y), x.max(y)));
                self.edges[e2] = None;
                let moved = std::mem::take(&mut self.sources[e2]);
                self.sources[e1].extend(moved);
                // zero-weight legs only; they are deleted by the forgetful map
                for r in self.legs.iter_mut().filter(|r| **r == v) {
                    *r = x;
                }
                self.alive[v] = false;
            }
        }
        Ok(())
    }

    /// Compacts into a graph plus, per output edge, its source edges.
    fn finish(self) -> (WeightedGraph, Vec<Vec<usize>>) {
        let mut new_index = vec![usize::MAX; self.alive.len()];
        let mut genus = Vec::new();
        for (v, &alive) in self.alive.iter().enumerate() {
            if alive {
                new_index[v] = genus.len();
                genus.push(self.genus[v]);
            }
        }
        let mut edges = Vec::new();
        let mut sources = Vec::new();
        for (e, edge) in self.edges.iter().enumerate() {
            if let Some((a, b)) = *edge {
                edges.push((new_index[a], new_index[b]));
                sources.push(self.sources[e].clone());
            }
        }
        let legs = self.legs.iter().map(|&r| new_index[r]).collect();
        (WeightedGraph::from_parts_unchecked(genus, edges, legs), sources)
    }
}

/// Runs cases (i) and (ii) until no vertex fails stability for `weights`
/// (which may contain zeros). `choose(k)` selects one of `k` firing moves.
fn run_reduction(
    g: &WeightedGraph,
    weights: &[Rational],
    choose: &mut dyn FnMut(usize) -> usize,
) -> Result<(WeightedGraph, Vec<Vec<usize>>)> {
    let lab = g.canonical_labeling();
    let mut order: Vec<usize> = (0..g.num_vertices()).collect();
    order.sort_by_key(|&v| lab.vertex_position[v]);

    let mut state = Reduction::new(g);
    loop {
        let moves = state.firing(&order, weights);
        if moves.is_empty() {
            break;
        }
        let k = choose(moves.len()).min(moves.len() - 1);
        state.apply(moves[k])?;
    }
    let (out, sources) = state.finish();
    if !out.is_stable_raw(weights) {
        return Err(Error::Internal("reduction ended at an unstable graph".into()));
    }
    Ok((out, sources))
}

fn check_reduction_input(g: &WeightedGraph, a: &WeightData, b: &WeightData) -> Result<()> {
    a.dominates(b)?;
    if a.genus() != b.genus() {
        return Err(Error::OutOfRange("reduction data must share the genus".into()));
    }
    if !g.is_stable(a)? {
        return Err(Error::Unstable(format!("input is not stable of type {a}")));
    }
    Ok(())
}

fn transforms(num_source_edges: usize, sources: &[Vec<usize>]) -> Vec<LengthTransform> {
    let mut out = vec![LengthTransform::Dropped; num_source_edges];
    for (t, src) in sources.iter().enumerate() {
        if src.len() == 1 {
            out[src[0]] = LengthTransform::Kept(t);
        } else {
            for &s in src {
                out[s] = LengthTransform::Merged {
                    target: t,
                    partners: src.iter().copied().filter(|&x| x != s).collect(),
                };
            }
        }
    }
    out
}

fn summed_lengths(lengths: &[Length], sources: &[Vec<usize>]) -> Vec<Length> {
    sources
        .iter()
        .map(|src| {
            src.iter()
                .map(|&s| lengths[s])
                .reduce(|x, y| x + y)
                .expect("every output edge has a source")
        })
        .collect()
}

/// Reduction `rho_{A,B}` on combinatorial types.
pub fn reduce_graph(g: &WeightedGraph, a: &WeightData, b: &WeightData) -> Result<WeightedGraph> {
    check_reduction_input(g, a, b)?;
    Ok(run_reduction(g, b.weights(), &mut |_| 0)?.0)
}

/// Reduction `rho_{A,B}` on curves; spliced edges get the sum of their lengths.
pub fn reduce_curve(
    curve: &TropicalCurve,
    a: &WeightData,
    b: &WeightData,
) -> Result<(TropicalCurve, MapReport)> {
    reduce_curve_with(curve, a, b, &mut |_| 0)
}

/// [`reduce_curve`] with an explicit choice among simultaneously firing moves.
pub fn reduce_curve_with(
    curve: &TropicalCurve,
    a: &WeightData,
    b: &WeightData,
    choose: &mut dyn FnMut(usize) -> usize,
) -> Result<(TropicalCurve, MapReport)> {
    let g = curve.graph();
    check_reduction_input(g, a, b)?;
    let (out, sources) = run_reduction(g, b.weights(), choose)?;
    let report = MapReport {
        input_class: g.canonical_form(),
        output_class: out.canonical_form(),
        length_transform: transforms(g.num_edges(), &sources),
    };
    let lengths = summed_lengths(curve.lengths(), &sources);
    Ok((TropicalCurve::new(out, lengths)?, report))
}

/// The datum `(g, A')` keeping the legs in `keep` (1-based labels).
pub fn forgotten_datum(a: &WeightData, keep: &[usize]) -> Result<WeightData> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    for &l in &keep {
        if l == 0 || l > a.n() {
            return Err(Error::OutOfRange(format!("leg {l} does not exist")));
        }
    }
    WeightData::new(a.genus(), keep.iter().map(|&l| a.weight(l)).collect())
}

/// Forgetful map: zero out the dropped legs, reduce, delete them. Kept legs
/// are relabeled `1..=r` in increasing order of their old labels.
pub fn forget(curve: &TropicalCurve, a: &WeightData, keep: &[usize]) -> Result<TropicalCurve> {
    let target = forgotten_datum(a, keep)?;
    let g = curve.graph();
    if !g.is_stable(a)? {
        return Err(Error::Unstable(format!("input is not stable of type {a}")));
    }
    let kept: Vec<bool> = (1..=a.n()).map(|l| keep.contains(&l)).collect();
    let weights: Vec<Rational> = (1..=a.n())
        .map(|l| if kept[l - 1] { a.weight(l) } else { Rational::zero() })
        .collect();
    let (out, sources) = run_reduction(g, &weights, &mut |_| 0)?;
    let lengths = summed_lengths(curve.lengths(), &sources);
    let legs: Vec<usize> = out
        .leg_roots()
        .iter()
        .zip(&kept)
        .filter(|&(_, &k)| k)
        .map(|(&r, _)| r)
        .collect();
    let graph = WeightedGraph::new(out.vertex_genera().to_vec(), out.edges().to_vec(), legs)?;
    debug_assert!(graph.is_stable(&target).unwrap_or(false));
    TropicalCurve::new(graph, lengths)
}

/// Legs of `v` followed by one entry per edge flag at `v` (edge order,
/// loops contributing two consecutive flags).
fn vertex_flags(g: &WeightedGraph, v: usize) -> (Vec<usize>, Vec<(usize, u8)>) {
    let mut flags = Vec::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if a == v {
            flags.push((e, 0));
        }
        if b == v {
            flags.push((e, 1));
        }
    }
    (g.legs_at(v), flags)
}

/// `(h(v), A(v))`: weights of the legs at `v`, then a one per edge flag.
pub fn vertex_datum(g: &WeightedGraph, a: &WeightData, v: usize) -> Result<WeightData> {
    let (legs, flags) = vertex_flags(g, v);
    let mut weights: Vec<Rational> = legs.iter().map(|&l| a.weight(l)).collect();
    weights.extend(std::iter::repeat(Rational::one()).take(flags.len()));
    WeightData::new(g.vertex_genus(v)?, weights)
}

/// Clutching over `g`: glue the part curves along the edges of `g` with
/// bridges of infinite length. `parts[v]` belongs to vertex `v` and has the
/// legs of `v` first (increasing label), then one leg per edge flag.
pub fn clutch_over(g: &WeightedGraph, a: &WeightData, parts: &[TropicalCurve]) -> Result<TropicalCurve> {
    if !g.is_stable(a)? {
        return Err(Error::Unstable(format!("clutching graph is not stable of type {a}")));
    }
    if parts.len() != g.num_vertices() {
        return Err(Error::ArityMismatch {
            expected: g.num_vertices(),
            found: parts.len(),
        });
    }
    let mut offsets = Vec::with_capacity(parts.len());
    let mut genus = Vec::new();
    let mut edges = Vec::new();
    let mut lengths = Vec::new();
    let mut legs = vec![0; a.n()];
    let mut flag_roots = vec![[0usize; 2]; g.num_edges()];
    for (v, part) in parts.iter().enumerate() {
        let datum = vertex_datum(g, a, v)?;
        if part.graph().num_legs() != datum.n() {
            return Err(Error::ArityMismatch {
                expected: datum.n(),
                found: part.graph().num_legs(),
            });
        }
        if !part.graph().is_stable(&datum)? {
            return Err(Error::Unstable(format!("part {v} is not stable of type {datum}")));
        }
        let offset = genus.len();
        offsets.push(offset);
        genus.extend_from_slice(part.graph().vertex_genera());
        edges.extend(part.graph().edges().iter().map(|&(x, y)| (x + offset, y + offset)));
        lengths.extend_from_slice(part.lengths());
        let roots = part.graph().leg_roots();
        let (vlegs, flags) = vertex_flags(g, v);
        for (k, &label) in vlegs.iter().enumerate() {
            legs[label - 1] = roots[k] + offset;
        }
        for (k, &(e, end)) in flags.iter().enumerate() {
            flag_roots[e][end as usize] = roots[vlegs.len() + k] + offset;
        }
    }
    for [x, y] in flag_roots {
        edges.push((x, y));
        lengths.push(Length::Infinite);
    }
    TropicalCurve::new(WeightedGraph::new(genus, edges, legs)?, lengths)
}

fn check_part(curve: &TropicalCurve, datum: &WeightData, glued: usize) -> Result<()> {
    let n = datum.n();
    if n < glued || datum.weights()[n - glued..].iter().any(|w| !w.is_one()) {
        return Err(Error::OutOfRange(format!(
            "the last {glued} weight(s) of {datum} must be 1"
        )));
    }
    if !curve.graph().is_stable(datum)? {
        return Err(Error::Unstable(format!("curve is not stable of type {datum}")));
    }
    Ok(())
}

/// Clutching `kappa`: joins the last leg of `c1` (type `(g1, A1 + {1})`) and
/// the last leg of `c2` by an infinite bridge. Returns the curve and its
/// datum `(g1 + g2, A1 + A2)`.
pub fn kappa(
    c1: &TropicalCurve,
    d1: &WeightData,
    c2: &TropicalCurve,
    d2: &WeightData,
) -> Result<(TropicalCurve, WeightData)> {
    check_part(c1, d1, 1)?;
    check_part(c2, d2, 1)?;
    let (g1, g2) = (c1.graph(), c2.graph());
    let (n1, n2) = (d1.n() - 1, d2.n() - 1);
    let off = g1.num_vertices();
    let mut genus = g1.vertex_genera().to_vec();
    genus.extend_from_slice(g2.vertex_genera());
    let mut edges = g1.edges().to_vec();
    edges.extend(g2.edges().iter().map(|&(x, y)| (x + off, y + off)));
    edges.push((g1.leg_roots()[n1], g2.leg_roots()[n2] + off));
    let mut legs = g1.leg_roots()[..n1].to_vec();
    legs.extend(g2.leg_roots()[..n2].iter().map(|&r| r + off));
    let mut lengths = c1.lengths().to_vec();
    lengths.extend_from_slice(c2.lengths());
    lengths.push(Length::Infinite);
    let mut weights = d1.weights()[..n1].to_vec();
    weights.extend_from_slice(&d2.weights()[..n2]);
    let datum = WeightData::new(d1.genus() + d2.genus(), weights)?;
    Ok((TropicalCurve::new(WeightedGraph::new(genus, edges, legs)?, lengths)?, datum))
}

/// Gluing `gamma`: joins legs `n+1` and `n+2` of a curve of type
/// `(g - 1, A + {1, 1})` by an infinite edge. Returns the curve and `(g, A)`.
pub fn gamma(curve: &TropicalCurve, d: &WeightData) -> Result<(TropicalCurve, WeightData)> {
    check_part(curve, d, 2)?;
    let g = curve.graph();
    let n = d.n() - 2;
    let roots = g.leg_roots();
    let mut edges = g.edges().to_vec();
    edges.push((roots[n], roots[n + 1]));
    let mut lengths = curve.lengths().to_vec();
    lengths.push(Length::Infinite);
    let datum = WeightData::new(d.genus() + 1, d.weights()[..n].to_vec())?;
    let graph = WeightedGraph::new(g.vertex_genera().to_vec(), edges, roots[..n].to_vec())?;
    Ok((TropicalCurve::new(graph, lengths)?, datum))
}

/// Section of `rho_{A,B}`: the `B`-catalog as the subcomplex of `A`-stable
/// classes that are also `B`-stable.
#[derive(Clone, Debug)]
pub struct SubcomplexEmbedding {
    pub source: StableGraphCatalog,
    pub target: StableGraphCatalog,
    /// `(layer, position)` in the `B`-catalog mapped to the same class in the `A`-catalog.
    pub map: Vec<((usize, usize), (usize, usize))>,
}

impl SubcomplexEmbedding {
    pub fn image(&self) -> Vec<(usize, usize)> {
        self.map.iter().map(|(_, t)| *t).collect()
    }

    /// The section on points: a `B`-stable curve is kept as it is.
    pub fn embed_curve(&self, curve: &TropicalCurve) -> Result<TropicalCurve> {
        if !curve.graph().is_stable(self.source.datum())? {
            return Err(Error::Unstable(format!(
                "curve is not stable of type {}",
                self.source.datum()
            )));
        }
        Ok(curve.clone())
    }
}

pub fn reduction_section(a: &WeightData, b: &WeightData) -> Result<SubcomplexEmbedding> {
    a.dominates(b)?;
    if a.genus() != b.genus() {
        return Err(Error::OutOfRange("reduction data must share the genus".into()));
    }
    let source = enumerate_stable_graphs(b)?;
    let target = enumerate_stable_graphs(a)?;
    let mut map = Vec::with_capacity(source.len());
    for (l, p, _, form) in source.iter() {
        let t = target.locate(form).ok_or_else(|| {
            Error::Internal("B-stable class missing from the A-catalog".into())
        })?;
        map.push(((l, p), t));
    }
    Ok(SubcomplexEmbedding { source, target, map })
}
