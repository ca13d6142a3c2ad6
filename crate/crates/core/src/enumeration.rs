//! Isomorphism classes of `(g, A)`-stable graphs and their contraction poset.
//!
//! Layer `e + 1` is generated from layer `e` by the two inverse contractions:
//! splitting a vertex into two vertices joined by a new edge, and trading one
//! unit of vertex genus for a loop. Every stable graph contracts onto the
//! one-vertex graph through stable graphs, so the layers are complete.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use crate::datum::{Rational, WeightData};
use crate::error::{Error, Result};
use crate::graph::{CanonicalForm, WeightedGraph};

#[derive(Clone, Debug)]
pub struct StableGraphCatalog {
    datum: WeightData,
    layers: Vec<Vec<WeightedGraph>>,
    forms: Vec<Vec<CanonicalForm>>,
    index: HashMap<CanonicalForm, (usize, usize)>,
}

impl StableGraphCatalog {
    pub fn datum(&self) -> &WeightData {
        &self.datum
    }

    /// Canonical graphs grouped by edge count.
    pub fn layers(&self) -> &[Vec<WeightedGraph>] {
        &self.layers
    }

    pub fn layer_forms(&self) -> &[Vec<CanonicalForm>] {
        &self.forms
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_edges(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn get(&self, layer: usize, position: usize) -> &WeightedGraph {
        &self.layers[layer][position]
    }

    pub fn locate(&self, form: &CanonicalForm) -> Option<(usize, usize)> {
        self.index.get(form).copied()
    }

    pub fn contains(&self, form: &CanonicalForm) -> bool {
        self.index.contains_key(form)
    }

    /// `(layer, position, graph, form)` in layer order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &WeightedGraph, &CanonicalForm)> {
        self.layers.iter().zip(&self.forms).enumerate().flat_map(|(l, (gs, fs))| {
            gs.iter()
                .zip(fs)
                .enumerate()
                .map(move |(p, (g, f))| (l, p, g, f))
        })
    }

    pub fn forms(&self) -> BTreeSet<CanonicalForm> {
        self.index.keys().cloned().collect()
    }
}

fn vertex_is_stable(g: &WeightedGraph, v: usize, weights: &[Rational]) -> bool {
    let c = Rational::from_integer(2 * g.vertex_genera()[v] as i64 - 2)
        + Rational::from_integer(g.edge_valence_unchecked(v) as i64)
        + g.leg_weight_raw(v, weights);
    c > Rational::zero()
}

/// All graphs with one more edge that contract onto `g` along that edge and
/// stay stable at the modified vertices.
fn uncontractions(g: &WeightedGraph, weights: &[Rational]) -> Vec<WeightedGraph> {
    let mut out = Vec::new();
    let nv = g.num_vertices();
    let genera = g.vertex_genera();
    for v in 0..nv {
        let h = genera[v];
        if h >= 1 {
            let mut genus = genera.to_vec();
            genus[v] -= 1;
            let mut edges = g.edges().to_vec();
            edges.push((v, v));
            out.push(WeightedGraph::from_parts_unchecked(
                genus,
                edges,
                g.leg_roots().to_vec(),
            ));
        }

        // flags at v: (edge, which endpoint)
        let mut flags: Vec<(usize, u8)> = Vec::new();
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if a == v {
                flags.push((e, 0));
            }
            if b == v {
                flags.push((e, 1));
            }
        }
        let legs = g.legs_at(v);
        let nf = flags.len();
        let total_bits = nf + legs.len();
        let new_vertex = nv;
        for mask in 0u64..(1u64 << total_bits) {
            let mut edges = g.edges().to_vec();
            for (k, &(e, end)) in flags.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    if end == 0 {
                        edges[e].0 = new_vertex;
                    } else {
                        edges[e].1 = new_vertex;
                    }
                }
            }
            edges.push((v, new_vertex));
            let mut roots = g.leg_roots().to_vec();
            for (k, &label) in legs.iter().enumerate() {
                if mask >> (nf + k) & 1 == 1 {
                    roots[label - 1] = new_vertex;
                }
            }
            for h1 in 0..=h {
                let mut genus = genera.to_vec();
                genus[v] = h1;
                genus.push(h - h1);
                let candidate =
                    WeightedGraph::from_parts_unchecked(genus, edges.clone(), roots.clone());
                if vertex_is_stable(&candidate, v, weights)
                    && vertex_is_stable(&candidate, new_vertex, weights)
                {
                    out.push(candidate);
                }
            }
        }
    }
    out
}

/// Enumerates all isomorphism classes of graphs stable of type `datum`.
pub fn enumerate_stable_graphs(datum: &WeightData) -> Result<StableGraphCatalog> {
    let datum = WeightData::new(datum.genus(), datum.weights().to_vec())?;
    let weights = datum.weights().to_vec();

    let (root, _) = WeightedGraph::star(datum.genus(), datum.n()).canonical_graph();
    let mut layers = vec![vec![root.clone()]];
    let mut forms = vec![vec![root.canonical_form()]];

    loop {
        let current = layers.last().unwrap();
        let children: Vec<Vec<(CanonicalForm, WeightedGraph)>> = current
            .par_iter()
            .map(|g| {
                uncontractions(g, &weights)
                    .into_iter()
                    .map(|c| {
                        let (canon, lab) = c.canonical_graph();
                        (lab.form, canon)
                    })
                    .collect()
            })
            .collect();
        let mut merged: BTreeMap<CanonicalForm, WeightedGraph> = BTreeMap::new();
        for batch in children {
            for (f, g) in batch {
                merged.entry(f).or_insert(g);
            }
        }
        if merged.is_empty() {
            break;
        }
        let (fs, gs): (Vec<_>, Vec<_>) = merged.into_iter().unzip();
        layers.push(gs);
        forms.push(fs);
    }

    let mut index = HashMap::new();
    for (l, fs) in forms.iter().enumerate() {
        for (p, f) in fs.iter().enumerate() {
            index.insert(f.clone(), (l, p));
        }
    }
    Ok(StableGraphCatalog {
        datum,
        layers,
        forms,
        index,
    })
}

/// Cover relations of the contraction order.
#[derive(Clone, Debug)]
pub struct ContractionPoset {
    /// `(from, to)` where `to` is `from` with one edge contracted; entries are
    /// `(layer, position)` catalog coordinates.
    pub covers: Vec<((usize, usize), (usize, usize))>,
}

impl ContractionPoset {
    pub fn covers_from(&self, node: (usize, usize)) -> Vec<(usize, usize)> {
        self.covers
            .iter()
            .filter(|(a, _)| *a == node)
            .map(|(_, b)| *b)
            .collect()
    }
}

pub fn contraction_poset(catalog: &StableGraphCatalog) -> Result<ContractionPoset> {
    let mut covers = BTreeSet::new();
    for (l, p, g, _) in catalog.iter() {
        for e in 0..g.num_edges() {
            let (c, _) = g.contract(&[e])?;
            let target = catalog.locate(&c.canonical_form()).ok_or_else(|| {
                Error::Internal(format!(
                    "contracting edge {e} of catalog graph ({l}, {p}) leaves the catalog"
                ))
            })?;
            covers.insert(((l, p), target));
        }
    }
    Ok(ContractionPoset {
        covers: covers.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::rational;

    fn datum(g: u32, ws: &[(i64, i64)]) -> WeightData {
        WeightData::new(g, ws.iter().map(|&(p, q)| rational(p, q)).collect()).unwrap()
    }

    #[test]
    fn m05_layers() {
        let c = enumerate_stable_graphs(&WeightData::classical(0, 5).unwrap()).unwrap();
        assert_eq!(c.layer_sizes(), vec![1, 10, 15]);
        assert_eq!(c.len(), 26);
    }

    #[test]
    fn m11_layers() {
        let c = enumerate_stable_graphs(&WeightData::classical(1, 1).unwrap()).unwrap();
        assert_eq!(c.layer_sizes(), vec![1, 1]);
    }

    #[test]
    fn small_weights_give_a_point() {
        let c = enumerate_stable_graphs(&datum(0, &[(1, 3), (1, 3), (1, 3), (1, 3), (1, 1)]))
            .unwrap();
        assert_eq!(c.layer_sizes(), vec![1]);
    }

    #[test]
    fn genus_two_top_layer() {
        let c = enumerate_stable_graphs(&WeightData::new(2, vec![]).unwrap()).unwrap();
        let top = c.layers().last().unwrap();
        assert_eq!(top.len(), 2);
        let theta = WeightedGraph::new(vec![0, 0], vec![(0, 1); 3], vec![]).unwrap();
        let dumbbell =
            WeightedGraph::new(vec![0, 0], vec![(0, 0), (0, 1), (1, 1)], vec![]).unwrap();
        assert!(c.contains(&theta.canonical_form()));
        assert!(c.contains(&dumbbell.canonical_form()));
    }

    #[test]
    fn m05_poset_covers() {
        let c = enumerate_stable_graphs(&WeightData::classical(0, 5).unwrap()).unwrap();
        let poset = contraction_poset(&c).unwrap();
        for p in 0..15 {
            assert_eq!(poset.covers_from((2, p)).len(), 2);
        }
        assert!(poset.covers_from((0, 0)).is_empty());
        for (a, b) in &poset.covers {
            assert_eq!(a.0, b.0 + 1);
        }
    }

    #[test]
    fn m11_poset() {
        let c = enumerate_stable_graphs(&WeightData::classical(1, 1).unwrap()).unwrap();
        let poset = contraction_poset(&c).unwrap();
        assert_eq!(poset.covers, vec![((1, 0), (0, 0))]);
    }

    #[test]
    fn three_point_datum_is_a_point() {
        let c = enumerate_stable_graphs(&WeightData::classical(0, 3).unwrap()).unwrap();
        assert_eq!(c.layer_sizes(), vec![1]);
    }
}
