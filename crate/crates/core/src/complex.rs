//! The moduli spaces as generalized (extended) cone complexes.
//!
//! One cone `R_{>=0}^{E(G)}` per catalog graph, face maps for single-edge
//! contractions, and the automorphism action on edge coordinates. Points are
//! tropical curves, located by canonical cone and orbit-minimal coordinates.

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_traits::Zero;

use crate::datum::{format_rational, parse_rational, Rational, WeightData};
use crate::enumeration::{contraction_poset, enumerate_stable_graphs, StableGraphCatalog};
use crate::error::{Error, Result};
use crate::graph::{AutomorphismGroup, CanonicalForm, WeightedGraph};

/// A positive extended rational. `Finite < Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Length {
    Finite(Rational),
    Infinite,
}

impl Length {
    pub fn finite(numer: i64, denom: i64) -> Self {
        Length::Finite(Rational::new(numer, denom))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Length::Infinite)
    }
}

impl Add for Length {
    type Output = Length;

    fn add(self, rhs: Length) -> Length {
        match (self, rhs) {
            (Length::Finite(a), Length::Finite(b)) => Length::Finite(a + b),
            _ => Length::Infinite,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(r) => f.write_str(&format_rational(r)),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Length {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Length::Infinite);
        }
        let r = parse_rational(s).ok_or_else(|| Error::InvalidLength(s.to_string()))?;
        if r <= Rational::zero() {
            return Err(Error::InvalidLength(s.to_string()));
        }
        Ok(Length::Finite(r))
    }
}

/// A weighted graph with a positive (possibly infinite) length per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCurve {
    graph: WeightedGraph,
    lengths: Vec<Length>,
}

impl TropicalCurve {
    pub fn new(graph: WeightedGraph, lengths: Vec<Length>) -> Result<Self> {
        if lengths.len() != graph.num_edges() {
            return Err(Error::InvalidLength(format!(
                "{} lengths for {} edges",
                lengths.len(),
                graph.num_edges()
            )));
        }
        for l in &lengths {
            if let Length::Finite(r) = l {
                if *r <= Rational::zero() {
                    return Err(Error::InvalidLength(format_rational(r)));
                }
            }
        }
        Ok(TropicalCurve { graph, lengths })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn lengths(&self) -> &[Length] {
        &self.lengths
    }

    pub fn is_extended(&self) -> bool {
        self.lengths.iter().any(Length::is_infinite)
    }

    /// Canonical representative: canonical graph class plus the
    /// lexicographically smallest coordinate vector in the automorphism orbit.
    pub fn canonical_point(&self) -> (CanonicalForm, Vec<Length>) {
        let (canon, lab) = self.graph.canonical_graph();
        let aut = canon.automorphisms();
        (lab.form, orbit_minimum(&lab.edge_position, &self.lengths, &aut))
    }
}

fn orbit_minimum(edge_position: &[usize], lengths: &[Length], aut: &AutomorphismGroup) -> Vec<Length> {
    let mut coords = vec![Length::Infinite; lengths.len()];
    for (e, &p) in edge_position.iter().enumerate() {
        coords[p] = lengths[e];
    }
    let mut best = coords.clone();
    let mut image = coords.clone();
    for tau in aut.edge_action() {
        for (e, &t) in tau.iter().enumerate() {
            image[t] = coords[e];
        }
        if image < best {
            best.clone_from(&image);
        }
    }
    best
}

#[derive(Clone, Debug)]
pub struct Cone {
    pub id: usize,
    /// Edge-count layer and position in the catalog.
    pub layer: usize,
    pub position: usize,
    /// Canonical representative graph; coordinates are indexed by its edges.
    pub graph: WeightedGraph,
    pub form: CanonicalForm,
    pub dim: usize,
    pub automorphisms: AutomorphismGroup,
}

impl Cone {
    /// Edge-coordinate permutations induced by automorphisms.
    pub fn aut_action(&self) -> &[Vec<usize>] {
        self.automorphisms.edge_action()
    }
}

/// Inclusion of the cone of a contracted graph `G'` as a face of the cone of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceMap {
    pub source: usize,
    pub target: usize,
    /// Edge of the target graph that is contracted.
    pub contracted_edge: usize,
    /// `coordinate_injection[j]` is the target coordinate of source coordinate `j`.
    pub coordinate_injection: Vec<usize>,
}

impl FaceMap {
    /// Pushes a point of the source cone into the target cone; the
    /// contracted coordinate becomes zero (`None`).
    pub fn apply(&self, coords: &[Length], target_dim: usize) -> Vec<Option<Length>> {
        let mut out = vec![None; target_dim];
        for (j, &t) in self.coordinate_injection.iter().enumerate() {
            out[t] = Some(coords[j]);
        }
        out
    }
}

/// A point of the complex: cone id and canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub cone: usize,
    pub coordinates: Vec<Length>,
}

#[derive(Clone, Debug)]
pub struct GeneralizedConeComplex {
    datum: WeightData,
    extended: bool,
    cones: Vec<Cone>,
    faces: Vec<FaceMap>,
    index: HashMap<CanonicalForm, usize>,
    catalog: StableGraphCatalog,
}

impl GeneralizedConeComplex {
    pub fn build(datum: &WeightData, extended: bool) -> Result<Self> {
        let catalog = enumerate_stable_graphs(datum)?;
        Self::from_catalog(catalog, extended)
    }

    pub fn from_catalog(catalog: StableGraphCatalog, extended: bool) -> Result<Self> {
        // validates closure under contraction
        contraction_poset(&catalog)?;

        let mut cones = Vec::with_capacity(catalog.len());
        let mut index = HashMap::new();
        for (layer, position, g, form) in catalog.iter() {
            let id = cones.len();
            index.insert(form.clone(), id);
            cones.push(Cone {
                id,
                layer,
                position,
                graph: g.clone(),
                form: form.clone(),
                dim: g.num_edges(),
                automorphisms: g.automorphisms(),
            });
        }

        let mut faces = Vec::new();
        for cone in &cones {
            for e in 0..cone.dim {
                let (contracted, map) = cone.graph.contract(&[e])?;
                let lab = contracted.canonical_labeling();
                let source = *index.get(&lab.form).ok_or_else(|| {
                    Error::Internal("face of a cone is missing from the complex".into())
                })?;
                let preimages = map.surviving_preimages();
                let mut injection = vec![0; cone.dim - 1];
                for (c_edge, &p) in lab.edge_position.iter().enumerate() {
                    injection[p] = preimages[c_edge];
                }
                faces.push(FaceMap {
                    source,
                    target: cone.id,
                    contracted_edge: e,
                    coordinate_injection: injection,
                });
            }
        }

        Ok(GeneralizedConeComplex {
            datum: catalog.datum().clone(),
            extended,
            cones,
            faces,
            index,
            catalog,
        })
    }

    pub fn datum(&self) -> &WeightData {
        &self.datum
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn faces(&self) -> &[FaceMap] {
        &self.faces
    }

    pub fn catalog(&self) -> &StableGraphCatalog {
        &self.catalog
    }

    pub fn cone_of(&self, form: &CanonicalForm) -> Option<&Cone> {
        self.index.get(form).map(|&i| &self.cones[i])
    }

    /// Face maps into `target`.
    pub fn faces_of(&self, target: usize) -> impl Iterator<Item = &FaceMap> {
        self.faces.iter().filter(move |f| f.target == target)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dimension() + 1];
        for c in &self.cones {
            f[c.dim] += 1;
        }
        f
    }

    pub fn dimension(&self) -> usize {
        self.cones.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn locate(&self, curve: &TropicalCurve) -> Result<Point> {
        let g = curve.graph();
        if !g.is_stable(&self.datum)? {
            return Err(Error::Unstable(format!("curve is not stable of type {}", self.datum)));
        }
        if !self.extended && curve.is_extended() {
            return Err(Error::InfiniteLength);
        }
        let lab = g.canonical_labeling();
        let cone = self.cone_of(&lab.form).ok_or_else(|| {
            Error::Internal("stable graph missing from the complex".into())
        })?;
        Ok(Point {
            cone: cone.id,
            coordinates: orbit_minimum(&lab.edge_position, curve.lengths(), &cone.automorphisms),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::rational;

    fn theta() -> WeightedGraph {
        WeightedGraph::new(vec![0, 0], vec![(0, 1); 3], vec![]).unwrap()
    }

    #[test]
    fn m05_complex() {
        let cx = GeneralizedConeComplex::build(&WeightData::classical(0, 5).unwrap(), false)
            .unwrap();
        assert_eq!(cx.cones().len(), 26);
        assert_eq!(cx.f_vector(), vec![1, 10, 15]);
        assert_eq!(cx.dimension(), 2);
        assert_eq!(cx.faces().len(), 10 + 30);
    }

    #[test]
    fn m11_complex() {
        let cx = GeneralizedConeComplex::build(&WeightData::classical(1, 1).unwrap(), true)
            .unwrap();
        assert_eq!(cx.f_vector(), vec![1, 1]);
        assert_eq!(cx.dimension(), 1);
        let loop_cone = &cx.cones()[1];
        assert_eq!(loop_cone.aut_action(), &[vec![0]]);
    }

    #[test]
    fn point_complex() {
        let t = rational(1, 3);
        let d = WeightData::new(0, vec![t, t, t, t, rational(1, 1)]).unwrap();
        let cx = GeneralizedConeComplex::build(&d, false).unwrap();
        assert_eq!(cx.f_vector(), vec![1]);
        assert_eq!(cx.dimension(), 0);
    }

    #[test]
    fn locate_theta_sorts_coordinates() {
        let cx = GeneralizedConeComplex::build(&WeightData::new(2, vec![]).unwrap(), false)
            .unwrap();
        let curve = TropicalCurve::new(
            theta(),
            vec![Length::finite(3, 1), Length::finite(1, 1), Length::finite(2, 1)],
        )
        .unwrap();
        let p = cx.locate(&curve).unwrap();
        assert_eq!(cx.cones()[p.cone].form, theta().canonical_form());
        assert_eq!(
            p.coordinates,
            vec![Length::finite(1, 1), Length::finite(2, 1), Length::finite(3, 1)]
        );
    }

    #[test]
    fn locate_star_and_infinite_loop() {
        let cx = GeneralizedConeComplex::build(&WeightData::classical(1, 1).unwrap(), true)
            .unwrap();
        let star = TropicalCurve::new(WeightedGraph::star(1, 1), vec![]).unwrap();
        let p = cx.locate(&star).unwrap();
        assert_eq!(cx.cones()[p.cone].dim, 0);
        assert!(p.coordinates.is_empty());

        let lp = WeightedGraph::new(vec![0], vec![(0, 0)], vec![0]).unwrap();
        let curve = TropicalCurve::new(lp, vec![Length::Infinite]).unwrap();
        assert_eq!(cx.locate(&curve).unwrap().coordinates, vec![Length::Infinite]);

        let plain = GeneralizedConeComplex::build(&WeightData::classical(1, 1).unwrap(), false)
            .unwrap();
        assert_eq!(plain.locate(&curve), Err(Error::InfiniteLength));
    }

    #[test]
    fn locate_rejects_unstable_graphs() {
        let cx = GeneralizedConeComplex::build(&WeightData::classical(0, 4).unwrap(), false)
            .unwrap();
        let g = WeightedGraph::new(vec![0, 0], vec![(0, 1)], vec![0, 0, 0, 1]).unwrap();
        let curve = TropicalCurve::new(g, vec![Length::finite(1, 1)]).unwrap();
        assert!(matches!(cx.locate(&curve), Err(Error::Unstable(_))));
    }

    #[test]
    fn length_parsing() {
        assert_eq!("inf".parse::<Length>().unwrap(), Length::Infinite);
        assert_eq!("1/3".parse::<Length>().unwrap(), Length::finite(1, 3));
        assert!("0".parse::<Length>().is_err());
        assert!("-1/2".parse::<Length>().is_err());
        assert_eq!(Length::finite(1, 2) + Length::finite(1, 3), Length::finite(5, 6));
        assert_eq!(Length::Infinite + Length::finite(1, 1), Length::Infinite);
        assert!(Length::finite(1000, 1) < Length::Infinite);
    }
}
