//! Weighted graphs with marked legs.
//!
//! A graph has vertices `0..V` carrying genus labels `h(v)`, a list of
//! undirected edges (loops and parallel edges allowed) and `n` legs labelled
//! `1..=n`, each rooted at a vertex. Every edge owns two flags; a leg is a
//! single flag.

mod canon;
mod contract;

pub use canon::{AutomorphismGroup, CanonicalForm, CanonicalLabeling, Isomorphism};
pub use contract::ContractionMap;

use num_traits::Zero;

use crate::datum::{Rational, WeightData};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    genus: Vec<u32>,
    edges: Vec<(usize, usize)>,
    legs: Vec<usize>,
}

impl WeightedGraph {
    /// Builds and validates a graph. `legs[i]` is the root vertex of leg `i + 1`.
    pub fn new(genus: Vec<u32>, edges: Vec<(usize, usize)>, legs: Vec<usize>) -> Result<Self> {
        let nv = genus.len();
        if nv == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        for &(a, b) in &edges {
            if a >= nv {
                return Err(Error::UnknownVertex(a));
            }
            if b >= nv {
                return Err(Error::UnknownVertex(b));
            }
        }
        for &r in &legs {
            if r >= nv {
                return Err(Error::UnknownVertex(r));
            }
        }
        let edges = edges
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        let g = WeightedGraph { genus, edges, legs };
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    /// The one-vertex graph `{*}_{g,n}`.
    pub fn star(genus: u32, n: usize) -> Self {
        WeightedGraph {
            genus: vec![genus],
            edges: Vec::new(),
            legs: vec![0; n],
        }
    }

    fn is_connected(&self) -> bool {
        let nv = self.genus.len();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut components = nv;
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
        components == 1
    }

    pub fn num_vertices(&self) -> usize {
        self.genus.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn vertex_genera(&self) -> &[u32] {
        &self.genus
    }

    pub fn vertex_genus(&self, v: usize) -> Result<u32> {
        self.genus.get(v).copied().ok_or(Error::UnknownVertex(v))
    }

    /// Edges as `(a, b)` with `a <= b`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Result<(usize, usize)> {
        self.edges.get(e).copied().ok_or(Error::UnknownEdge(e))
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (a, b) = self.edges[e];
        a == b
    }

    /// Root vertices of the legs; entry `i` belongs to leg label `i + 1`.
    pub fn leg_roots(&self) -> &[usize] {
        &self.legs
    }

    /// Leg labels (1-based) rooted at `v`, increasing.
    pub fn legs_at(&self, v: usize) -> Vec<usize> {
        self.legs
            .iter()
            .enumerate()
            .filter(|&(_, &r)| r == v)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// First Betti number `#E - #V + 1`.
    pub fn betti_number(&self) -> u32 {
        (self.edges.len() + 1 - self.genus.len()) as u32
    }

    /// `g(G) = b_1(G) + sum_v h(v)`.
    pub fn genus(&self) -> u32 {
        self.betti_number() + self.genus.iter().sum::<u32>()
    }

    /// Number of edge flags at `v`, loops counted twice.
    pub fn edge_valence(&self, v: usize) -> Result<usize> {
        if v >= self.genus.len() {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.edge_valence_unchecked(v))
    }

    pub(crate) fn edge_valence_unchecked(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        if n != self.legs.len() {
            return Err(Error::ArityMismatch {
                expected: self.legs.len(),
                found: n,
            });
        }
        Ok(())
    }

    /// `|v|_A`, the sum of the weights of the legs at `v`.
    pub fn leg_weight(&self, v: usize, datum: &WeightData) -> Result<Rational> {
        self.check_arity(datum.n())?;
        if v >= self.genus.len() {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.leg_weight_raw(v, datum.weights()))
    }

    pub(crate) fn leg_weight_raw(&self, v: usize, weights: &[Rational]) -> Rational {
        self.legs
            .iter()
            .zip(weights)
            .filter(|&(&r, _)| r == v)
            .map(|(_, a)| *a)
            .sum()
    }

    /// Coefficients `2h(v) - 2 + |v|_E + |v|_A` of the twisted canonical divisor.
    pub fn canonical_divisor(&self, datum: &WeightData) -> Result<Vec<Rational>> {
        self.check_arity(datum.n())?;
        Ok(self.canonical_divisor_raw(datum.weights()))
    }

    pub(crate) fn canonical_divisor_raw(&self, weights: &[Rational]) -> Vec<Rational> {
        let mut coeff: Vec<Rational> = self
            .genus
            .iter()
            .map(|&h| Rational::from_integer(2 * h as i64 - 2))
            .collect();
        for &(a, b) in &self.edges {
            coeff[a] += 1;
            coeff[b] += 1;
        }
        for (&r, w) in self.legs.iter().zip(weights) {
            coeff[r] += *w;
        }
        coeff
    }

    /// Stable of type `(g, A)`: genus `g` and every divisor coefficient strictly positive.
    pub fn is_stable(&self, datum: &WeightData) -> Result<bool> {
        self.check_arity(datum.n())?;
        Ok(self.genus() == datum.genus() && self.is_stable_raw(datum.weights()))
    }

    /// Vertex condition only, for weight vectors that may contain zeros.
    pub(crate) fn is_stable_raw(&self, weights: &[Rational]) -> bool {
        self.canonical_divisor_raw(weights)
            .iter()
            .all(|c| *c > Rational::zero())
    }

    /// Multiplicity matrix: `m[a][b]` counts edges between `a` and `b`;
    /// the diagonal counts loops.
    pub(crate) fn multiplicities(&self) -> Vec<Vec<u32>> {
        let nv = self.genus.len();
        let mut m = vec![vec![0u32; nv]; nv];
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        m
    }

    /// Applies a vertex relabeling (`perm[v]` is the new index of `v`) and an
    /// edge reordering (`edge_perm[e]` is the new index of `e`).
    pub fn relabel(&self, perm: &[usize], edge_perm: &[usize]) -> WeightedGraph {
        let nv = self.genus.len();
        let mut genus = vec![0; nv];
        for v in 0..nv {
            genus[perm[v]] = self.genus[v];
        }
        let mut edges = vec![(0, 0); self.edges.len()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            let (x, y) = (perm[a], perm[b]);
            edges[edge_perm[e]] = if x <= y { (x, y) } else { (y, x) };
        }
        let legs = self.legs.iter().map(|&r| perm[r]).collect();
        WeightedGraph { genus, edges, legs }
    }

    pub(crate) fn from_parts_unchecked(
        genus: Vec<u32>,
        edges: Vec<(usize, usize)>,
        legs: Vec<usize>,
    ) -> Self {
        let edges = edges
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        let g = WeightedGraph { genus, edges, legs };
        debug_assert!(g.is_connected());
        g
    }
}
