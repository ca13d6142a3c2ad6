//! Brute-force reference implementations used to cross-check the library.
//!
//! Nothing here calls into the library's canonicalization, enumeration or
//! stability code: graphs are compared by minimizing an encoding over all
//! vertex permutations, and stable graphs are generated by listing every
//! multigraph, genus labeling and leg placement within the size bounds.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::Rng;
use troph::complex::{Length, TropicalCurve};
use troph::{Rational, WeightData, WeightedGraph};

/// Genus labels, symmetric multiplicity matrix (diagonal = loops) and the
/// vertex of each leg.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RawGraph {
    pub genus: Vec<u32>,
    pub mult: Vec<Vec<u32>>,
    pub legs: Vec<usize>,
}

impl RawGraph {
    pub fn num_vertices(&self) -> usize {
        self.genus.len()
    }

    pub fn num_edges(&self) -> usize {
        let v = self.num_vertices();
        (0..v).map(|i| (i..v).map(|j| self.mult[i][j] as usize).sum::<usize>()).sum()
    }

    pub fn from_lib(g: &WeightedGraph) -> Self {
        let v = g.num_vertices();
        let mut mult = vec![vec![0; v]; v];
        for &(a, b) in g.edges() {
            mult[a][b] += 1;
            if a != b {
                mult[b][a] += 1;
            }
        }
        RawGraph {
            genus: g.vertex_genera().to_vec(),
            mult,
            legs: g.leg_roots().to_vec(),
        }
    }

    pub fn to_lib(&self) -> WeightedGraph {
        let v = self.num_vertices();
        let mut edges = Vec::new();
        for i in 0..v {
            for j in i..v {
                for _ in 0..self.mult[i][j] {
                    edges.push((i, j));
                }
            }
        }
        WeightedGraph::new(self.genus.clone(), edges, self.legs.clone()).expect("connected")
    }

    pub fn is_connected(&self) -> bool {
        let v = self.num_vertices();
        let mut seen = vec![false; v];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in 0..v {
                if !seen[y] && self.mult[x][y] > 0 {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn total_genus(&self) -> i64 {
        self.num_edges() as i64 - self.num_vertices() as i64 + 1
            + self.genus.iter().map(|&h| h as i64).sum::<i64>()
    }

    /// Edge flags at `v`, loops counted twice.
    pub fn valence(&self, v: usize) -> u32 {
        (0..self.num_vertices())
            .map(|w| if w == v { 2 * self.mult[v][v] } else { self.mult[v][w] })
            .sum()
    }

    pub fn is_stable(&self, genus: u32, weights: &[Rational]) -> bool {
        if self.legs.len() != weights.len() || self.total_genus() != genus as i64 {
            return false;
        }
        (0..self.num_vertices()).all(|v| {
            let w: Rational = self
                .legs
                .iter()
                .zip(weights)
                .filter(|(&r, _)| r == v)
                .map(|(_, &a)| a)
                .sum();
            Rational::from_integer(2 * self.genus[v] as i64 - 2 + self.valence(v) as i64) + w
                > Rational::zero()
        })
    }

    /// Encoding after moving vertex `order[i]` to position `i`.
    pub fn encode(&self, order: &[usize]) -> Vec<u32> {
        let v = self.num_vertices();
        let mut pos = vec![0; v];
        for (i, &o) in order.iter().enumerate() {
            pos[o] = i;
        }
        let mut out = Vec::with_capacity(v + v * (v + 1) / 2 + self.legs.len() + 1);
        out.push(v as u32);
        out.extend(order.iter().map(|&o| self.genus[o]));
        for i in 0..v {
            for j in i..v {
                out.push(self.mult[order[i]][order[j]]);
            }
        }
        out.extend(self.legs.iter().map(|&r| pos[r] as u32));
        out
    }

    /// Minimum encoding over every vertex order: a complete invariant.
    pub fn brute_form(&self) -> Vec<u32> {
        permutations(self.num_vertices())
            .iter()
            .map(|p| self.encode(p))
            .min()
            .unwrap()
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All symmetric matrices with nonnegative entries on `i <= j` summing to `e`.
fn multiplicity_matrices(v: usize, e: u32) -> Vec<Vec<Vec<u32>>> {
    let slots: Vec<(usize, usize)> = (0..v).flat_map(|i| (i..v).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    fn rec(
        k: usize,
        left: u32,
        slots: &[(usize, usize)],
        m: &mut Vec<Vec<u32>>,
        out: &mut Vec<Vec<Vec<u32>>>,
    ) {
        if k == slots.len() {
            if left == 0 {
                out.push(m.clone());
            }
            return;
        }
        let (i, j) = slots[k];
        for x in 0..=left {
            m[i][j] = x;
            m[j][i] = x;
            rec(k + 1, left - x, slots, m, out);
        }
        m[i][j] = 0;
        m[j][i] = 0;
    }
    rec(0, e, &slots, &mut vec![vec![0; v]; v], &mut out);
    out
}

fn genus_vectors(v: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..v {
        let mut next = Vec::new();
        for g in &out {
            let used: u32 = g.iter().sum();
            for h in 0..=(max_total - used) {
                let mut x = g.clone();
                x.push(h);
                next.push(x);
            }
        }
        out = next;
    }
    out
}

/// Every `(g, (1, ..., 1))`-stable graph class, keyed by brute-force form.
///
/// Vertex count is at most `2g - 2 + n` and edge count at most `3g - 3 + n`;
/// both follow from summing `2h - 2 + val(v) >= 1` over the vertices. A
/// graph stable for weights in `(0, 1]` is stable for all-one weights, so
/// this set contains every weighted catalog as well.
pub fn classical_classes(genus: u32, n: usize) -> BTreeMap<Vec<u32>, RawGraph> {
    let max_v = (2 * genus as i64 - 2 + n as i64).max(1) as usize;
    let max_e = (3 * genus as i64 - 3 + n as i64).max(0) as u32;
    let ones = vec![Rational::one(); n];
    let mut classes = BTreeMap::new();
    for v in 1..=max_v {
        // skeletons: genus labels + multigraph, up to relabeling
        let mut skeletons: BTreeMap<Vec<u32>, RawGraph> = BTreeMap::new();
        let perms = permutations(v);
        for genus_vec in genus_vectors(v, genus) {
            let hsum: u32 = genus_vec.iter().sum();
            let e = genus as i64 - hsum as i64 + v as i64 - 1;
            if e < v as i64 - 1 || e > max_e as i64 {
                continue;
            }
            for mult in multiplicity_matrices(v, e as u32) {
                let skel = RawGraph {
                    genus: genus_vec.clone(),
                    mult,
                    legs: vec![],
                };
                if !skel.is_connected() {
                    continue;
                }
                let form = perms.iter().map(|p| skel.encode(p)).min().unwrap();
                skeletons.entry(form).or_insert(skel);
            }
        }
        for skel in skeletons.into_values() {
            let total = v.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let legs: Vec<usize> = (0..n)
                    .map(|_| {
                        let r = c % v;
                        c /= v;
                        r
                    })
                    .collect();
                let g = RawGraph {
                    genus: skel.genus.clone(),
                    mult: skel.mult.clone(),
                    legs,
                };
                if g.is_stable(genus, &ones) {
                    let form = perms.iter().map(|p| g.encode(p)).min().unwrap();
                    classes.entry(form).or_insert(g);
                }
            }
        }
    }
    classes
}

/// Classes stable for `datum`, grouped by edge count.
pub fn oracle_layers(
    classical: &BTreeMap<Vec<u32>, RawGraph>,
    datum: &WeightData,
) -> BTreeMap<usize, BTreeSet<Vec<u32>>> {
    let mut out: BTreeMap<usize, BTreeSet<Vec<u32>>> = BTreeMap::new();
    for (form, g) in classical {
        if g.is_stable(datum.genus(), datum.weights()) {
            out.entry(g.num_edges()).or_default().insert(form.clone());
        }
    }
    out
}

pub fn layer_sizes(layers: &BTreeMap<usize, BTreeSet<Vec<u32>>>) -> Vec<usize> {
    let top = layers.keys().max().copied().unwrap_or(0);
    (0..=top).map(|e| layers.get(&e).map_or(0, BTreeSet::len)).collect()
}

/// Edge ids grouped by unordered endpoint pair.
fn edge_classes(g: &WeightedGraph) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut m: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        m.entry((a.min(b), a.max(b))).or_default().push(e);
    }
    m
}

/// Vertex permutations preserving genus, legs and edge multiplicities.
pub fn vertex_symmetries(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let raw = RawGraph::from_lib(g);
    let v = raw.num_vertices();
    permutations(v)
        .into_iter()
        .filter(|p| {
            (0..v).all(|x| raw.genus[p[x]] == raw.genus[x])
                && raw.legs.iter().all(|&r| p[r] == r)
                && (0..v).all(|x| (0..v).all(|y| raw.mult[p[x]][p[y]] == raw.mult[x][y]))
        })
        .collect()
}

fn bijections(src: &[usize], dst: &[usize]) -> Vec<Vec<(usize, usize)>> {
    permutations(src.len())
        .into_iter()
        .map(|p| src.iter().zip(&p).map(|(&s, &i)| (s, dst[i])).collect())
        .collect()
}

pub struct BruteAutomorphisms {
    /// Automorphisms of the flag set.
    pub flag_order: usize,
    /// Pairs (vertex permutation, compatible edge bijection).
    pub vertex_edge_order: usize,
    /// Distinct edge permutations induced; `perm[e]` is the image of `e`.
    pub edge_action: BTreeSet<Vec<usize>>,
}

pub fn brute_automorphisms(g: &WeightedGraph) -> BruteAutomorphisms {
    let classes = edge_classes(g);
    let loops = g.edges().iter().filter(|(a, b)| a == b).count();
    let mut vertex_edge_order = 0;
    let mut edge_action = BTreeSet::new();
    for p in vertex_symmetries(g) {
        // all combinations of per-class bijections
        let mut partial: Vec<Vec<usize>> = vec![vec![usize::MAX; g.num_edges()]];
        for (&(a, b), src) in &classes {
            let (x, y) = (p[a], p[b]);
            let dst = &classes[&(x.min(y), x.max(y))];
            let mut next = Vec::new();
            for perm in &partial {
                for bij in bijections(src, dst) {
                    let mut q = perm.clone();
                    for (s, t) in bij {
                        q[s] = t;
                    }
                    next.push(q);
                }
            }
            partial = next;
        }
        vertex_edge_order += partial.len();
        edge_action.extend(partial);
    }
    BruteAutomorphisms {
        flag_order: vertex_edge_order << loops,
        vertex_edge_order,
        edge_action,
    }
}

/// Isomorphism of metric curves: a vertex bijection preserving genus and legs
/// under which each endpoint pair carries the same multiset of lengths.
pub fn metric_isomorphic(c1: &TropicalCurve, c2: &TropicalCurve) -> bool {
    let (g1, g2) = (c1.graph(), c2.graph());
    if g1.num_vertices() != g2.num_vertices()
        || g1.num_edges() != g2.num_edges()
        || g1.num_legs() != g2.num_legs()
    {
        return false;
    }
    let bundle = |c: &TropicalCurve| {
        let mut m: BTreeMap<(usize, usize), Vec<Length>> = BTreeMap::new();
        for (&(a, b), &l) in c.graph().edges().iter().zip(c.lengths()) {
            m.entry((a.min(b), a.max(b))).or_default().push(l);
        }
        for ls in m.values_mut() {
            ls.sort();
        }
        m
    };
    let (b1, b2) = (bundle(c1), bundle(c2));
    permutations(g1.num_vertices()).into_iter().any(|p| {
        (0..p.len()).all(|v| g1.vertex_genera()[v] == g2.vertex_genera()[p[v]])
            && g1
                .leg_roots()
                .iter()
                .zip(g2.leg_roots())
                .all(|(&r1, &r2)| p[r1] == r2)
            && b1.iter().all(|(&(a, b), ls)| {
                let (x, y) = (p[a], p[b]);
                b2.get(&(x.min(y), x.max(y))) == Some(ls)
            })
    })
}

pub fn graphs_isomorphic(g1: &WeightedGraph, g2: &WeightedGraph) -> bool {
    let ones = |g: &WeightedGraph| {
        TropicalCurve::new(g.clone(), vec![Length::finite(1, 1); g.num_edges()]).unwrap()
    };
    metric_isomorphic(&ones(g1), &ones(g2))
}

pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut s = vec![vec![0u64; k + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            s[i][j] = j as u64 * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    s[n][k]
}

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Random weights in `(0, 1]` with denominators up to 12, rejecting data
/// that violate `2g - 2 + sum > 0`.
pub fn random_weights<R: Rng>(rng: &mut R, genus: u32, n: usize) -> WeightData {
    loop {
        let w: Vec<Rational> = (0..n)
            .map(|_| {
                let q = rng.gen_range(1..=12i64);
                Rational::new(rng.gen_range(1..=q), q)
            })
            .collect();
        if let Ok(d) = WeightData::new(genus, w) {
            return d;
        }
    }
}

/// Random `b_i` with `0 < b_i <= a_i`, retried until the datum is valid.
pub fn random_dominated<R: Rng>(rng: &mut R, a: &WeightData) -> Option<WeightData> {
    for _ in 0..200 {
        let w: Vec<Rational> = a
            .weights()
            .iter()
            .map(|&x| {
                if rng.gen_bool(0.4) {
                    x
                } else {
                    let t = Rational::new(rng.gen_range(1..=6), 6);
                    x * t
                }
            })
            .collect();
        if let Ok(d) = WeightData::new(a.genus(), w) {
            return Some(d);
        }
    }
    None
}

pub fn random_length<R: Rng>(rng: &mut R) -> Length {
    Length::finite(rng.gen_range(1..=20), rng.gen_range(1..=6))
}

pub fn random_curve<R: Rng>(rng: &mut R, g: &WeightedGraph) -> TropicalCurve {
    let ls = (0..g.num_edges()).map(|_| random_length(rng)).collect();
    TropicalCurve::new(g.clone(), ls).unwrap()
}

/// Random vertex relabeling and edge reordering of `g`.
pub fn shuffle<R: Rng>(rng: &mut R, g: &WeightedGraph) -> (WeightedGraph, Vec<usize>, Vec<usize>) {
    use rand::seq::SliceRandom;
    let mut vp: Vec<usize> = (0..g.num_vertices()).collect();
    vp.shuffle(rng);
    let mut ep: Vec<usize> = (0..g.num_edges()).collect();
    ep.shuffle(rng);
    (g.relabel(&vp, &ep), vp, ep)
}
