//! Walls `sum_{j in S} a_j = 1` in the weight domain, chamber signatures and
//! wall-crossing comparisons of catalogs.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::One;

use crate::datum::{Rational, WeightData};
use crate::enumeration::enumerate_stable_graphs;
use crate::error::{Error, Result};
use crate::graph::{CanonicalForm, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WallKind {
    /// `2 < |S| <= n - 2 delta_{g,0}`
    Coarse,
    /// `2 <= |S| <= n - 2 delta_{g,0}`
    Fine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallSet {
    pub genus: u32,
    pub n: usize,
    pub kind: WallKind,
    /// Subsets of `1..=n`, each increasing; ordered by size, then lexicographically.
    pub walls: Vec<Vec<usize>>,
}

impl WallSet {
    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn walls(genus: u32, n: usize, kind: WallKind) -> WallSet {
    let upper = if genus == 0 { n.saturating_sub(2) } else { n };
    let lower = match kind {
        WallKind::Coarse => 3,
        WallKind::Fine => 2,
    };
    let mut out = Vec::new();
    for k in lower..=upper {
        out.extend(combinations(n, k));
    }
    WallSet {
        genus,
        n,
        kind,
        walls: out,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Positive,
}

/// Sign of `sum_{j in S} a_j - 1` for every wall `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChamberSignature(pub Vec<Sign>);

pub fn subset_sum(a: &WeightData, subset: &[usize]) -> Rational {
    subset.iter().map(|&j| a.weight(j)).sum()
}

/// Sign of `sum_{j in S} a_j - 1`, or an on-wall error.
pub fn wall_sign(a: &WeightData, subset: &[usize]) -> Result<Sign> {
    match subset_sum(a, subset).cmp(&Rational::one()) {
        Ordering::Greater => Ok(Sign::Positive),
        Ordering::Less => Ok(Sign::Negative),
        Ordering::Equal => Err(Error::OnWall {
            subset: subset.to_vec(),
        }),
    }
}

pub fn chamber_signature(a: &WeightData, w: &WallSet) -> Result<ChamberSignature> {
    if a.n() != w.n {
        return Err(Error::ArityMismatch {
            expected: w.n,
            found: a.n(),
        });
    }
    if a.genus() != w.genus {
        return Err(Error::OutOfRange(format!(
            "walls are for genus {}, weights for genus {}",
            w.genus,
            a.genus()
        )));
    }
    w.walls
        .iter()
        .map(|s| wall_sign(a, s))
        .collect::<Result<Vec<_>>>()
        .map(ChamberSignature)
}

pub fn same_chamber(a: &WeightData, b: &WeightData, w: &WallSet) -> Result<bool> {
    Ok(chamber_signature(a, w)? == chamber_signature(b, w)?)
}

/// Kapranov weights `A_{r,s}[n]`: `n - r - 1` copies of `1/(n - r - 1)`,
/// then `s/(n - r - 1)`, then `r` ones.
pub fn kapranov_weights(n: usize, r: usize, s: usize) -> Result<WeightData> {
    if n < 4 || r < 1 || r > n - 3 {
        return Err(Error::OutOfRange(format!(
            "need 1 <= r <= n - 3, got n = {n}, r = {r}"
        )));
    }
    let m = n - r - 1;
    if s < 1 || s > m - 1 {
        return Err(Error::OutOfRange(format!(
            "need 1 <= s <= n - r - 2, got n = {n}, r = {r}, s = {s}"
        )));
    }
    let mut weights = vec![Rational::new(1, m as i64); m];
    weights.push(Rational::new(s as i64, m as i64));
    weights.extend(std::iter::repeat(Rational::one()).take(r));
    WeightData::new(0, weights)
}

/// The two-vertex graph `G_S`: legs in `S` on a genus-0 vertex, the rest on
/// a genus-`g` vertex, one edge between them. Stable iff the weights of `S`
/// sum to more than one (given the complement is stable).
pub fn wall_crossing_graph(genus: u32, n: usize, subset: &[usize]) -> Result<WeightedGraph> {
    let legs = (1..=n)
        .map(|l| if subset.contains(&l) { 0 } else { 1 })
        .collect();
    WeightedGraph::new(vec![0, genus], vec![(0, 1)], legs)
}

/// Catalog differences between two data, grouped by edge count.
#[derive(Clone, Debug, Default)]
pub struct CatalogDiff {
    /// In the second catalog only.
    pub gained: BTreeMap<usize, Vec<(CanonicalForm, WeightedGraph)>>,
    /// In the first catalog only.
    pub lost: BTreeMap<usize, Vec<(CanonicalForm, WeightedGraph)>>,
}

impl CatalogDiff {
    pub fn is_empty(&self) -> bool {
        self.gained.is_empty() && self.lost.is_empty()
    }

    pub fn lost_contains(&self, form: &CanonicalForm) -> bool {
        self.lost.values().flatten().any(|(f, _)| f == form)
    }

    pub fn gained_contains(&self, form: &CanonicalForm) -> bool {
        self.gained.values().flatten().any(|(f, _)| f == form)
    }
}

pub fn wall_cross_diff(from: &WeightData, to: &WeightData) -> Result<CatalogDiff> {
    if from.genus() != to.genus() || from.n() != to.n() {
        return Err(Error::OutOfRange("both data must share (g, n)".into()));
    }
    let a = enumerate_stable_graphs(from)?;
    let b = enumerate_stable_graphs(to)?;
    let mut diff = CatalogDiff::default();
    for (layer, _, g, f) in a.iter() {
        if !b.contains(f) {
            diff.lost.entry(layer).or_default().push((f.clone(), g.clone()));
        }
    }
    for (layer, _, g, f) in b.iter() {
        if !a.contains(f) {
            diff.gained.entry(layer).or_default().push((f.clone(), g.clone()));
        }
    }
    Ok(diff)
}
