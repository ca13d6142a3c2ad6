//! Losev-Manin weights `(1, 1/n, ..., 1/n, 1)` and chain curves.
//!
//! External leg labels run over `0..=n+1`; internally they are `1..=n+2`.
//! Each ordered partition of `{1..n}` into `k` blocks gives a chain of `k`
//! genus-0 vertices, so `l`-dimensional cones correspond to `(l+1)`-block
//! partitions.

use std::collections::BTreeSet;

use num_traits::One;

use crate::complex::GeneralizedConeComplex;
use crate::datum::{Rational, WeightData};
use crate::error::{Error, Result};
use crate::graph::{CanonicalForm, WeightedGraph};

pub fn lm_weights(n: usize) -> Result<WeightData> {
    if n < 1 {
        return Err(Error::OutOfRange("Losev-Manin weights need n >= 1".into()));
    }
    let mut w = vec![Rational::one()];
    w.extend(std::iter::repeat(Rational::new(1, n as i64)).take(n));
    w.push(Rational::one());
    let datum = WeightData::new(0, w)?;
    debug_assert!(satisfies_chain_conditions(&datum, false));
    Ok(datum)
}

/// `a_0 + a_i > 1`, `a_{n+1} + a_i > 1` for every middle leg, and the middle
/// weights sum to at most one (strictly less than one when `strict`).
pub fn satisfies_chain_conditions(datum: &WeightData, strict: bool) -> bool {
    let w = datum.weights();
    if w.len() < 3 {
        return false;
    }
    let (first, last) = (w[0], w[w.len() - 1]);
    let middle = &w[1..w.len() - 1];
    let ends_ok = middle
        .iter()
        .all(|&a| first + a > Rational::one() && last + a > Rational::one());
    let total: Rational = middle.iter().sum();
    let middle_ok = if strict {
        total < Rational::one()
    } else {
        total <= Rational::one()
    };
    ends_ok && middle_ok
}

/// Ordered list of disjoint nonempty blocks covering `{1..n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPartition {
    blocks: Vec<Vec<usize>>,
}

impl OrderedPartition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::OutOfRange("empty block".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x == 0 || x > n || seen[x] {
                    return Err(Error::OutOfRange(format!(
                        "element {x} is out of range or repeated"
                    )));
                }
                seen[x] = true;
            }
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::OutOfRange("blocks do not cover {1..n}".into()));
        }
        Ok(OrderedPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

/// All ordered partitions of `{1..n}` into `k` blocks, via surjections
/// `{1..n} -> {0..k-1}` in lexicographic order.
pub fn ordered_partitions(n: usize, k: usize) -> Result<Vec<OrderedPartition>> {
    if k < 1 || k > n {
        return Err(Error::OutOfRange(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    loop {
        let mut blocks = vec![Vec::new(); k];
        for (i, &b) in assign.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        if blocks.iter().all(|b| !b.is_empty()) {
            out.push(OrderedPartition { blocks });
        }
        // odometer increment
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            assign[i] += 1;
            if assign[i] < k {
                break;
            }
            assign[i] = 0;
        }
    }
}

/// Path of genus-0 vertices, one per block; internal leg 1 (external 0) at
/// the first vertex, internal leg `n + 2` at the last, element `j` of block
/// `i` as internal leg `j + 1` at vertex `i`.
pub fn chain_graph(p: &OrderedPartition, n: usize) -> Result<WeightedGraph> {
    let p = OrderedPartition::new(n, p.blocks.clone())?;
    let k = p.blocks.len();
    let mut legs = vec![0; n + 2];
    legs[n + 1] = k - 1;
    for (i, block) in p.blocks.iter().enumerate() {
        for &j in block {
            legs[j] = i;
        }
    }
    let edges = (1..k).map(|i| (i - 1, i)).collect();
    WeightedGraph::new(vec![0; k], edges, legs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LmCheck {
    pub partition_counts: Vec<usize>,
    pub f_vector: Vec<usize>,
    /// Every catalog class is the chain graph of exactly one partition and
    /// vice versa.
    pub bijection: bool,
    pub equal: bool,
}

pub fn lm_fvector_check(n: usize) -> Result<LmCheck> {
    if n < 2 {
        return Err(Error::OutOfRange("the check needs n >= 2".into()));
    }
    let datum = lm_weights(n)?;
    let cx = GeneralizedConeComplex::build(&datum, false)?;
    let mut partition_counts = Vec::with_capacity(n);
    let mut chain_forms: BTreeSet<CanonicalForm> = BTreeSet::new();
    let mut injective = true;
    for k in 1..=n {
        let parts = ordered_partitions(n, k)?;
        partition_counts.push(parts.len());
        for p in &parts {
            let g = chain_graph(p, n)?;
            injective &= g.is_stable(&datum)?;
            injective &= chain_forms.insert(g.canonical_form());
        }
    }
    let catalog_forms = cx.catalog().forms();
    let bijection = injective && catalog_forms == chain_forms;
    let f_vector = cx.f_vector();
    Ok(LmCheck {
        equal: bijection && f_vector == partition_counts,
        partition_counts,
        f_vector,
        bijection,
    })
}
