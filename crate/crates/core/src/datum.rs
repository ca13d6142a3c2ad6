//! Input data `(g, A)`: a genus together with exact rational leg weights.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for weights, divisor coefficients and edge lengths.
pub type Rational = Ratio<i64>;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            if q == 0 {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => text.parse::<i64>().ok().map(Rational::from_integer),
    }
}

/// Formats a rational as `"p/q"`, or `"p"` when integral.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses a comma separated weight list such as `1,1/2,1/2`.
pub fn parse_weight_list(text: &str) -> Option<Vec<Rational>> {
    if text.trim().is_empty() {
        return Some(Vec::new());
    }
    text.split(',').map(parse_rational).collect()
}

/// The datum `(g, A)` with `a_i` in `(0, 1]` and `2g - 2 + sum(a_i) > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightData {
    genus: u32,
    weights: Vec<Rational>,
}

impl WeightData {
    pub fn new(genus: u32, weights: Vec<Rational>) -> Result<Self> {
        for (i, a) in weights.iter().enumerate() {
            if *a <= Rational::zero() || *a > Rational::one() {
                return Err(Error::WeightOutOfRange {
                    index: i + 1,
                    value: format_rational(a),
                });
            }
        }
        let total: Rational = weights.iter().sum();
        if Rational::from_integer(2 * genus as i64 - 2) + total <= Rational::zero() {
            return Err(Error::DegenerateDatum {
                genus,
                total: format_rational(&total),
            });
        }
        Ok(WeightData { genus, weights })
    }

    /// All weights equal to one.
    pub fn classical(genus: u32, n: usize) -> Result<Self> {
        Self::new(genus, vec![Rational::one(); n])
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Weight of leg `label` (labels start at 1).
    pub fn weight(&self, label: usize) -> Rational {
        self.weights[label - 1]
    }

    pub fn is_classical(&self) -> bool {
        self.weights.iter().all(|a| a.is_one())
    }

    /// `3g - 3 + n`, the expected dimension.
    pub fn expected_dimension(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.n() as i64
    }

    /// Componentwise `other <= self`.
    pub fn dominates(&self, other: &WeightData) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::ArityMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        for (i, (a, b)) in self.weights.iter().zip(&other.weights).enumerate() {
            if b > a {
                return Err(Error::NotDominated { index: i + 1 });
            }
        }
        Ok(())
    }
}

impl fmt::Display for WeightData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(format_rational).collect();
        write!(f, "({}, ({}))", self.genus, ws.join(","))
    }
}
