use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::canon::canonicalize;
use super::{DecoratedGraph, GraphError};

/// `(ord, deg)`.
pub type Grade = (i64, i64);

/// A finite Q-linear combination of canonical graphs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphSum {
    terms: BTreeMap<DecoratedGraph, BigRational>,
}

impl GraphSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// `coeff * g`, with `g` brought to canonical form first.
    pub fn from_graph(g: &DecoratedGraph, coeff: BigRational) -> Self {
        let mut s = Self::new();
        s.add_graph(g, coeff);
        s
    }

    /// Adds `coeff * g`. Vanishing classes contribute nothing.
    pub fn add_graph(&mut self, g: &DecoratedGraph, coeff: BigRational) {
        if let Some((canon, sign)) = canonicalize(g).into_parts() {
            let c = coeff * BigRational::from_integer(BigInt::from(sign.to_i64()));
            self.add_canonical(canon, c);
        }
    }

    fn add_canonical(&mut self, g: DecoratedGraph, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `factor * other`; `other`'s keys are already canonical.
    pub fn add_scaled(&mut self, other: &GraphSum, factor: &BigRational) {
        for (g, c) in &other.terms {
            self.add_canonical(g.clone(), c * factor);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DecoratedGraph, &BigRational)> {
        self.terms.iter()
    }

    /// Coefficient of the class of `g` (zero when absent).
    pub fn coefficient(&self, g: &DecoratedGraph) -> BigRational {
        match canonicalize(g).into_parts() {
            None => BigRational::zero(),
            Some((canon, sign)) => self
                .terms
                .get(&canon)
                .map(|c| c * BigRational::from_integer(BigInt::from(sign.to_i64())))
                .unwrap_or_else(BigRational::zero),
        }
    }

    /// Common `(ord, deg)` of all terms, `None` for the empty sum, `Err` if mixed.
    pub fn grade(&self) -> Result<Option<Grade>, (Grade, Grade)> {
        let mut it = self.terms.keys().map(DecoratedGraph::grade);
        let Some(first) = it.next() else {
            return Ok(None);
        };
        for g in it {
            if g != first {
                return Err((first, g));
            }
        }
        Ok(Some(first))
    }

    pub fn to_json_terms(&self) -> Vec<SumTermJson> {
        self.terms
            .iter()
            .map(|(g, c)| SumTermJson {
                coeff: format_rational(c),
                graph: g.clone(),
            })
            .collect()
    }

    pub fn from_json_terms(terms: Vec<SumTermJson>) -> Result<Self, GraphError> {
        let mut s = GraphSum::new();
        for t in terms {
            let c = parse_rational(&t.coeff).ok_or_else(|| GraphError::Parse {
                line: 0,
                msg: format!("bad rational coefficient '{}'", t.coeff),
            })?;
            s.add_graph(&t.graph, c);
        }
        Ok(s)
    }
}

/// One entry of the JSON form of a [`GraphSum`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SumTermJson {
    pub coeff: String,
    pub graph: DecoratedGraph,
}

impl Serialize for GraphSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GraphSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<SumTermJson>::deserialize(d)?;
        GraphSum::from_json_terms(terms).map_err(serde::de::Error::custom)
    }
}

/// Always `p/q`, with `q > 0`.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q` or a bare integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for GraphSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (g, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{g}")?;
            } else {
                write!(f, "{a} {g}")?;
            }
        }
        Ok(())
    }
}

impl Add for &GraphSum {
    type Output = GraphSum;
    fn add(self, rhs: &GraphSum) -> GraphSum {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigRational::one());
        out
    }
}

impl Sub for &GraphSum {
    type Output = GraphSum;
    fn sub(self, rhs: &GraphSum) -> GraphSum {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigRational::one());
        out
    }
}

impl Neg for &GraphSum {
    type Output = GraphSum;
    fn neg(self) -> GraphSum {
        let mut out = GraphSum::new();
        out.add_scaled(self, &-BigRational::one());
        out
    }
}
