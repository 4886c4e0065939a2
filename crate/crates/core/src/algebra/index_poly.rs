use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Coeff, Rational};

/// The three formal symbols an action coefficient may depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Basis index.
    K,
    /// Twist parameter.
    T,
    /// Whittaker character.
    Eta,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::K, Var::T, Var::Eta];

    fn slot(self) -> usize {
        match self {
            Var::K => 0,
            Var::T => 1,
            Var::Eta => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::K => "k",
            Var::T => "t",
            Var::Eta => "eta",
        }
    }
}

type Exponents = [u32; 3];

/// A polynomial with rational coefficients in `k`, `t` and `eta`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IndexPoly {
    terms: BTreeMap<Exponents, Rational>,
}

impl IndexPoly {
    pub fn zero() -> Self {
        IndexPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = IndexPoly::zero();
        p.add_term([0, 0, 0], &c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v.slot()] = 1;
        let mut p = IndexPoly::zero();
        p.add_term(e, &Rational::one());
        p
    }

    pub fn k() -> Self {
        Self::var(Var::K)
    }

    pub fn t() -> Self {
        Self::var(Var::T)
    }

    pub fn eta() -> Self {
        Self::var(Var::Eta)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, e: Exponents, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&e) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0, 0, 0]).cloned(),
            _ => None,
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.slot()]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.degree_in(v) > 0
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = IndexPoly::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, &(c * s));
        }
        out
    }

    /// Evaluates at a point; exact.
    pub fn eval(&self, k: &Rational, t: &Rational, eta: &Rational) -> Rational {
        let point = [k, t, eta];
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (slot, x) in point.iter().enumerate() {
                for _ in 0..e[slot] {
                    term = &term * *x;
                }
            }
            acc += &term;
        }
        acc
    }

    /// Evaluates at an integer basis index with numeric parameters.
    pub fn eval_at(&self, k: i64, t: &Rational, eta: &Rational) -> Rational {
        self.eval(&Rational::from(k), t, eta)
    }

    /// Replaces one symbol by another polynomial.
    pub fn compose(&self, v: Var, value: &IndexPoly) -> Self {
        let mut out = IndexPoly::zero();
        for (e, c) in &self.terms {
            let mut rest = *e;
            rest[v.slot()] = 0;
            let mut term = IndexPoly::zero();
            term.add_term(rest, c);
            for _ in 0..e[v.slot()] {
                term = &term * value;
            }
            out = &out + &term;
        }
        out
    }

    /// Replaces one symbol by a number.
    pub fn substitute(&self, v: Var, value: &Rational) -> Self {
        self.compose(v, &IndexPoly::constant(value.clone()))
    }

    /// `p(k) -> p(k + s)`.
    pub fn shift_k(&self, s: i64) -> Self {
        if s == 0 || !self.depends_on(Var::K) {
            return self.clone();
        }
        self.compose(Var::K, &(&IndexPoly::k() + &IndexPoly::constant(s.into())))
    }

    /// Coefficients of `1, k, k^2, ...` when `t` and `eta` do not occur.
    pub fn k_coefficients(&self) -> Option<Vec<Rational>> {
        if self.depends_on(Var::T) || self.depends_on(Var::Eta) {
            return None;
        }
        let mut out = vec![Rational::zero(); self.degree_in(Var::K) as usize + 1];
        for (e, c) in &self.terms {
            out[e[0] as usize] = c.clone();
        }
        Some(out)
    }

    fn render_order(&self) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(e, _)| (Reverse(e.iter().sum::<u32>()), Reverse(**e)));
        v
    }
}

impl fmt::Display for IndexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.render_order().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            let vars: Vec<String> = Var::ALL
                .iter()
                .filter(|v| e[v.slot()] > 0)
                .map(|v| match e[v.slot()] {
                    1 => v.name().to_string(),
                    n => format!("{}^{n}", v.name()),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IndexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for IndexPoly {
    type Err = super::parse::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse_index_poly(s)
    }
}

impl Serialize for IndexPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IndexPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<Rational> for IndexPoly {
    fn from(c: Rational) -> Self {
        IndexPoly::constant(c)
    }
}

impl From<i64> for IndexPoly {
    fn from(c: i64) -> Self {
        IndexPoly::constant(c.into())
    }
}

impl<'a> Add<&'a IndexPoly> for &'a IndexPoly {
    type Output = IndexPoly;
    fn add(self, rhs: &'a IndexPoly) -> IndexPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl<'a> Sub<&'a IndexPoly> for &'a IndexPoly {
    type Output = IndexPoly;
    fn sub(self, rhs: &'a IndexPoly) -> IndexPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a IndexPoly> for &'a IndexPoly {
    type Output = IndexPoly;
    fn mul(self, rhs: &'a IndexPoly) -> IndexPoly {
        let mut out = IndexPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                out.add_term(e, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &IndexPoly {
    type Output = IndexPoly;
    fn neg(self) -> IndexPoly {
        self.scale(&Rational::from(-1))
    }
}

impl Add for IndexPoly {
    type Output = IndexPoly;
    fn add(self, rhs: IndexPoly) -> IndexPoly {
        &self + &rhs
    }
}

impl Sub for IndexPoly {
    type Output = IndexPoly;
    fn sub(self, rhs: IndexPoly) -> IndexPoly {
        &self - &rhs
    }
}

impl Mul for IndexPoly {
    type Output = IndexPoly;
    fn mul(self, rhs: IndexPoly) -> IndexPoly {
        &self * &rhs
    }
}

impl Neg for IndexPoly {
    type Output = IndexPoly;
    fn neg(self) -> IndexPoly {
        -&self
    }
}

impl Coeff for IndexPoly {
    fn zero() -> Self {
        IndexPoly::zero()
    }
    fn one() -> Self {
        IndexPoly::constant(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_rational(r: Rational) -> Self {
        IndexPoly::constant(r)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn as_rational(&self) -> Option<Rational> {
        self.as_constant()
    }
    fn renders_negative(&self) -> bool {
        self.render_order()
            .first()
            .is_some_and(|(_, c)| c.is_negative())
    }
    fn is_compound(&self) -> bool {
        self.terms.len() > 1
    }
}
