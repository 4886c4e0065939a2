use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Chart, Rational};

use super::{Family, RepsError};

/// Identifies the module an element belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleKey {
    pub family: Family,
    pub chart: Chart,
    pub t: Rational,
    pub eta: Rational,
    /// Global sections rather than sections over one chart.
    pub global: bool,
}

impl fmt::Display for ModuleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scope = if self.global { "global" } else { "local" };
        write!(
            f,
            "{} ({scope}, {} chart, t={}, eta={})",
            self.family, self.chart, self.t, self.eta
        )
    }
}

/// A finite rational combination of basis vectors of one module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    key: ModuleKey,
    terms: BTreeMap<i64, Rational>,
}

impl Element {
    pub fn zero(key: &ModuleKey) -> Self {
        Element {
            key: key.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(key: &ModuleKey, k: i64) -> Self {
        Self::from_terms(key, [(k, Rational::one())])
    }

    pub fn from_terms(key: &ModuleKey, terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut e = Self::zero(key);
        for (k, c) in terms {
            e.add_term(k, &c);
        }
        e
    }

    pub fn key(&self) -> &ModuleKey {
        &self.key
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(index, coefficient)` pairs in increasing index order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    pub fn min_index(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub(crate) fn add_term(&mut self, k: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&k) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, sum);
        }
    }

    fn check_key(&self, other: &Self) -> Result<(), RepsError> {
        if self.key == other.key {
            Ok(())
        } else {
            Err(RepsError::KeyMismatch {
                expected: self.key.to_string(),
                found: other.key.to_string(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, RepsError> {
        self.check_key(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RepsError> {
        self.check_key(other)?;
        Ok(self.add_unchecked(&other.scale(&Rational::from(-1))))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(&self.key);
        for (k, c) in &self.terms {
            out.add_term(*k, &(c * s));
        }
        out
    }

    /// Relabels indices by `k -> f(k)` into another module.
    pub fn reindex(&self, key: &ModuleKey, f: impl Fn(i64) -> i64) -> Self {
        Self::from_terms(key, self.terms.iter().map(|(k, c)| (f(*k), c.clone())))
    }

    /// `Some(c)` if this element is `c * b_k`.
    pub fn proportional_to_basis(&self, k: i64) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&k).cloned(),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let label = self.key.family.basis_label();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag.is_one() {
                write!(f, "{label}_{k}")?;
            } else {
                write!(f, "{mag}*{label}_{k}")?;
            }
        }
        Ok(())
    }
}
