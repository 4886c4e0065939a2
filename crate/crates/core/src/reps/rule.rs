use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{IndexPoly, Rational, Var};

/// `X * b_k = sum of coeff(k, t, eta) * b_(k + shift)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ActionRule {
    terms: BTreeMap<i64, IndexPoly>,
}

impl ActionRule {
    pub fn new(terms: impl IntoIterator<Item = (i64, IndexPoly)>) -> Self {
        let mut rule = ActionRule::default();
        for (s, c) in terms {
            rule.add_term(s, c);
        }
        rule
    }

    /// Parses `(shift, coefficient)` pairs written as text.
    pub fn parse(terms: &[(i64, &str)]) -> Self {
        Self::new(
            terms
                .iter()
                .map(|(s, c)| (*s, c.parse().expect("valid coefficient"))),
        )
    }

    pub fn add_term(&mut self, shift: i64, coeff: IndexPoly) {
        let sum = match self.terms.remove(&shift) {
            Some(old) => &old + &coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(shift, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &IndexPoly)> {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn coeff(&self, shift: i64) -> IndexPoly {
        self.terms.get(&shift).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn specialize(&self, t: &Rational, eta: &Rational) -> NumericRule {
        let mut terms = Vec::new();
        for (s, c) in &self.terms {
            let c = c.substitute(Var::T, t).substitute(Var::Eta, eta);
            let coeffs = c.k_coefficients().expect("only k remains");
            if coeffs.iter().any(|x| !x.is_zero()) {
                terms.push((*s, coeffs));
            }
        }
        NumericRule { terms }
    }

    /// The rule with `eta` set to zero.
    pub fn at_eta_zero(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|(s, c)| (*s, c.substitute(Var::Eta, &Rational::zero()))),
        )
    }
}

impl fmt::Display for ActionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| format!("({c})*b[k{s:+}]"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// An action rule with numeric `t` and `eta`; coefficients are polynomials in
/// `k` stored from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericRule {
    terms: Vec<(i64, Vec<Rational>)>,
}

impl NumericRule {
    pub fn shifts(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.iter().map(|(s, _)| *s)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero `(target, coefficient)` pairs of the image of `b_k`.
    pub fn apply(&self, k: i64) -> impl Iterator<Item = (i64, Rational)> + '_ {
        let kk = Rational::from(k);
        self.terms.iter().filter_map(move |(s, poly)| {
            let mut acc = Rational::zero();
            for c in poly.iter().rev() {
                acc = &(&acc * &kk) + c;
            }
            (!acc.is_zero()).then_some((k + s, acc))
        })
    }

    /// The coefficient at a given shift, evaluated at `k`.
    pub fn coeff_at(&self, shift: i64, k: i64) -> Rational {
        self.apply(k)
            .find(|(target, _)| *target == k + shift)
            .map(|(_, c)| c)
            .unwrap_or_else(Rational::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn specialize_and_apply() {
        let rule = ActionRule::parse(&[(-1, "-t-k"), (0, "eta"), (1, "0")]);
        assert_eq!(rule.terms().count(), 2);
        let num = rule.specialize(&q(3, 1), &q(0, 1));
        let img: Vec<_> = num.apply(2).collect();
        assert_eq!(img, vec![(1, q(-5, 1))]);
        let num = rule.specialize(&q(3, 1), &q(1, 2));
        assert_eq!(num.coeff_at(0, 7), q(1, 2));
    }

    #[test]
    fn zero_coefficients_vanish_at_their_root() {
        let rule = ActionRule::parse(&[(-1, "k")]).specialize(&q(1, 1), &q(0, 1));
        assert_eq!(rule.apply(0).count(), 0);
        assert_eq!(rule.apply(4).next(), Some((3, q(4, 1))));
    }
}
