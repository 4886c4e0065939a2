use std::collections::BTreeMap;
use std::fmt;

use super::{AlgebraError, Chart, Coeff};

/// A Laurent polynomial in the coordinate of one chart.
///
/// Zero coefficients are never stored, so the empty map is the zero
/// polynomial and structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly<C> {
    chart: Chart,
    terms: BTreeMap<i64, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero(chart: Chart) -> Self {
        LaurentPoly {
            chart,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(chart: Chart, c: C) -> Self {
        Self::monomial(chart, c, 0)
    }

    pub fn one(chart: Chart) -> Self {
        Self::constant(chart, C::one())
    }

    /// The chart coordinate itself.
    pub fn coordinate(chart: Chart) -> Self {
        Self::monomial(chart, C::one(), 1)
    }

    pub fn monomial(chart: Chart, c: C, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { chart, terms }
    }

    pub fn from_terms(chart: Chart, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero(chart);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// The constant value, if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, exp: i64, c: &C) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&exp) {
            Some(old) => old.plus(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, sum);
        }
    }

    fn check_chart(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.chart == other.chart {
            Ok(())
        } else {
            Err(AlgebraError::ChartMismatch {
                left: self.chart,
                right: other.chart,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_chart(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_chart(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_chart(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.chart);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, &c1.times(c2));
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            chart: self.chart,
            terms: self.terms.iter().map(|(e, c)| (*e, c.negated())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.chart);
        for (e, c) in &self.terms {
            out.add_term(*e, &c.times(s));
        }
        out
    }

    /// Multiplies by `coordinate^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        LaurentPoly {
            chart: self.chart,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + shift, c.clone()))
                .collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.chart);
        for (e, c) in &self.terms {
            out.add_term(e - 1, &c.times(&C::from_int(*e)));
        }
        out
    }

    /// Substitutes `coordinate -> 1/coordinate` and moves to the other chart,
    /// so `w^2` on the infinity chart becomes `z^-2` on the zero chart.
    pub fn invert_coordinate(&self) -> Self {
        LaurentPoly {
            chart: self.chart.other(),
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Reinterprets the polynomial on another chart without substitution.
    pub(crate) fn with_chart(mut self, chart: Chart) -> Self {
        self.chart = chart;
        self
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> LaurentPoly<D> {
        let mut out = LaurentPoly::zero(self.chart);
        for (e, c) in &self.terms {
            out.add_term(*e, &f(c));
        }
        out
    }
}

fn render_power(var: &str, exp: i64) -> String {
    if exp == 1 {
        var.to_string()
    } else {
        format!("{var}^{exp}")
    }
}

/// Renders `coeff * factor` as a signed term, returning `(negative, body)`.
pub(crate) fn render_term<C: Coeff>(c: &C, factor: Option<String>) -> (bool, String) {
    let negative = c.renders_negative();
    let mag = if negative { c.negated() } else { c.clone() };
    let body = match factor {
        None => {
            if mag.is_compound() {
                format!("({mag})")
            } else {
                mag.to_string()
            }
        }
        Some(f) => {
            if mag.is_one() {
                f
            } else if mag.is_compound() {
                format!("({mag})*{f}")
            } else {
                format!("{mag}*{f}")
            }
        }
    };
    (negative, body)
}

/// Joins signed terms as `a - b + c`.
pub(crate) fn join_terms(terms: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl<C: Coeff> LaurentPoly<C> {
    /// Signed rendered terms in decreasing exponent order, each optionally
    /// followed by an extra factor such as `d^2`.
    pub(crate) fn rendered_terms(&self, trailing: Option<&str>) -> Vec<(bool, String)> {
        let var = self.chart.coordinate();
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let factor = match (*e, trailing) {
                    (0, None) => None,
                    (0, Some(t)) => Some(t.to_string()),
                    (e, None) => Some(render_power(var, e)),
                    (e, Some(t)) => Some(format!("{}*{t}", render_power(var, e))),
                };
                render_term(c, factor)
            })
            .collect()
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_terms(self.rendered_terms(None)))
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.chart, self)
    }
}
