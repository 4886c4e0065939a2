//! The localized Weyl algebra on the chart overlap and its chart subalgebras.
//!
//! An operator is stored in normal form `Σ p_i(x) ∂^i`: Laurent coefficients
//! to the left of every derivative. Products are normalized with the single
//! commutation rule `∂ p = p ∂ + p'`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::laurent::join_terms;
use crate::algebra::parse::{self, index_symbol, ExprAlgebra, ParseError};
use crate::algebra::{Chart, Coeff, IndexPoly, LaurentPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("chart mismatch: {left} vs {right}")]
    ChartMismatch { left: Chart, right: Chart },
    #[error("operation requires the {expected} chart, operator lives on the {found} chart")]
    WrongChart { expected: Chart, found: Chart },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A differential operator `Σ p_i ∂^i` with Laurent coefficients in one
/// chart coordinate.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylOp<C> {
    chart: Chart,
    coeffs: BTreeMap<u32, LaurentPoly<C>>,
}

impl<C: Coeff> WeylOp<C> {
    pub fn zero(chart: Chart) -> Self {
        WeylOp {
            chart,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(chart: Chart) -> Self {
        Self::constant(chart, C::one())
    }

    pub fn constant(chart: Chart, c: C) -> Self {
        Self::from_laurent(LaurentPoly::constant(chart, c))
    }

    /// Multiplication by the chart coordinate.
    pub fn coordinate(chart: Chart) -> Self {
        Self::from_laurent(LaurentPoly::coordinate(chart))
    }

    /// Differentiation by the chart coordinate.
    pub fn del(chart: Chart) -> Self {
        Self::monomial(chart, C::one(), 0, 1)
    }

    /// `c * x^exp * ∂^order`.
    pub fn monomial(chart: Chart, c: C, exp: i64, order: u32) -> Self {
        let mut op = Self::zero(chart);
        op.add_coeff(order, &LaurentPoly::monomial(chart, c, exp));
        op
    }

    pub fn from_laurent(p: LaurentPoly<C>) -> Self {
        let mut op = Self::zero(p.chart());
        op.add_coeff(0, &p);
        op
    }

    /// Builds `Σ p_i ∂^i` from `(i, p_i)` pairs; every `p_i` is moved to
    /// `chart`.
    pub fn from_coeffs(
        chart: Chart,
        coeffs: impl IntoIterator<Item = (u32, LaurentPoly<C>)>,
    ) -> Self {
        let mut op = Self::zero(chart);
        for (i, p) in coeffs {
            op.add_coeff(i, &p.with_chart(chart));
        }
        op
    }

    fn add_coeff(&mut self, order: u32, p: &LaurentPoly<C>) {
        if p.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&order) {
            Some(old) => old.add_unchecked(p),
            None => p.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&order);
        } else {
            self.coeffs.insert(order, sum);
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest power of `∂` with a nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// The coefficient of `∂^order`.
    pub fn coeff(&self, order: u32) -> LaurentPoly<C> {
        self.coeffs
            .get(&order)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(self.chart))
    }

    /// `(order, coefficient)` pairs in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &LaurentPoly<C>)> {
        self.coeffs.iter().map(|(i, p)| (*i, p))
    }

    /// The scalar, if this operator is a constant.
    pub fn as_constant(&self) -> Option<C> {
        match self.coeffs.len() {
            0 => Some(C::zero()),
            1 => self.coeffs.get(&0).and_then(|p| p.as_constant()),
            _ => None,
        }
    }

    fn check_chart(&self, other: &Self) -> Result<(), WeylError> {
        if self.chart == other.chart {
            Ok(())
        } else {
            Err(WeylError::ChartMismatch {
                left: self.chart,
                right: other.chart,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, WeylError> {
        self.check_chart(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WeylError> {
        self.check_chart(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, p) in &other.coeffs {
            out.add_coeff(*i, p);
        }
        out
    }

    pub fn neg(&self) -> Self {
        WeylOp {
            chart: self.chart,
            coeffs: self.coeffs.iter().map(|(i, p)| (*i, p.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.chart);
        for (i, p) in &self.coeffs {
            out.add_coeff(*i, &p.scale(s));
        }
        out
    }

    /// `∂ · self`, normalized by `∂ p = p ∂ + p'`.
    fn left_del(&self) -> Self {
        let mut out = Self::zero(self.chart);
        for (i, p) in &self.coeffs {
            out.add_coeff(i + 1, p);
            out.add_coeff(*i, &p.derivative());
        }
        out
    }

    /// `p · self` for a function `p`.
    fn left_function(&self, p: &LaurentPoly<C>) -> Self {
        let mut out = Self::zero(self.chart);
        for (i, r) in &self.coeffs {
            out.add_coeff(*i, &p.mul_unchecked(r));
        }
        out
    }

    /// Normal-form product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self, WeylError> {
        self.check_chart(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.chart);
        let Some(max_order) = self.order() else {
            return out;
        };
        // del_powers[i] = ∂^i · other
        let mut current = other.clone();
        for i in 0..=max_order {
            if let Some(p) = self.coeffs.get(&i) {
                out = out.add_unchecked(&current.left_function(p));
            }
            if i < max_order {
                current = current.left_del();
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.chart);
        for _ in 0..n {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// `self · other - other · self`.
    pub fn commutator(&self, other: &Self) -> Result<Self, WeylError> {
        self.check_chart(other)?;
        Ok(self
            .mul_unchecked(other)
            .add_unchecked(&other.mul_unchecked(self).neg()))
    }

    /// The anti-automorphism fixing functions and sending `∂` to `-∂`.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.chart);
        for (i, p) in &self.coeffs {
            // (p ∂^i)^T = (-∂)^i p
            let mut term = Self::from_laurent(p.clone());
            for _ in 0..*i {
                term = term.left_del().neg();
            }
            out = out.add_unchecked(&term);
        }
        out
    }

    /// Rewrites the operator in the other chart's coordinate.
    ///
    /// The coordinate goes to its inverse and `∂_w = -z^2 ∂_z` (the same
    /// formula holds with the roles of `z` and `w` exchanged).
    pub fn chart_rewrite(&self) -> Self {
        let target = self.chart.other();
        let new_del = Self::monomial(target, C::one().negated(), 2, 1);
        let mut out = Self::zero(target);
        let mut del_power = Self::one(target);
        let max_order = self.order().unwrap_or(0);
        for i in 0..=max_order {
            if let Some(p) = self.coeffs.get(&i) {
                let f = Self::from_laurent(p.invert_coordinate());
                out = out.add_unchecked(&f.mul_unchecked(&del_power));
            }
            if i < max_order {
                del_power = del_power.mul_unchecked(&new_del);
            }
        }
        out
    }

    /// Substitutes `∂ -> ∂ + shift/x` and keeps functions fixed.
    fn substitute_del_shift(&self, shift: &C) -> Self {
        let image =
            Self::del(self.chart).add_unchecked(&Self::monomial(self.chart, shift.clone(), -1, 0));
        let mut out = Self::zero(self.chart);
        let mut power = Self::one(self.chart);
        let max_order = self.order().unwrap_or(0);
        for i in 0..=max_order {
            if let Some(p) = self.coeffs.get(&i) {
                out = out.add_unchecked(&power.left_function(p));
            }
            if i < max_order {
                power = power.mul_unchecked(&image);
            }
        }
        out
    }

    fn require_chart(&self, expected: Chart) -> Result<(), WeylError> {
        if self.chart == expected {
            Ok(())
        } else {
            Err(WeylError::WrongChart {
                expected,
                found: self.chart,
            })
        }
    }

    /// The twist isomorphism: `z -> z`, `∂_z -> ∂_z - (t-1)/z`.
    pub fn twist_psi(&self, tp: &TwistParam<C>) -> Result<Self, WeylError> {
        self.require_chart(Chart::Zero)?;
        Ok(self.substitute_del_shift(&tp.rho_shift().negated()))
    }

    /// Inverse of [`WeylOp::twist_psi`]: `∂_z -> ∂_z + (t-1)/z`.
    pub fn untwist_psi(&self, tp: &TwistParam<C>) -> Result<Self, WeylError> {
        self.require_chart(Chart::Zero)?;
        Ok(self.substitute_del_shift(&tp.rho_shift()))
    }

    /// `x^n · self · x^-n`.
    pub fn conjugate_by_power(&self, n: i64) -> Self {
        let left = Self::monomial(self.chart, C::one(), n, 0);
        let right = Self::monomial(self.chart, C::one(), -n, 0);
        left.mul_unchecked(self).mul_unchecked(&right)
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> WeylOp<D> {
        let mut out = WeylOp::zero(self.chart);
        for (i, p) in &self.coeffs {
            out.add_coeff(*i, &p.map_coeffs(&mut f));
        }
        out
    }
}

impl WeylOp<IndexPoly> {
    /// Parses the text form, e.g. `z^2*d - (t-1)*z`, on the given chart.
    ///
    /// Products may appear in any order; the result is normalized.
    pub fn parse(s: &str, chart: Chart) -> Result<Self, WeylError> {
        let expr = parse::parse_expr(s)?;
        Ok(parse::evaluate(&OperatorAlgebra { chart }, &expr)?)
    }

    /// Substitutes numeric values for `t` and `eta`; fails if `k` remains.
    pub fn specialize(&self, t: &Rational, eta: &Rational) -> Result<WeylOp<Rational>, WeylError> {
        let mut bad = None;
        let op = self.map_coeffs(|c| {
            let c = c
                .substitute(crate::algebra::Var::T, t)
                .substitute(crate::algebra::Var::Eta, eta);
            c.as_constant().unwrap_or_else(|| {
                bad = Some(c.to_string());
                Rational::zero()
            })
        });
        match bad {
            Some(s) => Err(WeylError::Parse(ParseError::Invalid(format!(
                "coefficient {s} is not numeric"
            )))),
            None => Ok(op),
        }
    }
}

impl WeylOp<Rational> {
    /// Parses an operator whose coefficients are numbers.
    pub fn parse_numeric(s: &str, chart: Chart) -> Result<Self, WeylError> {
        let sym = WeylOp::<IndexPoly>::parse(s, chart)?;
        let mut symbolic = false;
        let op = sym.map_coeffs(|c| {
            c.as_constant().unwrap_or_else(|| {
                symbolic = true;
                Rational::zero()
            })
        });
        if symbolic {
            return Err(WeylError::Parse(ParseError::Invalid(format!(
                "{s:?} has symbolic coefficients"
            ))));
        }
        Ok(op)
    }
}

/// Lifts a numeric operator to symbolic coefficients.
impl From<&WeylOp<Rational>> for WeylOp<IndexPoly> {
    fn from(op: &WeylOp<Rational>) -> Self {
        op.map_coeffs(|c| IndexPoly::constant(c.clone()))
    }
}

struct OperatorAlgebra {
    chart: Chart,
}

impl ExprAlgebra for OperatorAlgebra {
    type Value = WeylOp<IndexPoly>;

    fn number(&self, r: Rational) -> Result<Self::Value, ParseError> {
        Ok(WeylOp::constant(self.chart, IndexPoly::constant(r)))
    }

    fn ident(&self, name: &str) -> Result<Self::Value, ParseError> {
        if name == self.chart.coordinate() {
            Ok(WeylOp::coordinate(self.chart))
        } else if name == "d" {
            Ok(WeylOp::del(self.chart))
        } else if let Some(v) = index_symbol(name) {
            Ok(WeylOp::constant(self.chart, IndexPoly::var(v)))
        } else if name == self.chart.other().coordinate() {
            Err(ParseError::Invalid(format!(
                "coordinate {name} does not belong to the {} chart",
                self.chart
            )))
        } else {
            Err(ParseError::UnknownSymbol(name.into()))
        }
    }

    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ParseError> {
        Ok(a.add_unchecked(&b))
    }

    fn sub(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ParseError> {
        Ok(a.add_unchecked(&b.neg()))
    }

    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ParseError> {
        Ok(a.mul_unchecked(&b))
    }

    fn neg(&self, a: Self::Value) -> Result<Self::Value, ParseError> {
        Ok(a.neg())
    }

    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ParseError> {
        let d = b
            .as_constant()
            .and_then(|c| c.as_constant())
            .ok_or_else(|| ParseError::Invalid("division by a non-constant".into()))?;
        let inv = d.recip().map_err(|e| ParseError::Invalid(e.to_string()))?;
        Ok(a.scale(&IndexPoly::constant(inv)))
    }

    fn pow(&self, a: Self::Value, exp: i64) -> Result<Self::Value, ParseError> {
        if exp >= 0 {
            return Ok(a.pow(exp as u32));
        }
        // negative powers only of a single coordinate monomial
        let p = match (a.coeffs.len(), a.coeffs.get(&0)) {
            (1, Some(p)) => p.clone(),
            _ => {
                return Err(ParseError::Invalid(
                    "negative power of a non-function".into(),
                ))
            }
        };
        let mut terms = p.terms();
        match (terms.next(), terms.next()) {
            (Some((e, c)), None) if c.is_one() => {
                Ok(WeylOp::monomial(self.chart, IndexPoly::from(1), e * exp, 0))
            }
            _ => Err(ParseError::Invalid(
                "negative power of a non-monomial".into(),
            )),
        }
    }
}

impl<C: Coeff> fmt::Display for WeylOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, p) in self.coeffs.iter().rev() {
            let trailing = match i {
                0 => None,
                1 => Some("d".to_string()),
                n => Some(format!("d^{n}")),
            };
            terms.extend(p.rendered_terms(trailing.as_deref()));
        }
        f.write_str(&join_terms(terms))
    }
}

impl<C: Coeff> fmt::Debug for WeylOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.chart, self)
    }
}

/// The twist parameter `t`; the sheaf is built from `O(t-1)`, so most
/// formulas use the shifted value `t - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistParam<C> {
    pub t: C,
}

impl<C: Coeff> TwistParam<C> {
    pub fn new(t: C) -> Self {
        TwistParam { t }
    }

    /// `t - 1`.
    pub fn rho_shift(&self) -> C {
        self.t.minus(&C::one())
    }
}

impl TwistParam<IndexPoly> {
    /// `t` kept as a symbol.
    pub fn symbolic() -> Self {
        TwistParam::new(IndexPoly::t())
    }
}

impl TwistParam<Rational> {
    pub fn integer(t: i64) -> Self {
        TwistParam::new(Rational::from(t))
    }
}
