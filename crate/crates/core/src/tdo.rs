//! The twisted sheaf of differential operators at the level of chart
//! operators: the infinitesimal group action, the map from enveloping-algebra
//! words to global operators, gluing, and the Casimir constant.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Chart, Coeff, LaurentPoly, Rational};
use crate::weyl::{TwistParam, WeylError, WeylOp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TdoError {
    #[error("derived operator for {matrix} on the {chart} chart fails its check on x^{degree}")]
    CertificationFailed {
        matrix: String,
        chart: Chart,
        degree: i64,
    },
    #[error("expected a constant operator on the {chart} chart, found {op}")]
    NotConstant { chart: Chart, op: String },
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// A trace-zero 2x2 matrix `(x11, x12; x21, -x11)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracelessMatrix {
    pub x11: Rational,
    pub x12: Rational,
    pub x21: Rational,
}

impl TracelessMatrix {
    pub fn new(x11: Rational, x12: Rational, x21: Rational) -> Self {
        TracelessMatrix { x11, x12, x21 }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn e() -> Self {
        Self::new(Rational::zero(), Rational::one(), Rational::zero())
    }

    pub fn f() -> Self {
        Self::new(Rational::zero(), Rational::zero(), Rational::one())
    }

    pub fn h() -> Self {
        Self::new(Rational::one(), Rational::zero(), Rational::zero())
    }

    pub fn x22(&self) -> Rational {
        -&self.x11
    }
}

impl fmt::Display for TracelessMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}; {}, {})",
            self.x11,
            self.x12,
            self.x21,
            self.x22()
        )
    }
}

/// An element `re + r*eps` of `A[r]/(r^2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dual<A> {
    pub re: A,
    pub eps: A,
}

impl Dual<Rational> {
    fn lift<C: Coeff>(&self) -> Dual<C> {
        Dual {
            re: C::from_rational(self.re.clone()),
            eps: C::from_rational(self.eps.clone()),
        }
    }
}

/// A 2x2 matrix over the dual numbers, stored row by row.
pub type MatrixJet = [[Dual<Rational>; 2]; 2];

/// `I + rX`, the first-order truncation of `exp(rX)`.
pub fn exp_first_order(x: &TracelessMatrix) -> MatrixJet {
    let entry = |re: i64, eps: &Rational| Dual {
        re: Rational::from(re),
        eps: eps.clone(),
    };
    [
        [entry(1, &x.x11), entry(0, &x.x12)],
        [entry(0, &x.x21), entry(1, &x.x22())],
    ]
}

/// `u + v*x` in the chart coordinate, as a dual-number Laurent polynomial.
fn affine<C: Coeff>(chart: Chart, u: Dual<C>, v: Dual<C>) -> Dual<LaurentPoly<C>> {
    let poly = |a: C, b: C| LaurentPoly::from_terms(chart, [(0, a), (1, b)]);
    Dual {
        re: poly(u.re, v.re),
        eps: poly(u.eps, v.eps),
    }
}

/// The first-order part `T(x^m)` of the jet acting on the monomial `x^m`.
///
/// The group element `(a, b; c, d)` acts on sections in the zero chart by
/// `p(z) -> (d - bz)^(t-1) p((-c + az)/(d - bz))` and in the infinity chart
/// by `q(w) -> (a - cw)^(t-1) q((dw - b)/(a - cw))`. Writing the quotient
/// power as `den^(t-1-m) num^m`, both factors are expanded to first order.
fn first_order_action<C: Coeff>(
    jet: &MatrixJet,
    chart: Chart,
    tp: &TwistParam<C>,
    m: i64,
) -> LaurentPoly<C> {
    let [[a, b], [c, d]] = jet;
    let neg = |x: &Dual<Rational>| Dual {
        re: -&x.re,
        eps: -&x.eps,
    };
    let (den, num) = match chart {
        Chart::Zero => (
            affine(chart, d.lift(), neg(b).lift()),
            affine(chart, neg(c).lift(), a.lift()),
        ),
        Chart::Infinity => (
            affine(chart, a.lift(), neg(c).lift()),
            affine(chart, neg(b).lift(), d.lift()),
        ),
    };
    debug_assert_eq!(den.re, LaurentPoly::one(chart));
    debug_assert_eq!(num.re, LaurentPoly::coordinate(chart));
    // (1 + r*u)^e = 1 + r*e*u for any exponent e
    let exponent = tp.rho_shift().minus(&C::from_int(m));
    let from_den = den.eps.scale(&exponent).shift(m);
    // (x + r*v)^m = x^m + r*m*x^(m-1)*v
    let from_num = num.eps.scale(&C::from_int(m)).shift(m - 1);
    from_den.add_unchecked(&from_num)
}

/// The chart operator of `X` on `D_t`, derived from the group action.
///
/// The first-order action `T` is turned into `f + g*d` with `f = T(1)` and
/// `g = T(x) - x*T(1)`; the result is then checked against `T(x^2)` and
/// `T(x^3)`.
pub fn derive_chart_operator<C: Coeff>(
    x: &TracelessMatrix,
    chart: Chart,
    tp: &TwistParam<C>,
) -> Result<WeylOp<C>, TdoError> {
    let jet = exp_first_order(x);
    let action = |m| first_order_action(&jet, chart, tp, m);
    let f = action(0);
    let g = action(1).add_unchecked(&f.shift(1).neg());
    let op = WeylOp::from_coeffs(chart, [(0, f.clone()), (1, g.clone())]);
    for m in [2, 3] {
        let applied = f
            .shift(m)
            .add_unchecked(&g.scale(&C::from_int(m)).shift(m - 1));
        if applied != action(m) {
            return Err(TdoError::CertificationFailed {
                matrix: x.to_string(),
                chart,
                degree: m,
            });
        }
    }
    Ok(op)
}

/// One of the standard basis elements of sl(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    E,
    F,
    H,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::E, Letter::F, Letter::H];

    pub fn matrix(self) -> TracelessMatrix {
        match self {
            Letter::E => TracelessMatrix::e(),
            Letter::F => TracelessMatrix::f(),
            Letter::H => TracelessMatrix::h(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::E => "E",
            Letter::F => "F",
            Letter::H => "H",
        })
    }
}

impl FromStr for Letter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "E" | "e" => Ok(Letter::E),
            "F" | "f" => Ok(Letter::F),
            "H" | "h" => Ok(Letter::H),
            other => Err(format!("unknown sl(2) letter {other:?}")),
        }
    }
}

/// A rational combination of words in `E`, `F`, `H`; an element of the
/// enveloping algebra written without reordering.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieWord {
    terms: BTreeMap<Vec<Letter>, Rational>,
}

impl LieWord {
    pub fn zero() -> Self {
        LieWord::default()
    }

    /// The empty word.
    pub fn identity() -> Self {
        Self::word(&[])
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(&[l])
    }

    pub fn word(letters: &[Letter]) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(letters.to_vec(), Rational::one());
        LieWord { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Letter], &Rational)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    fn add_term(&mut self, w: Vec<Letter>, c: Rational) {
        let sum = self.terms.get(&w).cloned().unwrap_or_else(Rational::zero) + c;
        if sum.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from(-1)))
    }

    /// Concatenation, extended bilinearly.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `H*H + 2*E*F + 2*F*E`.
    pub fn casimir() -> Self {
        use Letter::*;
        let two = Rational::from(2);
        Self::word(&[H, H])
            .add(&Self::word(&[E, F]).scale(&two))
            .add(&Self::word(&[F, E]).scale(&two))
    }
}

impl fmt::Display for LieWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let body = if w.is_empty() {
                "1".to_string()
            } else {
                w.iter()
                    .map(Letter::to_string)
                    .collect::<Vec<_>>()
                    .join("*")
            };
            let sign = if c.is_negative() {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let mag = c.abs();
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(sign)?;
            if i > 0 {
                f.write_str(" ")?;
            }
            if mag.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{mag}*{body}")?;
            }
        }
        Ok(())
    }
}

/// A global section of `D_t`, given by its operators on the two charts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalOp<C: Coeff> {
    pub t: C,
    pub op0: WeylOp<C>,
    pub opinf: WeylOp<C>,
}

impl<C: Coeff> GlobalOp<C> {
    pub fn identity(t: C) -> Self {
        GlobalOp {
            t,
            op0: WeylOp::one(Chart::Zero),
            opinf: WeylOp::one(Chart::Infinity),
        }
    }

    pub fn on_chart(&self, chart: Chart) -> &WeylOp<C> {
        match chart {
            Chart::Zero => &self.op0,
            Chart::Infinity => &self.opinf,
        }
    }

    fn zip(
        &self,
        other: &Self,
        f: impl Fn(&WeylOp<C>, &WeylOp<C>) -> Result<WeylOp<C>, WeylError>,
    ) -> Result<Self, TdoError> {
        Ok(GlobalOp {
            t: self.t.clone(),
            op0: f(&self.op0, &other.op0)?,
            opinf: f(&self.opinf, &other.opinf)?,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, TdoError> {
        self.zip(other, WeylOp::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TdoError> {
        self.zip(other, WeylOp::sub)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, TdoError> {
        self.zip(other, WeylOp::mul)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, TdoError> {
        self.zip(other, WeylOp::commutator)
    }

    pub fn scale(&self, s: &C) -> Self {
        GlobalOp {
            t: self.t.clone(),
            op0: self.op0.scale(s),
            opinf: self.opinf.scale(s),
        }
    }
}

/// Image of a single letter, on both charts.
pub fn beta_letter<C: Coeff>(l: Letter, tp: &TwistParam<C>) -> Result<GlobalOp<C>, TdoError> {
    Ok(GlobalOp {
        t: tp.t.clone(),
        op0: derive_chart_operator(&l.matrix(), Chart::Zero, tp)?,
        opinf: derive_chart_operator(&l.matrix(), Chart::Infinity, tp)?,
    })
}

/// The image of an enveloping-algebra element in the global sections of `D_t`.
pub fn beta<C: Coeff>(word: &LieWord, tp: &TwistParam<C>) -> Result<GlobalOp<C>, TdoError> {
    let mut letters = BTreeMap::new();
    for l in Letter::ALL {
        letters.insert(l, beta_letter(l, tp)?);
    }
    let mut total = GlobalOp {
        t: tp.t.clone(),
        op0: WeylOp::zero(Chart::Zero),
        opinf: WeylOp::zero(Chart::Infinity),
    };
    for (w, c) in word.terms() {
        let mut prod = GlobalOp::identity(tp.t.clone());
        for l in w {
            prod = prod.mul(&letters[l])?;
        }
        total = total.add(&prod.scale(&C::from_rational(c.clone())))?;
    }
    Ok(total)
}

/// Outcome of comparing the two chart operators across the overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueReport<C: Coeff> {
    /// `psi(chart_rewrite(opinf))`.
    pub transported: WeylOp<C>,
    /// `transported - op0`; zero exactly when the pair glues.
    pub discrepancy: WeylOp<C>,
}

impl<C: Coeff> GlueReport<C> {
    pub fn holds(&self) -> bool {
        self.discrepancy.is_zero()
    }
}

impl<C: Coeff> fmt::Display for GlueReport<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            write!(f, "glues: {}", self.transported)
        } else {
            write!(
                f,
                "does not glue: transported {} differs by {}",
                self.transported, self.discrepancy
            )
        }
    }
}

/// Checks `psi_t(chart_rewrite(opinf)) = op0`.
pub fn glue_check<C: Coeff>(g: &GlobalOp<C>) -> Result<GlueReport<C>, TdoError> {
    let transported = g
        .opinf
        .chart_rewrite()
        .twist_psi(&TwistParam::new(g.t.clone()))?;
    let discrepancy = transported.sub(&g.op0)?;
    Ok(GlueReport {
        transported,
        discrepancy,
    })
}

/// The constant by which the Casimir element acts, read off from its image
/// on both charts.
pub fn casimir_scalar_identity<C: Coeff>(tp: &TwistParam<C>) -> Result<C, TdoError> {
    let omega = beta(&LieWord::casimir(), tp)?;
    let mut value = None;
    for chart in Chart::ALL {
        let op = omega.on_chart(chart);
        let c = op.as_constant().ok_or_else(|| TdoError::NotConstant {
            chart,
            op: op.to_string(),
        })?;
        match &value {
            None => value = Some(c),
            Some(v) if *v == c => {}
            Some(_) => {
                return Err(TdoError::NotConstant {
                    chart,
                    op: op.to_string(),
                })
            }
        }
    }
    Ok(value.expect("two charts"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, IndexPoly};

    fn sym(s: &str, chart: Chart) -> WeylOp<IndexPoly> {
        WeylOp::parse(s, chart).unwrap()
    }

    #[test]
    fn jets() {
        let e = exp_first_order(&TracelessMatrix::e());
        assert_eq!(
            e[0][1],
            Dual {
                re: q(0, 1),
                eps: q(1, 1)
            }
        );
        assert_eq!(
            e[0][0],
            Dual {
                re: q(1, 1),
                eps: q(0, 1)
            }
        );
        let h = exp_first_order(&TracelessMatrix::h());
        assert_eq!(
            h[1][1],
            Dual {
                re: q(1, 1),
                eps: q(-1, 1)
            }
        );
        let z = exp_first_order(&TracelessMatrix::zero());
        assert!(z.iter().flatten().all(|d| d.eps.is_zero()));
    }

    #[test]
    fn untwisted_e_has_no_function_term() {
        let op = derive_chart_operator(&TracelessMatrix::e(), Chart::Zero, &TwistParam::integer(1))
            .unwrap();
        assert_eq!(op, WeylOp::parse_numeric("z^2*d", Chart::Zero).unwrap());
    }

    #[test]
    fn derived_operators_are_first_order() {
        let tp = TwistParam::symbolic();
        for l in Letter::ALL {
            for chart in Chart::ALL {
                let op = derive_chart_operator(&l.matrix(), chart, &tp).unwrap();
                assert!(op.order().unwrap() <= 1);
            }
        }
    }

    #[test]
    fn beta_examples() {
        let g = beta(&LieWord::letter(Letter::E), &TwistParam::integer(2)).unwrap();
        assert_eq!(g.op0.to_string(), "z^2*d - z");
        assert_eq!(g.opinf.to_string(), "-d");
        let id = beta(&LieWord::identity(), &TwistParam::integer(5)).unwrap();
        assert_eq!(id.op0, WeylOp::one(Chart::Zero));
        assert_eq!(id.opinf, WeylOp::one(Chart::Infinity));
    }

    #[test]
    fn glue_failure_is_reported() {
        let g = GlobalOp {
            t: q(3, 1),
            op0: WeylOp::parse_numeric("z*d", Chart::Zero).unwrap(),
            opinf: WeylOp::parse_numeric("w*d", Chart::Infinity).unwrap(),
        };
        let report = glue_check(&g).unwrap();
        assert!(!report.holds());
        // -z*d + (t-1) at t = 3
        assert_eq!(report.transported.to_string(), "-z*d + 2");
        let t1 = GlobalOp { t: q(1, 1), ..g };
        assert!(!glue_check(&t1).unwrap().holds());
    }

    #[test]
    fn word_algebra() {
        let e = LieWord::letter(Letter::E);
        let f = LieWord::letter(Letter::F);
        let c = e.commutator(&f);
        assert_eq!(c.to_string(), "E*F - F*E");
        assert_eq!(LieWord::casimir().to_string(), "2*E*F + 2*F*E + H*H");
        assert!(e.sub(&e).terms().next().is_none());
    }

    #[test]
    fn symbolic_glue_of_h() {
        let g = beta(&LieWord::letter(Letter::H), &TwistParam::symbolic()).unwrap();
        assert!(glue_check(&g).unwrap().holds());
        assert_eq!(g.opinf, sym("-2*w*d + t - 1", Chart::Infinity));
    }
}
