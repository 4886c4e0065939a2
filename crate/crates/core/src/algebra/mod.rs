//! Exact scalars, Laurent polynomials in one chart coordinate, and the
//! three-symbol coefficient polynomials (`k`, `t`, `eta`) used by action
//! tables.

mod index_poly;
pub(crate) mod laurent;
pub mod parse;
mod rational;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use index_poly::{IndexPoly, Var};
pub use laurent::LaurentPoly;
pub use rational::{q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
    #[error("chart mismatch: {left} vs {right}")]
    ChartMismatch { left: Chart, right: Chart },
    #[error("coefficient {0} is not a constant")]
    NotConstant(String),
}

/// One of the two standard affine charts of the projective line.
///
/// `Zero` carries the coordinate `z`, `Infinity` the coordinate `w`; on the
/// overlap `w = 1/z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Zero,
    Infinity,
}

impl Chart {
    pub const ALL: [Chart; 2] = [Chart::Zero, Chart::Infinity];

    pub fn other(self) -> Chart {
        match self {
            Chart::Zero => Chart::Infinity,
            Chart::Infinity => Chart::Zero,
        }
    }

    /// Name of the chart coordinate as it appears in rendered operators.
    pub fn coordinate(self) -> &'static str {
        match self {
            Chart::Zero => "z",
            Chart::Infinity => "w",
        }
    }

    /// Subscript used for chart operators, e.g. `E_0` and `E_inf`.
    pub fn suffix(self) -> &'static str {
        match self {
            Chart::Zero => "0",
            Chart::Infinity => "inf",
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::Zero => "zero",
            Chart::Infinity => "infinity",
        })
    }
}

impl FromStr for Chart {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "0" | "zero" | "z" | "chartzero" => Ok(Chart::Zero),
            "inf" | "infinity" | "w" | "chartinfinity" => Ok(Chart::Infinity),
            other => Err(format!(
                "unknown chart {other:?} (expected zero or infinity)"
            )),
        }
    }
}

/// Commutative coefficient ring for Laurent polynomials and operators.
///
/// Implemented by [`Rational`] (numeric parameters) and [`IndexPoly`]
/// (parameters kept as symbols).
pub trait Coeff:
    Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(r: Rational) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// The value, if this coefficient is a constant.
    fn as_rational(&self) -> Option<Rational>;
    /// Whether rendering should pull a leading minus sign out of this value.
    fn renders_negative(&self) -> bool;
    /// Whether this value needs parentheses when used as a factor.
    fn is_compound(&self) -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn from_rational(r: Rational) -> Self {
        r
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
        Some(self.clone())
    }
    fn renders_negative(&self) -> bool {
        self.is_negative()
    }
    fn is_compound(&self) -> bool {
        false
    }
}
