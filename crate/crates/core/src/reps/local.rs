use serde::{Deserialize, Serialize};

use crate::algebra::{Chart, Rational};
use crate::tdo::{derive_chart_operator, Letter};
use crate::weyl::{TwistParam, WeylOp};

use super::{ActionRule, Element, Family, ModuleKey, NumericRule, RepsError};

/// The set of basis indices of a module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum IndexDomain {
    NonNegative,
    AllIntegers,
    FiniteRange { lo: i64, hi: i64 },
}

impl IndexDomain {
    pub fn contains(self, k: i64) -> bool {
        match self {
            IndexDomain::NonNegative => k >= 0,
            IndexDomain::AllIntegers => true,
            IndexDomain::FiniteRange { lo, hi } => lo <= k && k <= hi,
        }
    }

    /// Indices examined for a truncation window of the given size.
    pub fn window(self, window: i64) -> Vec<i64> {
        match self {
            IndexDomain::NonNegative => (0..=window).collect(),
            IndexDomain::AllIntegers => (-window..=window).collect(),
            IndexDomain::FiniteRange { lo, hi } => (lo..=hi).collect(),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, IndexDomain::FiniteRange { .. })
    }
}

/// What happens to terms a rule sends outside the index domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Rules never produce such terms; checked at construction.
    Closed,
    /// Such terms are zero in the module (a quotient by the boundary
    /// relation, e.g. `z * delta = 0`).
    Truncating,
}

/// A module over the differential operators of one chart, with a basis
/// indexed by integers.
#[derive(Debug, Clone)]
pub struct BasisModule {
    pub family: Family,
    pub chart: Chart,
    pub t: Rational,
    pub eta: Rational,
    pub domain: IndexDomain,
    pub boundary: Boundary,
    pub coord_action: ActionRule,
    pub del_action: ActionRule,
    coord_num: NumericRule,
    del_num: NumericRule,
}

fn rules(family: Family, chart: Chart) -> (IndexDomain, Boundary, ActionRule, ActionRule) {
    use Boundary::*;
    use IndexDomain::*;
    let r = ActionRule::parse;
    match (family, chart) {
        // u_k = (-1)^k x^k, polynomial functions in either coordinate
        (Family::FiniteO, _) | (Family::DualVermaOpen, Chart::Infinity) => {
            (NonNegative, Closed, r(&[(1, "-1")]), r(&[(-1, "-k")]))
        }
        // m_k = (-1)^k/k! d^k delta
        (Family::VermaPoint, _) | (Family::DeltaInfinity, _) => {
            (NonNegative, Truncating, r(&[(-1, "1")]), r(&[(1, "-k-1")]))
        }
        (Family::PrincipalEven, Chart::Infinity) => {
            (AllIntegers, Closed, r(&[(1, "-1")]), r(&[(-1, "-k")]))
        }
        // n_k = (-1)^k z^-k
        (Family::DualVermaOpen | Family::PrincipalEven, Chart::Zero) => {
            (AllIntegers, Closed, r(&[(-1, "-1")]), r(&[(1, "k")]))
        }
        (Family::PrincipalOdd, Chart::Zero) => {
            (AllIntegers, Closed, r(&[(1, "1")]), r(&[(-1, "k+1/2")]))
        }
        // p_k = w^(-k-1/2)
        (Family::PrincipalOdd, Chart::Infinity) => {
            (AllIntegers, Closed, r(&[(-1, "1")]), r(&[(1, "-k-1/2")]))
        }
        (Family::WhittakerOpen, Chart::Infinity) => (
            NonNegative,
            Closed,
            r(&[(1, "-1")]),
            r(&[(-1, "-k"), (0, "-eta")]),
        ),
        (Family::WhittakerOpen, Chart::Zero) => (
            AllIntegers,
            Closed,
            r(&[(-1, "-1")]),
            r(&[(1, "k"), (2, "eta")]),
        ),
    }
}

/// Checks that a closed module's rule never leaves the domain near its edges.
pub(crate) fn check_closed(
    family: Family,
    domain: IndexDomain,
    name: &str,
    rule: &NumericRule,
) -> Result<(), RepsError> {
    let probe: Vec<i64> = match domain {
        IndexDomain::AllIntegers => return Ok(()),
        IndexDomain::NonNegative => (0..=4).collect(),
        IndexDomain::FiniteRange { lo, hi } => (lo..=hi).collect(),
    };
    for k in probe {
        if let Some((_, _)) = rule.apply(k).find(|(target, _)| !domain.contains(*target)) {
            return Err(RepsError::LeavesDomain {
                family,
                rule: name.to_string(),
                index: k,
            });
        }
    }
    Ok(())
}

fn integral_twist(t: &Rational) -> Result<i64, RepsError> {
    t.to_i64()
        .ok_or_else(|| RepsError::NonIntegralTwist { t: t.clone() })
}

/// Normalizes `eta`: it is kept for the Whittaker family, must vanish on the
/// closed orbits, and is dropped elsewhere.
pub(crate) fn normalize_eta(family: Family, eta: &Rational) -> Result<Rational, RepsError> {
    if family.uses_eta() {
        Ok(eta.clone())
    } else if family.is_closed_orbit() && !eta.is_zero() {
        Err(RepsError::ClosedOrbitTwist {
            family,
            eta: eta.clone(),
        })
    } else {
        Ok(Rational::zero())
    }
}

pub(crate) fn check_regular(t: &Rational) -> Result<(), RepsError> {
    if integral_twist(t)? < 1 {
        return Err(RepsError::NotRegularDominant { t: t.clone() });
    }
    Ok(())
}

/// The module of sections over one chart, for integer `t >= 1`.
pub fn make_local(
    family: Family,
    chart: Chart,
    t: &Rational,
    eta: &Rational,
) -> Result<BasisModule, RepsError> {
    check_regular(t)?;
    make_local_singular(family, chart, t, eta)
}

/// As [`make_local`] but accepting any integer `t`, including singular
/// parameters such as `t = 0`.
pub fn make_local_singular(
    family: Family,
    chart: Chart,
    t: &Rational,
    eta: &Rational,
) -> Result<BasisModule, RepsError> {
    integral_twist(t)?;
    if let Some(support) = family.support() {
        if support != chart {
            return Err(RepsError::UnsupportedChart {
                family,
                chart,
                support,
            });
        }
    }
    let eta = normalize_eta(family, eta)?;
    let (domain, boundary, coord_action, del_action) = rules(family, chart);
    BasisModule::new(
        family,
        chart,
        t.clone(),
        eta,
        domain,
        boundary,
        coord_action,
        del_action,
    )
}

impl BasisModule {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        family: Family,
        chart: Chart,
        t: Rational,
        eta: Rational,
        domain: IndexDomain,
        boundary: Boundary,
        coord_action: ActionRule,
        del_action: ActionRule,
    ) -> Result<Self, RepsError> {
        let coord_num = coord_action.specialize(&t, &eta);
        let del_num = del_action.specialize(&t, &eta);
        if boundary == Boundary::Closed {
            check_closed(family, domain, "coordinate", &coord_num)?;
            check_closed(family, domain, "derivative", &del_num)?;
        }
        Ok(BasisModule {
            family,
            chart,
            t,
            eta,
            domain,
            boundary,
            coord_action,
            del_action,
            coord_num,
            del_num,
        })
    }

    pub fn key(&self) -> ModuleKey {
        ModuleKey {
            family: self.family,
            chart: self.chart,
            t: self.t.clone(),
            eta: self.eta.clone(),
            global: false,
        }
    }

    pub fn basis(&self, k: i64) -> Element {
        Element::basis(&self.key(), k)
    }

    fn check(&self, e: &Element) -> Result<(), RepsError> {
        let key = self.key();
        if *e.key() == key {
            Ok(())
        } else {
            Err(RepsError::KeyMismatch {
                expected: key.to_string(),
                found: e.key().to_string(),
            })
        }
    }

    pub fn apply_coord(&self, e: &Element) -> Element {
        apply_rule(&self.coord_num, self.domain, e)
    }

    pub fn apply_del(&self, e: &Element) -> Element {
        apply_rule(&self.del_num, self.domain, e)
    }

    /// Inverse of the coordinate action, when it is a unit monomial rule on
    /// all of `Z`.
    fn coord_inverse(&self) -> Result<NumericRule, RepsError> {
        let err = RepsError::NonInvertibleCoordinate {
            family: self.family,
            chart: self.chart,
        };
        if self.domain != IndexDomain::AllIntegers {
            return Err(err);
        }
        let mut terms = self.coord_action.terms();
        match (terms.next(), terms.next()) {
            (Some((s, c)), None) => {
                let c = c.as_constant().ok_or(err)?;
                let inv = c.recip().expect("nonzero rule coefficient");
                Ok(ActionRule::new([(-s, inv.into())]).specialize(&self.t, &self.eta))
            }
            _ => Err(err),
        }
    }

    /// `d(x b_k) - x(d b_k) - b_k`; zero for a genuine module.
    pub fn commutator_defect(&self, k: i64) -> Element {
        let b = self.basis(k);
        let lhs = self.apply_del(&self.apply_coord(&b));
        let rhs = self.apply_coord(&self.apply_del(&b));
        lhs.add_unchecked(&rhs.scale(&Rational::from(-1)))
            .add_unchecked(&b.scale(&Rational::from(-1)))
    }

    /// First window index where `[d, x] = 1` fails.
    pub fn representation_property(&self, window: i64) -> Result<(), i64> {
        match self
            .domain
            .window(window)
            .into_iter()
            .find(|k| !self.commutator_defect(*k).is_zero())
        {
            Some(k) => Err(k),
            None => Ok(()),
        }
    }
}

pub(crate) fn apply_rule(rule: &NumericRule, domain: IndexDomain, e: &Element) -> Element {
    let mut out = Element::zero(e.key());
    for (k, c) in e.terms() {
        for (target, a) in rule.apply(k) {
            if domain.contains(target) {
                out.add_term(target, &(&a * c));
            }
        }
    }
    out
}

/// Applies a differential operator through the module's generator rules.
pub fn act_weyl(m: &BasisModule, op: &WeylOp<Rational>, e: &Element) -> Result<Element, RepsError> {
    if op.chart() != m.chart {
        return Err(RepsError::ChartMismatch {
            op: op.chart(),
            module: m.chart,
        });
    }
    m.check(e)?;
    let inverse = if op
        .terms()
        .any(|(_, p)| p.min_exponent().is_some_and(|e| e < 0))
    {
        Some(m.coord_inverse()?)
    } else {
        None
    };
    let mut out = Element::zero(e.key());
    let mut del_power = e.clone();
    let mut order = 0;
    for (i, p) in op.terms() {
        while order < i {
            del_power = m.apply_del(&del_power);
            order += 1;
        }
        for (exp, c) in p.terms() {
            let mut v = del_power.clone();
            for _ in 0..exp.unsigned_abs() {
                v = match &inverse {
                    Some(inv) if exp < 0 => apply_rule(inv, m.domain, &v),
                    _ => m.apply_coord(&v),
                };
            }
            out = out.add_unchecked(&v.scale(c));
        }
    }
    Ok(out)
}

/// Applies `E`, `F` or `H` through the chart operator of the module's chart.
pub fn act_lie(m: &BasisModule, x: Letter, e: &Element) -> Result<Element, RepsError> {
    let op = derive_chart_operator(&x.matrix(), m.chart, &TwistParam::new(m.t.clone()))?;
    act_weyl(m, &op, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn local(family: Family, chart: Chart, t: i64, eta: Rational) -> BasisModule {
        make_local(family, chart, &Rational::from(t), &eta).unwrap()
    }

    #[test]
    fn delta_is_killed_by_its_coordinate() {
        let m = local(Family::VermaPoint, Chart::Zero, 2, q(0, 1));
        let z = WeylOp::coordinate(Chart::Zero);
        assert!(act_weyl(&m, &z, &m.basis(0)).unwrap().is_zero());
    }

    #[test]
    fn polynomial_calculus() {
        let m = local(Family::FiniteO, Chart::Infinity, 3, q(0, 1));
        // w^3 = -u_3 and 3w^2 = 3u_2
        let w3 = m.basis(3).scale(&q(-1, 1));
        let d = WeylOp::del(Chart::Infinity);
        assert_eq!(act_weyl(&m, &d, &w3).unwrap(), m.basis(2).scale(&q(3, 1)));
    }

    #[test]
    fn half_integral_module() {
        let m = local(Family::PrincipalOdd, Chart::Zero, 1, q(0, 1));
        let op = WeylOp::parse_numeric("z^2*d", Chart::Zero).unwrap();
        assert_eq!(
            act_weyl(&m, &op, &m.basis(0)).unwrap(),
            m.basis(1).scale(&q(1, 2))
        );
        let inv = WeylOp::parse_numeric("z^-1", Chart::Zero).unwrap();
        assert_eq!(act_weyl(&m, &inv, &m.basis(0)).unwrap(), m.basis(-1));
    }

    #[test]
    fn lie_examples() {
        let m = local(Family::VermaPoint, Chart::Zero, 3, q(0, 1));
        assert_eq!(
            act_lie(&m, Letter::E, &m.basis(2)).unwrap(),
            m.basis(1).scale(&q(-5, 1))
        );
        let d = local(Family::DeltaInfinity, Chart::Infinity, 4, q(0, 1));
        assert!(act_lie(&d, Letter::F, &d.basis(0)).unwrap().is_zero());
        let w = local(Family::WhittakerOpen, Chart::Infinity, 2, q(3, 2));
        assert_eq!(
            act_lie(&w, Letter::E, &w.basis(0)).unwrap(),
            w.basis(0).scale(&q(3, 2))
        );
    }

    #[test]
    fn construction_errors() {
        let err = make_local(Family::VermaPoint, Chart::Infinity, &q(2, 1), &q(0, 1)).unwrap_err();
        assert!(matches!(
            err,
            RepsError::UnsupportedChart {
                support: Chart::Zero,
                ..
            }
        ));
        let err = make_local(Family::FiniteO, Chart::Zero, &q(0, 1), &q(0, 1)).unwrap_err();
        assert!(err
            .to_string()
            .contains("regular dominant integral required"));
        assert!(matches!(
            make_local(Family::FiniteO, Chart::Zero, &q(3, 2), &q(0, 1)),
            Err(RepsError::NonIntegralTwist { .. })
        ));
        assert!(matches!(
            make_local(Family::DeltaInfinity, Chart::Infinity, &q(2, 1), &q(1, 1)),
            Err(RepsError::ClosedOrbitTwist { .. })
        ));
        assert!(make_local_singular(Family::VermaPoint, Chart::Zero, &q(0, 1), &q(0, 1)).is_ok());
    }

    #[test]
    fn negative_powers_need_invertible_coordinate() {
        let m = local(Family::DualVermaOpen, Chart::Infinity, 2, q(0, 1));
        let op = WeylOp::parse_numeric("w^-1", Chart::Infinity).unwrap();
        assert!(matches!(
            act_weyl(&m, &op, &m.basis(1)),
            Err(RepsError::NonInvertibleCoordinate { .. })
        ));
        let op = WeylOp::parse_numeric("z", Chart::Zero).unwrap();
        assert!(matches!(
            act_weyl(&m, &op, &m.basis(1)),
            Err(RepsError::ChartMismatch { .. })
        ));
    }

    #[test]
    fn eta_zero_whittaker_rules_match_dual_verma() {
        for chart in Chart::ALL {
            let w = local(Family::WhittakerOpen, chart, 2, q(0, 1));
            let v = local(Family::DualVermaOpen, chart, 2, q(0, 1));
            assert_eq!(w.del_action.at_eta_zero(), v.del_action);
            assert_eq!(w.coord_action, v.coord_action);
        }
    }
}
