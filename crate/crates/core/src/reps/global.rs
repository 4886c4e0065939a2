use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Chart, Rational};
use crate::tdo::Letter;

use super::local::{apply_rule, check_closed, check_regular, make_local, normalize_eta};
use super::{
    action_table, ActionRule, Boundary, Element, Family, IndexDomain, ModuleKey, NumericRule,
    RepsError,
};

/// How basis vectors of the infinity-chart realization correspond to those
/// of the zero-chart realization on the overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Intertwiner {
    /// `b_k -> b_(k + shift)`.
    Shift { shift: i64 },
    /// `b_k -> b_(center - k)`.
    Reflection { center: i64 },
    /// The module lives on one chart only.
    None,
}

impl Intertwiner {
    pub fn map(self, k: i64) -> i64 {
        match self {
            Intertwiner::Shift { shift } => k + shift,
            Intertwiner::Reflection { center } => center - k,
            Intertwiner::None => k,
        }
    }
}

impl fmt::Display for Intertwiner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Intertwiner::Shift { shift } => write!(f, "b_k -> b_(k{shift:+})"),
            Intertwiner::Reflection { center } => write!(f, "b_k -> b_({center}-k)"),
            Intertwiner::None => f.write_str("none"),
        }
    }
}

/// An sl(2)-module with a basis indexed by integers, given by the action
/// rules of `E`, `F` and `H`.
#[derive(Debug, Clone)]
pub struct Sl2Module {
    pub family: Family,
    pub t: Rational,
    pub eta: Rational,
    pub chart: Chart,
    pub domain: IndexDomain,
    pub boundary: Boundary,
    pub global: bool,
    pub intertwiner: Intertwiner,
    rules: [ActionRule; 3],
    numeric: [NumericRule; 3],
}

fn slot(x: Letter) -> usize {
    match x {
        Letter::E => 0,
        Letter::F => 1,
        Letter::H => 2,
    }
}

impl Sl2Module {
    /// Builds a module from explicit rules, checking that closed domains are
    /// preserved.
    #[allow(clippy::too_many_arguments)]
    pub fn from_rules(
        family: Family,
        chart: Chart,
        t: Rational,
        eta: Rational,
        domain: IndexDomain,
        boundary: Boundary,
        global: bool,
        intertwiner: Intertwiner,
        rules: [ActionRule; 3],
    ) -> Result<Self, RepsError> {
        let numeric = rules.clone().map(|r| r.specialize(&t, &eta));
        if boundary == Boundary::Closed {
            for (x, rule) in Letter::ALL.iter().zip(&numeric) {
                check_closed(family, domain, &x.to_string(), rule)?;
            }
        }
        Ok(Sl2Module {
            family,
            t,
            eta,
            chart,
            domain,
            boundary,
            global,
            intertwiner,
            rules,
            numeric,
        })
    }

    /// The sections over one chart as an sl(2)-module.
    pub fn local(
        family: Family,
        chart: Chart,
        t: &Rational,
        eta: &Rational,
    ) -> Result<Self, RepsError> {
        let m = make_local(family, chart, t, eta)?;
        let rules = Letter::ALL
            .map(|x| action_table(family, chart, x))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        let rules: [ActionRule; 3] = rules.try_into().expect("three letters");
        Self::from_rules(
            family,
            chart,
            m.t,
            m.eta,
            m.domain,
            m.boundary,
            false,
            Intertwiner::None,
            rules,
        )
    }

    pub fn key(&self) -> ModuleKey {
        ModuleKey {
            family: self.family,
            chart: self.chart,
            t: self.t.clone(),
            eta: self.eta.clone(),
            global: self.global,
        }
    }

    pub fn basis(&self, k: i64) -> Element {
        Element::basis(&self.key(), k)
    }

    pub fn rule(&self, x: Letter) -> &ActionRule {
        &self.rules[slot(x)]
    }

    pub fn numeric_rule(&self, x: Letter) -> &NumericRule {
        &self.numeric[slot(x)]
    }

    pub fn apply(&self, x: Letter, e: &Element) -> Element {
        apply_rule(&self.numeric[slot(x)], self.domain, e)
    }

    /// Basis indices examined for a given window.
    pub fn window(&self, window: i64) -> Vec<i64> {
        self.domain.window(window)
    }

    /// The same rules on the finite range `lo..=hi`.
    pub fn restricted(&self, lo: i64, hi: i64) -> Result<Self, RepsError> {
        Self::from_rules(
            self.family,
            self.chart,
            self.t.clone(),
            self.eta.clone(),
            IndexDomain::FiniteRange { lo, hi },
            Boundary::Closed,
            self.global,
            self.intertwiner,
            self.rules.clone(),
        )
    }

    /// Replaces the rule of one letter.
    pub fn with_rule(&self, x: Letter, rule: ActionRule) -> Result<Self, RepsError> {
        let mut rules = self.rules.clone();
        rules[slot(x)] = rule;
        Self::from_rules(
            self.family,
            self.chart,
            self.t.clone(),
            self.eta.clone(),
            self.domain,
            self.boundary,
            self.global,
            self.intertwiner,
            rules,
        )
    }

    /// First basis index where one of the sl(2) bracket relations fails.
    pub fn relations_hold(&self, window: i64) -> Result<(), (&'static str, i64)> {
        use Letter::*;
        let bracket = |a: Letter, b: Letter, v: &Element| {
            self.apply(a, &self.apply(b, v))
                .add_unchecked(&self.apply(b, &self.apply(a, v)).scale(&Rational::from(-1)))
        };
        for k in self.window(window) {
            let v = self.basis(k);
            if bracket(E, F, &v) != self.apply(H, &v) {
                return Err(("[E,F] = H", k));
            }
            if bracket(H, E, &v) != self.apply(E, &v).scale(&Rational::from(2)) {
                return Err(("[H,E] = 2E", k));
            }
            if bracket(H, F, &v) != self.apply(F, &v).scale(&Rational::from(-2)) {
                return Err(("[H,F] = -2F", k));
            }
        }
        Ok(())
    }
}

/// Chart on which the global sections of a family are realized.
fn realization_chart(family: Family) -> Chart {
    family.support().unwrap_or(Chart::Infinity)
}

fn intertwiner_for(family: Family, t: i64) -> Intertwiner {
    match family {
        Family::FiniteO => Intertwiner::Reflection { center: t - 1 },
        Family::DualVermaOpen | Family::PrincipalEven | Family::WhittakerOpen => {
            Intertwiner::Shift { shift: -(t - 1) }
        }
        Family::PrincipalOdd => Intertwiner::Shift { shift: t - 1 },
        Family::VermaPoint | Family::DeltaInfinity => Intertwiner::None,
    }
}

/// The module of global sections of a family.
///
/// Sections of `O(t-1)` are the polynomials of degree below `t` in `w`;
/// all other families are realized by their local module on one chart,
/// which already determines the global sections.
pub fn global_module(family: Family, t: &Rational, eta: &Rational) -> Result<Sl2Module, RepsError> {
    check_regular(t)?;
    let eta = normalize_eta(family, eta)?;
    let tn = t.to_i64().expect("integral t");
    let local = Sl2Module::local(family, realization_chart(family), t, &eta)?;
    let domain = match family {
        Family::FiniteO => IndexDomain::FiniteRange { lo: 0, hi: tn - 1 },
        _ => local.domain,
    };
    Sl2Module::from_rules(
        family,
        local.chart,
        t.clone(),
        eta,
        domain,
        local.boundary,
        true,
        intertwiner_for(family, tn),
        local.rules,
    )
}

/// A square that fails to commute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapFailure {
    pub letter: Letter,
    pub index: i64,
    /// Image under the zero-chart action after transport.
    pub via_zero: String,
    /// Transport of the image under the infinity-chart action.
    pub via_infinity: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapReport {
    pub family: Family,
    pub t: Rational,
    pub intertwiner: Intertwiner,
    pub checked: usize,
    pub failure: Option<OverlapFailure>,
}

impl OverlapReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for OverlapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(
                f,
                "{} t={}: {} intertwines ({} squares)",
                self.family, self.t, self.intertwiner, self.checked
            ),
            Some(e) => write!(
                f,
                "{} t={}: {} fails for {} at index {}: {} vs {}",
                self.family,
                self.t,
                self.intertwiner,
                e.letter,
                e.index,
                e.via_infinity,
                e.via_zero
            ),
        }
    }
}

/// Checks that the standard intertwiner of a family commutes with `E`, `F`
/// and `H` between its two chart realizations.
pub fn overlap_check(
    family: Family,
    t: &Rational,
    eta: &Rational,
    window: i64,
) -> Result<OverlapReport, RepsError> {
    check_regular(t)?;
    let tn = t.to_i64().expect("integral t");
    overlap_check_with(family, t, eta, window, intertwiner_for(family, tn))
}

/// [`overlap_check`] with a caller-chosen intertwiner.
pub fn overlap_check_with(
    family: Family,
    t: &Rational,
    eta: &Rational,
    window: i64,
    intertwiner: Intertwiner,
) -> Result<OverlapReport, RepsError> {
    if family.is_closed_orbit() {
        return Err(RepsError::WrongFamily {
            operation: "overlap_check",
            family,
        });
    }
    let source = if family == Family::FiniteO {
        global_module(family, t, eta)?
    } else {
        Sl2Module::local(family, Chart::Infinity, t, eta)?
    };
    let target = Sl2Module::local(family, Chart::Zero, t, eta)?;
    let tkey = target.key();
    let transport = |e: &Element| e.reindex(&tkey, |k| intertwiner.map(k));
    let mut checked = 0;
    for k in source.window(window) {
        let b = source.basis(k);
        for x in Letter::ALL {
            let via_infinity = transport(&source.apply(x, &b));
            let via_zero = target.apply(x, &transport(&b));
            checked += 1;
            if via_infinity != via_zero {
                let failure = OverlapFailure {
                    letter: x,
                    index: k,
                    via_zero: via_zero.to_string(),
                    via_infinity: via_infinity.to_string(),
                };
                return Ok(OverlapReport {
                    family,
                    t: t.clone(),
                    intertwiner,
                    checked,
                    failure: Some(failure),
                });
            }
        }
    }
    Ok(OverlapReport {
        family,
        t: t.clone(),
        intertwiner,
        checked,
        failure: None,
    })
}
