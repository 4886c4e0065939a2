use std::collections::BTreeSet;

use tdo_core::algebra::{q, Chart};
use tdo_core::reps::golden::{
    is_erratum, published, published_tables, CORRECTED_ODD_F_INFINITY, PRINTED_ODD_F_INFINITY,
};
use tdo_core::reps::{action_table, ActionRule, Family, Sl2Module};
use tdo_core::tdo::Letter;

#[test]
fn every_published_formula_is_derived() {
    for table in published_tables() {
        let derived = action_table(table.family, table.chart, table.letter).unwrap();
        if is_erratum(table.family, table.chart, table.letter) {
            assert_ne!(derived, table.rule, "{}", table.label);
        } else {
            assert_eq!(derived, table.rule, "{}", table.label);
        }
    }
}

#[test]
fn published_tables_cover_every_chart_of_every_family() {
    let covered: BTreeSet<(Family, Chart)> = published_tables()
        .iter()
        .map(|p| (p.family, p.chart))
        .collect();
    let missing: Vec<_> = Family::ALL
        .iter()
        .flat_map(|f| f.charts().into_iter().map(move |c| (*f, c)))
        .filter(|fc| !covered.contains(fc))
        .filter(|(f, c)| !(*f == Family::FiniteO && *c == Chart::Zero))
        .collect();
    assert!(missing.is_empty(), "{missing:?}");
    assert_eq!(published_tables().len(), 33);
}

#[test]
fn only_one_erratum() {
    let errata: Vec<_> = published_tables()
        .into_iter()
        .filter(|p| is_erratum(p.family, p.chart, p.letter))
        .collect();
    assert_eq!(errata.len(), 1);
    assert_eq!(errata[0].rule, ActionRule::parse(PRINTED_ODD_F_INFINITY));
}

#[test]
fn printed_coefficient_breaks_the_bracket() {
    let printed = ActionRule::parse(PRINTED_ODD_F_INFINITY);
    let corrected = ActionRule::parse(CORRECTED_ODD_F_INFINITY);
    for t in 1..=6 {
        let m =
            Sl2Module::local(Family::PrincipalOdd, Chart::Infinity, &q(t, 1), &q(0, 1)).unwrap();
        let bad = m.with_rule(Letter::F, printed.clone()).unwrap();
        assert_eq!(bad.relations_hold(20).unwrap_err().0, "[E,F] = H");
        let good = m.with_rule(Letter::F, corrected.clone()).unwrap();
        assert!(good.relations_hold(20).is_ok());
    }
}

#[test]
fn labels_name_the_formula() {
    let p = published(Family::VermaPoint, Chart::Zero, Letter::E).unwrap();
    assert_eq!(p.label, "E_0 on m_k (verma-point)");
    let p = published(Family::PrincipalOdd, Chart::Infinity, Letter::F).unwrap();
    assert_eq!(p.label, "F_inf on p_k (principal-odd)");
    assert!(published(Family::FiniteO, Chart::Zero, Letter::E).is_none());
}
