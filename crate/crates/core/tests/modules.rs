use tdo_core::algebra::{q, Chart, Rational};
use tdo_core::reps::{
    act_lie, act_weyl, action_table, borel_weil_dim, casimir_scalar, composition_report,
    global_module, highest_weight_vectors, irreducibility_certificate, k_weight_parity, make_local,
    overlap_check, overlap_check_with, submodule_generated, weights, whittaker_vectors, ActionRule,
    Certificate, Element, Family, Intertwiner, Parity, PieceKind, RepsError, Strategy, WeightError,
};
use tdo_core::tdo::Letter;
use tdo_core::weyl::WeylOp;

fn global(family: Family, t: i64, eta: Rational) -> tdo_core::reps::Sl2Module {
    global_module(family, &Rational::from(t), &eta).unwrap()
}

fn zero() -> Rational {
    q(0, 1)
}

#[test]
fn local_rules() {
    let m = make_local(Family::WhittakerOpen, Chart::Infinity, &q(2, 1), &q(1, 1)).unwrap();
    assert_eq!(m.del_action, ActionRule::parse(&[(-1, "-k"), (0, "-eta")]));
    // In terms of w^k = (-1)^k n_k: d w^3 = 3 w^2 - w^3.
    let w3 = m.basis(3).scale(&q(-1, 1));
    let want = m.basis(2).scale(&q(3, 1)).add(&m.basis(3)).unwrap();
    assert_eq!(m.apply_del(&w3), want);

    let p = make_local(Family::PrincipalOdd, Chart::Zero, &q(1, 1), &zero()).unwrap();
    assert_eq!(p.apply_del(&p.basis(0)), p.basis(-1).scale(&q(1, 2)));
    assert_eq!(p.apply_coord(&p.basis(4)), p.basis(5));

    for chart in Chart::ALL {
        let w = make_local(Family::WhittakerOpen, chart, &q(3, 1), &zero()).unwrap();
        let d = make_local(Family::DualVermaOpen, chart, &q(3, 1), &zero()).unwrap();
        assert_eq!(w.coord_action, d.coord_action);
        assert_eq!(w.del_action.at_eta_zero(), d.del_action);
    }
}

#[test]
fn closed_orbit_modules_live_on_one_chart() {
    let err = make_local(Family::VermaPoint, Chart::Infinity, &q(2, 1), &zero()).unwrap_err();
    assert!(matches!(err, RepsError::UnsupportedChart { .. }));
    assert!(err.to_string().contains("zero chart only"));
    assert!(matches!(
        make_local(Family::DeltaInfinity, Chart::Infinity, &q(2, 1), &q(1, 1)),
        Err(RepsError::ClosedOrbitTwist { .. })
    ));
    assert!(matches!(
        make_local(Family::FiniteO, Chart::Zero, &q(0, 1), &zero()),
        Err(RepsError::NotRegularDominant { .. })
    ));
    assert!(matches!(
        make_local(Family::FiniteO, Chart::Zero, &q(3, 2), &zero()),
        Err(RepsError::NonIntegralTwist { .. })
    ));
}

#[test]
fn differential_operators_act() {
    let m = make_local(Family::VermaPoint, Chart::Zero, &q(2, 1), &zero()).unwrap();
    let z = WeylOp::coordinate(Chart::Zero);
    assert!(act_weyl(&m, &z, &m.basis(0)).unwrap().is_zero());

    let f = make_local(Family::FiniteO, Chart::Infinity, &q(5, 1), &zero()).unwrap();
    let d = WeylOp::del(Chart::Infinity);
    // w^3 = -u_3 and 3 w^2 = 3 u_2.
    let w3 = f.basis(3).scale(&q(-1, 1));
    assert_eq!(act_weyl(&f, &d, &w3).unwrap(), f.basis(2).scale(&q(3, 1)));

    let p = make_local(Family::PrincipalOdd, Chart::Zero, &q(2, 1), &zero()).unwrap();
    let op = WeylOp::parse_numeric("z^2*d", Chart::Zero).unwrap();
    assert_eq!(
        act_weyl(&p, &op, &p.basis(0)).unwrap(),
        p.basis(1).scale(&q(1, 2))
    );

    let inv = WeylOp::parse_numeric("z^-1", Chart::Zero).unwrap();
    assert!(matches!(
        act_weyl(&m, &inv, &m.basis(0)),
        Err(RepsError::NonInvertibleCoordinate { .. })
    ));
}

#[test]
fn lie_actions() {
    let m = make_local(Family::VermaPoint, Chart::Zero, &q(3, 1), &zero()).unwrap();
    assert_eq!(
        act_lie(&m, Letter::E, &m.basis(2)).unwrap(),
        m.basis(1).scale(&q(-5, 1))
    );
    for t in 1..=4 {
        let d = make_local(Family::DeltaInfinity, Chart::Infinity, &q(t, 1), &zero()).unwrap();
        assert!(act_lie(&d, Letter::F, &d.basis(0)).unwrap().is_zero());
    }
    let eta = q(7, 3);
    let w = make_local(Family::WhittakerOpen, Chart::Infinity, &q(2, 1), &eta).unwrap();
    assert_eq!(
        act_lie(&w, Letter::E, &w.basis(0)).unwrap(),
        w.basis(0).scale(&eta)
    );
}

#[test]
fn derived_tables() {
    assert_eq!(
        action_table(Family::VermaPoint, Chart::Zero, Letter::H).unwrap(),
        ActionRule::parse(&[(0, "-t-1-2*k")])
    );
    assert_eq!(
        action_table(Family::PrincipalEven, Chart::Infinity, Letter::F).unwrap(),
        ActionRule::parse(&[(1, "t-1-k")])
    );
    assert_eq!(
        action_table(Family::PrincipalOdd, Chart::Infinity, Letter::F).unwrap(),
        ActionRule::parse(&[(-1, "-t+1/2-k")])
    );
}

#[test]
fn global_modules() {
    let f = global(Family::FiniteO, 4, zero());
    let w: Vec<Rational> = weights(&f, 60)
        .unwrap()
        .into_iter()
        .map(|(_, w)| w)
        .collect();
    assert_eq!(w, vec![q(3, 1), q(1, 1), q(-1, 1), q(-3, 1)]);

    let v = global(Family::VermaPoint, 1, zero());
    assert_eq!(highest_weight_vectors(&v, 20)[0].0, q(-2, 1));

    let w = global(Family::WhittakerOpen, 2, zero());
    let d = global(Family::DualVermaOpen, 2, zero());
    for x in Letter::ALL {
        assert_eq!(w.rule(x).at_eta_zero(), *d.rule(x));
    }
    assert_eq!(w.domain, d.domain);
}

#[test]
fn intertwiners() {
    let zero = zero();
    assert!(overlap_check(Family::PrincipalEven, &q(3, 1), &zero, 30)
        .unwrap()
        .holds());
    let r = overlap_check(Family::PrincipalEven, &q(3, 1), &zero, 30).unwrap();
    assert_eq!(r.intertwiner.map(5), 3);
    assert!(overlap_check_with(
        Family::PrincipalEven,
        &q(1, 1),
        &zero,
        30,
        Intertwiner::Shift { shift: 0 }
    )
    .unwrap()
    .holds());
    let r = overlap_check(Family::DualVermaOpen, &q(2, 1), &zero, 30).unwrap();
    assert!(r.holds());
    assert_eq!(r.intertwiner.map(1), 0);
    assert!(!overlap_check_with(
        Family::DualVermaOpen,
        &q(2, 1),
        &zero,
        30,
        Intertwiner::Shift { shift: 0 }
    )
    .unwrap()
    .holds());
    assert!(matches!(
        overlap_check(Family::VermaPoint, &q(2, 1), &zero, 10),
        Err(RepsError::WrongFamily { .. })
    ));
}

#[test]
fn weight_lists() {
    let d = global(Family::DeltaInfinity, 2, zero());
    assert_eq!(
        weights(&d, 3).unwrap(),
        vec![(0, q(3, 1)), (1, q(5, 1)), (2, q(7, 1)), (3, q(9, 1))]
    );
    let f = global(Family::FiniteO, 1, zero());
    assert_eq!(weights(&f, 60).unwrap(), vec![(0, q(0, 1))]);
    let w = global(Family::WhittakerOpen, 2, q(1, 1));
    assert_eq!(
        weights(&w, 10),
        Err(WeightError::NotAWeightBasis { shift: 1 })
    );
}

#[test]
fn casimir_values() {
    for family in Family::ALL {
        let eta = if family.uses_eta() { q(5, 1) } else { zero() };
        assert_eq!(
            casimir_scalar(&global(family, 3, eta.clone()), 30).unwrap(),
            q(8, 1)
        );
        assert_eq!(
            casimir_scalar(&global(family, 1, eta), 30).unwrap(),
            q(0, 1)
        );
    }
    assert_eq!(
        casimir_scalar(&global(Family::WhittakerOpen, 2, q(5, 1)), 30).unwrap(),
        q(3, 1)
    );
}

fn single(v: &[(Rational, Element)]) -> (Rational, Element) {
    assert_eq!(v.len(), 1, "expected one vector");
    v[0].clone()
}

#[test]
fn extremal_vectors() {
    let v = global(Family::VermaPoint, 2, zero());
    let (w, e) = single(&highest_weight_vectors(&v, 30));
    assert_eq!((w, e.proportional_to_basis(0).is_some()), (q(-3, 1), true));
    let f = global(Family::FiniteO, 3, zero());
    let (w, e) = single(&highest_weight_vectors(&f, 30));
    assert_eq!((w, e.proportional_to_basis(0).is_some()), (q(2, 1), true));
    let p = global(Family::PrincipalEven, 2, zero());
    let (w, e) = single(&highest_weight_vectors(&p, 30));
    assert_eq!((w, e.proportional_to_basis(0).is_some()), (q(1, 1), true));
}

#[test]
fn whittaker_vector_scans() {
    let w = global(Family::WhittakerOpen, 3, q(2, 1));
    let vs = whittaker_vectors(&w, &q(2, 1), 30);
    assert_eq!(vs.len(), 1);
    assert!(vs[0].proportional_to_basis(0).is_some());
    let v = global(Family::VermaPoint, 2, zero());
    let vs = whittaker_vectors(&v, &zero(), 30);
    assert_eq!(vs.len(), 1);
    assert!(vs[0].proportional_to_basis(0).is_some());
    assert!(whittaker_vectors(&v, &q(1, 1), 30).is_empty());
}

#[test]
fn generated_submodules() {
    let d = global(Family::DualVermaOpen, 2, zero());
    let s = submodule_generated(&d, &d.basis(0), 30);
    assert_eq!((s.basis_indices().unwrap(), s.open), (vec![0, 1], false));
    let v = global(Family::VermaPoint, 1, zero());
    let s = submodule_generated(&v, &v.basis(3), 30);
    assert_eq!(s.basis_indices().unwrap(), (0..=30).collect::<Vec<_>>());
    assert!(s.open);
    let f = global(Family::FiniteO, 2, zero());
    let s = submodule_generated(&f, &f.basis(1), 30);
    assert_eq!(s.basis_indices().unwrap(), vec![0, 1]);
}

#[test]
fn compositions() {
    let r = composition_report(Family::PrincipalEven, &q(1, 1), 20).unwrap();
    assert_eq!(r.submodule, vec![0]);
    let mut low = r.piece(PieceKind::LowestWeight).unwrap().weights.clone();
    low.sort();
    assert_eq!(low[..3], [q(2, 1), q(4, 1), q(6, 1)]);
    let mut high = r.piece(PieceKind::HighestWeight).unwrap().weights.clone();
    high.sort();
    high.reverse();
    assert_eq!(high[..3], [q(-2, 1), q(-4, 1), q(-6, 1)]);

    let r = composition_report(Family::DualVermaOpen, &q(3, 1), 20).unwrap();
    assert_eq!(r.submodule_weights, vec![q(2, 1), q(0, 1), q(-2, 1)]);

    // The lowest weight piece starts at n_(-1) and the highest weight piece
    // at n_2.
    let r = composition_report(Family::PrincipalEven, &q(2, 1), 6).unwrap();
    assert_eq!(r.submodule, vec![0, 1]);
    let low = r.piece(PieceKind::LowestWeight).unwrap();
    let high = r.piece(PieceKind::HighestWeight).unwrap();
    assert_eq!((low.generator, low.weight.clone()), (-1, q(3, 1)));
    assert_eq!((high.generator, high.weight.clone()), (2, q(-3, 1)));

    assert!(matches!(
        composition_report(Family::VermaPoint, &q(2, 1), 6),
        Err(RepsError::WrongFamily { .. })
    ));
}

#[test]
fn certificates() {
    assert_eq!(
        irreducibility_certificate(&global(Family::VermaPoint, 1, zero()), 40),
        Certificate::Irreducible(Strategy::WeightGraph)
    );
    match irreducibility_certificate(&global(Family::DualVermaOpen, 2, zero()), 40) {
        Certificate::Reducible { witness } => {
            assert_eq!(witness.basis_indices().unwrap(), vec![0, 1])
        }
        other => panic!("{other}"),
    }
    assert_eq!(
        irreducibility_certificate(&global(Family::WhittakerOpen, 4, q(3, 1)), 40),
        Certificate::Irreducible(Strategy::Whittaker)
    );
}

#[test]
fn parities() {
    let p = |f, t| k_weight_parity(f, &q(t, 1), 30).unwrap().single();
    assert_eq!(p(Family::PrincipalEven, 3), Some(Parity::Even));
    assert_eq!(p(Family::PrincipalOdd, 3), Some(Parity::Odd));
    assert_eq!(p(Family::PrincipalEven, 1), Some(Parity::Even));
    assert!(k_weight_parity(Family::FiniteO, &q(1, 1), 10).is_err());
}

#[test]
fn sections_of_line_bundles() {
    assert_eq!(borel_weil_dim(4), 5);
    assert_eq!(borel_weil_dim(-2), 0);
    assert_eq!(borel_weil_dim(0), 1);
}
