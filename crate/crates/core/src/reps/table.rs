use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use crate::algebra::{q, Chart, IndexPoly, Rational, Var};
use crate::tdo::Letter;

use super::local::{act_lie, make_local};
use super::{ActionRule, Family, RepsError};

const K_NODES: [i64; 3] = [3, 4, 5];
const T_NODES: [i64; 3] = [2, 3, 4];
const ETA_NODES: [i64; 3] = [1, 2, 3];

type TableKey = (Family, Chart, Letter);

fn cache() -> &'static Mutex<HashMap<TableKey, ActionRule>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, ActionRule>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Lagrange basis polynomial in `var` that is 1 at `nodes[i]` and 0 at the
/// other nodes.
fn lagrange(var: Var, nodes: &[Rational], i: usize) -> IndexPoly {
    let x = IndexPoly::var(var);
    let mut acc = IndexPoly::from(1);
    for (j, xj) in nodes.iter().enumerate() {
        if j != i {
            let denom = (&nodes[i] - xj).recip().expect("distinct nodes");
            acc = &acc * &(&x - &IndexPoly::constant(xj.clone())).scale(&denom);
        }
    }
    acc
}

/// Image of `b_k` as a map from shift to coefficient.
fn sample(
    family: Family,
    chart: Chart,
    x: Letter,
    k: i64,
    t: &Rational,
    eta: &Rational,
) -> Result<BTreeMap<i64, Rational>, RepsError> {
    let m = make_local(family, chart, t, eta)?;
    let image = act_lie(&m, x, &m.basis(k))?;
    Ok(image.terms().map(|(j, c)| (j - k, c.clone())).collect())
}

fn interpolate(family: Family, chart: Chart, x: Letter) -> Result<ActionRule, RepsError> {
    let ks: Vec<Rational> = K_NODES.iter().map(|&k| Rational::from(k)).collect();
    let ts: Vec<Rational> = T_NODES.iter().map(|&t| Rational::from(t)).collect();
    let etas: Vec<Rational> = if family.uses_eta() {
        ETA_NODES.iter().map(|&e| Rational::from(e)).collect()
    } else {
        vec![Rational::zero()]
    };
    let mut rule = ActionRule::default();
    for (a, k) in K_NODES.iter().enumerate() {
        for (b, t) in ts.iter().enumerate() {
            for (c, eta) in etas.iter().enumerate() {
                let basis = &lagrange(Var::K, &ks, a) * &lagrange(Var::T, &ts, b);
                let basis = if etas.len() > 1 {
                    &basis * &lagrange(Var::Eta, &etas, c)
                } else {
                    basis
                };
                for (shift, value) in sample(family, chart, x, *k, t, eta)? {
                    rule.add_term(shift, basis.scale(&value));
                }
            }
        }
    }
    let (k, t) = (7, Rational::from(6));
    let eta = if family.uses_eta() {
        q(5, 2)
    } else {
        Rational::zero()
    };
    let expected = sample(family, chart, x, k, &t, &eta)?;
    let got: BTreeMap<i64, Rational> = rule
        .specialize(&t, &eta)
        .apply(k)
        .map(|(j, c)| (j - k, c))
        .collect();
    if got != expected {
        return Err(RepsError::InterpolationCheck {
            family,
            chart,
            letter: x.to_string(),
        });
    }
    Ok(rule)
}

/// Closed-form action of `E`, `F` or `H` on the local module of a family,
/// with coefficients in `k`, `t` and `eta`.
///
/// The coefficients are found by acting on basis vectors at a grid of
/// numeric points and interpolating with degree at most 2 in each symbol;
/// one further point off the grid certifies the result.
pub fn action_table(family: Family, chart: Chart, x: Letter) -> Result<ActionRule, RepsError> {
    if let Some(rule) = cache()
        .lock()
        .expect("table cache")
        .get(&(family, chart, x))
    {
        return Ok(rule.clone());
    }
    let rule = interpolate(family, chart, x)?;
    cache()
        .lock()
        .expect("table cache")
        .insert((family, chart, x), rule.clone());
    Ok(rule)
}
