//! Published closed forms of the `E`, `F`, `H` actions, used as regression
//! data for the derived tables.

use crate::algebra::Chart;
use crate::tdo::Letter;

use super::{ActionRule, Family};

/// One published action formula.
#[derive(Debug, Clone)]
pub struct PublishedTable {
    /// Human-readable name such as `E_0 on m_k`.
    pub label: String,
    pub family: Family,
    pub chart: Chart,
    pub letter: Letter,
    pub rule: ActionRule,
}

type Row = (Family, Chart, [&'static [(i64, &'static str)]; 3]);

const ROWS: &[Row] = &[
    (
        Family::FiniteO,
        Chart::Infinity,
        [&[(-1, "k")], &[(1, "t-1-k")], &[(0, "t-1-2*k")]],
    ),
    (
        Family::VermaPoint,
        Chart::Zero,
        [&[(-1, "-t-k")], &[(1, "k+1")], &[(0, "-t-1-2*k")]],
    ),
    (
        Family::DualVermaOpen,
        Chart::Infinity,
        [&[(-1, "k")], &[(1, "t-1-k")], &[(0, "t-1-2*k")]],
    ),
    (
        Family::DualVermaOpen,
        Chart::Zero,
        [&[(-1, "t-1+k")], &[(1, "-k")], &[(0, "-(t-1)-2*k")]],
    ),
    (
        Family::DeltaInfinity,
        Chart::Infinity,
        [&[(1, "k+1")], &[(-1, "-t-k")], &[(0, "t+1+2*k")]],
    ),
    (
        Family::PrincipalEven,
        Chart::Infinity,
        [&[(-1, "k")], &[(1, "t-1-k")], &[(0, "t-1-2*k")]],
    ),
    (
        Family::PrincipalEven,
        Chart::Zero,
        [&[(-1, "t-1+k")], &[(1, "-k")], &[(0, "-(t-1)-2*k")]],
    ),
    (
        Family::PrincipalOdd,
        Chart::Zero,
        [&[(1, "-t+3/2+k")], &[(-1, "-k-1/2")], &[(0, "-t+2+2*k")]],
    ),
    (
        Family::PrincipalOdd,
        Chart::Infinity,
        [&[(1, "k+1/2")], &[(-1, "-t-1/2-k")], &[(0, "2*k+t")]],
    ),
    (
        Family::WhittakerOpen,
        Chart::Infinity,
        [
            &[(-1, "k"), (0, "eta")],
            &[(1, "t-1-k"), (2, "-eta")],
            &[(0, "t-1-2*k"), (1, "-2*eta")],
        ],
    ),
    (
        Family::WhittakerOpen,
        Chart::Zero,
        [
            &[(-1, "t-1+k"), (0, "eta")],
            &[(1, "-k"), (2, "-eta")],
            &[(0, "-(t-1)-2*k"), (1, "-2*eta")],
        ],
    ),
];

/// The printed value of `F` on `p_k` in the infinity chart, which does not
/// satisfy `[E, F] = H`.
pub const PRINTED_ODD_F_INFINITY: &[(i64, &str)] = &[(-1, "-t-1/2-k")];

/// The value of `F` on `p_k` in the infinity chart forced by `[E, F] = H`.
pub const CORRECTED_ODD_F_INFINITY: &[(i64, &str)] = &[(-1, "-t+1/2-k")];

/// Whether a published formula is known to be misprinted.
pub fn is_erratum(family: Family, chart: Chart, letter: Letter) -> bool {
    (family, chart, letter) == (Family::PrincipalOdd, Chart::Infinity, Letter::F)
}

/// All published formulas, including the misprinted one.
pub fn published_tables() -> Vec<PublishedTable> {
    let mut out = Vec::new();
    for (family, chart, rules) in ROWS {
        for (letter, terms) in Letter::ALL.into_iter().zip(rules) {
            let label = format!(
                "{letter}_{} on {}_k ({family})",
                chart.suffix(),
                family.basis_label()
            );
            out.push(PublishedTable {
                label,
                family: *family,
                chart: *chart,
                letter,
                rule: ActionRule::parse(terms),
            });
        }
    }
    out
}

/// The published formula for one action, if there is one.
pub fn published(family: Family, chart: Chart, letter: Letter) -> Option<PublishedTable> {
    published_tables()
        .into_iter()
        .find(|p| (p.family, p.chart, p.letter) == (family, chart, letter))
}
