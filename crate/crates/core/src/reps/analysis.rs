use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::tdo::Letter;

use super::linalg::{kernel, Echelon, SparseVec};
use super::{global_module, Element, Family, RepsError, Sl2Module};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightError {
    /// `H` moves basis vectors; the witness is a shift with nonzero
    /// coefficient.
    NotAWeightBasis { shift: i64 },
}

impl fmt::Display for WeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightError::NotAWeightBasis { shift } => {
                write!(f, "not a weight basis: H has a term with shift {shift:+}")
            }
        }
    }
}

/// The `H`-eigenvalue of each basis vector in the window.
pub fn weights(m: &Sl2Module, window: i64) -> Result<Vec<(i64, Rational)>, WeightError> {
    if let Some(shift) = m.numeric_rule(Letter::H).shifts().find(|s| *s != 0) {
        return Err(WeightError::NotAWeightBasis { shift });
    }
    Ok(m.window(window)
        .into_iter()
        .map(|k| (k, m.numeric_rule(Letter::H).coeff_at(0, k)))
        .collect())
}

/// The scalar by which `H^2 + 2EF + 2FE` acts on the window.
pub fn casimir_scalar(m: &Sl2Module, window: i64) -> Result<Rational, RepsError> {
    use Letter::*;
    let mut value: Option<Rational> = None;
    for k in m.window(window) {
        let v = m.basis(k);
        let two = Rational::from(2);
        let omega = m
            .apply(H, &m.apply(H, &v))
            .add_unchecked(&m.apply(E, &m.apply(F, &v)).scale(&two))
            .add_unchecked(&m.apply(F, &m.apply(E, &v)).scale(&two));
        let c = omega
            .proportional_to_basis(k)
            .ok_or_else(|| RepsError::NonScalar {
                index: k,
                image: omega.to_string(),
            })?;
        match &value {
            Some(prev) if *prev != c => {
                return Err(RepsError::NonScalar {
                    index: k,
                    image: omega.to_string(),
                })
            }
            Some(_) => {}
            None => value = Some(c),
        }
    }
    Ok(value.unwrap_or_else(Rational::zero))
}

/// Vectors supported on the window annihilated by every listed operator.
fn common_kernel(m: &Sl2Module, window: i64, ops: &[&dyn Fn(&Element) -> Element]) -> Vec<Element> {
    let indices = m.window(window);
    let columns: Vec<SparseVec<(usize, i64)>> = indices
        .iter()
        .map(|&k| {
            let b = m.basis(k);
            let mut col = SparseVec::new();
            for (block, op) in ops.iter().enumerate() {
                for (j, c) in op(&b).terms() {
                    col.insert((block, j), c.clone());
                }
            }
            col
        })
        .collect();
    let key = m.key();
    kernel(&columns)
        .into_iter()
        .map(|x| Element::from_terms(&key, x.into_iter().map(|(i, c)| (indices[i], c))))
        .collect()
}

/// Candidate `H`-eigenvalues: the diagonal of `H` on the window. With `H`
/// triangular these are the only possible eigenvalues of finitely
/// supported vectors.
fn diagonal_values(m: &Sl2Module, window: i64) -> BTreeSet<Rational> {
    let h = m.numeric_rule(Letter::H);
    m.window(window)
        .into_iter()
        .map(|k| h.coeff_at(0, k))
        .collect()
}

fn minus_scalar<'a>(m: &'a Sl2Module, x: Letter, c: Rational) -> impl Fn(&Element) -> Element + 'a {
    move |v| m.apply(x, v).add_unchecked(&v.scale(&-&c))
}

/// `H`-eigenspaces among vectors supported on the window.
pub fn h_eigenvectors(m: &Sl2Module, window: i64) -> Vec<(Rational, Vec<Element>)> {
    diagonal_values(m, window)
        .into_iter()
        .filter_map(|lambda| {
            let h = minus_scalar(m, Letter::H, lambda.clone());
            let ker = common_kernel(m, window, &[&h]);
            (!ker.is_empty()).then_some((lambda, ker))
        })
        .collect()
}

fn extremal_vectors(m: &Sl2Module, window: i64, x: Letter) -> Vec<(Rational, Element)> {
    let mut out = Vec::new();
    for lambda in diagonal_values(m, window) {
        let h = minus_scalar(m, Letter::H, lambda.clone());
        let e = |v: &Element| m.apply(x, v);
        for v in common_kernel(m, window, &[&e, &h]) {
            out.push((lambda.clone(), v));
        }
    }
    out
}

/// Weight vectors killed by `E`, with their weights.
pub fn highest_weight_vectors(m: &Sl2Module, window: i64) -> Vec<(Rational, Element)> {
    extremal_vectors(m, window, Letter::E)
}

/// Weight vectors killed by `F`, with their weights.
pub fn lowest_weight_vectors(m: &Sl2Module, window: i64) -> Vec<(Rational, Element)> {
    extremal_vectors(m, window, Letter::F)
}

/// Solutions of `E v = eta v` supported on the window.
pub fn whittaker_vectors(m: &Sl2Module, eta: &Rational, window: i64) -> Vec<Element> {
    let e = minus_scalar(m, Letter::E, eta.clone());
    common_kernel(m, window, &[&e])
}

/// A subspace generated inside a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    /// Echelon basis.
    pub vectors: Vec<Element>,
    /// Some image left the window and was not followed.
    pub open: bool,
}

impl Submodule {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// The indices, when the subspace is spanned by basis vectors.
    pub fn basis_indices(&self) -> Option<Vec<i64>> {
        self.vectors
            .iter()
            .map(|v| {
                let mut it = v.terms();
                match (it.next(), it.next()) {
                    (Some((k, _)), None) => Some(k),
                    _ => None,
                }
            })
            .collect()
    }
}

fn to_sparse(e: &Element) -> SparseVec<i64> {
    e.terms().map(|(k, c)| (k, c.clone())).collect()
}

/// The span of `v` closed under `E`, `F`, `H`, as far as it stays inside the
/// window. Images leaving the window are dropped and flag the result open,
/// so the span is always contained in the true submodule.
pub fn submodule_generated(m: &Sl2Module, v: &Element, window: i64) -> Submodule {
    let inside: BTreeSet<i64> = m.window(window).into_iter().collect();
    let fits = |e: &Element| e.support().all(|k| inside.contains(&k));
    let mut ech = Echelon::new();
    let mut open = false;
    let mut queue = VecDeque::new();
    if fits(v) {
        if ech.insert(&to_sparse(v)) {
            queue.push_back(v.clone());
        }
    } else {
        open = true;
    }
    while let Some(u) = queue.pop_front() {
        for x in Letter::ALL {
            let w = m.apply(x, &u);
            if !fits(&w) {
                open = true;
                continue;
            }
            if ech.insert(&to_sparse(&w)) {
                queue.push_back(w);
            }
        }
    }
    let key = m.key();
    let vectors = ech
        .basis()
        .map(|row| Element::from_terms(&key, row.iter().map(|(k, c)| (*k, c.clone()))))
        .collect();
    Submodule { vectors, open }
}

/// How an irreducibility certificate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Multiplicity-free weight module whose `E`/`F` graph is strongly
    /// connected on the window.
    WeightGraph,
    /// `E - eta` lowers with nonzero coefficients and the bottom vector
    /// generates the window.
    Whittaker,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Irreducible(Strategy),
    Reducible { witness: Submodule },
    Unknown { reason: String },
}

impl Certificate {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Certificate::Irreducible(_))
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Irreducible(Strategy::WeightGraph) => {
                f.write_str("irreducible (weight graph)")
            }
            Certificate::Irreducible(Strategy::Whittaker) => f.write_str("irreducible (Whittaker)"),
            Certificate::Reducible { witness } => {
                let parts: Vec<String> = witness.vectors.iter().map(Element::to_string).collect();
                write!(f, "reducible: span{{{}}}", parts.join(", "))
            }
            Certificate::Unknown { reason } => write!(f, "unknown: {reason}"),
        }
    }
}

/// Directed graph of nonzero `E`/`F` matrix entries between window indices.
/// Returns the adjacency map and the set of indices with an edge leaving the
/// window.
fn weight_graph(m: &Sl2Module, indices: &[i64]) -> (BTreeMap<i64, Vec<i64>>, BTreeSet<i64>) {
    let inside: BTreeSet<i64> = indices.iter().copied().collect();
    let mut adj = BTreeMap::new();
    let mut leaky = BTreeSet::new();
    for &k in indices {
        let mut out = Vec::new();
        for x in [Letter::E, Letter::F] {
            for (j, _) in m.numeric_rule(x).apply(k) {
                if !m.domain.contains(j) {
                    continue;
                }
                if inside.contains(&j) {
                    out.push(j);
                } else {
                    leaky.insert(k);
                }
            }
        }
        adj.insert(k, out);
    }
    (adj, leaky)
}

fn reach(adj: &BTreeMap<i64, Vec<i64>>, start: i64) -> BTreeSet<i64> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(k) = stack.pop() {
        for &j in &adj[&k] {
            if seen.insert(j) {
                stack.push(j);
            }
        }
    }
    seen
}

fn weight_graph_certificate(m: &Sl2Module, window: i64) -> Certificate {
    let indices = m.window(window);
    let (adj, leaky) = weight_graph(m, &indices);
    let Some(&first) = indices.first() else {
        return Certificate::Unknown {
            reason: "empty window".into(),
        };
    };
    let mut reverse: BTreeMap<i64, Vec<i64>> = indices.iter().map(|&k| (k, Vec::new())).collect();
    for (k, outs) in &adj {
        for j in outs {
            reverse.get_mut(j).expect("inside").push(*k);
        }
    }
    if reach(&adj, first).len() == indices.len() && reach(&reverse, first).len() == indices.len() {
        return Certificate::Irreducible(Strategy::WeightGraph);
    }
    let key = m.key();
    let witness = indices
        .iter()
        .map(|&k| reach(&adj, k))
        .filter(|r| r.len() < indices.len() && r.is_disjoint(&leaky))
        .min_by_key(|r| (r.len(), r.iter().next().copied()));
    match witness {
        Some(r) => Certificate::Reducible {
            witness: Submodule {
                vectors: r.into_iter().map(|k| Element::basis(&key, k)).collect(),
                open: false,
            },
        },
        None => Certificate::Unknown {
            reason: "no invariant subspace of basis vectors inside the window".into(),
        },
    }
}

fn is_weight_shape(m: &Sl2Module, window: i64) -> bool {
    let Ok(ws) = weights(m, window) else {
        return false;
    };
    let distinct: BTreeSet<&Rational> = ws.iter().map(|(_, w)| w).collect();
    distinct.len() == ws.len()
        && [Letter::E, Letter::F]
            .iter()
            .all(|x| m.numeric_rule(*x).shifts().count() <= 1)
}

fn whittaker_certificate(m: &Sl2Module, window: i64) -> Option<Certificate> {
    let e = m.numeric_rule(Letter::E);
    let shifts: Vec<i64> = e.shifts().collect();
    if m.eta.is_zero() || shifts != [-1, 0] {
        return None;
    }
    let indices = m.window(window);
    for &k in &indices {
        if e.coeff_at(0, k) != m.eta {
            return None;
        }
        if m.domain.contains(k - 1) && e.coeff_at(-1, k).is_zero() {
            return None;
        }
    }
    let bottom = *indices.first()?;
    if m.domain.contains(bottom - 1) {
        return None;
    }
    let sub = submodule_generated(m, &m.basis(bottom), window);
    (sub.dim() == indices.len()).then_some(Certificate::Irreducible(Strategy::Whittaker))
}

/// Decides irreducibility on the window where one of the two strategies
/// applies, or exhibits an invariant proper subspace.
pub fn irreducibility_certificate(m: &Sl2Module, window: i64) -> Certificate {
    if is_weight_shape(m, window) {
        return weight_graph_certificate(m, window);
    }
    whittaker_certificate(m, window).unwrap_or_else(|| Certificate::Unknown {
        reason: "neither a multiplicity-free weight module nor Whittaker shaped".into(),
    })
}

/// Whether the certificate at twice the window agrees.
pub fn certificate_is_window_stable(m: &Sl2Module, window: i64) -> bool {
    let a = irreducibility_certificate(m, window);
    let b = irreducibility_certificate(m, 2 * window);
    a == b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PieceKind {
    HighestWeight,
    LowestWeight,
}

/// A connected piece of the quotient by the finite submodule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientPiece {
    pub kind: PieceKind,
    pub generator: i64,
    pub weight: Rational,
    pub indices: Vec<i64>,
    pub weights: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionReport {
    pub family: Family,
    pub t: Rational,
    pub window: i64,
    pub submodule: Vec<i64>,
    pub submodule_weights: Vec<Rational>,
    pub submodule_irreducible: bool,
    pub pieces: Vec<QuotientPiece>,
}

impl CompositionReport {
    pub fn piece(&self, kind: PieceKind) -> Option<&QuotientPiece> {
        self.pieces.iter().find(|p| p.kind == kind)
    }
}

/// The finite submodule generated by `b_0` and the pieces of the quotient.
pub fn composition_report(
    family: Family,
    t: &Rational,
    window: i64,
) -> Result<CompositionReport, RepsError> {
    if !matches!(family, Family::DualVermaOpen | Family::PrincipalEven) {
        return Err(RepsError::WrongFamily {
            operation: "composition_report",
            family,
        });
    }
    let m = global_module(family, t, &Rational::zero())?;
    let ws: BTreeMap<i64, Rational> = weights(&m, window)
        .expect("weight module")
        .into_iter()
        .collect();
    let sub = submodule_generated(&m, &m.basis(0), window);
    let indices = sub.basis_indices().expect("spanned by basis vectors");
    let sub_set: BTreeSet<i64> = indices.iter().copied().collect();
    let (lo, hi) = (
        *indices.first().expect("nonempty"),
        *indices.last().expect("nonempty"),
    );
    let restricted = m.restricted(lo, hi)?;
    let submodule_irreducible =
        !sub.open && irreducibility_certificate(&restricted, window).is_irreducible();

    let rest: Vec<i64> = m
        .window(window)
        .into_iter()
        .filter(|k| !sub_set.contains(k))
        .collect();
    let rest_set: BTreeSet<i64> = rest.iter().copied().collect();
    // undirected components of the quotient graph
    let mut adj: BTreeMap<i64, Vec<i64>> = rest.iter().map(|&k| (k, Vec::new())).collect();
    for &k in &rest {
        for x in [Letter::E, Letter::F] {
            for (j, _) in m.numeric_rule(x).apply(k) {
                if rest_set.contains(&j) {
                    adj.get_mut(&k).expect("in rest").push(j);
                    adj.get_mut(&j).expect("in rest").push(k);
                }
            }
        }
    }
    let mut seen: BTreeSet<i64> = BTreeSet::new();
    let mut groups: Vec<Vec<i64>> = Vec::new();
    for &start in &rest {
        if seen.contains(&start) {
            continue;
        }
        let group: Vec<i64> = reach(&adj, start).into_iter().collect();
        seen.extend(group.iter().copied());
        groups.push(group);
    }
    let killed_mod_sub = |x: Letter, k: i64| {
        m.numeric_rule(x)
            .apply(k)
            .all(|(j, _)| sub_set.contains(&j))
    };
    let mut pieces = Vec::new();
    for group in groups {
        let highest = group
            .iter()
            .copied()
            .find(|&k| killed_mod_sub(Letter::E, k));
        let lowest = group
            .iter()
            .copied()
            .find(|&k| killed_mod_sub(Letter::F, k));
        let (kind, generator) = match (highest, lowest) {
            (Some(k), _) => (PieceKind::HighestWeight, k),
            (None, Some(k)) => (PieceKind::LowestWeight, k),
            (None, None) => continue,
        };
        pieces.push(QuotientPiece {
            kind,
            generator,
            weight: ws[&generator].clone(),
            weights: group.iter().map(|k| ws[k].clone()).collect(),
            indices: group,
        });
    }
    Ok(CompositionReport {
        family,
        t: t.clone(),
        window,
        submodule_weights: indices.iter().map(|k| ws[k].clone()).collect(),
        submodule: indices,
        submodule_irreducible,
        pieces,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityReport {
    pub family: Family,
    pub t: Rational,
    pub parities: BTreeSet<Parity>,
}

impl ParityReport {
    /// The parity, when all weights share one.
    pub fn single(&self) -> Option<Parity> {
        match self.parities.len() {
            1 => self.parities.iter().next().copied(),
            _ => None,
        }
    }
}

/// Parities of the `H`-weights of a principal series module, i.e. the
/// characters of the diagonal torus that occur.
pub fn k_weight_parity(
    family: Family,
    t: &Rational,
    window: i64,
) -> Result<ParityReport, RepsError> {
    if !matches!(family, Family::PrincipalEven | Family::PrincipalOdd) {
        return Err(RepsError::WrongFamily {
            operation: "k_weight_parity",
            family,
        });
    }
    let m = global_module(family, t, &Rational::zero())?;
    let parities = weights(&m, window)
        .expect("weight module")
        .into_iter()
        .map(|(_, w)| {
            let n = w.to_i64().expect("integral weight");
            if n.rem_euclid(2) == 0 {
                Parity::Even
            } else {
                Parity::Odd
            }
        })
        .collect();
    Ok(ParityReport {
        family,
        t: t.clone(),
        parities,
    })
}
