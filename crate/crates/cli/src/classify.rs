use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use tdo_core::algebra::Rational;
use tdo_core::reps::{
    casimir_scalar, composition_report, global_module, highest_weight_vectors,
    irreducibility_certificate, k_weight_parity, lowest_weight_vectors, whittaker_vectors,
    Certificate, CompositionReport, Family, Parity, PieceKind, Sl2Module,
};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSummary {
    pub kind: PieceKind,
    pub generator: i64,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionSummary {
    pub submodule: Vec<i64>,
    pub submodule_weights: Vec<Rational>,
    pub submodule_irreducible: bool,
    pub quotient: Vec<PieceSummary>,
}

impl From<&CompositionReport> for CompositionSummary {
    fn from(r: &CompositionReport) -> Self {
        CompositionSummary {
            submodule: r.submodule.clone(),
            submodule_weights: r.submodule_weights.clone(),
            submodule_irreducible: r.submodule_irreducible,
            quotient: r
                .pieces
                .iter()
                .map(|p| PieceSummary {
                    kind: p.kind,
                    generator: p.generator,
                    weight: p.weight.clone(),
                })
                .collect(),
        }
    }
}

/// Structural facts about the global sections of one family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyDoc {
    pub schema_version: u32,
    pub family: Family,
    pub t: i64,
    pub eta: Rational,
    pub window: i64,
    pub identification: String,
    pub casimir: Rational,
    pub certificate: String,
    pub irreducible: bool,
    pub highest_weights: Vec<Rational>,
    pub lowest_weights: Vec<Rational>,
    /// Dimension of the space of `eta`-Whittaker vectors in the window.
    pub whittaker_vectors: usize,
    pub composition: Option<CompositionSummary>,
    pub parity: Option<Parity>,
}

fn verdict(c: &Certificate) -> &'static str {
    match c {
        Certificate::Irreducible(_) => "irreducible",
        Certificate::Reducible { .. } => "reducible",
        Certificate::Unknown { .. } => "undecided",
    }
}

fn quotient_weight(r: &CompositionReport, kind: PieceKind) -> String {
    r.piece(kind)
        .map(|p| p.weight.to_string())
        .unwrap_or_else(|| "?".into())
}

fn identify(
    m: &Sl2Module,
    doc: &ClassifyDoc,
    cert: &Certificate,
    composition: Option<&CompositionReport>,
) -> String {
    let (t, casimir, window) = (doc.t, &doc.casimir, doc.window);
    let (highest, lowest) = (&doc.highest_weights[..], &doc.lowest_weights[..]);
    let first = |ws: &[Rational]| ws.first().map(|w| w.to_string()).unwrap_or("?".into());
    match (m.family, composition) {
        (Family::FiniteO, _) => format!(
            "L({}), dim {}, {}",
            first(highest),
            m.window(window).len(),
            verdict(cert)
        ),
        (Family::VermaPoint, _) => format!(
            "M({0}) = D_+({0}), highest weight {0}, {1}",
            first(highest),
            verdict(cert)
        ),
        (Family::DeltaInfinity, _) => format!(
            "D_-({0}), lowest weight {0}, {1}",
            first(lowest),
            verdict(cert)
        ),
        (Family::PrincipalEven, Some(r)) => {
            let plus = r.piece(PieceKind::HighestWeight).is_some();
            let minus = r.piece(PieceKind::LowestWeight).is_some();
            let quotient = match (plus, minus) {
                (true, true) => "D_+⊕D_−".to_string(),
                _ => format!("{} pieces", r.pieces.len()),
            };
            format!(
                "P_+({}): sub dim {}, quotient {quotient}",
                t - 1,
                r.submodule.len()
            )
        }
        (Family::DualVermaOpen | Family::WhittakerOpen, Some(r)) => format!(
            "I({}): sub dim {}, quotient M({})",
            first(highest),
            r.submodule.len(),
            quotient_weight(r, PieceKind::HighestWeight)
        ),
        (Family::PrincipalOdd, _) => format!("P_-({}), {}", t - 1, verdict(cert)),
        (Family::WhittakerOpen, None) => {
            format!("Y({},{t}), {}, Casimir {casimir}", m.eta, verdict(cert))
        }
        (family, None) => format!("{family}, {}", verdict(cert)),
    }
}

impl ClassifyDoc {
    pub fn compute(family: Family, t: i64, eta: &Rational, window: i64) -> Result<Self, CliError> {
        let tr = Rational::from(t);
        let m = global_module(family, &tr, eta).map_err(CliError::config)?;
        let casimir = casimir_scalar(&m, window).map_err(CliError::internal)?;
        let cert = irreducibility_certificate(&m, window);
        let weights = |v: Vec<(Rational, _)>| v.into_iter().map(|(w, _)| w).collect::<Vec<_>>();
        let highest = weights(highest_weight_vectors(&m, window));
        let lowest = weights(lowest_weight_vectors(&m, window));
        let whittaker = whittaker_vectors(&m, &m.eta, window).len();
        // At eta = 0 the Whittaker rules are those of the open cell.
        let composition = match family {
            Family::DualVermaOpen | Family::PrincipalEven => {
                Some(composition_report(family, &tr, window).map_err(CliError::internal)?)
            }
            Family::WhittakerOpen if m.eta.is_zero() => Some(
                composition_report(Family::DualVermaOpen, &tr, window)
                    .map_err(CliError::internal)?,
            ),
            _ => None,
        };
        let parity = match family {
            Family::PrincipalEven | Family::PrincipalOdd => k_weight_parity(family, &tr, window)
                .map_err(CliError::internal)?
                .single(),
            _ => None,
        };
        let mut doc = ClassifyDoc {
            schema_version: crate::diagram::SCHEMA_VERSION,
            family,
            t,
            eta: m.eta.clone(),
            window,
            identification: String::new(),
            casimir,
            certificate: cert.to_string(),
            irreducible: cert.is_irreducible(),
            highest_weights: highest,
            lowest_weights: lowest,
            whittaker_vectors: whittaker,
            composition: composition.as_ref().map(CompositionSummary::from),
            parity,
        };
        doc.identification = identify(&m, &doc, &cert, composition.as_ref());
        Ok(doc)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let list = |ws: &[Rational]| {
            let v: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
            if v.is_empty() {
                "none".to_string()
            } else {
                v.join(", ")
            }
        };
        let _ = writeln!(out, "{}", self.identification);
        let _ = writeln!(out, "casimir = {}", self.casimir);
        let _ = writeln!(out, "certificate = {}", self.certificate);
        let _ = writeln!(out, "highest weights = {}", list(&self.highest_weights));
        let _ = writeln!(out, "lowest weights = {}", list(&self.lowest_weights));
        let _ = writeln!(
            out,
            "whittaker vectors (eta = {}) = {}",
            self.eta, self.whittaker_vectors
        );
        if let Some(c) = &self.composition {
            let _ = writeln!(
                out,
                "submodule = span of b_{:?}, weights {}",
                c.submodule,
                list(&c.submodule_weights)
            );
            for p in &c.quotient {
                let kind = match p.kind {
                    PieceKind::HighestWeight => "highest",
                    PieceKind::LowestWeight => "lowest",
                };
                let _ = writeln!(
                    out,
                    "quotient piece generated by b_{}, {kind} weight {}",
                    p.generator, p.weight
                );
            }
        }
        if let Some(p) = self.parity {
            let p = match p {
                Parity::Even => "even",
                Parity::Odd => "odd",
            };
            let _ = writeln!(out, "H-weight parity = {p}");
        }
        let _ = writeln!(out, "window = {}", self.window);
        out
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("classify document serializes");
        serde_json::to_string_pretty(&value).expect("value serializes") + "\n"
    }
}
