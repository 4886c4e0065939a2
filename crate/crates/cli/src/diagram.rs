use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use tdo_core::algebra::{Chart, Rational};
use tdo_core::reps::{Family, Sl2Module};
use tdo_core::tdo::Letter;

use crate::dot::{DotGraph, DotStmt};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub index: i64,
    pub label: String,
    /// `H`-eigenvalue, when `H` is diagonal on the basis.
    pub weight: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub op: Letter,
    pub source: String,
    pub target: String,
    pub coeff: Rational,
}

/// An action diagram: basis vectors and the nonzero matrix entries of `E`,
/// `F` and `H` between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub schema_version: u32,
    pub family: Family,
    pub t: i64,
    pub eta: Rational,
    pub chart: Chart,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub identifications: Vec<String>,
    pub certificates: Vec<String>,
}

pub fn node_id(k: i64) -> String {
    format!("b{k}")
}

fn parse_node_id(id: &str) -> Option<i64> {
    id.strip_prefix('b')?.parse().ok()
}

impl DiagramDoc {
    /// The diagram of a module over a window. Edges leaving the window are
    /// omitted.
    pub fn build(m: &Sl2Module, t: i64, window: i64) -> Self {
        let indices = m.window(window);
        let inside: BTreeSet<i64> = indices.iter().copied().collect();
        let h = m.numeric_rule(Letter::H);
        let diagonal = h.shifts().all(|s| s == 0);
        let label = m.family.basis_label();
        let nodes = indices
            .iter()
            .map(|&k| Node {
                id: node_id(k),
                index: k,
                label: format!("{label}_{k}"),
                weight: diagonal.then(|| h.coeff_at(0, k)),
            })
            .collect();
        let mut edges = Vec::new();
        for &k in &indices {
            for x in Letter::ALL {
                for (j, c) in m.apply(x, &m.basis(k)).terms() {
                    if inside.contains(&j) {
                        edges.push(Edge {
                            op: x,
                            source: node_id(k),
                            target: node_id(j),
                            coeff: c.clone(),
                        });
                    }
                }
            }
        }
        DiagramDoc {
            schema_version: SCHEMA_VERSION,
            family: m.family,
            t,
            eta: m.eta.clone(),
            chart: m.chart,
            nodes,
            edges,
            identifications: Vec::new(),
            certificates: Vec::new(),
        }
    }

    /// Pretty JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("diagram serializes");
        serde_json::to_string_pretty(&value).expect("value serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::Input(format!("invalid diagram JSON: {e}")))
    }

    pub fn to_dot(&self) -> String {
        let mut g = DotGraph {
            name: self.family.to_string(),
            stmts: Vec::new(),
        };
        let attr = |k: &str, v: String| DotStmt::Attr(k.to_string(), v);
        g.stmts
            .push(attr("schema_version", self.schema_version.to_string()));
        g.stmts.push(attr("family", self.family.to_string()));
        g.stmts.push(attr("t", self.t.to_string()));
        g.stmts.push(attr("eta", self.eta.to_string()));
        g.stmts.push(attr("chart", self.chart.to_string()));
        for s in &self.identifications {
            g.stmts.push(attr("identification", s.clone()));
        }
        for s in &self.certificates {
            g.stmts.push(attr("certificate", s.clone()));
        }
        for n in &self.nodes {
            let mut attrs = vec![("label".to_string(), n.label.clone())];
            if let Some(w) = &n.weight {
                attrs.push(("weight".to_string(), w.to_string()));
            }
            g.stmts.push(DotStmt::Node(n.id.clone(), attrs));
        }
        for e in &self.edges {
            g.stmts.push(DotStmt::Edge(
                e.source.clone(),
                e.target.clone(),
                vec![
                    ("op".to_string(), e.op.to_string()),
                    ("coeff".to_string(), e.coeff.to_string()),
                ],
            ));
        }
        g.render()
    }

    pub fn from_dot(s: &str) -> Result<Self, CliError> {
        let g = DotGraph::parse(s)?;
        let bad = |what: String| CliError::Input(format!("invalid diagram DOT: {what}"));
        let mut doc = DiagramDoc {
            schema_version: 0,
            family: Family::FiniteO,
            t: 0,
            eta: Rational::zero(),
            chart: Chart::Zero,
            nodes: Vec::new(),
            edges: Vec::new(),
            identifications: Vec::new(),
            certificates: Vec::new(),
        };
        let mut seen = BTreeSet::new();
        for stmt in &g.stmts {
            match stmt {
                DotStmt::Attr(k, v) => {
                    let parse_err = |_| bad(format!("{k}={v:?}"));
                    seen.insert(k.as_str());
                    match k.as_str() {
                        "schema_version" => {
                            doc.schema_version = v.parse().map_err(|_| bad(k.clone()))?
                        }
                        "family" => doc.family = v.parse().map_err(parse_err)?,
                        "t" => doc.t = v.parse().map_err(|_| bad(k.clone()))?,
                        "eta" => doc.eta = v.parse().map_err(|_| bad(k.clone()))?,
                        "chart" => doc.chart = v.parse().map_err(parse_err)?,
                        "identification" => doc.identifications.push(v.clone()),
                        "certificate" => doc.certificates.push(v.clone()),
                        other => return Err(bad(format!("unknown attribute {other}"))),
                    }
                }
                DotStmt::Node(id, attrs) => {
                    let index = parse_node_id(id).ok_or_else(|| bad(format!("node id {id}")))?;
                    let get = |name: &str| attrs.iter().find(|(k, _)| k == name).map(|(_, v)| v);
                    let label = get("label").ok_or_else(|| bad(format!("{id} has no label")))?;
                    let weight = get("weight")
                        .map(|w| w.parse())
                        .transpose()
                        .map_err(|_| bad(format!("{id} weight")))?;
                    doc.nodes.push(Node {
                        id: id.clone(),
                        index,
                        label: label.clone(),
                        weight,
                    });
                }
                DotStmt::Edge(source, target, attrs) => {
                    let get = |name: &str| {
                        attrs
                            .iter()
                            .find(|(k, _)| k == name)
                            .map(|(_, v)| v)
                            .ok_or_else(|| bad(format!("edge {source}->{target} lacks {name}")))
                    };
                    doc.edges.push(Edge {
                        op: get("op")?.parse().map_err(bad)?,
                        source: source.clone(),
                        target: target.clone(),
                        coeff: get("coeff")?
                            .parse()
                            .map_err(|_| bad(format!("edge {source}->{target} coeff")))?,
                    });
                }
            }
        }
        for required in ["schema_version", "family", "t", "eta", "chart"] {
            if !seen.contains(required) {
                return Err(bad(format!("missing {required}")));
            }
        }
        Ok(doc)
    }

    /// A plain-text view: the `E` and `F` chains followed by one line per
    /// basis vector.
    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} on the {} chart, t={}, eta={}",
            self.family, self.chart, self.t, self.eta
        );
        for s in self.identifications.iter().chain(&self.certificates) {
            let _ = writeln!(out, "  {s}");
        }
        let label = |id: &str| {
            self.nodes
                .iter()
                .find(|n| n.id == id)
                .map(|n| n.label.clone())
                .unwrap_or_else(|| id.to_string())
        };
        for (op, arrow) in [(Letter::E, "<-"), (Letter::F, "->")] {
            let mut chain = String::new();
            for (i, n) in self.nodes.iter().enumerate() {
                if i > 0 {
                    let prev = &self.nodes[i - 1];
                    let (from, to) = match op {
                        Letter::E => (&n.id, &prev.id),
                        _ => (&prev.id, &n.id),
                    };
                    let coeff = self
                        .edges
                        .iter()
                        .find(|e| e.op == op && &e.source == from && &e.target == to)
                        .map(|e| e.coeff.to_string());
                    match (coeff, arrow) {
                        (Some(c), "<-") => {
                            let _ = write!(chain, " <-({c})- ");
                        }
                        (Some(c), _) => {
                            let _ = write!(chain, " -({c})-> ");
                        }
                        (None, _) => chain.push_str("    |    "),
                    }
                }
                chain.push_str(&n.label);
            }
            let _ = writeln!(out, "{op}: {chain}");
        }
        for n in &self.nodes {
            let weight = n
                .weight
                .as_ref()
                .map(|w| format!(" (H {w})"))
                .unwrap_or_default();
            let _ = writeln!(out, "{}{weight}", n.label);
            for op in Letter::ALL {
                let image: Vec<String> = self
                    .edges
                    .iter()
                    .filter(|e| e.op == op && e.source == n.id)
                    .map(|e| format!("{}*{}", e.coeff, label(&e.target)))
                    .collect();
                if !image.is_empty() {
                    let _ = writeln!(out, "  {op} -> {}", image.join(" + "));
                }
            }
        }
        out
    }
}
