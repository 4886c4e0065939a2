use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use tdo_core::algebra::{Chart, Rational};
use tdo_core::tdo::{beta_letter, casimir_scalar_identity, glue_check, Letter};
use tdo_core::weyl::{TwistParam, WeylOp};

use crate::CliError;

/// The chart operators of `E`, `F`, `H` for one twist, with the Casimir
/// constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeriveDoc {
    pub schema_version: u32,
    pub t: i64,
    /// Keyed by names such as `E_0` and `H_inf`.
    pub operators: BTreeMap<String, String>,
    /// Whether `psi` carries the infinity-chart operator onto the zero-chart
    /// one, per letter.
    pub glued: BTreeMap<String, bool>,
    pub casimir: Rational,
}

fn name(x: Letter, chart: Chart) -> String {
    format!("{x}_{}", chart.suffix())
}

impl DeriveDoc {
    pub fn compute(t: i64) -> Result<Self, CliError> {
        let tp = TwistParam::<Rational>::integer(t);
        let mut operators = BTreeMap::new();
        let mut glued = BTreeMap::new();
        for x in Letter::ALL {
            let g = beta_letter(x, &tp).map_err(CliError::internal)?;
            for chart in Chart::ALL {
                operators.insert(name(x, chart), g.on_chart(chart).to_string());
            }
            let report = glue_check(&g).map_err(CliError::internal)?;
            glued.insert(x.to_string(), report.holds());
        }
        Ok(DeriveDoc {
            schema_version: crate::diagram::SCHEMA_VERSION,
            t,
            operators,
            glued,
            casimir: casimir_scalar_identity(&tp).map_err(CliError::internal)?,
        })
    }

    /// The operator stored under a name, parsed back.
    pub fn operator(&self, x: Letter, chart: Chart) -> Result<WeylOp<Rational>, CliError> {
        let key = name(x, chart);
        let text = self
            .operators
            .get(&key)
            .ok_or_else(|| CliError::Input(format!("missing operator {key}")))?;
        WeylOp::parse_numeric(text, chart)
            .map_err(|e| CliError::Input(format!("operator {key}: {e}")))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "t = {}", self.t);
        for chart in Chart::ALL {
            for x in Letter::ALL {
                let key = name(x, chart);
                let _ = writeln!(out, "{key} = {}", self.operators[&key]);
            }
        }
        for (x, ok) in &self.glued {
            let verdict = if *ok { "holds" } else { "FAILS" };
            let _ = writeln!(out, "psi({x}_inf) = {x}_0 {verdict}");
        }
        let _ = writeln!(out, "casimir = {}", self.casimir);
        out
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("derive document serializes");
        serde_json::to_string_pretty(&value).expect("value serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::Input(format!("invalid derive JSON: {e}")))
    }
}
