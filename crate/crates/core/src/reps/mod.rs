//! The seven module families realized by standard sheaves on the projective
//! line, their chart-local and global realizations, and structural analysis
//! over a finite index window.

mod analysis;
mod borel_weil;
mod element;
mod global;
pub mod golden;
mod linalg;
mod local;
mod rule;
mod table;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Chart, Rational};
use crate::tdo::TdoError;
use crate::weyl::WeylError;

pub use analysis::{
    casimir_scalar, certificate_is_window_stable, composition_report, h_eigenvectors,
    highest_weight_vectors, irreducibility_certificate, k_weight_parity, lowest_weight_vectors,
    submodule_generated, weights, whittaker_vectors, Certificate, CompositionReport, Parity,
    ParityReport, PieceKind, QuotientPiece, Strategy, Submodule, WeightError,
};
pub use borel_weil::borel_weil_dim;
pub use element::{Element, ModuleKey};
pub use global::{
    global_module, overlap_check, overlap_check_with, Intertwiner, OverlapFailure, OverlapReport,
    Sl2Module,
};
pub use local::{
    act_lie, act_weyl, make_local, make_local_singular, BasisModule, Boundary, IndexDomain,
};
pub use rule::{ActionRule, NumericRule};
pub use table::action_table;

/// Default number of basis indices examined on each side of the origin.
pub const DEFAULT_WINDOW: i64 = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepsError {
    #[error(
        "{family} is supported on the {support} chart only; no realization on the {chart} chart"
    )]
    UnsupportedChart {
        family: Family,
        chart: Chart,
        support: Chart,
    },
    #[error("regular dominant integral required: t must be an integer >= 1, got {t}")]
    NotRegularDominant { t: Rational },
    #[error("t must be an integer, got {t}")]
    NonIntegralTwist { t: Rational },
    #[error("eta = {eta} is not allowed for {family}: a closed orbit carries no eta-twisted standard module")]
    ClosedOrbitTwist { family: Family, eta: Rational },
    #[error("element belongs to {found}, expected {expected}")]
    KeyMismatch { expected: String, found: String },
    #[error("operator lives on the {op} chart but the module on the {module} chart")]
    ChartMismatch { op: Chart, module: Chart },
    #[error("negative power of the coordinate requested, but coordinate action on {family} ({chart} chart) is not invertible")]
    NonInvertibleCoordinate { family: Family, chart: Chart },
    #[error("rule {rule} sends index {index} outside the index domain of {family}")]
    LeavesDomain {
        family: Family,
        rule: String,
        index: i64,
    },
    #[error("Casimir is not scalar on index {index}: {image}")]
    NonScalar { index: i64, image: String },
    #[error("{operation} does not apply to {family}")]
    WrongFamily {
        operation: &'static str,
        family: Family,
    },
    #[error("interpolated table for {family} {letter} on the {chart} chart fails its check point")]
    InterpolationCheck {
        family: Family,
        chart: Chart,
        letter: String,
    },
    #[error(transparent)]
    Tdo(#[from] TdoError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// The module families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Sections of the line bundle `O(t-1)`.
    FiniteO,
    /// Delta functions at `z = 0`.
    VermaPoint,
    /// Functions on the open cell `U_inf`.
    DualVermaOpen,
    /// Delta functions at `w = 0`.
    DeltaInfinity,
    /// Functions on `C^x` with the trivial K-homogeneous structure.
    PrincipalEven,
    /// The half-integral K-homogeneous connection on `C^x`.
    PrincipalOdd,
    /// The eta-twisted functions on the open cell.
    WhittakerOpen,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::FiniteO,
        Family::VermaPoint,
        Family::DualVermaOpen,
        Family::DeltaInfinity,
        Family::PrincipalEven,
        Family::PrincipalOdd,
        Family::WhittakerOpen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::FiniteO => "finite-o",
            Family::VermaPoint => "verma-point",
            Family::DualVermaOpen => "dual-verma-open",
            Family::DeltaInfinity => "delta-infinity",
            Family::PrincipalEven => "principal-even",
            Family::PrincipalOdd => "principal-odd",
            Family::WhittakerOpen => "whittaker-open",
        }
    }

    /// Letter used for basis vectors.
    pub fn basis_label(self) -> &'static str {
        match self {
            Family::FiniteO => "u",
            Family::VermaPoint => "m",
            Family::DeltaInfinity => "d",
            Family::PrincipalOdd => "p",
            Family::DualVermaOpen | Family::PrincipalEven | Family::WhittakerOpen => "n",
        }
    }

    /// The only chart a delta module lives on, if any.
    pub fn support(self) -> Option<Chart> {
        match self {
            Family::VermaPoint => Some(Chart::Zero),
            Family::DeltaInfinity => Some(Chart::Infinity),
            _ => None,
        }
    }

    pub fn charts(self) -> Vec<Chart> {
        match self.support() {
            Some(c) => vec![c],
            None => Chart::ALL.to_vec(),
        }
    }

    pub fn uses_eta(self) -> bool {
        self == Family::WhittakerOpen
    }

    /// Families supported on a closed orbit.
    pub fn is_closed_orbit(self) -> bool {
        self.support().is_some()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name().replace('-', "") == norm)
            .ok_or_else(|| {
                let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
                format!("unknown family {s:?}; expected one of {}", names.join(", "))
            })
    }
}
