//! End-to-end verification of the identities: builds systems and weights,
//! evaluates both sides independently, compares them and renders reports.

mod calibrate;
mod identities;
mod weights;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsystems::FamilySpec;

pub use calibrate::{calibrate_constants, CalibrateOptions, CalibrationReport, CalibrationRow, ClassFit, ExponentFit, ParamRange};
pub use identities::{keven_pair_constant, verify_identity};
pub use weights::{instantiate_weights, random_system, random_weights, WeightSpec, DEFAULT_BOUND};

/// Symbolic polynomial work above this estimate switches to random weights.
pub const SYMBOLIC_TERM_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    GenDet,
    K1,
    KevenPf,
    MatrixTree,
    Mv,
    BnTree,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::GenDet,
        Identity::K1,
        Identity::KevenPf,
        Identity::MatrixTree,
        Identity::Mv,
        Identity::BnTree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::GenDet => "gendet",
            Identity::K1 => "k1",
            Identity::KevenPf => "keven-pf",
            Identity::MatrixTree => "matrix-tree",
            Identity::Mv => "mv",
            Identity::BnTree => "bn-tree",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "identity",
                value: s.into(),
            })
    }
}

/// Where the vector system comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    Family(FamilySpec),
    File(String),
    /// `count` seeded random rational vectors in `Q^dim`.
    Random { dim: usize, count: usize },
}

impl FromStr for SystemSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(SystemSpec::File(path.to_string()));
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let bad = || Error::Unknown {
                kind: "system",
                value: s.into(),
            };
            let (d, n) = rest.split_once(':').ok_or_else(bad)?;
            return Ok(SystemSpec::Random {
                dim: d.parse().map_err(|_| bad())?,
                count: n.parse().map_err(|_| bad())?,
            });
        }
        Ok(SystemSpec::Family(s.parse()?))
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemSpec::Family(fs) => write!(f, "{fs}"),
            SystemSpec::File(p) => write!(f, "file:{p}"),
            SystemSpec::Random { dim, count } => write!(f, "random:{dim}:{count}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(Error::Unknown {
                kind: "mode",
                value: s.into(),
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyParams {
    pub system: SystemSpec,
    /// Commutator depth; defaults per identity (2 for gendet and keven-pf).
    pub k: Option<usize>,
    pub weights: WeightSpec,
    pub seed: u64,
    pub mode: Mode,
    pub tol: f64,
    /// `u` or `lambda` for mv; `derived` or `stated` for bn-tree.
    pub variant: Option<String>,
    pub timing: bool,
}

impl VerifyParams {
    pub fn new(system: SystemSpec) -> Self {
        VerifyParams {
            system,
            k: None,
            weights: WeightSpec::Symbolic,
            seed: 0,
            mode: Mode::Exact,
            tol: 1e-9,
            variant: None,
            timing: false,
        }
    }

    pub fn k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn weights(mut self, w: WeightSpec) -> Self {
        self.weights = w;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn variant(mut self, v: &str) -> Self {
        self.variant = Some(v.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Parameters {
    pub family: String,
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub k: usize,
    pub seed: u64,
    pub mode: String,
    pub weights: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

/// One verification run. Field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub parameters: Parameters,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    /// `lhs / rhs` rendered, or `"non-constant"`; absent when `rhs = 0`.
    pub ratio: Option<String>,
    pub term_count: usize,
    pub elapsed_ms: Option<u64>,
    /// Relative residual of float comparisons.
    pub residual: Option<f64>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        for i in Identity::ALL {
            assert_eq!(i.name().parse::<Identity>().unwrap(), i);
        }
        assert!("mt".parse::<Identity>().is_err());
        assert_eq!(
            "random:3:4".parse::<SystemSpec>().unwrap(),
            SystemSpec::Random { dim: 3, count: 4 }
        );
        assert_eq!("file:x.json".parse::<SystemSpec>().unwrap().to_string(), "file:x.json");
        assert_eq!("an:2".parse::<SystemSpec>().unwrap().to_string(), "an:2");
        assert!("float".parse::<Mode>().is_ok());
    }
}
