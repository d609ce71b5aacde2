//! The centered (`M′`), uncentered (`M`), dyadic (`M_d`) and sharp (`M♯`)
//! maximal operators, the BMO norm and its median variant.
//!
//! Every operator is evaluated exactly. The single-point functions here are
//! convenient for spot values; [`Profile`] evaluates one operator over all of
//! ℤ for a fixed sequence and is what the verification code uses.

mod dyadic_max;
mod hl;
mod profile;
mod sharp;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::FiniteSequence;

pub use dyadic_max::dyadic_max;
pub(crate) use dyadic_max::saturation_level;
pub use hl::{centered_max, uncentered_max, Envelope};
pub use profile::{Profile, Side};
pub use sharp::{
    bmo_norm, med_bmo_norm, median_oscillation, sharp_max, PieceFunction, SharpField,
};

/// Normalisation of the centered window `{m-r, ..., m+r}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenteredDivisor {
    /// Divide by the window cardinality `2r + 1`.
    #[default]
    TwoRPlusOne,
    /// Divide by `2r`.
    TwoR,
}

impl CenteredDivisor {
    pub fn divisor(self, r: i64) -> f64 {
        match self {
            CenteredDivisor::TwoRPlusOne => (2 * r + 1) as f64,
            CenteredDivisor::TwoR => (2 * r) as f64,
        }
    }
}

impl FromStr for CenteredDivisor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2r+1" | "two_r_plus_one" => Ok(CenteredDivisor::TwoRPlusOne),
            "2r" | "two_r" => Ok(CenteredDivisor::TwoR),
            other => Err(Error::usage(format!(
                "unknown divisor mode '{other}' (expected 2r+1 or 2r)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperatorConfig {
    pub centered_divisor: CenteredDivisor,
    /// Smallest dyadic level used by `M_d`.
    pub dyadic_min_level: u32,
    /// Whether one-point intervals take part in `M` and `M♯`.
    pub include_singleton_intervals: bool,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        OperatorConfig {
            centered_divisor: CenteredDivisor::TwoRPlusOne,
            dyadic_min_level: 1,
            include_singleton_intervals: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    Centered,
    Uncentered,
    Dyadic,
    Sharp,
}

impl Operator {
    pub const ALL: [Operator; 4] = [
        Operator::Centered,
        Operator::Uncentered,
        Operator::Dyadic,
        Operator::Sharp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::Centered => "centered",
            Operator::Uncentered => "uncentered",
            Operator::Dyadic => "dyadic",
            Operator::Sharp => "sharp",
        }
    }

    /// Value of the operator at `m`.
    pub fn eval(self, a: &FiniteSequence, m: i64, cfg: &OperatorConfig) -> f64 {
        match self {
            Operator::Centered => centered_max(a, m, cfg),
            Operator::Uncentered => uncentered_max(a, m, cfg),
            Operator::Dyadic => dyadic_max(a, m, cfg),
            Operator::Sharp => sharp_max(a, m, cfg),
        }
    }

    /// Upper bound for the operator at distance `d >= 1` from the support
    /// of a sequence with ℓ¹ norm `l1`.
    pub fn decay_bound(self, l1: f64, d: u64, cfg: &OperatorConfig) -> f64 {
        let d = d as f64;
        match self {
            Operator::Centered => match cfg.centered_divisor {
                CenteredDivisor::TwoRPlusOne => l1 / (2.0 * d + 1.0),
                CenteredDivisor::TwoR => l1 / (2.0 * d),
            },
            Operator::Uncentered | Operator::Dyadic => l1 / (d + 1.0),
            Operator::Sharp => 2.0 * l1 / (d + 1.0),
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "centered" | "M'" | "Mprime" | "mprime" => Ok(Operator::Centered),
            "uncentered" | "M" | "hl" => Ok(Operator::Uncentered),
            "dyadic" | "Md" | "M_d" => Ok(Operator::Dyadic),
            "sharp" | "M#" | "Msharp" => Ok(Operator::Sharp),
            other => Err(Error::usage(format!(
                "unknown operator '{other}' (expected centered, uncentered, dyadic or sharp)"
            ))),
        }
    }
}
