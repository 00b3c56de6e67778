//! Numerical certification of convexity in the parameter `p`.
//!
//! Every check produces a [`Margin`]: a signed slack oriented so that a
//! positive value means the claimed inequality holds, together with a bound
//! on its numerical error. Verdicts never claim more than the bound allows.

mod corollary;
mod p0;
mod proofs;
mod scan;
mod turan;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use corollary::{corollary_condition, corollary_condition_with, required_sign, Variant};
pub use p0::{find_p0, find_p0_with, P0Outcome, P0Search, P0Witness};
pub use proofs::{
    lemma3_check, lemma3_constant, lemma3_moment, lemma3_reduced, theorem1_g, theorem1_g_with, theorem4_discriminant,
    theorem5_ratio_check, theorem5_ratio_check_with, zeta3, Lemma3Check, Lemma3Constant, Theorem5Check, Zeta3,
};
pub use scan::{claim_region, scan, scan_with, CellError, Claim, Mode, ScanConfig, ScanMeta, ScanReport, THREADS_ENV};
pub use turan::{turan_margin, turan_margin_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verdict {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [Verdict::Holds, Verdict::Fails, Verdict::Inconclusive]
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown verdict '{s}'"))
    }
}

/// Signed slack of an inequality with an error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub value: f64,
    pub err_bound: f64,
    pub verdict: Verdict,
}

impl Margin {
    /// Classifies `value` against `err_bound`; NaN inputs are inconclusive.
    pub fn new(value: f64, err_bound: f64) -> Self {
        let verdict = if value > err_bound {
            Verdict::Holds
        } else if value < -err_bound {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        };
        Self { value, err_bound, verdict }
    }

    /// A cell whose computation failed.
    pub fn failed() -> Self {
        Self { value: f64::NAN, err_bound: f64::INFINITY, verdict: Verdict::Inconclusive }
    }

    /// Same slack with the opposite orientation.
    pub fn flipped(self) -> Self {
        Self::new(-self.value, self.err_bound)
    }

    /// Bitwise equality, so NaN cells compare equal to themselves.
    pub fn same_as(&self, other: &Margin) -> bool {
        self.value.to_bits() == other.value.to_bits()
            && self.err_bound.to_bits() == other.err_bound.to_bits()
            && self.verdict == other.verdict
    }
}

/// What a scan certifies at each cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    TuranSin,
    TuranCos,
    TuranTan,
    TuranSinh,
    TuranTanh,
    LogConcave,
    LogConvex,
    Concave,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::TuranSin,
        Property::TuranCos,
        Property::TuranTan,
        Property::TuranSinh,
        Property::TuranTanh,
        Property::LogConcave,
        Property::LogConvex,
        Property::Concave,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::TuranSin => "turan-sin",
            Property::TuranCos => "turan-cos",
            Property::TuranTan => "turan-tan",
            Property::TuranSinh => "turan-sinh",
            Property::TuranTanh => "turan-tanh",
            Property::LogConcave => "log-concave",
            Property::LogConvex => "log-convex",
            Property::Concave => "concave",
        }
    }

    /// The kind a Turán property is tied to.
    pub fn turan_kind(self) -> Option<crate::FunctionKind> {
        use crate::FunctionKind as K;
        match self {
            Property::TuranSin => Some(K::Sin),
            Property::TuranCos => Some(K::Cos),
            Property::TuranTan => Some(K::Tan),
            Property::TuranSinh => Some(K::Sinh),
            Property::TuranTanh => Some(K::Tanh),
            _ => None,
        }
    }

    pub fn turan_for(kind: crate::FunctionKind) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.turan_kind() == Some(kind))
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Property::ALL.into_iter().find(|p| p.name().eq_ignore_ascii_case(s)).ok_or_else(|| {
            let names: Vec<_> = Property::ALL.iter().map(|p| p.name()).collect();
            format!("unknown property '{s}' (expected one of {})", names.join(", "))
        })
    }
}
