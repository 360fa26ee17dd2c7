//! Finite-window estimates of approximation exponents with auditable witnesses.

mod chi;
mod omega;
mod profile;
mod sandwich;
mod schedule;
mod transform;
mod uniform;
mod witness;

pub use chi::{estimate_chi, ChiMethod, Ladder};
pub use omega::estimate_omega;
pub use profile::{lambda1_profile, ProfileRow};
pub use sandwich::{power_witness, sandwich_report, SandwichReport, Violation};
pub use schedule::Schedule;
pub use transform::chi_witness_to_omega_witness;
pub use uniform::{uniform_chi_check, UniformReport};
pub use witness::{achieved_exponent, verify_witness, Origin, WitnessMode, WitnessRecord};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{to_f64, Int, Rat};

/// Lower bound on an exponent, or unbounded for an exact hit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exponent {
    Finite(Rat),
    Unbounded,
}

impl Exponent {
    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(r) => to_f64(r),
            Exponent::Unbounded => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Exponent::Finite(r) => Some(r),
            Exponent::Unbounded => None,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(r) => write!(f, "{r}"),
            Exponent::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExponentName {
    Lambda1,
    LambdaK,
    OmegaK,
    ChiK,
    UniformChiK,
}

impl ExponentName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExponentName::Lambda1 => "lambda1",
            ExponentName::LambdaK => "lambda_k",
            ExponentName::OmegaK => "omega_k",
            ExponentName::ChiK => "chi_k",
            ExponentName::UniformChiK => "uniform_chi_k",
        }
    }
}

/// Best witness found at one window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowResult {
    pub window: Int,
    pub witness: Option<WitnessRecord>,
    /// Why the window has no trustworthy witness, if so.
    pub flag: Option<String>,
}

impl WindowResult {
    pub fn exponent(&self) -> Option<&Exponent> {
        self.witness.as_ref().map(|w| &w.exponent)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentEstimate {
    pub name: ExponentName,
    pub k: usize,
    pub windows: Vec<WindowResult>,
    /// Maximum achieved exponent over all windows.
    pub empirical: Option<Exponent>,
    pub profile: Option<Vec<ProfileRow>>,
}

/// Number of trailing windows reported as the trend.
pub const TREND_WINDOWS: usize = 5;

impl ExponentEstimate {
    pub(crate) fn new(name: ExponentName, k: usize, windows: Vec<WindowResult>) -> Self {
        let empirical = windows.iter().filter_map(|w| w.exponent().cloned()).max();
        Self {
            name,
            k,
            windows,
            empirical,
            profile: None,
        }
    }

    /// Achieved exponents over the last few windows, oldest first.
    pub fn trend(&self) -> Vec<(Int, Exponent)> {
        let with: Vec<_> = self
            .windows
            .iter()
            .filter_map(|w| w.exponent().map(|e| (w.window.clone(), e.clone())))
            .collect();
        let skip = with.len().saturating_sub(TREND_WINDOWS);
        with.into_iter().skip(skip).collect()
    }

    pub fn at(&self, window: &Int) -> Option<&WindowResult> {
        self.windows.iter().find(|w| &w.window == window)
    }

    /// Maximum achieved exponent over windows `>= from`.
    pub fn max_from(&self, from: &Int) -> Option<Exponent> {
        self.windows
            .iter()
            .filter(|w| &w.window >= from)
            .filter_map(|w| w.exponent().cloned())
            .max()
    }

    /// Minimum achieved exponent over windows `>= from` (flagged windows excluded).
    pub fn min_from(&self, from: &Int) -> Option<Exponent> {
        self.windows
            .iter()
            .filter(|w| &w.window >= from)
            .filter_map(|w| w.exponent().cloned())
            .min()
    }
}
