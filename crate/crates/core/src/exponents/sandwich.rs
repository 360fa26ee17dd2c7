use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::transform::chi_witness_to_omega_witness;
use super::witness::{verify_witness, WitnessRecord};
use super::ExponentEstimate;
use crate::arith::Int;
use crate::error::{Error, Result};
use crate::source::{Precision, RealSource};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub window: Int,
    pub relation: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SandwichReport {
    pub windows_checked: usize,
    pub transforms_checked: usize,
    /// Transformed witnesses compared against the shared search at window `Q^k`.
    pub floor_checks: usize,
    pub violations: Vec<Violation>,
    /// Some coordinate is rational, so the orderings hold vacuously.
    pub degenerate: bool,
    /// Windows where a search reported an exact hit.
    pub unbounded_windows: usize,
}

impl SandwichReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn witness_at(e: &ExponentEstimate, i: usize) -> Option<&WitnessRecord> {
    e.windows.get(i).and_then(|w| w.witness.as_ref())
}

/// Window-by-window ordering checks between the shared-denominator estimate,
/// the per-coordinate estimate and each coordinate's one-dimensional
/// estimate, plus re-verification of every transformed per-coordinate
/// witness.
///
/// A violation means a search missed a candidate: a shared witness whose
/// error is certainly below the best per-coordinate error, or a
/// per-coordinate maximum certainly below some coordinate's own best error.
pub fn sandwich_report(
    sources: &[RealSource],
    omega: &ExponentEstimate,
    chi: &ExponentEstimate,
    lambdas: &[ExponentEstimate],
    prec: Precision,
) -> Result<SandwichReport> {
    let k = sources.len();
    if lambdas.len() != k || omega.k != k || chi.k != k {
        return Err(Error::DimensionMismatch { expected: k, got: lambdas.len() });
    }
    let windows: Vec<&Int> = chi.windows.iter().map(|w| &w.window).collect();
    let same = |e: &ExponentEstimate| e.windows.iter().map(|w| &w.window).eq(windows.iter().copied());
    if !same(omega) || !lambdas.iter().all(same) {
        return Err(Error::MismatchedSchedules);
    }
    let mut report = SandwichReport {
        degenerate: sources.iter().any(|s| s.is_irrational() == Some(false)),
        ..SandwichReport::default()
    };
    for (i, window) in windows.iter().enumerate() {
        let (Some(w_omega), Some(w_chi)) = (witness_at(omega, i), witness_at(chi, i)) else {
            continue;
        };
        report.windows_checked += 1;
        if w_omega.max_error_hi() == num_traits::Zero::zero() || w_chi.max_error_hi() == num_traits::Zero::zero() {
            report.unbounded_windows += 1;
        }
        if w_omega.max_error_hi() < w_chi.max_error_lo() {
            report.violations.push(Violation {
                window: (*window).clone(),
                relation: "omega <= chi",
                detail: format!("shared error below {} beats per-coordinate error above {}", w_omega.max_error_hi(), w_chi.max_error_lo()),
            });
        }
        for (j, l) in lambdas.iter().enumerate() {
            let Some(w_l) = witness_at(l, i) else { continue };
            if w_chi.max_error_hi() < w_l.max_error_lo() {
                report.violations.push(Violation {
                    window: (*window).clone(),
                    relation: "chi <= lambda1",
                    detail: format!("per-coordinate maximum below coordinate {j}'s best error"),
                });
            }
        }
        let t = chi_witness_to_omega_witness(w_chi)?;
        report.transforms_checked += 1;
        if let Err(e) = verify_witness(&t, sources, prec) {
            report.violations.push(Violation {
                window: (*window).clone(),
                relation: "transform verifies",
                detail: format!("{e}"),
            });
        }
        if let Some(j) = windows.iter().position(|w| **w == t.window) {
            if let Some(w_big) = witness_at(omega, j) {
                report.floor_checks += 1;
                if w_big.max_error_lo() > t.max_error_hi() {
                    report.violations.push(Violation {
                        window: t.window.clone(),
                        relation: "omega >= transformed chi",
                        detail: format!("shared search at {} misses the product witness", t.window),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// The witness `x = s^k`, `y_j = r^j s^(k-j)` for `(ζ, ..., ζ^k)` built from
/// a convergent `r/s` of `ζ`, at window `s^k`.
pub fn power_witness(base: &RealSource, r: &Int, s: &Int, k: u32, prec: Precision) -> Result<WitnessRecord> {
    let sources: Vec<RealSource> = (1..=k).map(|j| RealSource::power(base.clone(), j)).collect::<Result<_>>()?;
    let x = num_traits::pow(s.clone(), k as usize);
    let numerators: Vec<Int> = (1..=k)
        .map(|j| num_traits::pow(r.clone(), j as usize) * num_traits::pow(s.clone(), (k - j) as usize))
        .collect();
    WitnessRecord::shared_with(&x, &numerators, &sources, &x, prec)
}
