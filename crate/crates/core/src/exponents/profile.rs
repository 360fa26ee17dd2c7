use alloc::format;
use alloc::vec::Vec;

use super::witness::WitnessRecord;
use super::{Exponent, ExponentEstimate, ExponentName, WindowResult};
use crate::arith::{log2_int_approx, Int};
use crate::cf::convergents;
use crate::error::{invalid, Error, Result};
use crate::source::{Precision, RealSource};

/// One convergent's exponents: `ν = -log‖s_n ζ‖/log s_n`,
/// `η = log s_{n+1}/log s_n` and `τ = log(a_{n+1} s_n)/log s_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileRow {
    pub n: usize,
    pub s_n: Int,
    pub next_quotient: Int,
    pub s_next: Int,
    /// Certified lower bound on `ν`.
    pub nu: Exponent,
    pub nu_approx: f64,
    pub eta: f64,
    pub tau: f64,
    pub witness: WitnessRecord,
}

impl Eq for ProfileRow {}

impl ProfileRow {
    /// `1/ln s_n`, the bound on `η - τ`.
    pub fn law_bound(&self) -> f64 {
        1.0 / (log2_int_approx(&self.s_n) * core::f64::consts::LN_2)
    }
}

/// Exponent profile over the first `depth` convergents.
///
/// The law `0 < η_n - τ_n <= 1/ln s_n` is checked exactly as
/// `a_{n+1} s_n < s_{n+1} <= (a_{n+1} + 1) s_n`, which implies it because
/// `ln(1 + 1/a) <= ln 2 < 1`. Rows start at the first `s_n >= 2`; the
/// empirical value is the maximum `ν` over rows with `s_n >= 2^min_log2_den`.
pub fn lambda1_profile(src: &RealSource, depth: usize, min_log2_den: u64, prec: Precision) -> Result<ExponentEstimate> {
    if depth < 3 {
        return Err(invalid("profile depth must be >= 3"));
    }
    if src.is_irrational() == Some(false) {
        return Err(Error::RationalInput);
    }
    let list = convergents(src, depth + 1, prec)?;
    if list.terminated {
        return Err(Error::RationalInput);
    }
    let items = &list.items;
    let sources = [src.clone()];
    let mut rows = Vec::new();
    let mut windows = Vec::new();
    let two = Int::from(2);
    for n in 1..items.len().saturating_sub(1) {
        let s = &items[n].den;
        if s < &two {
            continue;
        }
        let a = &list.quotients[n + 1];
        let s_next = &items[n + 1].den;
        if !(&(a * s) < s_next && s_next <= &((a + 1u32) * s)) {
            return Err(Error::BoundViolation(format!("profile law fails at n = {n}")));
        }
        let witness = WitnessRecord::shared(s, &sources, s, prec)?;
        let ls = log2_int_approx(s);
        let eta = log2_int_approx(s_next) / ls;
        let tau = (log2_int_approx(a) + ls) / ls;
        rows.push(ProfileRow {
            n,
            s_n: s.clone(),
            next_quotient: a.clone(),
            s_next: s_next.clone(),
            nu_approx: witness.exponent.to_f64(),
            nu: witness.exponent.clone(),
            eta,
            tau,
            witness: witness.clone(),
        });
        windows.push(WindowResult {
            window: s.clone(),
            witness: Some(witness),
            flag: None,
        });
    }
    let floor = Int::from(1u8) << min_log2_den;
    let mut est = ExponentEstimate::new(ExponentName::Lambda1, 1, windows);
    est.empirical = rows.iter().filter(|r| r.s_n >= floor).map(|r| r.nu.clone()).max();
    est.profile = Some(rows);
    Ok(est)
}
