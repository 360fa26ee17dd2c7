//! Per-coordinate simultaneous approximation.
//!
//! The objective `max_j ‖x_j ζ_j‖` separates over coordinates, so the best
//! tuple at window `X` takes each `x_j` from the best-approximation ladder of
//! `ζ_j`. Ties are broken towards the lexicographically smallest tuple: the
//! coordinate that attains the maximum keeps its best denominator and every
//! other coordinate takes the smallest `x_j` whose error does not exceed that
//! maximum. Both search methods build the same ladders by different routes.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::schedule::Schedule;
use super::witness::WitnessRecord;
use super::{ExponentEstimate, ExponentName, WindowResult};
use crate::arith::Int;
use crate::cf::convergent_denominators;
use crate::error::{invalid, Error, Result};
use crate::kernel::WideKernel;
use crate::partition::Executor;
use crate::scan::{compare_distances, Order, Scanner};
use crate::source::{Precision, RealSource};

/// Largest `X_max^k` the brute-force method accepts.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

/// Multiples `m·s` with `m <= CANDIDATE_MULTIPLES` join the candidate set.
pub const CANDIDATE_MULTIPLES: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiMethod {
    BruteForce,
    ConvergentCandidates,
    Both,
}

/// Strict improvements of `‖xζ‖` for one coordinate, in increasing `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ladder {
    pub xs: Vec<Int>,
    pub unresolved: u64,
}

impl Ladder {
    /// Exhaustive scan of `1 <= x <= x_max`.
    pub fn brute(src: &RealSource, x_max: u64, prec: Precision, exec: &impl Executor) -> Result<Self> {
        let one = [src.clone()];
        let imp = Scanner::new(&one, prec)?.improvements(x_max, &[], exec)?;
        Ok(Ladder {
            xs: imp.xs.into_iter().map(Int::from).collect(),
            unresolved: imp.unresolved,
        })
    }

    /// Running minimum over convergent denominators and their multiples.
    pub fn candidates(src: &RealSource, x_max: &Int, prec: Precision) -> Result<Self> {
        let (dens, truncated) = convergent_denominators(src, x_max, prec)?;
        if truncated {
            return Err(Error::StreamExhausted(format!("convergents not certified up to {x_max}")));
        }
        let mut cands: Vec<Int> = Vec::new();
        for s in &dens {
            for m in 1..=CANDIDATE_MULTIPLES {
                let c = s * m;
                if &c > x_max {
                    break;
                }
                cands.push(c);
            }
        }
        cands.sort();
        cands.dedup();
        let kernel = WideKernel::new(src, kernel_bits(x_max), prec)?;
        let mut out = Ladder {
            xs: Vec::new(),
            unresolved: 0,
        };
        for c in cands {
            let better = match out.xs.last() {
                None => true,
                Some(b) => match order(&kernel, (&c, src), &kernel, (b, src), prec)? {
                    Order::Less => true,
                    Order::NotLess => false,
                    Order::Unresolved => {
                        out.unresolved += 1;
                        false
                    }
                },
            };
            if better {
                out.xs.push(c);
            }
        }
        Ok(out)
    }

    pub fn best_at(&self, window: &Int) -> Option<&Int> {
        let i = self.xs.partition_point(|x| x <= window);
        (i > 0).then(|| &self.xs[i - 1])
    }

    /// Rungs not exceeding `bound`.
    pub fn up_to(&self, bound: &Int) -> &[Int] {
        &self.xs[..self.xs.partition_point(|x| x <= bound)]
    }
}

/// Lexicographically smallest optimal tuple at `window`, with a flag when a
/// comparison could not be resolved.
/// Fixed-point precision for distance comparisons up to `x_max`.
fn kernel_bits(x_max: &Int) -> u64 {
    4 * x_max.bits() + 192
}

/// Kernel comparison with the exact path as fallback.
fn order(ka: &WideKernel, a: (&Int, &RealSource), kb: &WideKernel, b: (&Int, &RealSource), prec: Precision) -> Result<Order> {
    match ka.compare(a.0, kb, b.0) {
        Some(true) => Ok(Order::Less),
        Some(false) => Ok(Order::NotLess),
        None => compare_distances(a, b, prec),
    }
}

pub(crate) fn best_tuple(
    ladders: &[Ladder],
    sources: &[RealSource],
    kernels: &[WideKernel],
    window: &Int,
    prec: Precision,
) -> Result<(Vec<Int>, Option<String>)> {
    let mut flag = None;
    let mut best: Vec<Int> = Vec::with_capacity(ladders.len());
    for l in ladders {
        best.push(l.best_at(window).cloned().ok_or_else(|| invalid("window below 1"))?);
    }
    // coordinate attaining the maximum error; ties keep the earlier one
    let mut top = 0usize;
    for j in 1..sources.len() {
        match order(&kernels[top], (&best[top], &sources[top]), &kernels[j], (&best[j], &sources[j]), prec)? {
            Order::Less => top = j,
            Order::NotLess => {}
            Order::Unresolved => flag = Some("maximum coordinate unresolved".to_string()),
        }
    }
    let mut tuple = Vec::with_capacity(ladders.len());
    for (j, l) in ladders.iter().enumerate() {
        if j == top {
            tuple.push(best[j].clone());
            continue;
        }
        // rung distances decrease, so the rungs within the maximum form a suffix
        let rungs = l.up_to(window);
        let (mut lo, mut hi) = (0usize, rungs.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            // ‖xζ_j‖ <= ‖best_top ζ_top‖ ⇔ not (max < ‖xζ_j‖)
            match order(&kernels[top], (&best[top], &sources[top]), &kernels[j], (&rungs[mid], &sources[j]), prec)? {
                Order::NotLess => hi = mid,
                Order::Less => lo = mid + 1,
                Order::Unresolved => {
                    flag = Some(format!("coordinate {j} threshold unresolved"));
                    lo = mid + 1;
                }
            }
        }
        let chosen = rungs.get(lo).cloned().unwrap_or_else(|| best[j].clone());
        tuple.push(chosen);
    }
    Ok((tuple, flag))
}

fn brute_limit(k: usize) -> u64 {
    let mut x = libm::pow(BRUTE_FORCE_LIMIT as f64, 1.0 / k as f64) as u64 + 2;
    while (x as u128).checked_pow(k as u32).is_none_or(|v| v > BRUTE_FORCE_LIMIT) {
        x -= 1;
    }
    x
}

fn windows_from(ladders: &[Ladder], sources: &[RealSource], windows: &[Int], prec: Precision) -> Result<Vec<(Vec<Int>, WindowResult)>> {
    let unresolved: u64 = ladders.iter().map(|l| l.unresolved).sum();
    let mut out = Vec::with_capacity(windows.len());
    let Some(top) = windows.last() else { return Ok(out) };
    let kernels = sources
        .iter()
        .map(|s| WideKernel::new(s, kernel_bits(top), prec))
        .collect::<Result<Vec<_>>>()?;
    for w in windows {
        let (tuple, mut flag) = best_tuple(ladders, sources, &kernels, w, prec)?;
        if unresolved > 0 && flag.is_none() {
            flag = Some(format!("{unresolved} ladder comparisons unresolved"));
        }
        let witness = WitnessRecord::per_coordinate_hinted(&tuple, sources, &kernels, w, prec)?;
        out.push((
            tuple,
            WindowResult {
                window: w.clone(),
                witness: Some(witness),
                flag,
            },
        ));
    }
    Ok(out)
}

/// Estimates the per-coordinate exponent on every window of the schedule.
pub fn estimate_chi(sources: &[RealSource], schedule: &Schedule, method: ChiMethod, prec: Precision, exec: &impl Executor) -> Result<ExponentEstimate> {
    let k = sources.len();
    if k == 0 {
        return Err(invalid("need at least one source"));
    }
    let x_max = schedule.x_max();
    let limit = brute_limit(k);
    let x_max_small = x_max.to_u64().filter(|&x| x <= limit);
    if method == ChiMethod::BruteForce && x_max_small.is_none() {
        let cost = x_max.to_u128().and_then(|x| x.checked_pow(k as u32)).unwrap_or(u128::MAX);
        return Err(Error::CostGuard {
            what: format!("brute-force search over {k} coordinates up to {x_max}"),
            cost,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let brute = |bound: u64| -> Result<Vec<Ladder>> { sources.iter().map(|s| Ladder::brute(s, bound, prec, exec)).collect() };
    let cands = || -> Result<Vec<Ladder>> { sources.iter().map(|s| Ladder::candidates(s, x_max, prec)).collect() };
    let results = match method {
        ChiMethod::BruteForce => windows_from(&brute(x_max_small.expect("checked"))?, sources, schedule.windows(), prec)?,
        ChiMethod::ConvergentCandidates => windows_from(&cands()?, sources, schedule.windows(), prec)?,
        ChiMethod::Both => {
            let c = cands()?;
            let all = windows_from(&c, sources, schedule.windows(), prec)?;
            let overlap = x_max_small.unwrap_or(limit);
            let b = brute(overlap)?;
            let bound = Int::from(overlap);
            for (j, (lb, lc)) in b.iter().zip(&c).enumerate() {
                if lb.up_to(&bound) != lc.up_to(&bound) {
                    return Err(Error::MethodDisagreement {
                        window: overlap.to_string(),
                        detail: format!("coordinate {j}: scan {:?} vs candidates {:?}", lb.up_to(&bound), lc.up_to(&bound)),
                    });
                }
            }
            let small: Vec<Int> = schedule.windows().iter().filter(|w| **w <= bound).cloned().collect();
            let checked = windows_from(&b, sources, &small, prec)?;
            for ((tb, rb), (tc, _)) in checked.iter().zip(&all) {
                if tb != tc {
                    return Err(Error::MethodDisagreement {
                        window: rb.window.to_string(),
                        detail: format!("scan {tb:?} vs candidates {tc:?}"),
                    });
                }
            }
            all
        }
    };
    Ok(ExponentEstimate::new(
        ExponentName::ChiK,
        k,
        results.into_iter().map(|(_, r)| r).collect(),
    ))
}
