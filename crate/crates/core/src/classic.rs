//! Executable forms of the classical one-dimensional theorems: Legendre's
//! criterion, Lagrange's best approximations and Minkowski's two-dimensional
//! solution count.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{ceil_rat, floor_rat, pow2, rat_int, Int, Rat};
use crate::cf::{convergent_denominators, convergents_of, convergents_past};
use crate::distance::{deviation_le, nearest_distance_rel, DistanceInterval};
use crate::error::{invalid, Error, Result};
use crate::kernel::{FastKernel, Fixed, FRAC_BITS, MAX_X};
use crate::partition::Executor;
use crate::scan::Scanner;
use crate::source::{Precision, RealSource};

/// Largest bound for which best approximations are also found by exhaustive scan.
pub const EXHAUSTIVE_BEST_LIMIT: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LegendreOutcome {
    /// `p/q` is the convergent of this index. `alternate` marks the extra
    /// convergent of a rational's non-canonical expansion `[..., a_n - 1, 1]`.
    IsConvergent { index: usize, alternate: bool },
    /// `|qζ - p| > 1/(2q)`.
    NotApplicable,
    /// The hypothesis holds but `p/q` is not a convergent.
    Violation,
}

fn reduce(p: &Int, q: &Int) -> (Int, Int) {
    let g = p.gcd(q);
    if g.is_zero() {
        return (p.clone(), q.clone());
    }
    (p / &g, q / &g)
}

/// Checks Legendre's criterion for `p/q` against the source.
pub fn legendre_certify(p: &Int, q: &Int, src: &RealSource, prec: Precision) -> Result<LegendreOutcome> {
    if !q.is_positive() {
        return Err(invalid("q must be positive"));
    }
    let (p, q) = reduce(p, q);
    let threshold = Rat::new(Int::one(), &q * 2u32);
    let holds = deviation_le(&q, &p, src, &threshold, prec, || format!("|{q}ζ - {p}| against 1/(2q)"))?;
    if !holds {
        return Ok(LegendreOutcome::NotApplicable);
    }
    let list = convergents_past(src, &q, prec)?;
    for c in &list.items {
        if c.den == q && c.num == p {
            return Ok(LegendreOutcome::IsConvergent {
                index: c.index,
                alternate: false,
            });
        }
    }
    if list.terminated && list.quotients.len() >= 2 {
        let n = list.quotients.len() - 1;
        let last = &list.quotients[n];
        if last > &Int::one() {
            let mut alt = list.quotients[..n].to_vec();
            alt.push(last - 1u32);
            let c = convergents_of(&alt).pop().expect("non-empty");
            if c.den == q && c.num == p {
                return Ok(LegendreOutcome::IsConvergent { index: n, alternate: true });
            }
        }
    }
    if list.truncated && list.last().is_none_or(|c| c.den <= q) {
        return Err(Error::StreamExhausted(format!("no convergents certified up to q = {q}")));
    }
    Ok(LegendreOutcome::Violation)
}

/// Fixed-point pre-filter for `‖xζ‖ <= t`: `Some` when decided.
fn fixed_le(f: Fixed, t: &Rat) -> Option<bool> {
    let scaled = t * rat_int(pow2(u64::from(FRAC_BITS)));
    let lo = floor_rat(&scaled).to_u128()?;
    let hi = ceil_rat(&scaled).to_u128()?;
    if f.hi <= lo {
        Some(true)
    } else if f.lo > hi {
        Some(false)
    } else {
        None
    }
}

/// Integers `p` with certified `|qζ - p| <= t` (`t < 1`).
fn close_numerators(q: &Int, t: &Rat, src: &RealSource, prec: Precision) -> Result<Vec<Int>> {
    let e = src.enclosure(64 + q.bits())?.affine(q, &Int::zero());
    let lo = floor_rat(&(&e.lo - t));
    let hi = ceil_rat(&(&e.hi + t));
    let mut out = Vec::new();
    let mut p = lo;
    while p <= hi {
        if deviation_le(q, &p, src, t, prec, || format!("|{q}ζ - {p}| <= {t}"))? {
            out.push(p.clone());
        }
        p += 1u32;
    }
    Ok(out)
}

/// Fractions meeting Legendre's hypothesis and what the criterion said about them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LegendreSweep {
    pub checked: u64,
    pub hypothesis_hits: u64,
    pub violations: Vec<(Int, Int)>,
}

/// Exhaustive check over `1 <= q <= q_max` of every `p` with `|qζ - p| <= 1/(2q)`.
pub fn legendre_sweep(src: &RealSource, q_max: u64, prec: Precision) -> Result<LegendreSweep> {
    let kernel = FastKernel::new(src, prec)?;
    let mut out = LegendreSweep::default();
    for q in 1..=q_max {
        out.checked += 1;
        let t = Rat::new(Int::one(), Int::from(2 * q));
        if let Some(k) = kernel.as_ref().filter(|_| q <= MAX_X) {
            if fixed_le(k.distance(q), &t) == Some(false) {
                continue;
            }
        }
        let qi = Int::from(q);
        for p in close_numerators(&qi, &t, src, prec)? {
            out.hypothesis_hits += 1;
            match legendre_certify(&p, &qi, src, prec)? {
                LegendreOutcome::IsConvergent { .. } => {}
                LegendreOutcome::NotApplicable => {
                    return Err(Error::Verification(format!("inconsistent hypothesis at {p}/{q}")));
                }
                LegendreOutcome::Violation => out.violations.push(reduce(&p, &qi)),
            }
        }
    }
    Ok(out)
}

/// One best-approximation denominator with its certified distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestApproximation {
    pub q: Int,
    pub distance: DistanceInterval,
}

/// Best approximations `q <= bound`, from convergents and, for small bounds,
/// also from an exhaustive scan; the two lists must agree.
pub fn best_approximations(src: &RealSource, bound: &Int, prec: Precision, exec: &impl Executor) -> Result<Vec<BestApproximation>> {
    if !bound.is_positive() {
        return Err(invalid("bound must be positive"));
    }
    let from_convergents = best_from_convergents(src, bound, prec)?;
    if let Some(b) = bound.to_u64().filter(|b| *b <= EXHAUSTIVE_BEST_LIMIT) {
        let scanned = best_by_scan(src, b, prec, exec)?;
        if scanned != from_convergents {
            return Err(Error::MethodDisagreement {
                window: b.to_string(),
                detail: format!("scan {scanned:?} vs convergents {from_convergents:?}"),
            });
        }
    }
    from_convergents
        .into_iter()
        .map(|q| {
            let distance = nearest_distance_rel(&q, src, prec)?;
            Ok(BestApproximation { q, distance })
        })
        .collect()
}

/// Convergent denominators up to `bound`, cut after the first exact hit.
pub fn best_from_convergents(src: &RealSource, bound: &Int, prec: Precision) -> Result<Vec<Int>> {
    let (dens, truncated) = convergent_denominators(src, bound, prec)?;
    if truncated {
        return Err(Error::StreamExhausted(format!("convergents not certified up to {bound}")));
    }
    let mut out: Vec<Int> = Vec::new();
    for q in dens {
        // s_0 = s_1 = 1 when a_1 = 1
        if out.last() != Some(&q) {
            out.push(q);
        }
    }
    Ok(out)
}

fn best_by_scan(src: &RealSource, bound: u64, prec: Precision, exec: &impl Executor) -> Result<Vec<Int>> {
    let sources = [src.clone()];
    let scanner = Scanner::new(&sources, prec)?;
    let imp = scanner.improvements(bound, &[], exec)?;
    if imp.unresolved > 0 {
        return Err(Error::Indeterminate {
            context: format!("{} best-approximation comparisons", imp.unresolved),
            budget_bits: prec.budget_bits,
        });
    }
    Ok(imp.xs.into_iter().map(Int::from).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinkowskiOutcome {
    /// All solutions lie on one line through the origin.
    Pass { solutions: Vec<(Int, Int)> },
    CounterexamplePair((Int, Int), (Int, Int)),
}

/// Enumerates `(p, q)` with `0 < q <= bound` and `|qζ - p| <= 1/(2·bound)`
/// and checks that they are pairwise proportional. Negative `q` only mirrors
/// these and `q = 0` admits no nonzero solution.
pub fn minkowski_2d_check(src: &RealSource, bound: &Rat, prec: Precision) -> Result<MinkowskiOutcome> {
    if bound <= &Rat::one() {
        return Err(invalid("bound must exceed 1"));
    }
    let t = (bound * rat_int(Int::from(2))).recip();
    let q_max = floor_rat(bound);
    let kernel = FastKernel::new(src, prec)?;
    let mut solutions: Vec<(Int, Int)> = Vec::new();
    let mut q = Int::one();
    while q <= q_max {
        let skip = match (&kernel, q.to_u64()) {
            (Some(k), Some(qs)) if qs <= MAX_X => fixed_le(k.distance(qs), &t) == Some(false),
            _ => false,
        };
        if !skip {
            for p in close_numerators(&q, &t, src, prec)? {
                solutions.push((p, q.clone()));
            }
        }
        q += 1u32;
    }
    if let Some(first) = solutions.first() {
        for other in &solutions[1..] {
            if &first.0 * &other.1 - &other.0 * &first.1 != Int::zero() {
                return Ok(MinkowskiOutcome::CounterexamplePair(first.clone(), other.clone()));
            }
        }
    }
    Ok(MinkowskiOutcome::Pass { solutions })
}
