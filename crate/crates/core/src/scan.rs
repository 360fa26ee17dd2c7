//! Exhaustive scans for `min_x max_j ‖xζ_j‖`.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{Int, Rat};
use crate::distance::nearest_distance;
use crate::error::Result;
use crate::kernel::{FastKernel, Fixed, MAX_X};
use crate::partition::{segments, Executor};
use crate::source::{Precision, RealSource};

const CHUNK: u64 = 1 << 16;

/// Result of comparing two candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Less,
    NotLess,
    /// Could not be separated within the precision budget.
    Unresolved,
}

/// Certified `‖aζ_a‖ < ‖bζ_b‖` for distances against possibly different sources.
pub fn compare_distances(a: (&Int, &RealSource), b: (&Int, &RealSource), prec: Precision) -> Result<Order> {
    let top = a.0.bits().max(b.0.bits());
    let mut bits = 64u64;
    loop {
        let da = nearest_distance(a.0, a.1, bits, prec)?;
        let db = nearest_distance(b.0, b.1, bits, prec)?;
        if da.hi < db.lo {
            return Ok(Order::Less);
        }
        if db.hi <= da.lo {
            return Ok(Order::NotLess);
        }
        if bits + top + 1 >= prec.budget_bits {
            return Ok(Order::Unresolved);
        }
        bits *= 2;
    }
}

pub struct Scanner<'a> {
    sources: &'a [RealSource],
    kernels: Vec<Option<FastKernel>>,
    prec: Precision,
}

/// Strict improvements of `max_j ‖xζ_j‖` over `1 <= x <= end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Improvements {
    pub xs: Vec<u64>,
    /// Comparisons that fell back to "not less" because the budget ran out.
    pub unresolved: u64,
}

impl Improvements {
    /// Best `x <= window`: the last improvement not exceeding it.
    pub fn best_at(&self, window: u64) -> Option<u64> {
        let i = self.xs.partition_point(|&x| x <= window);
        (i > 0).then(|| self.xs[i - 1])
    }
}

impl<'a> Scanner<'a> {
    pub fn new(sources: &'a [RealSource], prec: Precision) -> Result<Self> {
        let kernels = sources
            .iter()
            .map(|s| FastKernel::new(s, prec))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { sources, kernels, prec })
    }

    fn fixed(&self, x: u64) -> Option<Fixed> {
        if x > MAX_X {
            return None;
        }
        let mut acc = Fixed::ZERO;
        for k in &self.kernels {
            acc = acc.max(k.as_ref()?.distance(x));
        }
        Some(acc)
    }

    /// Enclosure of `max_j ‖xζ_j‖` with width at most `2^-bits`.
    pub fn max_distance(&self, x: &Int, bits: u64) -> Result<(Rat, Rat)> {
        let mut lo = Rat::zero();
        let mut hi = Rat::zero();
        for s in self.sources {
            let d = nearest_distance(x, s, bits, self.prec)?;
            if d.lo > lo {
                lo = d.lo;
            }
            if d.hi > hi {
                hi = d.hi;
            }
        }
        Ok((lo, hi))
    }

    /// Certified `value(x) < value(y)`.
    pub fn compare(&self, x: u64, y: u64) -> Result<Order> {
        if let (Some(a), Some(b)) = (self.fixed(x), self.fixed(y)) {
            if a.lt(&b) {
                return Ok(Order::Less);
            }
            if b.hi <= a.lo {
                return Ok(Order::NotLess);
            }
        }
        self.compare_exact(&Int::from(x), &Int::from(y))
    }

    pub fn compare_exact(&self, x: &Int, y: &Int) -> Result<Order> {
        let top = x.bits().max(y.bits());
        let mut bits = 64u64;
        loop {
            let (al, ah) = self.max_distance(x, bits)?;
            let (bl, bh) = self.max_distance(y, bits)?;
            if ah < bl {
                return Ok(Order::Less);
            }
            if bh <= al {
                return Ok(Order::NotLess);
            }
            if bits + top + 1 >= self.prec.budget_bits {
                return Ok(Order::Unresolved);
            }
            bits *= 2;
        }
    }

    fn is_zero(&self, x: u64) -> Result<bool> {
        if let Some(f) = self.fixed(x) {
            if f.lo > 0 {
                return Ok(false);
            }
        }
        let (_, hi) = self.max_distance(&Int::from(x), 64)?;
        Ok(hi.is_zero())
    }

    fn local(&self, start: u64, stop: u64) -> Result<Improvements> {
        let mut out = Improvements {
            xs: Vec::new(),
            unresolved: 0,
        };
        let mut best: Option<(u64, Option<Fixed>)> = None;
        for x in start..=stop {
            let fx = self.fixed(x);
            let better = match &best {
                None => true,
                Some((b, fb)) => {
                    match (fx, fb) {
                        (Some(a), Some(c)) if a.lt(c) => true,
                        (Some(a), Some(c)) if c.hi <= a.lo => false,
                        _ => match self.compare(x, *b)? {
                            Order::Less => true,
                            Order::NotLess => false,
                            Order::Unresolved => {
                                out.unresolved += 1;
                                false
                            }
                        },
                    }
                }
            };
            if better {
                out.xs.push(x);
                best = Some((x, fx));
                if fx.is_some_and(|f| f.is_zero()) || (fx.is_none() && self.is_zero(x)?) {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// All strict improvements over `[1, end]`, split at `cuts` for the executor.
    pub fn improvements(&self, end: u64, cuts: &[u64], exec: &impl Executor) -> Result<Improvements> {
        let segs = segments(end, cuts, CHUNK);
        let parts = exec.map(segs.len(), |i| self.local(segs[i].0, segs[i].1));
        let mut merged = Improvements {
            xs: Vec::new(),
            unresolved: 0,
        };
        for part in parts {
            let part = part?;
            merged.unresolved += part.unresolved;
            for x in part.xs {
                let accept = match merged.xs.last() {
                    None => true,
                    Some(&b) => match self.compare(x, b)? {
                        Order::Less => true,
                        Order::NotLess => false,
                        Order::Unresolved => {
                            merged.unresolved += 1;
                            false
                        }
                    },
                };
                if accept {
                    merged.xs.push(x);
                }
            }
            if let Some(&b) = merged.xs.last() {
                if self.is_zero(b)? {
                    break;
                }
            }
        }
        Ok(merged)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Sequential;

    #[test]
    fn golden_improvements_are_fibonacci() {
        let src = [RealSource::golden_minus_one()];
        let s = Scanner::new(&src, Precision::default()).unwrap();
        let imp = s.improvements(100, &[], &Sequential).unwrap();
        assert_eq!(imp.xs, [1, 2, 3, 5, 8, 13, 21, 34, 55, 89]);
        assert_eq!(imp.best_at(60), Some(55));
    }

    #[test]
    fn chunked_merge_matches_single_pass() {
        let src = [RealSource::sqrt2_minus_one(), RealSource::golden_minus_one()];
        let s = Scanner::new(&src, Precision::default()).unwrap();
        let whole = s.local(1, 5000).unwrap();
        let split = s.improvements(5000, &[7, 100, 101, 2500, 4999], &Sequential).unwrap();
        assert_eq!(whole, split);
    }

    #[test]
    fn rational_pair_hits_zero() {
        let src = [RealSource::from_ratio(1, 3), RealSource::from_ratio(1, 7)];
        let s = Scanner::new(&src, Precision::default()).unwrap();
        let imp = s.improvements(1000, &[], &Sequential).unwrap();
        assert_eq!(imp.xs.last(), Some(&21));
    }
}
