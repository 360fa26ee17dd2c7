//! Certified nearest-integer distances `‖xζ‖` and deviations `|xζ - p|`.

use alloc::string::String;

use num_traits::{One, Signed, Zero};

use crate::arith::{ceil_rat, floor_rat, pow2, rat, rat_int, Int, Rat};
use crate::error::{Error, Result};
use crate::source::{Enclosure, Precision, RealSource};

/// Certified enclosure of a distance, `0 <= lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceInterval {
    pub lo: Rat,
    pub hi: Rat,
    pub target_precision: u64,
    /// Set when the budget ran out before reaching the target width.
    pub indeterminate: bool,
}

impl DistanceInterval {
    pub fn exact(v: Rat) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
            target_precision: 0,
            indeterminate: false,
        }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_zero(&self) -> bool {
        self.hi.is_zero()
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// `Some(true)` if certainly `<= t`, `Some(false)` if certainly `> t`.
    pub fn le(&self, t: &Rat) -> Option<bool> {
        if &self.hi <= t {
            Some(true)
        } else if &self.lo > t {
            Some(false)
        } else {
            None
        }
    }

    /// Certified strict ordering against another interval.
    pub fn certainly_lt(&self, other: &DistanceInterval) -> bool {
        self.hi < other.lo
    }

    pub fn scale(&self, factor: &Int) -> DistanceInterval {
        let f = rat_int(factor.abs());
        DistanceInterval {
            lo: &self.lo * &f,
            hi: &self.hi * &f,
            target_precision: self.target_precision,
            indeterminate: self.indeterminate,
        }
    }
}

/// Range of `‖t‖` for `t` in the given enclosure.
pub fn nearest_of(e: &Enclosure) -> (Rat, Rat) {
    let half = rat(1, 2);
    let d = |v: &Rat| {
        let f = v - rat_int(floor_rat(v));
        let g = Rat::one() - &f;
        if f <= g {
            f
        } else {
            g
        }
    };
    let dl = d(&e.lo);
    let dh = d(&e.hi);
    let contains_int = ceil_rat(&e.lo) <= floor_rat(&e.hi);
    let shifted_lo = &e.lo - &half;
    let shifted_hi = &e.hi - &half;
    let contains_half = ceil_rat(&shifted_lo) <= floor_rat(&shifted_hi);
    let lo = if contains_int {
        Rat::zero()
    } else if dl <= dh {
        dl.clone()
    } else {
        dh.clone()
    };
    let hi = if contains_half {
        half
    } else if dl >= dh {
        dl
    } else {
        dh
    };
    (lo, hi)
}

fn interval_with(lo: Rat, hi: Rat, target: u64) -> DistanceInterval {
    let ok = (&hi - &lo) * rat_int(pow2(target)) <= Rat::one();
    DistanceInterval {
        lo,
        hi,
        target_precision: target,
        indeterminate: !ok,
    }
}

fn source_bits(x: &Int, precision: u64) -> u64 {
    precision + x.bits() + 1
}

/// Certified `‖xζ‖` with width at most `2^-precision` unless the budget runs out.
pub fn nearest_distance(x: &Int, src: &RealSource, precision: u64, prec: Precision) -> Result<DistanceInterval> {
    let want = source_bits(x, precision);
    let p = want.min(prec.budget_bits.max(1));
    let e = src.enclosure(p)?.affine(x, &Int::zero());
    let (lo, hi) = nearest_of(&e);
    Ok(interval_with(lo, hi, precision))
}

/// Certified `|xζ - p|` with width at most `2^-precision` unless the budget runs out.
pub fn deviation(x: &Int, p: &Int, src: &RealSource, precision: u64, prec: Precision) -> Result<DistanceInterval> {
    let want = source_bits(x, precision);
    let bits = want.min(prec.budget_bits.max(1));
    let e = src.enclosure(bits)?.affine(x, p);
    Ok(interval_with(abs_lo(&e), abs_hi(&e), precision))
}

fn abs_lo(e: &Enclosure) -> Rat {
    if !e.lo.is_positive() && !e.hi.is_negative() {
        Rat::zero()
    } else if e.lo.is_positive() {
        e.lo.clone()
    } else {
        -e.hi.clone()
    }
}

fn abs_hi(e: &Enclosure) -> Rat {
    let a = e.lo.abs();
    let b = e.hi.abs();
    if a >= b {
        a
    } else {
        b
    }
}

/// Refines a distance until its width is at most `lo·2^-rel_bits`, it is exact,
/// or the budget runs out (flagged indeterminate).
pub fn relative_distance(
    x: &Int,
    src: &RealSource,
    rel_bits: u64,
    prec: Precision,
    f: impl Fn(&Int, &RealSource, u64, Precision) -> Result<DistanceInterval>,
) -> Result<DistanceInterval> {
    let mut p = 64u64;
    loop {
        let mut d = f(x, src, p, prec)?;
        if d.is_exact() {
            d.indeterminate = false;
            return Ok(d);
        }
        if d.lo.is_positive() && d.width() * rat_int(pow2(rel_bits)) <= d.lo {
            d.indeterminate = false;
            return Ok(d);
        }
        if source_bits(x, p) >= prec.budget_bits {
            d.indeterminate = true;
            return Ok(d);
        }
        p = p.saturating_mul(2);
    }
}

/// `‖xζ‖` to 64 relative bits.
pub fn nearest_distance_rel(x: &Int, src: &RealSource, prec: Precision) -> Result<DistanceInterval> {
    relative_distance(x, src, 64, prec, nearest_distance)
}

/// `|xζ - p|` to 64 relative bits.
pub fn deviation_rel(x: &Int, p: &Int, src: &RealSource, prec: Precision) -> Result<DistanceInterval> {
    relative_distance(x, src, 64, prec, |x, s, b, pr| deviation(x, p, s, b, pr))
}

/// Certified decision of `|xζ - p| <= t`, refining until decided.
pub fn deviation_le(x: &Int, p: &Int, src: &RealSource, t: &Rat, prec: Precision, context: impl Fn() -> String) -> Result<bool> {
    let mut bits = 32u64;
    loop {
        let d = deviation(x, p, src, bits, prec)?;
        if let Some(v) = d.le(t) {
            return Ok(v);
        }
        if source_bits(x, bits) >= prec.budget_bits {
            return Err(Error::Indeterminate {
                context: context(),
                budget_bits: prec.budget_bits,
            });
        }
        bits = bits.saturating_mul(2);
    }
}

/// Certified decision of `‖xζ‖ < ‖yζ‖`, `None` if tied or undecidable within budget.
pub fn distance_lt(x: &Int, y: &Int, src: &RealSource, prec: Precision) -> Result<Option<bool>> {
    let mut bits = 64u64;
    loop {
        let a = nearest_distance(x, src, bits, prec)?;
        let b = nearest_distance(y, src, bits, prec)?;
        if a.certainly_lt(&b) {
            return Ok(Some(true));
        }
        if b.certainly_lt(&a) || (a.is_exact() && b.is_exact()) {
            return Ok(Some(false));
        }
        if source_bits(x.max(y), bits) >= prec.budget_bits {
            return Ok(None);
        }
        bits = bits.saturating_mul(2);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::source::CfTail;

    #[test]
    fn rational_distance_is_exact() {
        let src = RealSource::from_ratio(2, 3);
        let d = nearest_distance(&int(1), &src, 30, Precision::default()).unwrap();
        assert_eq!((d.lo.clone(), d.hi.clone()), (rat(1, 3), rat(1, 3)));
        assert!(!d.indeterminate);
    }

    #[test]
    fn golden_two_distance() {
        // ‖2ζ‖ = √5 - 2 = 0.2360679774997897...
        let d = nearest_distance(&int(2), &RealSource::golden_minus_one(), 60, Precision::default()).unwrap();
        assert!(d.lo > rat(2360679774997, 10_000_000_000_000));
        assert!(d.hi < rat(2360679774998, 10_000_000_000_000));
        assert!(d.width() * rat_int(pow2(60)) <= Rat::one());
    }

    #[test]
    fn convergent_distance_bounds() {
        let src = RealSource::cf_small(&[0, 2, 3, 1, 4, 2, 5, 1, 7], CfTail::Ones).unwrap();
        let cf = src.as_cf().unwrap();
        let conv = cf.prefix_convergents();
        for l in 0..6 {
            let (_, s_l) = &conv[l];
            let (_, s_l1) = &conv[l + 1];
            let (_, s_l2) = &conv[l + 2];
            let a_l2 = cf.quotient(l + 2).unwrap();
            let d = nearest_distance_rel(s_l, &src, Precision::default()).unwrap();
            assert!(d.lo >= Rat::new(a_l2, s_l2.clone()));
            assert!(d.hi <= Rat::new(Int::one(), s_l1.clone()));
        }
    }

    #[test]
    fn deviation_threshold_decided() {
        let src = RealSource::golden_minus_one();
        let yes = deviation_le(&int(2), &int(1), &src, &rat(1, 4), Precision::default(), String::new).unwrap();
        let no = deviation_le(&int(3), &int(1), &src, &rat(1, 6), Precision::default(), String::new).unwrap();
        assert!(yes && !no);
    }

    #[test]
    fn nearest_of_handles_half_and_integer() {
        let e = Enclosure { lo: rat(2, 5), hi: rat(7, 5) };
        assert_eq!(nearest_of(&e), (Rat::zero(), rat(1, 2)));
        let e = Enclosure { lo: rat(-11, 10), hi: rat(-21, 20) };
        assert_eq!(nearest_of(&e), (rat(1, 20), rat(1, 10)));
    }

    #[test]
    fn distance_order() {
        let src = RealSource::golden_minus_one();
        assert_eq!(distance_lt(&int(5), &int(3), &src, Precision::default()).unwrap(), Some(true));
        let r = RealSource::from_ratio(1, 4);
        assert_eq!(distance_lt(&int(1), &int(3), &r, Precision::default()).unwrap(), Some(false));
    }
}
