//! Fixed-point scanning kernel for `‖xζ‖` at small `x`.
//!
//! The fractional part of ζ is held as a pair of 96-bit fixed-point bounds,
//! so for `x < 2^31` every product fits in a `u128` and each distance comes
//! out as a certified interval in units of `2^-96`. Comparisons that the
//! intervals cannot separate are left to the exact rational path.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{floor_rat, pow2, rat_int, Int, Rat};
use crate::error::Result;
use crate::source::{Precision, RealSource};

pub const FRAC_BITS: u32 = 96;
const ONE: u128 = 1u128 << FRAC_BITS;
const HALF: u128 = 1u128 << (FRAC_BITS - 1);

/// Largest `x` the kernel accepts.
pub const MAX_X: u64 = (1u64 << 31) - 1;

/// Enclosure width requested for the fixed-point value; a smaller budget
/// usually leaves the enclosure too wide and the caller falls back.
const ENCLOSURE_BITS: u64 = 160;

/// Distance enclosure in units of `2^-96`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fixed {
    pub lo: u128,
    pub hi: u128,
}

impl Fixed {
    pub const ZERO: Fixed = Fixed { lo: 0, hi: 0 };

    pub fn lt(&self, other: &Fixed) -> bool {
        self.hi < other.lo
    }

    pub fn max(self, other: Fixed) -> Fixed {
        Fixed {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.hi == 0
    }

    /// Exact rational endpoints.
    pub fn to_rat_bounds(&self) -> (Rat, Rat) {
        let den = pow2(u64::from(FRAC_BITS));
        (
            Rat::new(Int::from(self.lo), den.clone()),
            Rat::new(Int::from(self.hi), den),
        )
    }
}

#[derive(Clone, Debug)]
enum Repr {
    /// Fractional part in `[lo, lo + width]` units of `2^-96`.
    Interval { lo: u128, width: u128 },
    /// Exact fraction `num/den` with `den < 2^31`.
    Exact { num: u64, den: u64 },
}

#[derive(Clone, Debug)]
pub struct FastKernel {
    repr: Repr,
}

fn dist(t: u128) -> u128 {
    if t <= HALF {
        t
    } else {
        ONE - t
    }
}

impl FastKernel {
    /// Builds the kernel, or `None` if ζ cannot be pinned down to 96 fractional bits.
    pub fn new(src: &RealSource, prec: Precision) -> Result<Option<FastKernel>> {
        if let Some(v) = src.exact_value() {
            let den = v.denom();
            if let Some(d) = den.to_u64().filter(|d| *d <= MAX_X) {
                let num = v.numer().mod_floor(den).to_u64().expect("reduced below denominator");
                return Ok(Some(FastKernel {
                    repr: Repr::Exact { num, den: d },
                }));
            }
        }
        let e = src.enclosure(ENCLOSURE_BITS.min(prec.budget_bits))?;
        let base = floor_rat(&e.lo);
        let scale = rat_int(pow2(u64::from(FRAC_BITS)));
        let lo = floor_rat(&((&e.lo - rat_int(base.clone())) * &scale));
        let hi = crate::arith::ceil_rat(&((&e.hi - rat_int(base)) * &scale));
        let (Some(lo), Some(hi)) = (lo.to_u128(), hi.to_u128()) else {
            return Ok(None);
        };
        if hi < lo || hi - lo > 16 {
            return Ok(None);
        }
        Ok(Some(FastKernel {
            repr: Repr::Interval { lo, width: hi - lo },
        }))
    }

    /// Certified enclosure of `‖xζ‖` for `1 <= x <= MAX_X`.
    pub fn distance(&self, x: u64) -> Fixed {
        debug_assert!((1..=MAX_X).contains(&x));
        match self.repr {
            Repr::Exact { num, den } => {
                let r = (u128::from(num) * u128::from(x)) % u128::from(den);
                let m = r.min(u128::from(den) - r);
                if m == 0 {
                    return Fixed::ZERO;
                }
                let scaled = m << FRAC_BITS;
                let d = u128::from(den);
                let q = scaled / d;
                let exact = scaled.is_multiple_of(d);
                Fixed {
                    lo: q,
                    hi: if exact { q } else { q + 1 },
                }
            }
            Repr::Interval { lo, width } => {
                let x = u128::from(x);
                let a = (lo * x) & (ONE - 1);
                let w = width * x;
                let b = a + w;
                if b >= ONE {
                    // crosses an integer
                    let hi = dist(a).max(b - ONE);
                    return Fixed { lo: 0, hi };
                }
                if a == 0 {
                    return Fixed { lo: 0, hi: dist(b) };
                }
                let (da, db) = (dist(a), dist(b));
                let hi = if a <= HALF && HALF <= b { HALF } else { da.max(db) };
                Fixed { lo: da.min(db), hi }
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact { .. })
    }
}

/// Kernels for several sources; `None` entries use the rational path.
pub fn kernels(sources: &[RealSource], prec: Precision) -> Result<alloc::vec::Vec<Option<FastKernel>>> {
    sources.iter().map(|s| FastKernel::new(s, prec)).collect()
}

/// `true` if `x` fits the kernel.
pub fn fits(x: &Int) -> bool {
    !x.is_zero() && x.to_u64().is_some_and(|v| v <= MAX_X)
}

/// Distance enclosure in units of `2^-bits` of a [`WideKernel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WideDistance {
    pub lo: Int,
    pub hi: Int,
}

impl WideDistance {
    pub fn lt(&self, other: &WideDistance) -> bool {
        self.hi < other.lo
    }
}

/// Big-integer fixed-point bounds on ζ, for distances at large `x` where
/// refining a fresh rational enclosure per query would dominate.
#[derive(Clone, Debug)]
pub struct WideKernel {
    lo: Int,
    hi: Int,
    bits: u64,
}

impl WideKernel {
    /// `ζ` to `bits` fractional bits, capped by the budget.
    pub fn new(src: &RealSource, bits: u64, prec: Precision) -> Result<Self> {
        let bits = bits.min(prec.budget_bits).max(8);
        let e = src.enclosure(bits)?.round_out(bits);
        let one = pow2(bits);
        Ok(Self {
            lo: e.lo.numer() * (&one / e.lo.denom()),
            hi: e.hi.numer() * (&one / e.hi.denom()),
            bits,
        })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Certified enclosure of `‖xζ‖`.
    pub fn distance(&self, x: &Int) -> WideDistance {
        let x = x.abs();
        let one = pow2(self.bits);
        let half = pow2(self.bits - 1);
        let a = &x * &self.lo;
        let width = &x * &self.hi - &a;
        if width >= half {
            return WideDistance { lo: Int::zero(), hi: half };
        }
        let fa = a.mod_floor(&one);
        let end = &fa + &width;
        let d = |t: &Int| if t <= &half { t.clone() } else { &one - t };
        let contains_int = fa.is_zero() || end >= one;
        let contains_half = (fa <= half && half <= end) || end >= &one + &half;
        let fb = if end >= one { &end - &one } else { end };
        let (da, db) = (d(&fa), d(&fb));
        WideDistance {
            lo: if contains_int { Int::zero() } else { da.clone().min(db.clone()) },
            hi: if contains_half { half } else { da.max(db) },
        }
    }

    /// Nearest integer `y` to `xζ` and the certified interval for `|xζ - y|`
    /// in units of `2^-bits`, when the enclosure decides `y`.
    pub fn deviation(&self, x: &Int) -> Option<(Int, WideDistance)> {
        let one = pow2(self.bits);
        let half = pow2(self.bits - 1);
        let (a, b) = if x.is_negative() { (x * &self.hi, x * &self.lo) } else { (x * &self.lo, x * &self.hi) };
        let ya = (&a + &half).div_floor(&one);
        let yb = (&b + &half).div_floor(&one);
        if ya != yb {
            return None;
        }
        let base = &ya * &one;
        let (da, db) = (&a - &base, &b - &base);
        let lo = if da.is_negative() && db.is_positive() { Int::zero() } else { da.abs().min(db.abs()) };
        let hi = da.abs().max(db.abs());
        Some((ya, WideDistance { lo, hi }))
    }

    /// Certified comparison of `‖aζ‖` here with `‖bζ'‖` under `other`, when
    /// both kernels share a scale and the intervals separate.
    pub fn compare(&self, a: &Int, other: &WideKernel, b: &Int) -> Option<bool> {
        if self.bits != other.bits {
            return None;
        }
        let da = self.distance(a);
        let db = other.distance(b);
        if da.lt(&db) {
            Some(true)
        } else if db.hi <= da.lo {
            Some(false)
        } else {
            None
        }
    }
}
