//! Exact-integer and rational helpers shared across the crate.
//!
//! Logarithms are only ever used as certified bounds: [`log2_bounds`] returns
//! an interval of `f64` values that provably contains the true base-2
//! logarithm, and [`dyadic`] turns such a bound into an exact rational.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(v: Int) -> Rat {
    Rat::from_integer(v)
}

pub fn pow2(bits: u64) -> Int {
    Int::one() << bits
}

pub fn pow2_uint(bits: u64) -> BigUint {
    BigUint::one() << bits
}

/// Number of significant bits of `|v|` (0 for zero).
pub fn bits(v: &Int) -> u64 {
    v.bits()
}

pub fn floor_rat(v: &Rat) -> Int {
    v.numer().div_floor(v.denom())
}

pub fn ceil_rat(v: &Rat) -> Int {
    -((-v.numer()).div_floor(v.denom()))
}

/// Nearest integer, ties rounded up.
pub fn round_rat(v: &Rat) -> Int {
    floor_rat(&(v + Rat::new(Int::one(), Int::from(2))))
}

pub fn abs_rat(v: &Rat) -> Rat {
    v.abs()
}

/// Distance of a rational to the nearest integer.
pub fn frac_distance(v: &Rat) -> Rat {
    let f = v - rat_int(floor_rat(v));
    let g = Rat::one() - &f;
    if f <= g {
        f
    } else {
        g
    }
}

fn widen(lo: f64, hi: f64) -> (f64, f64) {
    let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    (lo - slack, hi + slack)
}

/// Certified bounds on `log2(n)` for `n >= 1`.
pub fn log2_bounds_uint(n: &BigUint) -> (f64, f64) {
    assert!(!n.is_zero(), "log2 of zero");
    let b = n.bits();
    if b <= 53 {
        let v = n.to_f64().unwrap_or(f64::MAX);
        let l = libm::log2(v);
        return widen(l, l);
    }
    let shift = b.saturating_sub(64);
    let top = (n >> shift).to_u64().unwrap_or(u64::MAX);
    // n / 2^shift lies in [top, top + 1)
    let lo_m = (top as f64) * (1.0 - 2.0 * f64::EPSILON);
    let hi_m = (top as f64 + 1.0) * (1.0 + 2.0 * f64::EPSILON);
    let s = shift as f64;
    widen(libm::log2(lo_m) + s, libm::log2(hi_m) + s)
}

/// Certified bounds on `log2(v)` for a positive rational.
pub fn log2_bounds(v: &Rat) -> (f64, f64) {
    assert!(v.is_positive(), "log2 of a non-positive rational");
    let (nl, nh) = log2_bounds_uint(v.numer().magnitude());
    let (dl, dh) = log2_bounds_uint(v.denom().magnitude());
    (nl - dh, nh - dl)
}

/// Midpoint estimate of `log2(v)`; for reporting only.
pub fn log2_approx(v: &Rat) -> f64 {
    let (lo, hi) = log2_bounds(v);
    0.5 * (lo + hi)
}

pub fn log2_int_approx(v: &Int) -> f64 {
    let (lo, hi) = log2_bounds_uint(v.magnitude());
    0.5 * (lo + hi)
}

/// Exact rational value of a finite `f64`.
pub fn dyadic(f: f64) -> Rat {
    assert!(f.is_finite(), "non-finite float");
    if f == 0.0 {
        return Rat::zero();
    }
    let bits = f.to_bits();
    let sign = if bits >> 63 == 1 { Sign::Minus } else { Sign::Plus };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let m = Int::from_biguint(sign, BigUint::from(mant));
    if e >= 0 {
        rat_int(m << e as u64)
    } else {
        Rat::new(m, pow2((-e) as u64))
    }
}

/// Best-effort `f64` view of a rational (for reports).
pub fn to_f64(v: &Rat) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let sign = if v.is_negative() { -1.0 } else { 1.0 };
    let l = log2_approx(&v.abs());
    if l.abs() < 1000.0 {
        let nb = v.numer().bits() as i64;
        let db = v.denom().bits() as i64;
        let shift_n = (nb - 60).max(0) as u64;
        let shift_d = (db - 60).max(0) as u64;
        let n = (v.numer().abs() >> shift_n).to_f64().unwrap_or(0.0);
        let d = (v.denom() >> shift_d).to_f64().unwrap_or(1.0);
        sign * (n / d) * libm::exp2(shift_n as f64 - shift_d as f64)
    } else {
        sign * libm::exp2(l)
    }
}

/// `⌈s^e⌉` for an integer `s >= 1` and a rational `e >= 0`.
pub fn ceil_pow(s: &Int, e: &Rat) -> Int {
    assert!(s.is_positive() && !e.is_negative());
    let a = e.numer().to_u64().expect("exponent numerator too large");
    let b = e.denom().to_u32().expect("exponent denominator too large");
    let t = num_traits::pow(s.clone(), a as usize);
    if b == 1 {
        return t;
    }
    let r = t.nth_root(b);
    if num_traits::pow(r.clone(), b as usize) == t {
        r
    } else {
        r + 1
    }
}

/// `⌊base^n⌋` for a positive rational base.
pub fn floor_pow(base: &Rat, n: u32) -> Int {
    let num = num_traits::pow(base.numer().clone(), n as usize);
    let den = num_traits::pow(base.denom().clone(), n as usize);
    num.div_floor(&den)
}

pub fn rat_pow(base: &Rat, n: u32) -> Rat {
    num_traits::pow(base.clone(), n as usize)
}

/// Exact test of `a^p >= b^q` for positive integers and small exponents
/// given as rationals: compares `a^(p)` with `b^(q)` by clearing denominators.
pub fn power_ge(a: &Int, p: &Rat, b: &Int, q: &Rat) -> bool {
    let den = p.denom().lcm(q.denom());
    let pe = (p * rat_int(den.clone())).to_integer().to_u64().expect("exponent");
    let qe = (q * rat_int(den)).to_integer().to_u64().expect("exponent");
    num_traits::pow(a.clone(), pe as usize) >= num_traits::pow(b.clone(), qe as usize)
}
