//! Real numbers presented through certified rational enclosures.
//!
//! A [`RealSource`] never produces a floating-point value. Every query goes
//! through [`RealSource::enclosure`], which returns exact rationals
//! `lo <= ζ <= hi` with `hi - lo <= 2^-p`; enclosures at increasing `p` are
//! nested.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use num_integer::Integer;
use spin::Mutex;

use crate::arith::{bits, floor_pow, floor_rat, pow2, rat_int, Int, Rat};
use crate::error::{invalid, Error, Result};

/// Default precision budget in bits for refinement loops.
pub const DEFAULT_BUDGET_BITS: u64 = 4096;

/// Refinement budget shared by every certified decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub budget_bits: u64,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            budget_bits: DEFAULT_BUDGET_BITS,
        }
    }
}

impl Precision {
    pub fn with_budget(budget_bits: u64) -> Self {
        Self { budget_bits }
    }

    /// Raises the budget to cover every source's stored scales.
    pub fn covering(self, sources: &[RealSource]) -> Self {
        let need = sources.iter().map(RealSource::suggested_budget).max().unwrap_or(0);
        Self {
            budget_bits: self.budget_bits.max(need),
        }
    }
}

/// How a continued-fraction stream continues past its explicit prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CfTail {
    /// The prefix is the whole expansion; the source is rational.
    Terminate,
    /// Partial quotients equal to 1 forever.
    Ones,
    /// The given block repeats forever.
    Periodic(Vec<Int>),
    /// Nothing is known beyond the prefix except that quotients are `>= 1`.
    Unknown,
}

/// How a binary series `Σ 2^(-a_n)` continues past its explicit exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesTail {
    /// The listed exponents are all the terms.
    Finite,
    /// `a_n = ⌊(1 + λ)^n⌋` for the remaining indices (1-based).
    Geometric(Rat),
    /// Further strictly increasing exponents exist but are unknown.
    Unknown,
}

#[derive(Clone, PartialEq, Eq)]
pub struct CfData {
    quotients: Vec<Int>,
    tail: CfTail,
    // (r_l, s_l) for every index of the explicit prefix
    convergents: Vec<(Int, Int)>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct SeriesData {
    exponents: Vec<u64>,
    tail: SeriesTail,
}

#[derive(Clone, PartialEq, Eq)]
pub enum SourceKind {
    Rational(Rat),
    Cf(CfData),
    BinarySeries(SeriesData),
    Power { base: RealSource, exponent: u32 },
}

/// An immutable real number; clones share the underlying data and the
/// enclosure cache.
#[derive(Clone)]
pub struct RealSource {
    kind: Arc<SourceKind>,
    cache: Arc<Mutex<Option<Cached>>>,
}

/// Most precise enclosure computed so far.
struct Cached {
    bits: u64,
    enc: Enclosure,
}

impl PartialEq for RealSource {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for RealSource {}

/// `m / 2^q` in lowest terms without a gcd.
fn dyadic_ratio(m: Int, q: u64) -> Rat {
    let tz = m.trailing_zeros().unwrap_or(q).min(q);
    Rat::new_raw(m >> tz, pow2(q - tz))
}

/// Exact rational bounds `lo <= ζ <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rat,
    pub hi: Rat,
}

impl Enclosure {
    pub fn exact(v: Rat) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
        }
    }

    /// `[⌊lo·2^q⌋, ⌈hi·2^q⌉] / 2^q`.
    pub fn round_out(&self, q: u64) -> Enclosure {
        let lo = (self.lo.numer() << q).div_floor(self.lo.denom());
        let hi = (self.hi.numer() << q).div_ceil(self.hi.denom());
        Enclosure {
            lo: dyadic_ratio(lo, q),
            hi: dyadic_ratio(hi, q),
        }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Enclosure of `x·ζ - p`.
    pub fn affine(&self, x: &Int, p: &Int) -> Enclosure {
        let xr = rat_int(x.clone());
        let pr = rat_int(p.clone());
        let a = &self.lo * &xr - &pr;
        let b = &self.hi * &xr - &pr;
        if a <= b {
            Enclosure { lo: a, hi: b }
        } else {
            Enclosure { lo: b, hi: a }
        }
    }
}

impl CfData {
    fn new(quotients: Vec<Int>, tail: CfTail) -> Result<Self> {
        if quotients.is_empty() {
            return Err(invalid("continued fraction needs at least a0"));
        }
        if quotients.iter().skip(1).any(|a| !a.is_positive()) {
            return Err(invalid("partial quotients after a0 must be >= 1"));
        }
        if let CfTail::Periodic(block) = &tail {
            if block.is_empty() || block.iter().any(|a| !a.is_positive()) {
                return Err(invalid("periodic block must be non-empty with quotients >= 1"));
            }
        }
        let mut convergents = Vec::with_capacity(quotients.len());
        let (mut r1, mut s1) = (Int::one(), Int::zero());
        let (mut r2, mut s2) = (Int::zero(), Int::one());
        for a in &quotients {
            let r = a * &r1 + &r2;
            let s = a * &s1 + &s2;
            r2 = core::mem::replace(&mut r1, r.clone());
            s2 = core::mem::replace(&mut s1, s.clone());
            convergents.push((r, s));
        }
        Ok(Self {
            quotients,
            tail,
            convergents,
        })
    }

    pub fn prefix(&self) -> &[Int] {
        &self.quotients
    }

    pub fn tail(&self) -> &CfTail {
        &self.tail
    }

    /// Convergents of the explicit prefix.
    pub fn prefix_convergents(&self) -> &[(Int, Int)] {
        &self.convergents
    }

    /// Partial quotient `a_i`, or `None` when the stream ends or is unknown there.
    pub fn quotient(&self, i: usize) -> Option<Int> {
        if let Some(a) = self.quotients.get(i) {
            return Some(a.clone());
        }
        let j = i - self.quotients.len();
        match &self.tail {
            CfTail::Terminate | CfTail::Unknown => None,
            CfTail::Ones => Some(Int::one()),
            CfTail::Periodic(block) => Some(block[j % block.len()].clone()),
        }
    }

    pub fn terminates(&self) -> bool {
        self.tail == CfTail::Terminate
    }

    /// Walks convergents `(index, r, s, r_prev, s_prev)` until `stop` yields a value
    /// or the stream has no further known quotient.
    fn walk<T>(&self, mut stop: impl FnMut(usize, &Int, &Int, &Int, &Int) -> Option<T>) -> (Option<T>, usize) {
        let (mut r_prev, mut s_prev) = (Int::one(), Int::zero());
        for (i, (r, s)) in self.convergents.iter().enumerate() {
            if let Some(t) = stop(i, r, s, &r_prev, &s_prev) {
                return (Some(t), i);
            }
            r_prev = r.clone();
            s_prev = s.clone();
        }
        let mut i = self.convergents.len();
        let (mut r, mut s) = self.convergents.last().cloned().expect("non-empty");
        // r_prev/s_prev currently hold the last convergent; rewind one step
        let (mut rp, mut sp) = if self.convergents.len() >= 2 {
            self.convergents[self.convergents.len() - 2].clone()
        } else {
            (Int::one(), Int::zero())
        };
        while let Some(a) = self.quotient(i) {
            let rn = &a * &r + &rp;
            let sn = &a * &s + &sp;
            rp = core::mem::replace(&mut r, rn);
            sp = core::mem::replace(&mut s, sn);
            if let Some(t) = stop(i, &r, &s, &rp, &sp) {
                return (Some(t), i);
            }
            i += 1;
        }
        (None, i)
    }
}

impl fmt::Debug for CfData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<_> = self.quotients.iter().take(8).collect();
        f.debug_struct("CfData")
            .field("prefix_len", &self.quotients.len())
            .field("head", &shown)
            .field("tail", &self.tail)
            .finish()
    }
}

impl SeriesData {
    fn new(exponents: Vec<u64>, tail: SeriesTail) -> Result<Self> {
        if exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("binary series exponents must strictly increase"));
        }
        if exponents.first() == Some(&0) {
            return Err(invalid("binary series exponents must be positive"));
        }
        if let SeriesTail::Geometric(lambda) = &tail {
            if *lambda < Rat::one() {
                return Err(invalid("geometric series tail needs lambda >= 1"));
            }
        }
        let data = Self { exponents, tail };
        if let (Some(last), Some(next)) = (data.exponents.last(), data.exponent(data.exponents.len() + 1)) {
            if next <= *last {
                return Err(invalid("series tail does not continue the listed exponents"));
            }
        }
        Ok(data)
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn tail(&self) -> &SeriesTail {
        &self.tail
    }

    /// Exponent `a_n` (1-based), if known.
    pub fn exponent(&self, n: usize) -> Option<u64> {
        if n >= 1 && n <= self.exponents.len() {
            return Some(self.exponents[n - 1]);
        }
        match &self.tail {
            SeriesTail::Geometric(lambda) => {
                let base = Rat::one() + lambda;
                let v = floor_pow(&base, n as u32);
                u64::try_from(v).ok()
            }
            _ => None,
        }
    }
}

impl fmt::Debug for SeriesData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeriesData")
            .field("exponents", &self.exponents)
            .field("tail", &self.tail)
            .finish()
    }
}

impl fmt::Debug for RealSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            SourceKind::Rational(v) => write!(f, "Rational({v})"),
            SourceKind::Cf(d) => d.fmt(f),
            SourceKind::BinarySeries(d) => d.fmt(f),
            SourceKind::Power { base, exponent } => write!(f, "Power({base:?}, {exponent})"),
        }
    }
}

impl RealSource {
    fn from_kind(kind: SourceKind) -> Self {
        Self {
            kind: Arc::new(kind),
            cache: Arc::new(Mutex::new(None)),
        }
    }

    /// Same number with an empty enclosure cache of its own.
    pub fn detached(&self) -> Self {
        Self {
            kind: self.kind.clone(),
            cache: Arc::new(Mutex::new(None)),
        }
    }

    pub fn rational(v: Rat) -> Self {
        Self::from_kind(SourceKind::Rational(v))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(Rat::new(Int::from(num), Int::from(den)))
    }

    pub fn cf(quotients: Vec<Int>, tail: CfTail) -> Result<Self> {
        Ok(Self::from_kind(SourceKind::Cf(CfData::new(quotients, tail)?)))
    }

    /// Convenience constructor from small quotients.
    pub fn cf_small(quotients: &[i64], tail: CfTail) -> Result<Self> {
        Self::cf(quotients.iter().map(|&a| Int::from(a)).collect(), tail)
    }

    /// `[0; 1, 1, 1, ...]`, the golden ratio minus one.
    pub fn golden_minus_one() -> Self {
        Self::cf_small(&[0], CfTail::Ones).expect("valid")
    }

    /// `[0; 2, 2, 2, ...]`, the square root of two minus one.
    pub fn sqrt2_minus_one() -> Self {
        Self::cf_small(&[0], CfTail::Periodic(alloc::vec![Int::from(2)])).expect("valid")
    }

    pub fn binary_series(exponents: Vec<u64>, tail: SeriesTail) -> Result<Self> {
        Ok(Self::from_kind(SourceKind::BinarySeries(SeriesData::new(exponents, tail)?)))
    }

    pub fn power(base: RealSource, exponent: u32) -> Result<Self> {
        if exponent == 0 {
            return Err(invalid("power exponent must be >= 1"));
        }
        if exponent == 1 {
            return Ok(base);
        }
        Ok(Self::from_kind(SourceKind::Power { base, exponent }))
    }

    pub fn kind(&self) -> &SourceKind {
        &self.kind
    }

    pub fn as_cf(&self) -> Option<&CfData> {
        match self.kind() {
            SourceKind::Cf(d) => Some(d),
            _ => None,
        }
    }

    /// `Some(true)` when provably irrational, `Some(false)` when provably rational.
    pub fn is_irrational(&self) -> Option<bool> {
        match self.kind() {
            SourceKind::Rational(_) => Some(false),
            SourceKind::Cf(d) => match d.tail {
                CfTail::Terminate => Some(false),
                CfTail::Ones | CfTail::Periodic(_) => Some(true),
                CfTail::Unknown => None,
            },
            SourceKind::BinarySeries(d) => match d.tail {
                SeriesTail::Finite => Some(false),
                SeriesTail::Geometric(_) => Some(true),
                SeriesTail::Unknown => None,
            },
            SourceKind::Power { base, .. } => match base.is_irrational() {
                Some(false) => Some(false),
                _ => None,
            },
        }
    }

    /// Exact value when the source is a rational number.
    pub fn exact_value(&self) -> Option<Rat> {
        match self.kind() {
            SourceKind::Rational(v) => Some(v.clone()),
            SourceKind::Cf(d) if d.terminates() => {
                let (r, s) = d.convergents.last().expect("non-empty");
                Some(Rat::new(r.clone(), s.clone()))
            }
            SourceKind::BinarySeries(d) if d.tail == SeriesTail::Finite => {
                let mut v = Rat::zero();
                for &a in &d.exponents {
                    v += Rat::new(Int::one(), pow2(a));
                }
                Some(v)
            }
            SourceKind::Power { base, exponent } => base
                .exact_value()
                .map(|v| num_traits::pow(v, *exponent as usize)),
            _ => None,
        }
    }

    /// Certified enclosure of width at most `2^-p`.
    ///
    /// Series and powers are served from a cached enclosure rounded outward
    /// to `p + 2` bits, so results stay nested as the cache is refined;
    /// continued fractions read their convergents directly.
    pub fn enclosure(&self, p: u64) -> Result<Enclosure> {
        if let SourceKind::Rational(_) | SourceKind::Cf(_) = self.kind() {
            return self.compute_enclosure(p);
        }
        let mut cache = self.cache.lock();
        let stale = cache.as_ref().is_none_or(|c| c.bits <= p && !c.enc.is_exact());
        if stale {
            let bits = cache.as_ref().map_or(p + 1, |c| (p + 1).max(c.bits + c.bits / 2));
            let enc = self.compute_enclosure(bits)?;
            *cache = Some(Cached { bits, enc });
        }
        let c = cache.as_ref().expect("filled");
        if c.enc.is_exact() {
            return Ok(c.enc.clone());
        }
        Ok(c.enc.round_out(p + 2))
    }

    fn compute_enclosure(&self, p: u64) -> Result<Enclosure> {
        match self.kind() {
            SourceKind::Rational(v) => Ok(Enclosure::exact(v.clone())),
            SourceKind::Cf(d) => cf_enclosure(d, p),
            SourceKind::BinarySeries(d) => series_enclosure(d, p),
            SourceKind::Power { base, exponent } => power_enclosure(base, *exponent, p),
        }
    }

    /// Precision budget large enough to resolve distances at every scale the
    /// source stores explicitly.
    pub fn suggested_budget(&self) -> u64 {
        match self.kind() {
            SourceKind::Rational(_) => 64,
            SourceKind::Cf(d) => {
                let (_, s) = d.convergents.last().expect("non-empty");
                4 * s.bits() + 256
            }
            SourceKind::BinarySeries(d) => {
                let next = d.exponent(d.exponents.len() + 1).or(d.exponents.last().copied()).unwrap_or(0);
                2 * next + 256
            }
            SourceKind::Power { base, exponent } => base.suggested_budget() * u64::from(*exponent),
        }
    }

    /// Certified `⌊ζ⌋`, refining up to the budget.
    pub fn floor(&self, prec: Precision) -> Result<Int> {
        let mut p = 16;
        loop {
            let e = self.enclosure(p)?;
            let a = floor_rat(&e.lo);
            if floor_rat(&e.hi) == a {
                return Ok(a);
            }
            if p > prec.budget_bits {
                return Err(Error::Indeterminate {
                    context: "floor of source".to_string(),
                    budget_bits: prec.budget_bits,
                });
            }
            p *= 2;
        }
    }
}

fn cf_enclosure(d: &CfData, p: u64) -> Result<Enclosure> {
    let target = pow2(p);
    let (hit, _) = d.walk(|i, r, s, rp, sp| {
        let last_known = d.quotient(i + 1).is_none();
        if last_known && d.terminates() {
            return Some(Enclosure::exact(Rat::new(r.clone(), s.clone())));
        }
        if s * (s + sp) >= target {
            let a = Rat::new(r.clone(), s.clone());
            let b = Rat::new(r + rp, s + sp);
            return Some(if a <= b {
                Enclosure { lo: a, hi: b }
            } else {
                Enclosure { lo: b, hi: a }
            });
        }
        None
    });
    hit.ok_or_else(|| {
        Error::StreamExhausted(alloc::format!(
            "continued fraction prefix too short for 2^-{p} enclosure"
        ))
    })
}

fn series_enclosure(d: &SeriesData, p: u64) -> Result<Enclosure> {
    let mut num = Int::zero();
    let mut last = 0u64;
    let mut n = 1usize;
    loop {
        match d.exponent(n) {
            Some(a) => {
                num = (num << (a - last)) + 1u32;
                last = a;
                if a >= p {
                    break;
                }
                n += 1;
            }
            None => {
                return match d.tail {
                    SeriesTail::Finite => Ok(Enclosure::exact(Rat::new(num, pow2(last)))),
                    _ => Err(Error::StreamExhausted(alloc::format!(
                        "binary series too short for 2^-{p} enclosure"
                    ))),
                };
            }
        }
    }
    if d.tail == SeriesTail::Finite && d.exponent(n + 1).is_none() {
        return Ok(Enclosure::exact(Rat::new(num, pow2(last))));
    }
    let den = pow2(last);
    let lo = Rat::new(num.clone(), den.clone());
    let hi = Rat::new(num + 1u32, den);
    Ok(Enclosure { lo, hi })
}

fn interval_pow(lo: &Rat, hi: &Rat, e: u32) -> (Rat, Rat) {
    let a = num_traits::pow(lo.clone(), e as usize);
    let b = num_traits::pow(hi.clone(), e as usize);
    if !lo.is_negative() || e % 2 == 1 {
        (a, b)
    } else if !hi.is_positive() {
        (b, a)
    } else {
        (Rat::zero(), if a > b { a } else { b })
    }
}

fn power_enclosure(base: &RealSource, e: u32, p: u64) -> Result<Enclosure> {
    let coarse = base.enclosure(4)?;
    let m = core::cmp::max(coarse.lo.abs(), coarse.hi.abs());
    let m_bits = bits(&(floor_rat(&m) + 1u32));
    let e_bits = 64 - u64::from(e).leading_zeros() as u64;
    let mut q = p + e_bits + u64::from(e - 1) * m_bits + 2;
    loop {
        let enc = base.enclosure(q)?;
        let (lo, hi) = interval_pow(&enc.lo, &enc.hi, e);
        let width = &hi - &lo;
        if width * rat_int(pow2(p)) <= Rat::one() {
            return Ok(Enclosure { lo, hi });
        }
        q += q / 2 + 8;
    }
}

impl fmt::Display for RealSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn check_nested(src: &RealSource, ps: &[u64]) {
        let mut prev: Option<Enclosure> = None;
        for &p in ps {
            let e = src.enclosure(p).unwrap();
            assert!(e.width() * rat_int(pow2(p)) <= Rat::one(), "width at {p}");
            if let Some(prev) = &prev {
                assert!(prev.contains_enclosure(&e), "nesting at {p}");
            }
            prev = Some(e);
        }
    }

    #[test]
    fn golden_enclosures_nest_and_shrink() {
        check_nested(&RealSource::golden_minus_one(), &[1, 2, 5, 10, 40, 100, 300]);
    }

    #[test]
    fn sqrt2_enclosure_contains_value() {
        let e = RealSource::sqrt2_minus_one().enclosure(60).unwrap();
        // (√2 - 1)^2 = 3 - 2√2, so ζ^2 + 2ζ - 1 = 0; the sign changes across the enclosure
        let f = |v: &Rat| v * v + v * rat(2, 1) - Rat::one();
        assert!(f(&e.lo) <= Rat::zero() && f(&e.hi) >= Rat::zero());
    }

    #[test]
    fn terminating_cf_is_exact() {
        let src = RealSource::cf_small(&[3, 7, 16], CfTail::Terminate).unwrap();
        assert_eq!(src.enclosure(10).unwrap(), Enclosure::exact(rat(355, 113)));
        assert_eq!(src.exact_value(), Some(rat(355, 113)));
    }

    #[test]
    fn unknown_tail_reports_exhaustion() {
        let src = RealSource::cf_small(&[0, 1, 2], CfTail::Unknown).unwrap();
        assert!(src.enclosure(2).is_ok());
        assert!(matches!(src.enclosure(200), Err(Error::StreamExhausted(_))));
    }

    #[test]
    fn series_enclosures_nest() {
        let src = RealSource::binary_series(alloc::vec![3, 9], SeriesTail::Geometric(rat(2, 1))).unwrap();
        check_nested(&src, &[2, 5, 9, 20, 81, 200, 800]);
        let e = src.enclosure(5).unwrap();
        assert!(e.contains(&(rat(1, 8) + rat(1, 512))));
    }

    #[test]
    fn finite_series_is_exact() {
        let src = RealSource::binary_series(alloc::vec![1, 3], SeriesTail::Finite).unwrap();
        assert_eq!(src.exact_value(), Some(rat(5, 8)));
        assert_eq!(src.enclosure(100).unwrap(), Enclosure::exact(rat(5, 8)));
    }

    #[test]
    fn power_of_golden_nests() {
        let src = RealSource::power(RealSource::golden_minus_one(), 3).unwrap();
        check_nested(&src, &[3, 10, 64, 200]);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(RealSource::cf_small(&[0, 0, 2], CfTail::Terminate).is_err());
        assert!(RealSource::binary_series(alloc::vec![3, 3], SeriesTail::Finite).is_err());
        assert!(RealSource::binary_series(alloc::vec![1, 100], SeriesTail::Geometric(rat(1, 1))).is_err());
    }

    #[test]
    fn floor_of_negative_rational() {
        assert_eq!(RealSource::from_ratio(-7, 2).floor(Precision::default()).unwrap(), int(-4));
    }
}
