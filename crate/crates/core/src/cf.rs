//! Continued-fraction expansions and convergents.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Int, Rat};
use crate::error::{invalid, Result};
use crate::source::{Precision, RealSource, SourceKind};

/// A convergent `num/den` of index `index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub num: Int,
    pub den: Int,
}

impl Convergent {
    pub fn value(&self) -> Rat {
        Rat::new(self.num.clone(), self.den.clone())
    }
}

/// Certified convergents together with the quotients that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentList {
    pub quotients: Vec<Int>,
    pub items: Vec<Convergent>,
    /// The expansion ended exactly (rational source).
    pub terminated: bool,
    /// Fewer terms than requested could be certified.
    pub truncated: bool,
}

impl ConvergentList {
    pub fn denominators(&self) -> impl Iterator<Item = &Int> {
        self.items.iter().map(|c| &c.den)
    }

    pub fn last(&self) -> Option<&Convergent> {
        self.items.last()
    }
}

/// Canonical expansion of `num/den`; the last quotient is `>= 2` when there are several.
pub fn cf_expand_rational(num: &Int, den: &Int) -> Result<Vec<Int>> {
    if !den.is_positive() {
        return Err(invalid("denominator must be positive"));
    }
    let (mut a, mut b) = (num.clone(), den.clone());
    let mut out = Vec::new();
    while !b.is_zero() {
        let (q, r) = a.div_mod_floor(&b);
        out.push(q);
        a = core::mem::replace(&mut b, r);
    }
    Ok(out)
}

/// Convergents of the given quotients, with the seeds `s_{-2} = 1, s_{-1} = 0`.
pub fn convergents_of(quotients: &[Int]) -> Vec<Convergent> {
    let (mut r1, mut s1) = (Int::one(), Int::zero());
    let (mut r2, mut s2) = (Int::zero(), Int::one());
    let mut out = Vec::with_capacity(quotients.len());
    for (index, a) in quotients.iter().enumerate() {
        let r = a * &r1 + &r2;
        let s = a * &s1 + &s2;
        r2 = core::mem::replace(&mut r1, r.clone());
        s2 = core::mem::replace(&mut s1, s.clone());
        out.push(Convergent { index, num: r, den: s });
    }
    out
}

/// Quotients shared by every real in `[lo, hi]`, as far as they are certain.
///
/// Expands both endpoints together on unreduced integer pairs. A quotient is
/// accepted only when both endpoints have the same floor and neither endpoint
/// sits on that integer, so every point of the interval shares it. `more`
/// sees the quotients so far and the current denominator and says whether to
/// keep going. Returns the quotients and whether the interval was a point
/// whose expansion ended.
pub fn common_quotients(lo: &Rat, hi: &Rat, mut more: impl FnMut(&[Int], &Int) -> bool) -> (Vec<Int>, bool) {
    let (mut n1, mut d1) = (lo.numer().clone(), lo.denom().clone());
    let (mut n2, mut d2) = (hi.numer().clone(), hi.denom().clone());
    let mut out: Vec<Int> = Vec::new();
    let (mut s_prev, mut s) = (Int::one(), Int::zero());
    let point = lo == hi;
    loop {
        if !more(&out, &s) {
            return (out, false);
        }
        let (a1, m1) = n1.div_mod_floor(&d1);
        if point {
            out.push(a1.clone());
            let s_next = &a1 * &s + &s_prev;
            s_prev = core::mem::replace(&mut s, s_next);
            if m1.is_zero() {
                return (out, true);
            }
            n1 = core::mem::replace(&mut d1, m1);
            continue;
        }
        let (a2, m2) = n2.div_mod_floor(&d2);
        if a1 != a2 || m1.is_zero() || m2.is_zero() {
            return (out, false);
        }
        let s_next = &a1 * &s + &s_prev;
        s_prev = core::mem::replace(&mut s, s_next);
        out.push(a1);
        n1 = core::mem::replace(&mut d1, m1);
        n2 = core::mem::replace(&mut d2, m2);
    }
}

/// Stopping rule for a certified expansion.
#[derive(Clone, Debug)]
pub enum Stop {
    /// Exactly this many quotients.
    Count(usize),
    /// Until the first convergent whose denominator exceeds the bound.
    DenominatorAbove(Int),
}

impl Stop {
    fn wants_more(&self, quotients: &[Int], last_den: &Int) -> bool {
        match self {
            Stop::Count(n) => quotients.len() < *n,
            Stop::DenominatorAbove(b) => quotients.is_empty() || last_den <= b,
        }
    }
}

/// Certified quotient prefix of any source.
pub fn certified_quotients(src: &RealSource, stop: &Stop, prec: Precision) -> Result<(Vec<Int>, bool, bool)> {
    match src.kind() {
        SourceKind::Rational(v) => {
            let q = cf_expand_rational(v.numer(), v.denom())?;
            Ok(trim(q, stop, true))
        }
        SourceKind::Cf(d) => {
            let mut q: Vec<Int> = Vec::new();
            let (mut s_prev, mut s) = (Int::one(), Int::zero());
            loop {
                if !stop.wants_more(&q, &s) {
                    return Ok((q, false, false));
                }
                match d.quotient(q.len()) {
                    Some(a) => {
                        let s_next = &a * &s + &s_prev;
                        s_prev = core::mem::replace(&mut s, s_next);
                        q.push(a);
                    }
                    None => {
                        let terminated = d.terminates();
                        return Ok((q, terminated, !terminated));
                    }
                }
            }
        }
        _ => {
            if let Some(v) = src.exact_value() {
                let q = cf_expand_rational(v.numer(), v.denom())?;
                return Ok(trim(q, stop, true));
            }
            let mut p = 64u64;
            loop {
                let e = src.enclosure(p)?;
                let (q, ended) = common_quotients(&e.lo, &e.hi, |q, s| stop.wants_more(q, s));
                let last_den = convergents_of(&q).last().map(|c| c.den.clone()).unwrap_or_else(Int::zero);
                if ended || !stop.wants_more(&q, &last_den) {
                    return Ok((q, ended, false));
                }
                if p >= prec.budget_bits {
                    return Ok((q, false, true));
                }
                p = (p * 2).min(prec.budget_bits.max(64));
            }
        }
    }
}

fn trim(mut q: Vec<Int>, stop: &Stop, terminated: bool) -> (Vec<Int>, bool, bool) {
    let full = q.len();
    let mut keep = 0;
    let (mut s_prev, mut s) = (Int::one(), Int::zero());
    while keep < full && stop.wants_more(&q[..keep], &s) {
        let s_next = &q[keep] * &s + &s_prev;
        s_prev = core::mem::replace(&mut s, s_next);
        keep += 1;
    }
    q.truncate(keep);
    let ended = terminated && keep == full;
    // a rational that ran out before the request is not truncated, just finished
    (q, ended, false)
}

fn list(src: &RealSource, stop: &Stop, prec: Precision) -> Result<ConvergentList> {
    let (quotients, terminated, truncated) = certified_quotients(src, stop, prec)?;
    let items = convergents_of(&quotients);
    Ok(ConvergentList {
        quotients,
        items,
        terminated,
        truncated,
    })
}

/// The first `count` convergents; fewer if the source terminates or cannot be certified.
pub fn convergents(src: &RealSource, count: usize, prec: Precision) -> Result<ConvergentList> {
    if count == 0 {
        return Err(invalid("convergent count must be >= 1"));
    }
    list(src, &Stop::Count(count), prec)
}

/// Every convergent with denominator `<= max_den`, plus the first one beyond it.
pub fn convergents_past(src: &RealSource, max_den: &Int, prec: Precision) -> Result<ConvergentList> {
    list(src, &Stop::DenominatorAbove(max_den.clone()), prec)
}

/// Distinct convergent denominators `<= max_den`, in increasing order.
pub fn convergent_denominators(src: &RealSource, max_den: &Int, prec: Precision) -> Result<(Vec<Int>, bool)> {
    let l = convergents_past(src, max_den, prec)?;
    let mut out: Vec<Int> = Vec::new();
    for d in l.denominators() {
        if d <= max_den && out.last() != Some(d) {
            out.push(d.clone());
        }
    }
    Ok((out, l.truncated))
}
