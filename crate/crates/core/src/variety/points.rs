use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::MultiPolynomial;
use crate::arith::{rat_int, Int, Rat};
use crate::error::{invalid, Error, Result};

/// Largest `H^(k+1)` accepted by [`rational_point_search`].
pub const POINT_SEARCH_LIMIT: u128 = 1_000_000_000;

/// Rational points of height at most `height`, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalPointSet {
    pub height: u64,
    pub points: Vec<Vec<Rat>>,
}

impl RationalPointSet {
    /// Index and sup-distance of the closest point.
    pub fn nearest(&self, v: &[Rat]) -> Option<(usize, Rat)> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d = p.iter().zip(v).map(|(a, b)| (a - b).abs()).max().unwrap_or_else(Rat::zero);
                (i, d)
            })
            .min_by(|a, b| a.1.cmp(&b.1))
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.points.iter().any(|p| p.as_slice() == v)
    }
}

/// `max(|p|, q)` of a reduced fraction.
pub fn height(v: &Rat) -> Int {
    v.numer().abs().max(v.denom().clone())
}

/// Reduced fractions of height at most `h`, ascending.
fn fractions(h: i64) -> Vec<Rat> {
    let mut out = Vec::new();
    for q in 1..=h {
        for p in -h..=h {
            if p.gcd(&q) == 1 {
                out.push(Rat::new_raw(Int::from(p), Int::from(q)));
            }
        }
    }
    out.sort();
    out
}

/// Every `y ∈ ℚ^k` of height at most `h` with `P(y) = 0`.
///
/// The first `k-1` coordinates are enumerated; the last is found among the
/// rational roots of the restricted polynomial, whose numerator divides the
/// trailing and whose denominator divides the leading integer coefficient.
pub fn rational_point_search(p: &MultiPolynomial, h: u64) -> Result<RationalPointSet> {
    p.degrees()?;
    let k = p.k();
    if h == 0 {
        return Err(invalid("height bound must be positive"));
    }
    let cost = (h as u128).checked_pow(k as u32 + 1).unwrap_or(u128::MAX);
    if cost > POINT_SEARCH_LIMIT {
        return Err(Error::CostGuard {
            what: "rational point search".into(),
            cost,
            limit: POINT_SEARCH_LIMIT,
        });
    }
    let hi = h as i64;
    let grid = fractions(hi);
    let mut points = Vec::new();
    let mut prefix: Vec<usize> = alloc::vec![0; k - 1];
    loop {
        let head: Vec<Rat> = prefix.iter().map(|&i| grid[i].clone()).collect();
        match restricted(p, &head) {
            None => {
                for t in &grid {
                    let mut v = head.clone();
                    v.push(t.clone());
                    points.push(v);
                }
            }
            Some(coeffs) => {
                for t in rational_roots(&coeffs, hi) {
                    let mut v = head.clone();
                    v.push(t);
                    points.push(v);
                }
            }
        }
        if !advance(&mut prefix, grid.len()) {
            break;
        }
    }
    points.sort();
    Ok(RationalPointSet { height: h, points })
}

fn advance(idx: &mut [usize], n: usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < n {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Integer coefficients (constant first) of `t ↦ P(head, t)`, or `None` when
/// it vanishes identically.
fn restricted(p: &MultiPolynomial, head: &[Rat]) -> Option<Vec<Int>> {
    let k = p.k();
    let mut coeffs: Vec<Rat> = Vec::new();
    for (e, c) in p.terms() {
        let d = e[k - 1] as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, Rat::zero());
        }
        let mut t = c.clone();
        for (v, &a) in head.iter().zip(e) {
            if a > 0 {
                t *= num_traits::pow(v.clone(), a as usize);
            }
        }
        coeffs[d] += t;
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        return None;
    }
    let l = coeffs.iter().fold(Int::one(), |acc, c| acc.lcm(c.denom()));
    Some(coeffs.iter().map(|c| (c * rat_int(l.clone())).to_integer()).collect())
}

/// Rational roots of height at most `h` of a nonzero integer polynomial.
fn rational_roots(coeffs: &[Int], h: i64) -> Vec<Rat> {
    let mut out = Vec::new();
    let low = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero");
    if low > 0 {
        out.push(Rat::zero());
    }
    let c = &coeffs[low..];
    if c.len() < 2 {
        return out;
    }
    let lead = c.last().expect("nonempty");
    let trail = &c[0];
    let dens: Vec<i64> = (1..=h).filter(|q| (lead % Int::from(*q)).is_zero()).collect();
    let nums: Vec<i64> = (1..=h).filter(|p| (trail % Int::from(*p)).is_zero()).collect();
    for &q in &dens {
        for &pn in &nums {
            if pn.gcd(&q) != 1 {
                continue;
            }
            for s in [-pn, pn] {
                if horner(c, s, q).is_zero() {
                    out.push(Rat::new_raw(Int::from(s), Int::from(q)));
                }
            }
        }
    }
    out
}

/// `q^n · f(p/q)` for `f` of degree `n`.
fn horner(c: &[Int], p: i64, q: i64) -> Int {
    let (p, q) = (Int::from(p), Int::from(q));
    let mut acc = Int::zero();
    let mut qpow = Int::one();
    for a in c.iter().rev() {
        acc = acc * &p + a * &qpow;
        qpow *= &q;
    }
    acc
}
