use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{rat_int, Int, Rat};
use crate::error::{invalid, Error, Result};

/// Closed rational interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(v: Rat) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `max |t|` over the interval.
    pub fn magnitude(&self) -> Rat {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().expect("four").clone();
        let hi = c.iter().max().expect("four").clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rat) -> Interval {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// Tight range of `t^n`.
    pub fn pow(&self, n: u32) -> Interval {
        if n == 0 {
            return Interval::point(Rat::one());
        }
        let a = num_traits::pow(self.lo.clone(), n as usize);
        let b = num_traits::pow(self.hi.clone(), n as usize);
        if n % 2 == 1 {
            Interval::new(a, b)
        } else if self.contains_zero() {
            Interval::new(Rat::zero(), a.max(b))
        } else {
            Interval::new(a.clone().min(b.clone()), a.max(b))
        }
    }
}

/// Degrees of a nonzero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degrees {
    /// Largest total degree of a monomial.
    pub absolute: u32,
    pub per_variable: Vec<u32>,
    /// `Σ r_j`, at most `k·r`.
    pub refined: u32,
}

/// Polynomial over ℚ in `k` variables; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPolynomial {
    k: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPolynomial {
    /// Sums like terms and drops zeros.
    pub fn new(k: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Result<Self> {
        if k == 0 {
            return Err(invalid("polynomial needs at least one variable"));
        }
        let mut map: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: e.len() });
            }
            *map.entry(e).or_insert_with(Rat::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { k, terms: map })
    }

    /// `Σ X_j^n - 1`.
    pub fn fermat(k: usize, n: u32) -> Self {
        let mut terms: Vec<(Vec<u32>, Rat)> = (0..k)
            .map(|j| {
                let mut e = alloc::vec![0; k];
                e[j] = n;
                (e, Rat::one())
            })
            .collect();
        terms.push((alloc::vec![0; k], -Rat::one()));
        Self::new(k, terms).expect("well-formed")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> Result<Degrees> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let absolute = self.terms.keys().map(|e| e.iter().sum()).max().expect("nonzero");
        if absolute == 0 {
            return Err(Error::ZeroPolynomial);
        }
        let per_variable: Vec<u32> = (0..self.k).map(|j| self.terms.keys().map(|e| e[j]).max().expect("nonzero")).collect();
        let refined = per_variable.iter().sum();
        Ok(Degrees {
            absolute,
            per_variable,
            refined,
        })
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Integer-coefficient multiple and the factor used.
    pub fn cleared(&self) -> (MultiPolynomial, Int) {
        let l = self.terms.values().fold(Int::one(), |acc, c| acc.lcm(c.denom()));
        let f = rat_int(l.clone());
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * &f)).collect();
        (MultiPolynomial { k: self.k, terms }, l)
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: point.len(),
            });
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &d) in point.iter().zip(e) {
                if d > 0 {
                    t *= num_traits::pow(v.clone(), d as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// `∂P/∂X_i`.
    pub fn partial(&self, i: usize) -> MultiPolynomial {
        let terms = self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[i] -= 1;
            (e2, c * Rat::from_integer(Int::from(e[i])))
        });
        MultiPolynomial::new(self.k, terms).expect("same shape")
    }

    /// Naive interval extension, monomial by monomial.
    pub fn eval_interval(&self, region: &[Interval]) -> Result<Interval> {
        if region.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: region.len(),
            });
        }
        let mut acc = Interval::point(Rat::zero());
        for (e, c) in &self.terms {
            let mut m = Interval::point(Rat::one());
            for (iv, &d) in region.iter().zip(e) {
                if d > 0 {
                    m = m.mul(&iv.pow(d));
                }
            }
            acc = acc.add(&m.scale(c));
        }
        Ok(acc)
    }

    /// Certified `C >= max_i sup |∂P/∂X_i|` over the region.
    pub fn derivative_bound(&self, region: &[Interval]) -> Result<Rat> {
        let mut c = Rat::zero();
        for i in 0..self.k {
            c = c.max(self.partial(i).eval_interval(region)?.magnitude());
        }
        Ok(c)
    }
}

impl fmt::Debug for MultiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MultiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let a = c.abs();
            let constant = e.iter().all(|&d| d == 0);
            if !a.is_one() || constant {
                write!(f, "{a}")?;
            }
            for (j, &d) in e.iter().enumerate() {
                match d {
                    0 => {}
                    1 => write!(f, "X{}", j + 1)?,
                    _ => write!(f, "X{}^{d}", j + 1)?,
                }
            }
        }
        Ok(())
    }
}
