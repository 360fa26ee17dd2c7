use alloc::format;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Interval, MultiPolynomial};
use crate::arith::{rat_int, Int, Rat};
use crate::error::{invalid, Error, Result};

/// Outcome of [`denominator_bound_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DenominatorBound {
    Zero,
    Nonzero {
        value: Rat,
        /// `x^(-r)` for the common denominator `x = lcm(q_j)`.
        shared: Rat,
        /// `(q_1 ⋯ q_k)^(-r)`.
        product: Rat,
        /// `Π q_j^(-r_j)`.
        refined: Rat,
    },
}

/// Evaluates an integer polynomial at a rational point and checks the three
/// lower bounds on `|P(y)|` that come from clearing denominators.
pub fn denominator_bound_check(p: &MultiPolynomial, point: &[Rat]) -> Result<DenominatorBound> {
    let deg = p.degrees()?;
    if !p.is_integral() {
        return Err(invalid("denominator bounds need integer coefficients"));
    }
    let value = p.eval(point)?;
    if value.is_zero() {
        return Ok(DenominatorBound::Zero);
    }
    let r = deg.absolute as usize;
    let shared_den = point.iter().fold(Int::one(), |acc, v| acc.lcm(v.denom()));
    let product_den: Int = point.iter().map(|v| v.denom().clone()).product();
    let refined_den: Int = point
        .iter()
        .zip(&deg.per_variable)
        .map(|(v, &rj)| num_traits::pow(v.denom().clone(), rj as usize))
        .product();
    let inv = |d: Int| Rat::new(Int::one(), d);
    let shared = inv(num_traits::pow(shared_den, r));
    let product = inv(num_traits::pow(product_den, r));
    let refined = inv(refined_den);
    let mag = value.abs();
    for (name, b) in [("shared", &shared), ("product", &product), ("refined", &refined)] {
        if &mag < b {
            return Err(Error::BoundViolation(format!("|P| = {mag} below the {name} bound {b}")));
        }
    }
    Ok(DenominatorBound::Nonzero {
        value,
        shared,
        product,
        refined,
    })
}

/// Axis-aligned rational box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatBox {
    pub sides: Vec<Interval>,
}

impl RatBox {
    pub fn new(sides: Vec<Interval>) -> Self {
        Self { sides }
    }

    /// `[-a, a]^k`.
    pub fn cube(k: usize, a: Rat) -> Self {
        Self {
            sides: (0..k).map(|_| Interval::new(-a.clone(), a.clone())).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.sides.len()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        v.len() == self.k() && self.sides.iter().zip(v).all(|(s, t)| s.contains(t))
    }

    /// Sup-norm ball around `c` intersected with the box.
    pub fn ball(&self, c: &[Rat], radius: &Rat) -> Option<RatBox> {
        let mut sides = Vec::with_capacity(self.k());
        for (s, t) in self.sides.iter().zip(c) {
            let lo = (t - radius).max(s.lo.clone());
            let hi = (t + radius).min(s.hi.clone());
            if lo > hi {
                return None;
            }
            sides.push(Interval::new(lo, hi));
        }
        Some(RatBox { sides })
    }

    pub fn max_width(&self) -> Rat {
        self.sides.iter().map(Interval::width).max().unwrap_or_else(Rat::zero)
    }
}

/// Certified zero-free neighbourhood of a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionCertificate {
    pub candidate: Vec<Rat>,
    pub value: Rat,
    /// Bound on every partial derivative over the box.
    pub derivative_bound: Rat,
    /// No zero of `P` in the box lies within this sup-distance of the candidate.
    pub exclusion_radius: Rat,
}

/// `ρ = |P(c)| / (2kC)` where `C` bounds the partials over `region`.
///
/// A constant-on-the-box polynomial (`C = 0`) excludes the whole box.
pub fn exclusion_certificate(p: &MultiPolynomial, region: &RatBox, candidate: &[Rat]) -> Result<ExclusionCertificate> {
    if region.k() != p.k() {
        return Err(Error::DimensionMismatch {
            expected: p.k(),
            got: region.k(),
        });
    }
    if candidate.len() != p.k() {
        return Err(Error::DimensionMismatch {
            expected: p.k(),
            got: candidate.len(),
        });
    }
    if !region.contains(candidate) {
        return Err(Error::CandidateOutsideBox);
    }
    let value = p.eval(candidate)?;
    if value.is_zero() {
        return Err(Error::ZeroAtCandidate);
    }
    let c = p.derivative_bound(&region.sides)?;
    let exclusion_radius = if c.is_zero() {
        region.max_width()
    } else {
        value.abs() / (rat_int(Int::from(2 * p.k())) * &c)
    };
    Ok(ExclusionCertificate {
        candidate: candidate.to_vec(),
        value,
        derivative_bound: c,
        exclusion_radius,
    })
}

/// Independent check that `P` has no zero on the certified ball: interval
/// evaluation with bisection of the widest side, up to `depth` levels.
pub fn ball_is_zero_free(p: &MultiPolynomial, region: &RatBox, cert: &ExclusionCertificate, depth: u32) -> Result<bool> {
    let Some(ball) = region.ball(&cert.candidate, &cert.exclusion_radius) else {
        return Ok(true);
    };
    zero_free(p, ball, depth)
}

fn zero_free(p: &MultiPolynomial, b: RatBox, depth: u32) -> Result<bool> {
    if !p.eval_interval(&b.sides)?.contains_zero() {
        return Ok(true);
    }
    if depth == 0 {
        return Ok(false);
    }
    let (i, _) = b
        .sides
        .iter()
        .enumerate()
        .max_by(|a, c| a.1.width().cmp(&c.1.width()))
        .expect("k >= 1");
    let side = &b.sides[i];
    let mid = (&side.lo + &side.hi) / rat_int(Int::from(2));
    let mut left = b.clone();
    left.sides[i] = Interval::new(side.lo.clone(), mid.clone());
    let mut right = b.clone();
    right.sides[i] = Interval::new(mid, side.hi.clone());
    Ok(zero_free(p, left, depth - 1)? && zero_free(p, right, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn circle3() -> MultiPolynomial {
        MultiPolynomial::new(2, [(alloc::vec![2, 0], rat(1, 1)), (alloc::vec![0, 2], rat(1, 1)), (alloc::vec![0, 0], rat(-3, 1))]).unwrap()
    }

    #[test]
    fn circle_bound_at_half() {
        match denominator_bound_check(&circle3(), &[rat(1, 2), rat(3, 2)]).unwrap() {
            DenominatorBound::Nonzero { value, shared, .. } => {
                assert_eq!(value, rat(-1, 2));
                assert_eq!(shared, rat(1, 4));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn refined_bound_for_hyperbola() {
        let p = MultiPolynomial::new(2, [(alloc::vec![1, 1], rat(1, 1)), (alloc::vec![0, 0], rat(-2, 1))]).unwrap();
        match denominator_bound_check(&p, &[rat(1, 3), rat(5, 7)]).unwrap() {
            DenominatorBound::Nonzero { value, refined, product, .. } => {
                assert_eq!(value, rat(-37, 21));
                assert_eq!(refined, rat(1, 21));
                assert_eq!(product, rat(1, 441));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_value() {
        let p = MultiPolynomial::fermat(2, 3);
        assert_eq!(denominator_bound_check(&p, &[rat(1, 1), rat(0, 1)]).unwrap(), DenominatorBound::Zero);
    }

    #[test]
    fn rational_coefficients_rejected() {
        let p = MultiPolynomial::new(1, [(alloc::vec![1], rat(1, 1)), (alloc::vec![0], rat(-1, 2))]).unwrap();
        assert!(matches!(denominator_bound_check(&p, &[rat(1, 3)]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn certificate_radii() {
        let b = RatBox::new(alloc::vec![Interval::new(rat(0, 1), rat(2, 1)); 2]);
        let c = exclusion_certificate(&circle3(), &b, &[rat(1, 2), rat(3, 2)]).unwrap();
        assert_eq!(c.derivative_bound, rat(4, 1));
        assert_eq!(c.exclusion_radius, rat(1, 32));
        assert!(ball_is_zero_free(&circle3(), &b, &c, 8).unwrap());

        let lin = MultiPolynomial::new(1, [(alloc::vec![1], rat(1, 1)), (alloc::vec![0], rat(-1, 2))]).unwrap();
        let b1 = RatBox::new(alloc::vec![Interval::new(rat(0, 1), rat(1, 1))]);
        let c = exclusion_certificate(&lin, &b1, &[rat(1, 3)]).unwrap();
        assert_eq!(c.exclusion_radius, rat(1, 12));
        assert!(ball_is_zero_free(&lin, &b1, &c, 8).unwrap());
    }

    #[test]
    fn certificate_errors() {
        let b = RatBox::cube(2, rat(1, 1));
        assert_eq!(exclusion_certificate(&circle3(), &b, &[rat(3, 2), rat(0, 1)]).unwrap_err(), Error::CandidateOutsideBox);
        let f = MultiPolynomial::fermat(2, 3);
        assert_eq!(exclusion_certificate(&f, &b, &[rat(1, 1), rat(0, 1)]).unwrap_err(), Error::ZeroAtCandidate);
    }
}
