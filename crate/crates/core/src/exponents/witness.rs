use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::{transform, Exponent};
use crate::arith::{dyadic, floor_rat, log2_bounds, log2_bounds_uint, pow2, rat, Int, Rat};
use crate::distance::{deviation, deviation_rel, DistanceInterval};
use crate::error::{Error, Result};
use crate::kernel::WideKernel;
use crate::source::{Precision, RealSource};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessMode {
    /// One denominator `x` for every coordinate.
    Shared { x: Int, numerators: Vec<Int> },
    /// Denominator `x_j` for coordinate `j`.
    PerCoordinate { xs: Vec<Int>, numerators: Vec<Int> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Found by a search; error bounds are certified enclosures.
    Search,
    /// Derived from a per-coordinate witness by multiplying denominators;
    /// error bounds are upper bounds from the product chain.
    LemmaTransform { source: Box<WitnessRecord> },
}

/// An integer tuple with certified error bounds at a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRecord {
    pub mode: WitnessMode,
    pub window: Int,
    pub errors: Vec<DistanceInterval>,
    /// Exact lower bound of `-log(max error) / log(window)`.
    pub exponent: Exponent,
    /// The exponent is not positive, so the witness says nothing.
    pub vacuous: bool,
    pub origin: Origin,
}

/// Exact lower bound of `-log2(err) / log2(window)` from certified log bounds.
pub fn achieved_exponent(err_hi: &Rat, window: &Int) -> Exponent {
    if err_hi.is_zero() {
        return Exponent::Unbounded;
    }
    if window <= &Int::one() {
        return Exponent::Finite(Rat::zero());
    }
    let (_, e_hi) = log2_bounds(err_hi);
    let num = dyadic(-e_hi);
    let (w_lo, w_hi) = log2_bounds_uint(window.magnitude());
    let den = if num.is_negative() { dyadic(w_lo.max(f64::MIN_POSITIVE)) } else { dyadic(w_hi) };
    Exponent::Finite(num / den)
}

/// Certified nearest integer to `xζ`; ties and budget exhaustion pick the lower candidate.
pub fn nearest_numerator(x: &Int, src: &RealSource, prec: Precision) -> Result<Int> {
    let half = rat(1, 2);
    let mut bits = 64u64;
    loop {
        let e = src.enclosure(bits + x.bits() + 1)?.affine(x, &Int::zero());
        let a = floor_rat(&(&e.lo + &half));
        let b = floor_rat(&(&e.hi + &half));
        if a == b || bits + x.bits() + 1 >= prec.budget_bits {
            return Ok(a);
        }
        bits *= 2;
    }
}

impl WitnessRecord {
    fn finish(mode: WitnessMode, window: Int, errors: Vec<DistanceInterval>) -> Self {
        let max_hi = errors.iter().map(|d| d.hi.clone()).max().unwrap_or_else(Rat::zero);
        let exponent = achieved_exponent(&max_hi, &window);
        let vacuous = matches!(&exponent, Exponent::Finite(r) if !r.is_positive());
        WitnessRecord {
            mode,
            window,
            errors,
            exponent,
            vacuous,
            origin: Origin::Search,
        }
    }

    /// Witness with shared denominator `x` and nearest numerators.
    pub fn shared(x: &Int, sources: &[RealSource], window: &Int, prec: Precision) -> Result<Self> {
        let mut numerators = Vec::with_capacity(sources.len());
        let mut errors = Vec::with_capacity(sources.len());
        for s in sources {
            let y = nearest_numerator(x, s, prec)?;
            errors.push(deviation_rel(x, &y, s, prec)?);
            numerators.push(y);
        }
        let mode = WitnessMode::Shared { x: x.clone(), numerators };
        Ok(Self::finish(mode, window.clone(), errors))
    }

    /// Witness with shared denominator `x` and the given numerators.
    pub fn shared_with(x: &Int, numerators: &[Int], sources: &[RealSource], window: &Int, prec: Precision) -> Result<Self> {
        if numerators.len() != sources.len() {
            return Err(Error::DimensionMismatch {
                expected: sources.len(),
                got: numerators.len(),
            });
        }
        let errors = numerators
            .iter()
            .zip(sources)
            .map(|(y, s)| deviation_rel(x, y, s, prec))
            .collect::<Result<Vec<_>>>()?;
        let mode = WitnessMode::Shared {
            x: x.clone(),
            numerators: numerators.to_vec(),
        };
        Ok(Self::finish(mode, window.clone(), errors))
    }

    /// Witness with denominator `xs[j]` for coordinate `j` and nearest numerators.
    pub fn per_coordinate(xs: &[Int], sources: &[RealSource], window: &Int, prec: Precision) -> Result<Self> {
        if xs.len() != sources.len() {
            return Err(Error::DimensionMismatch {
                expected: sources.len(),
                got: xs.len(),
            });
        }
        let mut numerators = Vec::with_capacity(sources.len());
        let mut errors = Vec::with_capacity(sources.len());
        for (x, s) in xs.iter().zip(sources) {
            let y = nearest_numerator(x, s, prec)?;
            errors.push(deviation_rel(x, &y, s, prec)?);
            numerators.push(y);
        }
        let mode = WitnessMode::PerCoordinate { xs: xs.to_vec(), numerators };
        Ok(Self::finish(mode, window.clone(), errors))
    }

    /// [`Self::per_coordinate`] reading numerators and errors off fixed-point
    /// kernels where they are decisive and relatively tight.
    pub(crate) fn per_coordinate_hinted(
        xs: &[Int],
        sources: &[RealSource],
        kernels: &[WideKernel],
        window: &Int,
        prec: Precision,
    ) -> Result<Self> {
        if xs.len() != sources.len() || kernels.len() != sources.len() {
            return Err(Error::DimensionMismatch {
                expected: sources.len(),
                got: xs.len(),
            });
        }
        let mut numerators = Vec::with_capacity(sources.len());
        let mut errors = Vec::with_capacity(sources.len());
        for ((x, s), k) in xs.iter().zip(sources).zip(kernels) {
            let tight = k.deviation(x).filter(|(_, d)| ((&d.hi - &d.lo) << 64u32) <= d.lo);
            let (y, e) = match tight {
                Some((y, d)) => {
                    let den = pow2(k.bits());
                    let e = DistanceInterval {
                        lo: Rat::new(d.lo, den.clone()),
                        hi: Rat::new(d.hi, den),
                        target_precision: k.bits().saturating_sub(x.bits() + 2),
                        indeterminate: false,
                    };
                    (y, e)
                }
                None => {
                    let y = nearest_numerator(x, s, prec)?;
                    let e = deviation_rel(x, &y, s, prec)?;
                    (y, e)
                }
            };
            numerators.push(y);
            errors.push(e);
        }
        let mode = WitnessMode::PerCoordinate { xs: xs.to_vec(), numerators };
        Ok(Self::finish(mode, window.clone(), errors))
    }

    pub fn k(&self) -> usize {
        self.errors.len()
    }

    /// Certified upper bound on the largest error.
    pub fn max_error_hi(&self) -> Rat {
        self.errors.iter().map(|d| d.hi.clone()).max().unwrap_or_else(Rat::zero)
    }

    /// Certified lower bound on the largest error.
    pub fn max_error_lo(&self) -> Rat {
        self.errors.iter().map(|d| d.lo.clone()).max().unwrap_or_else(Rat::zero)
    }

    /// `(denominator, numerator)` for coordinate `j`.
    pub fn pair(&self, j: usize) -> (&Int, &Int) {
        match &self.mode {
            WitnessMode::Shared { x, numerators } => (x, &numerators[j]),
            WitnessMode::PerCoordinate { xs, numerators } => (&xs[j], &numerators[j]),
        }
    }
}

fn fail(msg: alloc::string::String) -> Error {
    Error::Verification(msg)
}

/// Checks `|xζ - y|` against a stored interval with fresh enclosures, starting
/// at twice the stored precision and refining until the fresh interval sits
/// inside the stored one.
fn recheck(x: &Int, y: &Int, src: &RealSource, stored: &DistanceInterval, prec: Precision) -> Result<()> {
    let mut bits = stored.target_precision.max(32) * 2;
    loop {
        let d = deviation(x, y, src, bits, prec)?;
        if d.lo >= stored.lo && d.hi <= stored.hi {
            return Ok(());
        }
        if d.hi < stored.lo || d.lo > stored.hi {
            return Err(fail(format!("error of ({x}, {y}) lies outside the stored bounds")));
        }
        if bits + x.bits() + 1 >= prec.budget_bits {
            return Err(Error::Indeterminate {
                context: format!("re-verifying error of ({x}, {y})"),
                budget_bits: prec.budget_bits,
            });
        }
        bits *= 2;
    }
}

/// Re-verifies a witness from scratch.
pub fn verify_witness(w: &WitnessRecord, sources: &[RealSource], prec: Precision) -> Result<()> {
    let k = sources.len();
    let (denominators, numerators): (Vec<&Int>, &Vec<Int>) = match &w.mode {
        WitnessMode::Shared { x, numerators } => {
            if !x.is_positive() || x > &w.window {
                return Err(fail(format!("shared denominator {x} outside (0, {}]", w.window)));
            }
            (alloc::vec![x; numerators.len()], numerators)
        }
        WitnessMode::PerCoordinate { xs, numerators } => {
            if xs.iter().any(|x| x.is_zero() || x.abs() > w.window) {
                return Err(fail(format!("per-coordinate denominators outside window {}", w.window)));
            }
            (xs.iter().collect(), numerators)
        }
    };
    if numerators.len() != k || denominators.len() != k || w.errors.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: w.errors.len() });
    }
    for j in 0..k {
        recheck(denominators[j], &numerators[j], &sources[j].detached(), &w.errors[j], prec)?;
    }
    match &w.origin {
        Origin::Search => {
            let again = achieved_exponent(&w.max_error_hi(), &w.window);
            if again != w.exponent {
                return Err(fail(format!("stored exponent {} but bounds give {again}", w.exponent)));
            }
        }
        Origin::LemmaTransform { source } => transform::check_derivation(w, source, sources, prec)?,
    }
    Ok(())
}
