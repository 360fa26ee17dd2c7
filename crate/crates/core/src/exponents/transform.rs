use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::witness::{verify_witness, Origin, WitnessMode, WitnessRecord};
use super::Exponent;
use crate::arith::{rat_int, Int, Rat};
use crate::distance::DistanceInterval;
use crate::error::{invalid, Error, Result};
use crate::source::{Precision, RealSource};

/// Turns a per-coordinate witness `(x_1, ..., x_k)` at window `Q` with
/// exponent `ν` into a shared-denominator witness `x = x_1⋯x_k` at window
/// `Q^k` with exponent `(ν - k + 1)/k`.
///
/// Coordinate `j` keeps its numerator scaled by the other denominators, and
/// its error bound is `(∏_{i≠j} |x_i|)·hi_j`.
pub fn chi_witness_to_omega_witness(w: &WitnessRecord) -> Result<WitnessRecord> {
    let WitnessMode::PerCoordinate { xs, numerators } = &w.mode else {
        return Err(invalid("transform needs a per-coordinate witness"));
    };
    let k = xs.len();
    if k == 0 || numerators.len() != k || w.errors.len() != k {
        return Err(invalid("malformed per-coordinate witness"));
    }
    // (|x_j|, ±y_j) describes the same approximation
    let pairs: Vec<(Int, Int)> = xs
        .iter()
        .zip(numerators)
        .map(|(x, y)| if x.is_negative() { (-x, -y) } else { (x.clone(), y.clone()) })
        .collect();
    let x: Int = pairs.iter().map(|(a, _)| a.clone()).product();
    let mut new_numerators = Vec::with_capacity(k);
    let mut errors = Vec::with_capacity(k);
    for (j, (xj, yj)) in pairs.iter().enumerate() {
        let others = &x / xj;
        new_numerators.push(yj * &others);
        errors.push(DistanceInterval {
            lo: Rat::zero(),
            hi: &w.errors[j].hi * rat_int(others),
            target_precision: w.errors[j].target_precision,
            indeterminate: false,
        });
    }
    let window = num_traits::pow(w.window.clone(), k);
    let kk = Rat::from_integer(Int::from(k));
    let exponent = match &w.exponent {
        Exponent::Unbounded => Exponent::Unbounded,
        Exponent::Finite(nu) => Exponent::Finite((nu - &kk + Rat::one()) / &kk),
    };
    let vacuous = matches!(&exponent, Exponent::Finite(r) if !r.is_positive());
    Ok(WitnessRecord {
        mode: WitnessMode::Shared { x, numerators: new_numerators },
        window,
        errors,
        exponent,
        vacuous,
        origin: Origin::LemmaTransform { source: Box::new(w.clone()) },
    })
}

/// The derived witness must equal a fresh transform of a witness that itself verifies.
pub(crate) fn check_derivation(w: &WitnessRecord, source: &WitnessRecord, sources: &[RealSource], prec: Precision) -> Result<()> {
    verify_witness(source, sources, prec)?;
    let again = chi_witness_to_omega_witness(source)?;
    if &again != w {
        return Err(Error::Verification("derived witness does not match its source".into()));
    }
    let WitnessMode::Shared { x, .. } = &w.mode else {
        return Err(Error::Verification("derived witness is not shared".into()));
    };
    if x > &w.window {
        return Err(Error::Verification("product denominator exceeds the window".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn per_coordinate(xs: &[i64], ys: &[i64], his: &[Rat], window: i64, nu: Rat) -> WitnessRecord {
        WitnessRecord {
            mode: WitnessMode::PerCoordinate {
                xs: xs.iter().map(|&v| int(v)).collect(),
                numerators: ys.iter().map(|&v| int(v)).collect(),
            },
            window: int(window),
            errors: his
                .iter()
                .map(|h| DistanceInterval {
                    lo: Rat::zero(),
                    hi: h.clone(),
                    target_precision: 64,
                    indeterminate: false,
                })
                .collect(),
            exponent: Exponent::Finite(nu),
            vacuous: false,
            origin: Origin::Search,
        }
    }

    #[test]
    fn worked_example() {
        let w = per_coordinate(&[3, 5], &[1, 2], &[rat(1, 125), rat(1, 125)], 5, rat(3, 1));
        let t = chi_witness_to_omega_witness(&w).unwrap();
        assert_eq!(t.window, int(25));
        assert_eq!(t.pair(0), (&int(15), &int(5)));
        assert_eq!(t.pair(1), (&int(15), &int(6)));
        assert_eq!(t.errors[0].hi, rat(5, 125));
        assert_eq!(t.errors[1].hi, rat(3, 125));
        assert_eq!(t.exponent, Exponent::Finite(rat(1, 1)));
        assert!(!t.vacuous);
    }

    #[test]
    fn one_dimension_is_identity() {
        let w = per_coordinate(&[7], &[4], &[rat(1, 50)], 9, rat(17, 10));
        let t = chi_witness_to_omega_witness(&w).unwrap();
        assert_eq!(t.window, int(9));
        assert_eq!(t.pair(0), (&int(7), &int(4)));
        assert_eq!(t.exponent, w.exponent);
    }

    #[test]
    fn low_exponent_is_vacuous() {
        let w = per_coordinate(&[2, 3], &[1, 1], &[rat(1, 4), rat(1, 4)], 4, rat(1, 1));
        let t = chi_witness_to_omega_witness(&w).unwrap();
        assert_eq!(t.exponent, Exponent::Finite(rat(0, 1)));
        assert!(t.vacuous);
        let w = per_coordinate(&[2, 3], &[1, 1], &[rat(1, 4), rat(1, 4)], 4, rat(2, 1));
        assert_eq!(chi_witness_to_omega_witness(&w).unwrap().exponent, Exponent::Finite(rat(1, 2)));
    }
}
