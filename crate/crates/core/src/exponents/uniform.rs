use super::chi::{estimate_chi, ChiMethod};
use super::schedule::Schedule;
use super::{Exponent, ExponentEstimate, ExponentName};
use crate::arith::{rat, Int};
use crate::cf::convergent_denominators;
use crate::error::{Error, Result};
use crate::partition::Executor;
use crate::source::{Precision, RealSource};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformReport {
    pub estimate: ExponentEstimate,
    pub worst_window: Int,
    pub worst_exponent: Exponent,
    /// Windows whose comparisons were not all resolved.
    pub flagged_windows: usize,
}

impl UniformReport {
    /// Smallest exponent over windows `>= from`.
    pub fn worst_from(&self, from: &Int) -> Option<Exponent> {
        self.estimate.min_from(from)
    }
}

/// Per-coordinate witnesses on a dense schedule: ratio 11/10 from 2, plus
/// `s - 1` and `s` for every convergent denominator `s`, where the best error
/// is about to drop.
pub fn uniform_chi_check(sources: &[RealSource], x_max: &Int, prec: Precision, exec: &impl Executor) -> Result<UniformReport> {
    if sources.iter().any(|s| s.is_irrational() == Some(false)) {
        return Err(Error::RationalInput);
    }
    let mut schedule = Schedule::geometric(&Int::from(2), &rat(11, 10), x_max)?;
    for s in sources {
        let (dens, _) = convergent_denominators(s, x_max, prec)?;
        schedule.insert(dens.iter().map(|d| d - 1u32));
        schedule.insert(dens);
    }
    let mut estimate = estimate_chi(sources, &schedule, ChiMethod::ConvergentCandidates, prec, exec)?;
    estimate.name = ExponentName::UniformChiK;
    let (worst_window, worst_exponent) = estimate
        .windows
        .iter()
        .filter_map(|w| w.exponent().map(|e| (w.window.clone(), e.clone())))
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("schedule ends at x_max");
    estimate.empirical = Some(worst_exponent.clone());
    let flagged_windows = estimate.windows.iter().filter(|w| w.flag.is_some()).count();
    Ok(UniformReport {
        estimate,
        worst_window,
        worst_exponent,
        flagged_windows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::partition::Sequential;

    #[test]
    fn golden_worst_window_near_one() {
        let r = uniform_chi_check(&[RealSource::golden_minus_one()], &int(100_000), Precision::default(), &Sequential).unwrap();
        let v = r.worst_exponent.to_f64();
        assert!(v > 0.99 && v < 1.1, "{v} at {}", r.worst_window);
        assert!(r.estimate.windows.len() > 100);
    }

    #[test]
    fn rational_rejected() {
        let src = [RealSource::golden_minus_one(), RealSource::from_ratio(2, 5)];
        let err = uniform_chi_check(&src, &int(100), Precision::default(), &Sequential).unwrap_err();
        assert_eq!(err, Error::RationalInput);
    }

    #[test]
    fn three_cf_sources() {
        let mk = |q: &[i64]| RealSource::cf_small(q, crate::source::CfTail::Ones).unwrap();
        let src = [mk(&[0, 3, 7, 1, 2, 9]), mk(&[0, 1, 15, 2, 2]), mk(&[0, 5, 1, 1, 4, 3, 1])];
        let r = uniform_chi_check(&src, &int(20_000), Precision::default(), &Sequential).unwrap();
        let v = r.worst_from(&int(10_000)).unwrap().to_f64();
        assert!(v >= 0.95, "{v}");
    }
}
