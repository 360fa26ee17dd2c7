use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, ToPrimitive};

use super::{realize, row, Construction, ConstructionPlan, ConstructionTrace, PlanKind, Stream};
use crate::arith::{ceil_pow, floor_pow, log2_int_approx, pow2, to_f64, Int, Rat};
use crate::error::{Error, Result};
use crate::source::{CfTail, RealSource, SeriesTail};

/// One-dimensional sources with `λ₁ = λ`.
///
/// `Lambda1Cf` appends `a_{n+1} = ⌈s_n^(λ-1)⌉` at every step and continues
/// with 1's past the prefix; `Lambda1Series` is `Σ 2^(-a_n)` with
/// `a_n = ⌊(1+λ)^n⌋`.
pub fn construct_lambda1(plan: &ConstructionPlan) -> Result<Construction> {
    plan.validate()?;
    match &plan.kind {
        PlanKind::Lambda1Cf { lambda } => cf(lambda, plan.depth),
        PlanKind::Lambda1Series { lambda } => series(lambda, plan.depth),
        _ => Err(Error::InvalidPlan("not a one-dimensional plan".into())),
    }
}

fn cf(lambda: &Rat, depth: usize) -> Result<Construction> {
    let e = lambda - Rat::one();
    let mut stream = Stream::new(Int::from(0));
    let mut rows = Vec::with_capacity(depth);
    while rows.len() < depth {
        let s = stream.cur.clone();
        let h = ceil_pow(&s, &e);
        if s > Int::one() {
            let mut r = row(rows.len() + 1, 0, stream.next_position(), h.clone(), s.clone(), &s);
            r.predicted_log2 = Some(to_f64(lambda) * log2_int_approx(&s));
            rows.push(r);
        }
        stream.push(h);
    }
    let src = RealSource::cf(stream.quotients, CfTail::Ones)?;
    let sources = alloc::vec![src];
    realize(&mut rows, &sources)?;
    Ok(Construction {
        sources,
        trace: ConstructionTrace { rows },
    })
}

fn series(lambda: &Rat, depth: usize) -> Result<Construction> {
    let base = Rat::one() + lambda;
    let mut exponents = Vec::with_capacity(depth);
    for n in 1..=depth {
        let a = floor_pow(&base, n as u32)
            .to_u64()
            .ok_or_else(|| Error::InfeasibleSchedule(format!("exponent a_{n} does not fit in 64 bits")))?;
        exponents.push(a);
    }
    let src = RealSource::binary_series(exponents.clone(), SeriesTail::Geometric(lambda.clone()))?;
    let growth = to_f64(&base);
    let mut rows: Vec<_> = exponents
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let s = pow2(a);
            let mut r = row(i + 1, 0, i + 1, Int::from(a), s.clone(), &s);
            r.predicted_log2 = Some(growth * a as f64);
            r
        })
        .collect();
    let sources = alloc::vec![src];
    realize(&mut rows, &sources)?;
    Ok(Construction {
        sources,
        trace: ConstructionTrace { rows },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::exponents::lambda1_profile;
    use crate::source::{Precision, SourceKind};

    fn plan(kind: PlanKind, depth: usize) -> ConstructionPlan {
        ConstructionPlan::new(kind, depth)
    }

    #[test]
    fn series_lambda_one_is_powers_of_two() {
        let c = construct_lambda1(&plan(PlanKind::Lambda1Series { lambda: rat(1, 1) }, 6)).unwrap();
        match c.sources[0].kind() {
            SourceKind::BinarySeries(d) => assert_eq!(d.exponents(), &[2, 4, 8, 16, 32, 64]),
            _ => panic!("expected a series, got {:?}", c.sources[0]),
        }
    }

    #[test]
    fn cf_lambda_one_is_all_ones() {
        let c = construct_lambda1(&plan(PlanKind::Lambda1Cf { lambda: rat(1, 1) }, 10)).unwrap();
        let d = c.sources[0].as_cf().unwrap();
        assert!(d.prefix()[1..].iter().all(|a| a == &int(1)));
    }

    #[test]
    fn cf_lambda_two_recursion() {
        let c = construct_lambda1(&plan(PlanKind::Lambda1Cf { lambda: rat(2, 1) }, 5)).unwrap();
        let d = c.sources[0].as_cf().unwrap();
        assert_eq!(&d.prefix()[..6], &[int(0), int(1), int(1), int(2), int(5), int(27)]);
        let last = c.trace.rows.last().unwrap();
        assert!((last.nu_approx - 2.0).abs() < 0.05, "{}", last.nu_approx);
    }

    #[test]
    fn series_lambda_two_profile() {
        let c = construct_lambda1(&plan(PlanKind::Lambda1Series { lambda: rat(2, 1) }, 8)).unwrap();
        let prec = Precision::default().covering(&c.sources);
        let e = lambda1_profile(&c.sources[0], 60, 100, prec).unwrap();
        let v = e.empirical.unwrap().to_f64();
        assert!((v - 2.0).abs() < 0.1, "{v}");
        for r in &c.trace.rows[2..] {
            assert!((r.nu_approx - 2.0).abs() < 0.1, "{} {}", r.position, r.nu_approx);
        }
    }

    #[test]
    fn deterministic() {
        let p = plan(PlanKind::Lambda1Cf { lambda: rat(5, 2) }, 6);
        let a = construct_lambda1(&p).unwrap();
        let b = construct_lambda1(&p).unwrap();
        assert_eq!(a.sources, b.sources);
        assert_eq!(a.trace, b.trace);
    }
}
