//! Vectors `(ζ_1, ..., ζ_k)` of 1-streams with sparse large quotients.
//!
//! At jump `i`, `ζ_1` is padded with 1's up to a threshold and receives
//! `h_{1,i} = ⌈s_{1,i}^(λ_1-1)⌉`; each later `ζ_j` is padded until its
//! denominator first reaches `s_{1,i}^(w/λ_j)` and receives
//! `h_{j,i} = ⌈s_{j,i}^(λ_j-1)⌉`. The next threshold is
//! `4·s_{1,i}^(λ_1 λ_max/w)`, which pushes every `s_{j,i+1}` past `s_{1,i}^λ_1`,
//! raised where needed so each stream is still short of its next target.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, ToPrimitive};

use super::{realize, row, Construction, ConstructionPlan, ConstructionTrace, PlanKind, Stream};
use crate::arith::{bits, ceil_pow, ceil_rat, pow2, power_ge, Int, Rat};
use crate::distance::deviation;
use crate::error::{Error, Result};
use crate::source::{CfTail, Precision, RealSource};

const THRESHOLD_MARGIN: u32 = 4;

/// `2^m` with `s^(gap) >= 4` for the smallest gap between distinct target
/// exponents, so 1-padding (steps of at most 2) can separate the coordinates
/// already at the first jump.
fn first_threshold(lambdas: &[Rat], w: &Rat) -> Int {
    let mut targets: Vec<Rat> = core::iter::once(Rat::one()).chain(lambdas[1..].iter().map(|l| w / l)).collect();
    targets.sort();
    targets.dedup();
    let m = targets
        .windows(2)
        .map(|p| ceil_rat(&(Rat::from_integer(Int::from(2)) / (&p[1] - &p[0]))))
        .max()
        .and_then(|m| m.to_u64())
        .unwrap_or(0)
        .max(4);
    pow2(m)
}

fn salt_bit(salt: u64, jump: usize, j: usize, k: usize) -> bool {
    let i = (jump * k + j) % 64;
    (salt >> i) & 1 == 1
}

pub fn construct_vector_lamblemm(plan: &ConstructionPlan) -> Result<Construction> {
    plan.validate()?;
    let PlanKind::VectorLamblemm { lambdas, w } = &plan.kind else {
        return Err(Error::InvalidPlan("not a vector plan".into()));
    };
    let k = lambdas.len();
    let one = Rat::one();
    let lambda_max = lambdas.iter().max().expect("validated");
    let spread = &lambdas[0] * lambda_max / w;
    let mut streams: Vec<Stream> = (0..k)
        .map(|_| {
            let mut s = Stream::new(Int::from(0));
            s.push(Int::one());
            s
        })
        .collect();
    let mut threshold = first_threshold(lambdas, w);
    let mut rows = Vec::with_capacity(plan.depth * k);
    let mut prev_first: Option<Int> = None;
    for jump in 1..=plan.depth {
        let first = &mut streams[0];
        while first.cur < threshold {
            first.push(Int::one());
        }
        if salt_bit(plan.salt, jump, 0, k) {
            first.push(Int::one());
        }
        let s1 = first.cur.clone();
        let h1 = ceil_pow(&s1, &(&lambdas[0] - &one));
        rows.push(row(jump, 0, first.next_position(), h1.clone(), s1.clone(), &s1));
        first.push(h1);

        for j in 1..k {
            let stream = &mut streams[j];
            if power_ge(&stream.cur, &lambdas[j], &s1, w) {
                return Err(Error::InfeasibleSchedule(format!(
                    "coordinate {j} already past s_(1,{jump})^(w/lambda) before padding"
                )));
            }
            while !power_ge(&stream.cur, &lambdas[j], &s1, w) {
                stream.push(Int::one());
            }
            if salt_bit(plan.salt, jump, j, k) {
                stream.push(Int::one());
            }
            let s = stream.cur.clone();
            let h = ceil_pow(&s, &(&lambdas[j] - &one));
            rows.push(row(jump, j, stream.next_position(), h.clone(), s, &s1));
            stream.push(h);
        }
        check_ordering(&rows[rows.len() - k..], lambdas, w, prev_first.as_ref())?;
        threshold = ceil_pow(&s1, &spread) * THRESHOLD_MARGIN;
        // padding overshoot can leave a stream past the spread estimate
        for j in 1..k {
            let past = ceil_pow(&streams[j].cur, &(&lambdas[j] / w)) * THRESHOLD_MARGIN;
            threshold = threshold.max(past);
        }
        prev_first = Some(s1);
    }
    let sources = streams
        .into_iter()
        .map(|s| RealSource::cf(s.quotients, CfTail::Ones))
        .collect::<Result<Vec<_>>>()?;
    realize(&mut rows, &sources)?;
    Ok(Construction {
        sources,
        trace: ConstructionTrace { rows },
    })
}

/// `s_{1,i} > s_{j,i}` in order of decreasing target exponent `w/λ_j`
/// (non-strict between equal targets), and every `s_{j,i} > s_{1,i-1}^λ_1`.
fn check_ordering(jump_rows: &[super::TraceRow], lambdas: &[Rat], w: &Rat, prev_first: Option<&Int>) -> Result<()> {
    let jump = jump_rows[0].jump;
    let target = |j: usize| if j == 0 { Rat::one() } else { w / &lambdas[j] };
    let mut order: Vec<usize> = (0..jump_rows.len()).collect();
    order.sort_by(|&a, &b| target(b).cmp(&target(a)).then(a.cmp(&b)));
    for pair in order.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let strict = target(a) > target(b);
        let ok = if strict { jump_rows[a].s > jump_rows[b].s } else { jump_rows[a].s >= jump_rows[b].s };
        if !ok {
            return Err(Error::InfeasibleSchedule(format!(
                "denominators at jump {jump} out of order between coordinates {a} and {b}"
            )));
        }
    }
    if let Some(p) = prev_first {
        let floor = ceil_pow(p, &lambdas[0]);
        if jump_rows[1..].iter().any(|r| r.s <= floor) {
            return Err(Error::InfeasibleSchedule(format!("jump {jump} starts below s_(1,{})^lambda_1", jump - 1)));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NonDesignatedCheck {
    pub checked: usize,
    /// `(coordinate, convergent index)` pairs with `‖sζ‖ < s^(-1)/3`.
    pub violations: Vec<(usize, usize)>,
    pub unresolved: usize,
}

/// Checks `‖s_n ζ_j‖ >= s_n^(-1)/3` at every prefix convergent that is not
/// followed by a designated quotient.
pub fn check_non_designated(c: &Construction, prec: Precision) -> Result<NonDesignatedCheck> {
    let prec = prec.covering(&c.sources);
    let mut out = NonDesignatedCheck::default();
    for (j, src) in c.sources.iter().enumerate() {
        let Some(d) = src.as_cf() else { continue };
        let designated: Vec<usize> = c.trace.coordinate(j).map(|r| r.position).collect();
        for (n, (r, s)) in d.prefix_convergents().iter().enumerate() {
            if n == 0 || s <= &Int::one() || designated.contains(&(n + 1)) {
                continue;
            }
            out.checked += 1;
            let bound = Rat::new(Int::one(), s * 3u32);
            let mut extra = 16u64;
            loop {
                let dist = deviation(s, r, src, bits(s) + extra, prec)?;
                if dist.lo >= bound {
                    break;
                }
                if dist.hi < bound {
                    out.violations.push((j, n));
                    break;
                }
                if extra > 256 {
                    out.unresolved += 1;
                    break;
                }
                extra *= 4;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn plan(lambdas: &[(i64, i64)], w: Rat, depth: usize) -> ConstructionPlan {
        let lambdas = lambdas.iter().map(|&(a, b)| rat(a, b)).collect();
        ConstructionPlan::new(PlanKind::VectorLamblemm { lambdas, w }, depth)
    }

    #[test]
    fn all_ones_when_every_target_is_one() {
        let c = construct_vector_lamblemm(&plan(&[(1, 1), (1, 1)], rat(1, 1), 4)).unwrap();
        for s in &c.sources {
            assert!(s.as_cf().unwrap().prefix()[1..].iter().all(|a| a.is_one()));
        }
    }

    #[test]
    fn ratios_approach_w_over_lambda() {
        let c = construct_vector_lamblemm(&plan(&[(3, 1), (4, 1)], rat(2, 1), 4)).unwrap();
        let last = c.trace.last_jump().unwrap();
        let r1 = c.trace.row(last, 0).unwrap();
        let r2 = c.trace.row(last, 1).unwrap();
        assert!((r2.ratio - 0.5).abs() < 0.05, "{}", r2.ratio);
        assert!((r1.nu_approx - 3.0).abs() < 0.1, "{}", r1.nu_approx);
        assert!((r2.nu_approx - 4.0).abs() < 0.1, "{}", r2.nu_approx);
        let check = check_non_designated(&c, Precision::default()).unwrap();
        assert!(check.checked > 10);
        assert_eq!(check.violations, alloc::vec![]);
        assert_eq!(check.unresolved, 0);
    }

    #[test]
    fn salt_changes_positions() {
        let p = plan(&[(3, 1), (4, 1)], rat(2, 1), 3);
        let a = construct_vector_lamblemm(&p).unwrap();
        let b = construct_vector_lamblemm(&p.clone().with_salt(0b1011)).unwrap();
        let c = construct_vector_lamblemm(&p).unwrap();
        assert_ne!(a.sources, b.sources);
        assert_eq!(a.sources, c.sources);
    }

    #[test]
    fn three_coordinates_keep_order() {
        let c = construct_vector_lamblemm(&plan(&[(3, 1), (5, 1), (4, 1)], rat(2, 1), 3)).unwrap();
        let last = c.trace.last_jump().unwrap();
        let s: Vec<_> = (0..3).map(|j| c.trace.row(last, j).unwrap().s.clone()).collect();
        assert!(s[0] > s[2] && s[2] > s[1]);
    }
}
