use alloc::vec::Vec;

use super::{realize, row, Construction, ConstructionPlan, ConstructionTrace, PlanKind, Stream};
use crate::arith::{ceil_pow, log2_int_approx, to_f64, Int, Rat};
use crate::error::{Error, Result};
use crate::source::{CfTail, RealSource};

/// `[0; 1, 2, a_3, ...]` with `a_{n+1} = ⌈s_n^(kλ+k-2)⌉` for `n >= 2`, so
/// that `s_{n+1}` grows like `s_n^(kλ+k-1)`.
pub fn construct_veronese(plan: &ConstructionPlan) -> Result<Construction> {
    plan.validate()?;
    let PlanKind::Veronese { k, lambda } = &plan.kind else {
        return Err(Error::InvalidPlan("not a Veronese plan".into()));
    };
    let k = Rat::from_integer(Int::from(*k));
    let e = &k * lambda + &k - Rat::from_integer(Int::from(2));
    let growth = to_f64(&(&e + Rat::from_integer(Int::from(1))));
    let mut stream = Stream::new(Int::from(0));
    stream.push(Int::from(1));
    stream.push(Int::from(2));
    let mut rows = Vec::with_capacity(plan.depth);
    for jump in 1..=plan.depth {
        let s = stream.cur.clone();
        let h = ceil_pow(&s, &e);
        let mut r = row(jump, 0, stream.next_position(), h.clone(), s.clone(), &s);
        r.predicted_log2 = Some(growth * log2_int_approx(&s));
        rows.push(r);
        stream.push(h);
    }
    let sources = alloc::vec![RealSource::cf(stream.quotients, CfTail::Ones)?];
    realize(&mut rows, &sources)?;
    Ok(Construction {
        sources,
        trace: ConstructionTrace { rows },
    })
}
