use alloc::format;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::chi::CANDIDATE_MULTIPLES;
use super::schedule::Schedule;
use super::witness::WitnessRecord;
use super::{ExponentEstimate, ExponentName, WindowResult};
use crate::arith::Int;
use crate::cf::convergent_denominators;
use crate::error::{invalid, Error, Result};
use crate::partition::Executor;
use crate::scan::{Order, Scanner};
use crate::source::{Precision, RealSource};

/// Windows up to this bound are searched exhaustively.
pub const OMEGA_EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// Shared-denominator estimate: at each window, the `x <= X` minimising
/// `max_j ‖xζ_j‖` (smallest `x` on ties).
pub fn estimate_omega(sources: &[RealSource], schedule: &Schedule, prec: Precision, exec: &impl Executor) -> Result<ExponentEstimate> {
    let k = sources.len();
    if k == 0 {
        return Err(invalid("need at least one source"));
    }
    let scanner = Scanner::new(sources, prec)?;
    let x_max = schedule.x_max();
    let exhaustive_end = x_max.to_u64().map_or(OMEGA_EXHAUSTIVE_LIMIT, |x| x.min(OMEGA_EXHAUSTIVE_LIMIT));
    let cuts: Vec<u64> = schedule.windows().iter().filter_map(|w| w.to_u64()).filter(|&w| w <= exhaustive_end).collect();
    let imp = scanner.improvements(exhaustive_end, &cuts, exec)?;
    let flag = (imp.unresolved > 0).then(|| format!("{} comparisons unresolved", imp.unresolved));

    let end = Int::from(exhaustive_end);
    let mut results = Vec::with_capacity(schedule.len());
    for w in schedule.windows().iter().filter(|w| **w <= end) {
        let best = imp.best_at(w.to_u64().expect("small window")).ok_or_else(|| invalid("window below 1"))?;
        let witness = WitnessRecord::shared(&Int::from(best), sources, w, prec)?;
        results.push(WindowResult {
            window: w.clone(),
            witness: Some(witness),
            flag: flag.clone(),
        });
    }

    let large: Vec<&Int> = schedule.windows().iter().filter(|w| **w > end).collect();
    if !large.is_empty() {
        let mut cands: Vec<Int> = imp.xs.iter().map(|&x| Int::from(x)).collect();
        for s in sources {
            let (dens, truncated) = convergent_denominators(s, x_max, prec)?;
            if truncated {
                return Err(Error::StreamExhausted(format!("convergents not certified up to {x_max}")));
            }
            for d in dens {
                for m in 1..=CANDIDATE_MULTIPLES {
                    let c = &d * m;
                    if &c > x_max {
                        break;
                    }
                    cands.push(c);
                }
            }
        }
        cands.sort();
        cands.dedup();
        let mut best: Option<Int> = None;
        let mut unresolved = imp.unresolved;
        let mut i = 0usize;
        for w in large {
            while i < cands.len() && &cands[i] <= w {
                let c = &cands[i];
                let better = match &best {
                    None => true,
                    Some(b) => match scanner.compare_exact(c, b)? {
                        Order::Less => true,
                        Order::NotLess => false,
                        Order::Unresolved => {
                            unresolved += 1;
                            false
                        }
                    },
                };
                if better {
                    best = Some(c.clone());
                }
                i += 1;
            }
            let b = best.clone().ok_or_else(|| invalid("no candidate below window"))?;
            let witness = WitnessRecord::shared(&b, sources, w, prec)?;
            results.push(WindowResult {
                window: w.clone(),
                witness: Some(witness),
                flag: (unresolved > 0).then(|| format!("{unresolved} comparisons unresolved")),
            });
        }
    }
    let name = if k == 1 { ExponentName::Lambda1 } else { ExponentName::OmegaK };
    Ok(ExponentEstimate::new(name, k, results))
}
