//! Sources with prescribed approximation exponents.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::arith::{log2_int_approx, Int, Rat};
use crate::error::{Error, Result};
use crate::exponents::{Exponent, WitnessRecord};
use crate::source::{Precision, RealSource};

mod lambda1;
mod lamblemm;
mod veronese;

pub use lambda1::construct_lambda1;
pub use lamblemm::{check_non_designated, construct_vector_lamblemm, NonDesignatedCheck};
pub use veronese::construct_veronese;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanKind {
    Lambda1Cf { lambda: Rat },
    Lambda1Series { lambda: Rat },
    VectorLamblemm { lambdas: Vec<Rat>, w: Rat },
    Veronese { k: u32, lambda: Rat },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionPlan {
    pub kind: PlanKind,
    /// Number of designated jumps.
    pub depth: usize,
    pub salt: u64,
}

impl ConstructionPlan {
    pub fn new(kind: PlanKind, depth: usize) -> Self {
        Self { kind, depth, salt: 0 }
    }

    pub fn with_salt(mut self, salt: u64) -> Self {
        self.salt = salt;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth < 3 {
            return Err(Error::InvalidPlan(format!("depth {} is below 3", self.depth)));
        }
        let one = Rat::one();
        match &self.kind {
            PlanKind::Lambda1Cf { lambda } | PlanKind::Lambda1Series { lambda } if lambda < &one => {
                Err(Error::InvalidPlan(format!("lambda {lambda} is below 1")))
            }
            PlanKind::VectorLamblemm { lambdas, w } => {
                if lambdas.is_empty() {
                    return Err(Error::InvalidPlan("no coordinates".into()));
                }
                if let Some(l) = lambdas.iter().find(|l| **l < one) {
                    return Err(Error::InvalidPlan(format!("lambda {l} is below 1")));
                }
                let min = lambdas.iter().min().expect("non-empty");
                if w < &one || w > min {
                    return Err(Error::InvalidPlan(format!("w = {w} outside [1, {min}]")));
                }
                Ok(())
            }
            PlanKind::Veronese { k, lambda } => {
                if *k == 0 {
                    return Err(Error::InvalidPlan("k must be >= 1".into()));
                }
                if lambda < &Rat::from_integer(Int::from(2)) {
                    return Err(Error::InvalidPlan(format!("lambda {lambda} is below 2")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// One designated position in a constructed stream.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub jump: usize,
    pub coordinate: usize,
    /// Index of the inserted quotient (for series: the term index `n`).
    pub position: usize,
    /// Inserted quotient (for series: the exponent `a_n`).
    pub h: Int,
    /// Denominator just before the insertion (for series: `2^(a_n)`).
    pub s: Int,
    /// `log s / log s_{1,i}` against the first coordinate at the same jump.
    pub ratio: f64,
    /// Certified lower bound on `-log‖sζ‖/log s`.
    pub nu: Exponent,
    pub nu_approx: f64,
    /// Predicted `log2` of the next denominator, where the construction fixes one.
    pub predicted_log2: Option<f64>,
}

impl Eq for TraceRow {}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub rows: Vec<TraceRow>,
}

impl ConstructionTrace {
    /// Rows of coordinate `j`, in jump order.
    pub fn coordinate(&self, j: usize) -> impl Iterator<Item = &TraceRow> {
        self.rows.iter().filter(move |r| r.coordinate == j)
    }

    pub fn last_jump(&self) -> Option<usize> {
        self.rows.iter().map(|r| r.jump).max()
    }

    pub fn row(&self, jump: usize, j: usize) -> Option<&TraceRow> {
        self.rows.iter().find(|r| r.jump == jump && r.coordinate == j)
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub sources: Vec<RealSource>,
    pub trace: ConstructionTrace,
}

/// Builds any plan.
pub fn construct(plan: &ConstructionPlan) -> Result<Construction> {
    match &plan.kind {
        PlanKind::Lambda1Cf { .. } | PlanKind::Lambda1Series { .. } => construct_lambda1(plan),
        PlanKind::VectorLamblemm { .. } => construct_vector_lamblemm(plan),
        PlanKind::Veronese { .. } => construct_veronese(plan),
    }
}

/// Fills `nu` and `nu_approx` from a fresh witness at `x = s`.
pub(crate) fn realize(rows: &mut [TraceRow], sources: &[RealSource]) -> Result<()> {
    let prec = Precision::default().covering(sources);
    for r in rows.iter_mut() {
        if !r.s.is_positive() || r.s.is_one() {
            continue;
        }
        let src = core::slice::from_ref(&sources[r.coordinate]);
        let w = WitnessRecord::shared(&r.s, src, &r.s, prec)?;
        r.nu_approx = w.exponent.to_f64();
        r.nu = w.exponent;
    }
    Ok(())
}

pub(crate) fn row(jump: usize, coordinate: usize, position: usize, h: Int, s: Int, s_first: &Int) -> TraceRow {
    let ls = log2_int_approx(&s);
    let l1 = log2_int_approx(s_first);
    TraceRow {
        jump,
        coordinate,
        position,
        h,
        ratio: if l1 > 0.0 { ls / l1 } else { 1.0 },
        s,
        nu: Exponent::Finite(Rat::from_integer(Int::from(0))),
        nu_approx: 0.0,
        predicted_log2: None,
    }
}

/// Appends quotients to a stream while tracking the last two denominators.
#[derive(Clone, Debug)]
pub(crate) struct Stream {
    pub quotients: Vec<Int>,
    pub prev: Int,
    pub cur: Int,
}

impl Stream {
    /// `[a_0]` with denominators `(0, 1)`.
    pub fn new(a0: Int) -> Self {
        Self {
            quotients: alloc::vec![a0],
            prev: Int::from(0),
            cur: Int::one(),
        }
    }

    pub fn push(&mut self, a: Int) {
        let next = &a * &self.cur + &self.prev;
        self.prev = core::mem::replace(&mut self.cur, next);
        self.quotients.push(a);
    }

    /// Index the next pushed quotient will take.
    pub fn next_position(&self) -> usize {
        self.quotients.len()
    }
}
