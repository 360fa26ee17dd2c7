use alloc::vec::Vec;

use num_traits::One;

use crate::arith::{ceil_rat, rat, rat_int, Int, Rat};
use crate::cf::convergent_denominators;
use crate::error::{invalid, Result};
use crate::source::{Precision, RealSource};

/// Sorted, duplicate-free list of windows `2 <= X <= x_max`, always ending at `x_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    windows: Vec<Int>,
    x_max: Int,
}

impl Schedule {
    pub fn from_windows(windows: Vec<Int>, x_max: &Int) -> Result<Self> {
        if x_max < &Int::from(2) {
            return Err(invalid("x_max must be >= 2"));
        }
        let mut s = Schedule {
            windows: Vec::new(),
            x_max: x_max.clone(),
        };
        s.insert(windows);
        Ok(s)
    }

    /// `start, ⌈start·ratio⌉, ...` up to `x_max`.
    pub fn geometric(start: &Int, ratio: &Rat, x_max: &Int) -> Result<Self> {
        if ratio <= &Rat::one() {
            return Err(invalid("window ratio must exceed 1"));
        }
        let mut windows = Vec::new();
        let mut w = start.clone().max(Int::from(2));
        while &w <= x_max {
            windows.push(w.clone());
            let next = ceil_rat(&(rat_int(w.clone()) * ratio));
            w = next.max(w + 1u32);
        }
        Self::from_windows(windows, x_max)
    }

    /// Ratio 2 from 8.
    pub fn default_for(x_max: &Int) -> Result<Self> {
        Self::geometric(&Int::from(8), &rat(2, 1), x_max)
    }

    pub fn insert(&mut self, more: impl IntoIterator<Item = Int>) {
        let two = Int::from(2);
        self.windows.extend(more.into_iter().filter(|w| w >= &two && w <= &self.x_max));
        self.windows.push(self.x_max.clone());
        self.windows.sort();
        self.windows.dedup();
    }

    /// Adds every convergent denominator of every source.
    pub fn with_convergents(mut self, sources: &[RealSource], prec: Precision) -> Result<Self> {
        for s in sources {
            let (dens, _) = convergent_denominators(s, &self.x_max, prec)?;
            self.insert(dens);
        }
        Ok(self)
    }

    /// Adds `s^k` for every convergent denominator `s` of `base`.
    pub fn with_powers(mut self, base: &RealSource, k: u32, prec: Precision) -> Result<Self> {
        let root = self.x_max.nth_root(k);
        let (dens, _) = convergent_denominators(base, &root, prec)?;
        self.insert(dens.into_iter().map(|s| num_traits::pow(s, k as usize)));
        Ok(self)
    }

    pub fn windows(&self) -> &[Int] {
        &self.windows
    }

    pub fn x_max(&self) -> &Int {
        &self.x_max
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }
}
