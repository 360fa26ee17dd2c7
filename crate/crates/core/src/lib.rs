#![no_std]
extern crate alloc;

pub mod arith;
pub mod constructors;
pub mod error;
pub mod exponents;
pub mod cf;
pub mod classic;
pub mod distance;
pub mod kernel;
pub mod partition;
pub mod scan;
pub mod source;
pub mod variety;

pub use arith::{Int, Rat};
pub use error::{Error, Result};
pub use cf::{Convergent, ConvergentList};
pub use distance::DistanceInterval;
pub use source::{CfTail, Enclosure, Precision, RealSource, SeriesTail};
