//! Exact arithmetic, recurrence tools and log-behavior certification for
//! P-recursive sequences.

pub mod audit;
pub mod cli;
pub mod error;
pub mod fit;
pub mod kernel;
pub mod logbehavior;
pub mod recurrence;
pub mod report;
pub mod sequences;

pub use error::{Error, Result};
pub use kernel::{Float, IntPoly, Integer, Rational};
