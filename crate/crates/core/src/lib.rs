//! Signed harmonic sums and small logarithmic means of completely
//! multiplicative functions, with rigorous verification of every bound.

pub mod constructor;
pub mod density;
pub mod error;
pub mod multiplicative;
pub mod numerics;
pub mod sieve;
pub mod support;

pub use error::{Error, Infeasible, Result};
pub use numerics::{BigFixed, Comparison, ExactRational};
pub use support::{SetSpec, SignSequence, SupportSet};
