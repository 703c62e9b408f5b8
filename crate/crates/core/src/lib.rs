//! Exact computation of tautological relations, descendent potentials and
//! their generating series.

#![allow(clippy::needless_range_loop)]

pub mod airy;
pub mod cli;
pub mod closed;
pub mod error;
pub mod frobenius;
pub mod fz;
pub mod kappa;
pub mod kontsevich;
pub mod rational;
pub mod named;
pub mod open;
pub mod pixton;
pub mod report;
pub mod series;
pub mod strata;

pub use error::{Error, Result};
pub use rational::Rational;
