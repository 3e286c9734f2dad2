//! Exact polyhedral chain calculus with coefficients in normed commutative
//! groups.

#![allow(clippy::needless_range_loop)]

pub mod bundle;
pub mod chain;
pub mod complex;
pub mod error;
pub mod exterior;
pub mod flatnorm;
pub mod group;
pub mod interval;
pub mod io;
pub mod lp;
pub mod rational;
pub mod verify;

pub use error::{Error, Result};
