#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coupling;
pub mod error;
pub mod geometry;
pub mod inductance;
pub mod magnonics;
pub mod quantities;
pub mod spectra;
pub mod switch;

pub use error::{Error, Result};
