// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fv;
pub mod harness;
pub mod localtime;
pub mod media;
pub mod path;
pub mod quad;
pub mod scale;
pub mod stats;

pub use error::{Error, Result};
