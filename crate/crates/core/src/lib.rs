#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod basis;
pub mod error;
pub mod experiments;
pub mod kernel;
pub mod quadrature;
pub mod schemes;
pub mod sequences;

pub use error::{Error, Result};
