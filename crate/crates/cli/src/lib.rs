//! File formats, scenario runners and table output for the `geophase` binary.

// `!(x > 0.0)` is meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod formats;
pub mod scenario;
pub mod table;

pub use error::CliError;
pub use table::{Cell, Format, Table};
