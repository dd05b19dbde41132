//! File formats, corpus ingestion and the command-line front end for
//! [`lamp_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod io;
pub mod report;

pub use error::{Error, Result};
