//! Library surface of the `qreact` command-line tool: configuration schema
//! and command implementations, kept callable so integration tests drive the
//! exact code paths the binary runs.

// Negated comparisons in argument guards are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
