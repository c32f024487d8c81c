//! Batch front-end for the rsft kernel: context files, command dispatch,
//! reports and the shipped fixture contexts.

pub mod commands;
pub mod context;
pub mod fixtures;
