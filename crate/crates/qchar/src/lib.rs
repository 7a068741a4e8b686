//! File formats, the on-disk cache and the command-line frontend for
//! [`qchar_core`].

pub mod cli;
pub mod format;
pub mod store;
