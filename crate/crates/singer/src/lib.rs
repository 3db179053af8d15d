//! Text formats and the command-line front end for [`singer_core`].

pub mod cli;
pub mod formats;

pub use singer_core as core;
