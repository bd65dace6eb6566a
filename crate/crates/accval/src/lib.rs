//! File formats, embedded case fixtures, report rendering and the `accval`
//! command line, built on `accval-core`.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod reconcile;
pub mod render;
