//! File formats, reference fixtures and the `projdyn` command line on top
//! of `projdyn-core`.

pub mod choices;
pub mod cli;
pub mod fixtures;
pub mod format;
