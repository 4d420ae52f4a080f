//! Seeded ensembles, ratio experiments, grid checks, report formats and the
//! command-line driver.

mod checks;
mod cli;
mod ensembles;
mod experiments;
mod report;

pub use checks::*;
pub use cli::*;
pub use ensembles::*;
pub use experiments::*;
pub use report::*;
