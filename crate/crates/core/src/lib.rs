//! Quasi-Poisson brackets of holonomy functions on representation spaces of
//! bordered surfaces.

pub mod cli;
pub mod cross_section;
pub mod error;
pub mod goldman;
pub mod lie;
pub mod quasipoisson;
pub mod report;
pub mod repspace;
pub mod suites;
pub mod surfaces;

pub use error::{Error, Result};
