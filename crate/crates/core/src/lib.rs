//! Balanced separators with few expensive outliers in graphs of bounded
//! expansion, with the ordering-based parameters they are built on.

pub mod apps;
pub mod assign;
pub mod caps;
pub mod engine;
pub mod error;
pub mod expander;
mod flow;
pub mod graph;
pub mod ordering;
pub mod reach;
pub mod vset;

pub use error::{Error, Result};
