//! Exact classification of rank-3 fusion rings admitting premodular data.

pub mod characters;
pub mod classify;
pub mod error;
pub mod exactnum;
pub mod exec;
pub mod fusion;
pub mod premodular;

pub use error::{Error, Result};
pub use exec::Execution;
