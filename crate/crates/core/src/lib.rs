pub mod blocks;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod harness;
pub mod pml;
pub mod precond;
pub mod sparse;
pub mod specfun;
pub mod sweep;

pub use error::{Error, Result};
