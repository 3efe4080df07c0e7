pub mod bosonize;
pub mod cli;
pub mod dalgebra;
pub mod error;
pub mod linalg;
pub mod pvkit;
pub mod random;
pub mod report;
pub mod solver;
pub mod supercore;
pub mod supermatrix;

pub use error::{Error, Result};
