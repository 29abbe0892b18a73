pub mod error;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub mod topology;
pub mod ck_solver;
pub mod wiener;
pub mod cli;
