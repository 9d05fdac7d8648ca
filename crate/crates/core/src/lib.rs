pub mod cli;
pub mod cone;
pub mod error;
pub mod group;
pub mod linalg;
pub mod metric;
pub mod semigroup;

pub use error::{Error, Result};
