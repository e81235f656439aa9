pub mod algebra;
pub mod analysis;
pub mod building;
pub mod error;
pub mod exec;
pub mod shift;

pub use error::{Error, Result};
