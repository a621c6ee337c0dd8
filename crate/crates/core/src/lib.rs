pub mod cli;
pub mod error;
pub mod eval;
pub mod field;
pub mod geometry;
pub mod model;
pub mod network;
pub mod pipeline;
pub mod render;
pub mod spatial;
pub mod tessellation;
mod weighting;

pub use error::{Error, Result};
