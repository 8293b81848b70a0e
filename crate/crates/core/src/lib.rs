//! Sonar signature spaces.

pub mod analysis;
pub mod domain;
pub mod embedding;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod rips;
pub mod sim;

pub use error::{Error, Result};
