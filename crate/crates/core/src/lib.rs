pub mod error;
pub mod operator_core;
pub mod reservoir;
pub mod dynamics;
pub mod generators;
pub mod matching;
pub mod sl_oracle;
pub mod config;
pub mod cli;

pub use error::{Error, Result};
