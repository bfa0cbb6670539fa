pub mod cartan;
pub mod config;
pub mod error;
pub mod extensor;
pub mod field;
pub mod lagrangian;
pub mod maxwell;
pub mod mv;
pub mod oracle;
pub mod report;
pub mod scenarios;
pub mod suite;
pub mod teleparallel;

pub use error::{Error, Result};
