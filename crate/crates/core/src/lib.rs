pub mod arith;
pub mod cli;
pub mod error;
pub mod exactfield;
pub mod families;
pub mod fields;
pub mod measure;
pub mod rootsofunity;
pub mod search;

pub use error::{Error, Result};
