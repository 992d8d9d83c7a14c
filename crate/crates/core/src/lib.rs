pub mod affineweyl;
pub mod battery;
pub mod characters;
pub mod emodule;
pub mod error;
pub mod par;
pub mod partitions;
pub mod qseries;

pub use error::{Error, Result};
