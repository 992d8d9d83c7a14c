//! The algebra action on the implemented modules and its verification.

pub mod action;
pub mod catalog;
pub mod checks;
pub mod params;
pub mod rational;
pub mod spaces;
pub mod transport;
