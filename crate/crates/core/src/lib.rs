pub mod crossprod;
pub mod error;
pub mod dsl;
pub mod filtration;
pub mod finite;
pub mod freegg;
pub mod gallery;
pub mod grothendieck;
pub mod indexing;
pub mod report;
pub mod search;
pub mod twocat;

pub use error::{Error, Result};
pub use report::{Law, ValidationReport, Violation};
