pub mod catalog;
pub mod cech;
pub mod config;
pub mod koszul;
pub mod error;
pub mod euler;
pub mod homalg;
pub mod linalg;
pub mod multigraded;
pub mod report;
pub mod suites;
pub mod weyl;

pub use error::{Error, Result};
