pub mod affine;
pub mod combinators;
pub mod error;
pub mod examples;
pub mod intern;
pub mod isosceles;
pub mod lyndon;
pub mod oag;
pub mod trees;
pub mod words;

pub use error::{Error, Result};
