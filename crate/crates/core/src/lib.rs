pub mod error;
pub mod fixtures;
pub mod hull;
pub mod cli;
pub mod crext;
pub mod flatness;
pub mod hypersurface;
pub mod parse;
pub mod sampling;
pub mod trace;
pub mod web;
pub mod poly;

pub use error::{Error, ParseError, Result};
