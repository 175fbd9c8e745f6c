pub mod error;
pub mod domains;
pub mod dynamics;
pub mod group;
pub mod kahler;
pub mod linalg;
pub mod random;

pub use error::{Error, ErrorKind, Result};
