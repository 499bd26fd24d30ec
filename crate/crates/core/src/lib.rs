pub mod error;
pub mod linalg;
pub mod lti;
pub mod projection;
pub mod random;
pub mod example;
pub mod graph;
pub mod mas;
pub mod study;

pub use error::{Error, Result};
