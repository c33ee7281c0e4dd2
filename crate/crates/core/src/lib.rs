pub mod bound_states;
pub mod cli;
pub mod error;
pub mod model;
pub mod oracle;
pub mod scattering;
pub mod special;

pub use error::{Error, Result};
