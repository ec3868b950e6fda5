pub mod data_plane;
pub mod error;
pub mod experiments;
pub mod model;
pub mod policies;
pub mod rap;
pub mod virtual_plane;

pub use error::{Error, Result};
