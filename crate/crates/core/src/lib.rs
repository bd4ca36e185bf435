pub mod cohomring;
pub mod error;
pub mod exactalg;
pub mod groups;
pub mod homalg;
pub mod lattices;
pub mod spectrum;
pub mod stmod;
pub mod support;
pub mod verify;

pub use error::{Error, Result};
