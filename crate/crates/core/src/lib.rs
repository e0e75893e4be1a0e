pub mod cert;
pub mod check;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod extension;
pub mod forms;
pub mod genus;
pub mod group;
pub mod quadratic;
pub mod surface;
pub mod thin;
pub mod word;

pub use error::{Error, Result};
pub use word::{Letter, Word};
