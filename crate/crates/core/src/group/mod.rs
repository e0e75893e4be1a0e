//! Presented groups: word problem, geodesics, balls and constants.

pub mod bounds;
pub mod dehn;
pub mod lattice;
pub mod oracle;
pub mod presentation;
pub mod rewrite;

pub use bounds::{companion_bound, conjugator_length_bound, l_constant, BoundConstants};
pub use dehn::DehnReducer;
pub use oracle::{free_conjugator, Caps, GroupOracle};
pub use presentation::{Backend, Presentation};
pub use rewrite::Rewriting;
