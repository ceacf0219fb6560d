//! Exact arithmetic for root systems, splints, branching rules and affine characters.

pub mod affine;
pub mod character;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod qseries;
pub mod splint;
pub mod weight;

pub use character::{DominantCharacter, FormalCharacter};
pub use error::{LieError, Result};
pub use lattice::{build_root_system, parse_algebra, Family, RootSystem, SimpleType, Subsystem};
pub use weight::{Rational, Weight};
