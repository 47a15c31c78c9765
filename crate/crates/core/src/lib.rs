//! Exact computational kernel for Newton polytopes, mixed volumes, balanced
//! weighted fans, tropical hypersurfaces and the polytope algebra.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals).
//! Generic solution counts of Laurent systems are available through two
//! independent routes: mixed volumes of Newton polytopes
//! ([`tropical::bkk_count`]) and stable intersection of tropical
//! hypersurfaces ([`tropical::bkk_via_fans`]).

pub mod algebra;
pub mod error;
pub mod fan;
pub mod lattice;
pub mod polytope;
pub mod tropical;

pub use error::{Error, ErrorClass, Result};
