//! Exact verification of lattice tilings of `Z^d`.
//!
//! A lattice tiling is a finite family of cosets `v_j + L_j` of full-rank
//! sublattices of `Z^d` that partitions `Z^d`. This crate provides exact
//! integer linear algebra for lattice bases, dual groups as rational exponent
//! vectors, cyclotomic sums with a complete zero test, three independent
//! tiling checks, executable versions of the structural necessary conditions
//! on tilings, and a pruned exhaustive search for tilings in which no two
//! cosets share a lattice.

pub(crate) mod arith;
pub mod characters;
pub mod cyclo;
pub mod error;
pub mod format;
pub mod genfun;
pub mod lattice;
pub mod linalg;
pub mod random;
pub mod search;
pub mod tiling;

pub use characters::DualPoint;
pub use cyclo::CycloSum;
pub use error::{Error, Result};
pub use lattice::{Lattice, LatticeTranslate};
pub use linalg::{IntMatrix, SmithDecomposition};
pub use tiling::TilingInstance;
