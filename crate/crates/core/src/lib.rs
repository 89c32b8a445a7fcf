//! Exact-arithmetic engine for finite sesquiads: commutative monoids with a
//! partial addition borrowed from an ambient ring.
//!
//! The crate builds universal rings as integer lattice quotients, enumerates
//! prime congruences and their Alexandrov topology, computes structure-sheaf
//! stalks and global sections, classifies closed and Z-closed points, counts
//! F1-valued points of linear-group models, and assembles Hasse-Weil style
//! Euler factors.  All arithmetic is exact (arbitrary-precision integers);
//! every semidecidable enumeration carries an explicit exactness flag.

pub mod domains;
pub mod f1;
pub mod factor;
pub mod family;
pub mod lattice;
pub mod monoid;
pub mod ring;
pub mod sesquiad;
pub mod sheaf;
pub mod spectrum;

pub use lattice::{hnf, snf_diagonal, IntMatrix, Lattice};
pub use monoid::MonoidTable;
