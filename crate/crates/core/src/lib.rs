//! Hodge–Witt numerical invariants of smooth proper varieties over perfect fields of
//! characteristic p: Witt vectors, F-isocrystal slopes, dominoes over the Raynaud ring,
//! slope and descent spectral sequences, a catalog of varieties and a derived-equivalence checker.

pub mod catalog;
pub mod field;
pub mod fmcheck;
pub mod isocrystal;
pub mod linalg;
pub mod invariants;
pub mod rmod;
pub mod specseq;
pub mod witt;
pub mod zq;

/// Exact rational slope.
pub type Slope = num_rational::Ratio<i64>;
