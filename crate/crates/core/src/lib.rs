//! Exact-arithmetic toolkit for integral forms of hook Specht lattices.
//!
//! The crate builds the Specht lattice `S^(n-k,1^k)` of the symmetric group
//! over the integers, enumerates its p-adic integral forms up to isomorphism,
//! and glues local representatives into global Z-forms.  Everything is done
//! in exact integer / prime-field arithmetic; no floating point appears
//! anywhere.
//!
//! Module layout:
//!
//! * [`combinatorics`]: partitions, tabloids, tableaux, permutation action.
//! * [`linalg`]: arbitrary-precision integer matrices, HNF/SNF, lattices.
//! * [`fp`]: dense matrices and polynomials over a prime field.
//! * [`specht`]: Specht contexts, exterior powers, bilinear form, duals,
//!   the Wildon embedding.
//! * [`modrep`]: meataxe, composition factors, Loewy series, simple labels.
//! * [`forms`]: maximal sublattices, form enumeration, named lattices,
//!   global gluing and the census.

pub mod combinatorics;
pub mod error;
pub mod forms;
pub mod fp;
pub mod linalg;
pub mod modrep;
pub mod specht;

pub use error::Error;

/// Default seed for all pseudo-random choices (meataxe words).
///
/// Runs with the same seed are reproducible bit-for-bit; the seed can be
/// overridden through [`forms::Config`].
pub const DEFAULT_SEED: u64 = 0x5eccf0_2d01;
