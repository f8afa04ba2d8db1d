//! Exact integer linear algebra: big-integer matrices, Hermite and Smith
//! normal forms, and full-rank sublattices of a fixed ambient space.
//!
//! Conventions, fixed project-wide:
//! * matrices act on row vectors (`v -> v * A`);
//! * lattices are spanned by the rows of their basis matrix;
//! * HNF is row-style, upper triangular with positive pivots, and every
//!   entry above a pivot is reduced into `[0, pivot)`.

mod lattice;
mod matrix;

pub use lattice::{lattice_intersection, order_ideal_index, saturate_away_from, ZLattice};
pub use matrix::{hnf, hnf_modular, hnf_with_transform, left_kernel, snf, HnfEchelon, IntMatrix, SnfResult};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// The p-adic valuation of a nonzero integer.
pub fn p_valuation(x: &BigInt, p: u64) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    if !crate::fp::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut x = x.abs();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&x, &p);
        if !r.is_zero() {
            return Ok(v);
        }
        x = q;
        v += 1;
    }
}
