use super::matrix::{echelonize, hnf_with_transform, IntMatrix};
use crate::error::{Error, Result};
use num_bigint::BigInt;
#[cfg(test)]
use num_traits::One;
use num_traits::{Signed, Zero};

/// A full-rank sublattice of `Z^dim`, stored as a square HNF basis matrix
/// whose rows are coordinates with respect to the ambient standard basis.
///
/// Two lattices are equal iff their HNF matrices are identical.
#[derive(Clone, PartialEq, Eq)]
pub struct ZLattice {
    basis: IntMatrix,
}

impl std::fmt::Debug for ZLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ZLattice(dim {}, index {})\n{:?}", self.dim(), self.index_in_ambient(), self.basis)
    }
}

impl ZLattice {
    /// The ambient lattice `Z^dim` itself.
    pub fn full(dim: usize) -> Self {
        ZLattice { basis: IntMatrix::identity(dim) }
    }

    /// The scalar lattice `c * Z^dim`.
    pub fn scalar(dim: usize, c: &BigInt) -> Self {
        ZLattice { basis: IntMatrix::identity(dim).scalar_mul(c) }
    }

    /// Lattice spanned by the rows of `rows`; must have full column rank.
    pub fn from_rows(rows: &IntMatrix) -> Result<Self> {
        let ech = echelonize(rows.clone(), false);
        if ech.h.rank() < rows.cols() {
            return Err(Error::RankDeficient);
        }
        Ok(ZLattice { basis: ech.h.nonzero_rows() })
    }

    /// Wraps a matrix that is already a square HNF basis.
    pub fn from_hnf_unchecked(basis: IntMatrix) -> Self {
        debug_assert!(basis.is_square() && basis.is_upper_triangular());
        ZLattice { basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Index `[Z^dim : L]` = determinant of the HNF basis.
    pub fn index_in_ambient(&self) -> BigInt {
        self.basis.det_triangular()
    }

    /// Membership test for a row vector in ambient coordinates.
    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        self.basis.solve_left_triangular(v).is_some()
    }

    pub fn contains(&self, other: &ZLattice) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        (0..other.dim()).all(|i| self.contains_vector(other.basis.row(i)))
    }

    /// `c * L`.
    pub fn scale(&self, c: &BigInt) -> ZLattice {
        assert!(c.is_positive());
        ZLattice { basis: self.basis.scalar_mul(c) }
    }

    /// `L / c`, requiring every basis entry to be divisible by `c`.
    pub fn unscale_exact(&self, c: &BigInt) -> ZLattice {
        ZLattice { basis: self.basis.div_exact(c) }
    }

    /// Divides by `p` until the lattice is no longer contained in
    /// `p * Z^dim`; returns the normalized lattice and the number of
    /// divisions performed.
    pub fn normalize_scaling(&self, p: u64) -> (ZLattice, u64) {
        let p = BigInt::from(p);
        let mut l = self.clone();
        let mut steps = 0;
        while l.basis.divisible_by(&p) {
            l = l.unscale_exact(&p);
            steps += 1;
        }
        (l, steps)
    }

    /// Image under a right coordinate change: lattice spanned by `B_L * T`.
    pub fn transform(&self, t: &IntMatrix) -> Result<ZLattice> {
        ZLattice::from_rows(&self.basis.mul(t))
    }

    /// `v_p` of the index in the ambient lattice (sum over the diagonal).
    pub fn index_valuation(&self, p: u64) -> Result<u64> {
        let mut v = 0;
        for i in 0..self.dim() {
            v += super::p_valuation(self.basis.get(i, i), p)?;
        }
        Ok(v)
    }
}

/// The order-ideal index `[M : N]` for `N ⊆ M`, computed as `|det|` of the
/// change-of-basis matrix expressing `N` in `M`.  Fails with
/// [`Error::NotSublattice`] when containment does not hold.
pub fn order_ideal_index(m: &ZLattice, n: &ZLattice) -> Result<BigInt> {
    if m.dim() != n.dim() {
        return Err(Error::AmbientMismatch(m.dim(), n.dim()));
    }
    let dim = m.dim();
    let mut x = IntMatrix::zero(dim, dim);
    for i in 0..dim {
        let row = m.basis.solve_left_triangular(n.basis.row(i)).ok_or(Error::NotSublattice)?;
        for (j, v) in row.into_iter().enumerate() {
            x.set(i, j, v);
        }
    }
    Ok(x.det().abs())
}

/// Intersection of two full-rank lattices in the same ambient space.
pub fn lattice_intersection(l1: &ZLattice, l2: &ZLattice) -> Result<ZLattice> {
    if l1.dim() != l2.dim() {
        return Err(Error::AmbientMismatch(l1.dim(), l2.dim()));
    }
    let dim = l1.dim();
    let stacked = l1.basis.stack(&l2.basis);
    let (h, u) = hnf_with_transform(&stacked);
    debug_assert_eq!(h.rank(), dim);
    // bottom rows of U are the kernel of the stacked matrix:
    // x * B1 + y * B2 = 0, so x * B1 lies in the intersection
    let mut rows = IntMatrix::zero(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = BigInt::zero();
            for k in 0..dim {
                acc += u.get(dim + i, k) * l1.basis.get(k, j);
            }
            rows.set(i, j, acc);
        }
    }
    ZLattice::from_rows(&rows)
}

/// Given an integral spanning set `rows` of a full-rank lattice `Y`, returns
/// the unique lattice `Z` with `Z ⊗ Z_p = Y ⊗ Z_p` and `Z ⊗ Z_q = Z^dim ⊗ Z_q`
/// for every prime `q != p`; its index in the ambient lattice is the p-part
/// of the index of `Y`.
pub fn saturate_away_from(p: u64, rows: &IntMatrix) -> Result<ZLattice> {
    let y = ZLattice::from_rows(rows)?;
    let beta = super::p_valuation(&y.index_in_ambient(), p)?;
    if beta == 0 {
        return Ok(ZLattice::full(y.dim()));
    }
    let pb = BigInt::from(p).pow(beta as u32);
    let stacked = y.basis.stack(&IntMatrix::identity(y.dim()).scalar_mul(&pb));
    let z = ZLattice::from_rows(&stacked)?;
    debug_assert_eq!(z.index_in_ambient(), pb);
    Ok(z)
}
