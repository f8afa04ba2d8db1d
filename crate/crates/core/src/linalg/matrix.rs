use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A dense matrix with arbitrary-precision integer entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn scalar_mul(&self, c: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    /// Gcd of all entries (non-negative); zero for the zero matrix.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for x in &self.data {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides every entry by `c`, panicking if any division is inexact.
    pub fn div_exact(&self, c: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            let (q, r) = self.get(i, j).div_rem(c);
            assert!(r.is_zero(), "inexact division in div_exact");
            q
        })
    }

    pub fn divisible_by(&self, c: &BigInt) -> bool {
        self.data.iter().all(|x| x.is_multiple_of(c))
    }

    pub fn is_upper_triangular(&self) -> bool {
        for i in 0..self.rows {
            for j in 0..i.min(self.cols) {
                if !self.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Vertical stack of two matrices with the same number of columns.
    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Determinant of a square matrix, via HNF (sign tracked by the transform).
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        if self.rows == 0 {
            return BigInt::one();
        }
        let ech = echelonize(self.clone(), false);
        if ech.h.rank() < self.rows {
            return BigInt::zero();
        }
        let mut d = BigInt::from(ech.sign);
        for i in 0..self.rows {
            d *= ech.h.mat.get(i, i);
        }
        d
    }

    /// Determinant of an upper-triangular matrix (product of the diagonal).
    pub fn det_triangular(&self) -> BigInt {
        debug_assert!(self.is_upper_triangular());
        let mut d = BigInt::one();
        for i in 0..self.rows.min(self.cols) {
            d *= self.get(i, i);
        }
        d
    }

    /// Adjugate of a nonsingular upper-triangular matrix, so that
    /// `self * adj = det * I` exactly.
    pub fn adjugate_triangular(&self) -> IntMatrix {
        assert!(self.is_square() && self.is_upper_triangular());
        let r = self.rows;
        let det = self.det_triangular();
        assert!(!det.is_zero(), "adjugate of singular matrix");
        // N[i][j] for i <= j with inverse[i][j] = N[i][j] / prod_{t=i..=j} h_tt
        let mut n_num = vec![vec![BigInt::zero(); r]; r];
        for i in 0..r {
            n_num[i][i] = BigInt::one();
        }
        for j in 0..r {
            for i in (0..j).rev() {
                // prefix[k] = prod_{t=i+1..=k-1} h_tt, built on the fly
                let mut acc = BigInt::zero();
                let mut prefix = BigInt::one();
                for k in i + 1..=j {
                    acc += self.get(i, k) * &n_num[k][j] * &prefix;
                    prefix *= self.get(k, k);
                }
                n_num[i][j] = -acc;
            }
        }
        IntMatrix::from_fn(r, r, |i, j| {
            if i > j {
                return BigInt::zero();
            }
            // det / prod_{t=i..=j} h_tt times N[i][j], computed exactly
            let mut denom = BigInt::one();
            for t in i..=j {
                denom *= self.get(t, t);
            }
            let (q, rem) = (&det * &n_num[i][j]).div_rem(&denom);
            debug_assert!(rem.is_zero());
            q
        })
    }

    /// Adjugate and determinant of an arbitrary nonsingular square matrix:
    /// `self * adj = det * I`.
    pub fn adjugate(&self) -> (IntMatrix, BigInt) {
        assert!(self.is_square());
        if self.is_upper_triangular() {
            return (self.adjugate_triangular(), self.det_triangular());
        }
        let ech = echelonize(self.clone(), true);
        assert_eq!(ech.h.rank(), self.rows, "adjugate of singular matrix");
        let u = ech.u.expect("transform requested");
        // U * A = H  =>  adj(A) = det(A) * A^{-1} = det(A)/det(H) * adj(H) * U
        let adj_h = ech.h.mat.adjugate_triangular();
        let adj = adj_h.mul(&u);
        let det_h = ech.h.mat.det_triangular();
        let det = BigInt::from(ech.sign) * &det_h;
        if ech.sign == 1 {
            (adj, det)
        } else {
            (adj.neg(), det)
        }
    }

    /// Solves `x * self = v` for an upper-triangular nonsingular `self`,
    /// returning `None` when the solution is not integral.
    pub fn solve_left_triangular(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        debug_assert!(self.is_square() && self.is_upper_triangular());
        let r = self.rows;
        assert_eq!(v.len(), r);
        let mut x = vec![BigInt::zero(); r];
        for j in 0..r {
            let mut acc = v[j].clone();
            for i in 0..j {
                acc -= &x[i] * self.get(i, j);
            }
            let (q, rem) = acc.div_rem(self.get(j, j));
            if !rem.is_zero() {
                return None;
            }
            x[j] = q;
        }
        Some(x)
    }
}

/// Row echelon HNF: nonzero rows on top, pivot columns strictly increasing,
/// pivots positive, entries above each pivot reduced into `[0, pivot)`.
#[derive(Debug, Clone)]
pub struct HnfEchelon {
    pub mat: IntMatrix,
    pub pivots: Vec<usize>,
}

impl HnfEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows as a standalone matrix.
    pub fn nonzero_rows(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rank(), self.mat.cols(), |i, j| self.mat.get(i, j).clone())
    }
}

pub(crate) struct Echelonized {
    pub h: HnfEchelon,
    pub u: Option<IntMatrix>,
    pub sign: i64,
}

/// In-place row HNF with optional unimodular transform, extended-gcd style.
pub(crate) fn echelonize(mut a: IntMatrix, want_transform: bool) -> Echelonized {
    let (m, c) = (a.rows(), a.cols());
    let mut u = if want_transform { Some(IntMatrix::identity(m)) } else { None };
    let mut sign = 1i64;
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for j in 0..c {
        if r == m {
            break;
        }
        // clear column j below row r using two-row gcd transforms
        let mut pivot_row = None;
        for i in r..m {
            if !a.get(i, j).is_zero() {
                pivot_row = Some(i);
                break;
            }
        }
        let Some(first) = pivot_row else { continue };
        if first != r {
            swap_rows(&mut a, u.as_mut(), first, r);
            sign = -sign;
        }
        for i in r + 1..m {
            if a.get(i, j).is_zero() {
                continue;
            }
            gcd_rows(&mut a, u.as_mut(), r, i, j);
        }
        if a.get(r, j).is_negative() {
            negate_row(&mut a, u.as_mut(), r);
            sign = -sign;
        }
        // reduce entries above the pivot into [0, pivot)
        let pivot = a.get(r, j).clone();
        for i in 0..r {
            let q = a.get(i, j).div_floor(&pivot);
            if !q.is_zero() {
                row_axpy(&mut a, u.as_mut(), i, r, &-q);
            }
        }
        pivots.push(j);
        r += 1;
    }
    Echelonized { h: HnfEchelon { mat: a, pivots }, u, sign }
}

fn swap_rows(a: &mut IntMatrix, u: Option<&mut IntMatrix>, i: usize, k: usize) {
    for j in 0..a.cols() {
        let x = a.get(i, j).clone();
        let y = a.get(k, j).clone();
        a.set(i, j, y);
        a.set(k, j, x);
    }
    if let Some(u) = u {
        for j in 0..u.cols() {
            let x = u.get(i, j).clone();
            let y = u.get(k, j).clone();
            u.set(i, j, y);
            u.set(k, j, x);
        }
    }
}

fn negate_row(a: &mut IntMatrix, u: Option<&mut IntMatrix>, i: usize) {
    for j in 0..a.cols() {
        let x = -a.get(i, j);
        a.set(i, j, x);
    }
    if let Some(u) = u {
        for j in 0..u.cols() {
            let x = -u.get(i, j);
            u.set(i, j, x);
        }
    }
}

/// `row_i += q * row_k`.
fn row_axpy(a: &mut IntMatrix, u: Option<&mut IntMatrix>, i: usize, k: usize, q: &BigInt) {
    for j in 0..a.cols() {
        let x = a.get(i, j) + q * a.get(k, j);
        a.set(i, j, x);
    }
    if let Some(u) = u {
        for j in 0..u.cols() {
            let x = u.get(i, j) + q * u.get(k, j);
            u.set(i, j, x);
        }
    }
}

/// Replaces rows `r`, `i` by the unimodular combination putting
/// `gcd(a[r][j], a[i][j])` at `(r, j)` and zero at `(i, j)`.  When the pivot
/// already divides the target the step is a plain subtraction, leaving the
/// pivot row untouched (this keeps eliminations from re-introducing entries
/// and guarantees termination of the Smith fix-up).
fn gcd_rows(a: &mut IntMatrix, mut u: Option<&mut IntMatrix>, r: usize, i: usize, j: usize) {
    let x = a.get(r, j).clone();
    let y = a.get(i, j).clone();
    if !x.is_zero() && y.is_multiple_of(&x) {
        let q = -(&y / &x);
        row_axpy(a, u, i, r, &q);
        return;
    }
    let ext = x.extended_gcd(&y);
    let (g, s, t) = (ext.gcd, ext.x, ext.y);
    let xg = &x / &g;
    let yg = &y / &g;
    for col in 0..a.cols() {
        let ar = a.get(r, col).clone();
        let ai = a.get(i, col).clone();
        a.set(r, col, &s * &ar + &t * &ai);
        a.set(i, col, &xg * &ai - &yg * &ar);
    }
    if let Some(u) = u.as_deref_mut() {
        for col in 0..u.cols() {
            let ur = u.get(r, col).clone();
            let ui = u.get(i, col).clone();
            u.set(r, col, &s * &ur + &t * &ui);
            u.set(i, col, &xg * &ui - &yg * &ur);
        }
    }
}

/// Row HNF of the lattice `rowspan(a) + m * Z^cols`, with every intermediate
/// entry reduced modulo `m`.  The reduction is lattice-preserving because
/// `m * Z^cols` lies in the lattice; this bounds coefficient growth by `m`.
pub fn hnf_modular(a: &IntMatrix, m: &BigInt) -> IntMatrix {
    assert!(m.is_positive());
    let c = a.cols();
    let mut work = IntMatrix::from_fn(a.rows() + c, c, |i, j| {
        if i < a.rows() {
            a.get(i, j).mod_floor(m)
        } else if i - a.rows() == j {
            m.clone()
        } else {
            BigInt::zero()
        }
    });
    let rows = work.rows();
    let mut r = 0usize;
    for j in 0..c {
        let mut pivot_row = None;
        for i in r..rows {
            if !work.get(i, j).is_zero() {
                pivot_row = Some(i);
                break;
            }
        }
        let Some(first) = pivot_row else { continue };
        if first != r {
            swap_rows(&mut work, None, first, r);
        }
        for i in r + 1..rows {
            if work.get(i, j).is_zero() {
                continue;
            }
            gcd_rows(&mut work, None, r, i, j);
            for col in 0..c {
                let x = work.get(r, col).mod_floor(m);
                work.set(r, col, x);
                let y = work.get(i, col).mod_floor(m);
                work.set(i, col, y);
            }
            // the gcd step may zero out the pivot mod m; restore it from m e_j
            if work.get(r, j).is_zero() {
                work.set(r, j, m.clone());
            }
        }
        debug_assert!(work.get(r, j).is_positive());
        r += 1;
    }
    debug_assert_eq!(r, c);
    // triangular part; reduce entries above each pivot (ascending columns:
    // later rows have zeros in earlier columns, so reduced entries stay put)
    let mut h = IntMatrix::from_fn(c, c, |i, j| work.get(i, j).clone());
    for j in 0..c {
        let pivot = h.get(j, j).clone();
        for i in 0..j {
            let q = h.get(i, j).div_floor(&pivot);
            if !q.is_zero() {
                for col in 0..c {
                    let x = h.get(i, col) - &q * h.get(j, col);
                    h.set(i, col, x);
                }
            }
        }
    }
    h
}

/// Hermite normal form of a full-row-rank matrix: `H = U * A` with `U`
/// unimodular.  Rank-deficient input is reported as an error.
pub fn hnf(a: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let ech = echelonize(a.clone(), true);
    if ech.h.rank() < a.rows() {
        return Err(Error::RankDeficient);
    }
    Ok((ech.h.mat, ech.u.expect("transform requested")))
}

/// Row HNF of an arbitrary matrix, zero rows dropped; the unimodular
/// transform satisfies `U * A = [H; 0]`.
pub fn hnf_with_transform(a: &IntMatrix) -> (HnfEchelon, IntMatrix) {
    let ech = echelonize(a.clone(), true);
    (ech.h, ech.u.expect("transform requested"))
}

/// Basis of the left kernel `{ x : x * A = 0 }`, saturated in the integer
/// row space (rows of the unimodular transform mapping to zero rows).
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf_with_transform(a);
    let rank = h.rank();
    IntMatrix::from_fn(a.rows() - rank, a.rows(), |i, j| u.get(rank + i, j).clone())
}

/// Smith normal form data: `u_row * A * u_col = diag(divisors)` (padded with
/// zeros), with `divisors[i] | divisors[i+1]`.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub divisors: Vec<BigInt>,
    pub u_row: IntMatrix,
    pub u_col: IntMatrix,
}

/// Smith normal form with both transforms.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut u_row = IntMatrix::identity(rows);
    let mut u_col = IntMatrix::identity(cols);
    let r = rows.min(cols);

    for k in 0..r {
        loop {
            // find a nonzero entry in the remaining block
            let mut found = None;
            'outer: for i in k..rows {
                for j in k..cols {
                    if !m.get(i, j).is_zero() {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((pi, pj)) = found else { break };
            if pi != k {
                swap_rows(&mut m, Some(&mut u_row), pi, k);
            }
            if pj != k {
                swap_cols(&mut m, &mut u_col, pj, k);
            }
            // clear column k below and row k to the right
            for i in k + 1..rows {
                if !m.get(i, k).is_zero() {
                    gcd_rows(&mut m, Some(&mut u_row), k, i, k);
                }
            }
            let mut dirty = false;
            for j in k + 1..cols {
                if !m.get(k, j).is_zero() {
                    gcd_cols(&mut m, &mut u_col, k, j);
                    dirty = true;
                }
            }
            // column ops may have refilled the column; retry until stable
            if !dirty && (k + 1..rows).all(|i| m.get(i, k).is_zero()) {
                break;
            }
        }
    }
    // enforce the divisibility chain
    loop {
        let mut fixed = true;
        for k in 0..r.saturating_sub(1) {
            let d1 = m.get(k, k).clone();
            let d2 = m.get(k + 1, k + 1).clone();
            if d1.is_zero() && !d2.is_zero() {
                swap_rows(&mut m, Some(&mut u_row), k, k + 1);
                swap_cols(&mut m, &mut u_col, k, k + 1);
                fixed = false;
                continue;
            }
            if !d1.is_zero() && !d2.is_zero() && !d2.is_multiple_of(&d1) {
                // add column k+1 to column k, then re-clear the 2x2 block
                col_axpy(&mut m, &mut u_col, k, k + 1, &BigInt::one());
                gcd_rows(&mut m, Some(&mut u_row), k, k + 1, k);
                gcd_cols(&mut m, &mut u_col, k, k + 1);
                // the row op may have left an entry at (k+1, k)
                for i in k + 1..rows {
                    if !m.get(i, k).is_zero() {
                        gcd_rows(&mut m, Some(&mut u_row), k, i, k);
                    }
                }
                fixed = false;
            }
        }
        if fixed {
            break;
        }
    }
    let mut divisors = Vec::with_capacity(r);
    for k in 0..r {
        if m.get(k, k).is_negative() {
            negate_row(&mut m, Some(&mut u_row), k);
        }
        divisors.push(m.get(k, k).clone());
    }
    SnfResult { divisors, u_row, u_col }
}

fn swap_cols(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, k: usize) {
    for row in 0..a.rows() {
        let x = a.get(row, i).clone();
        let y = a.get(row, k).clone();
        a.set(row, i, y);
        a.set(row, k, x);
    }
    for row in 0..u.rows() {
        let x = u.get(row, i).clone();
        let y = u.get(row, k).clone();
        u.set(row, i, y);
        u.set(row, k, x);
    }
}

fn col_axpy(a: &mut IntMatrix, u: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    for row in 0..a.rows() {
        let x = a.get(row, target) + q * a.get(row, src);
        a.set(row, target, x);
    }
    for row in 0..u.rows() {
        let x = u.get(row, target) + q * u.get(row, src);
        u.set(row, target, x);
    }
}

fn gcd_cols(a: &mut IntMatrix, u: &mut IntMatrix, r: usize, j: usize) {
    let x = a.get(r, r).clone();
    let y = a.get(r, j).clone();
    if !x.is_zero() && y.is_multiple_of(&x) {
        let q = -(&y / &x);
        col_axpy(a, u, j, r, &q);
        return;
    }
    let ext = x.extended_gcd(&y);
    let (g, s, t) = (ext.gcd, ext.x, ext.y);
    let xg = &x / &g;
    let yg = &y / &g;
    for row in 0..a.rows() {
        let ar = a.get(row, r).clone();
        let aj = a.get(row, j).clone();
        a.set(row, r, &s * &ar + &t * &aj);
        a.set(row, j, &xg * &aj - &yg * &ar);
    }
    for row in 0..u.rows() {
        let ur = u.get(row, r).clone();
        let uj = u.get(row, j).clone();
        u.set(row, r, &s * &ur + &t * &uj);
        u.set(row, j, &xg * &uj - &yg * &ur);
    }
}
