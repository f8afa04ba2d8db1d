//! Dense linear algebra and univariate polynomial arithmetic over a prime
//! field `F_p`.  Entries are `u64` with `p < 2^31`; products are accumulated
//! in `u128` and reduced once per entry.

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // extended euclid on i128
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "not invertible mod p");
    (t.rem_euclid(p as i128)) as u64
}

/// Dense matrix over `F_p`, row-major; acts on row vectors (`v -> v * A`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpMat {
    pub p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMat {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        assert!(p < (1 << 31));
        FpMat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = FpMat::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(p: u64, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut m = FpMat::zero(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j) % p);
            }
        }
        m
    }

    /// Entrywise reduction of an integer matrix.
    pub fn from_int_matrix(a: &IntMatrix, p: u64) -> Self {
        let pb = BigInt::from(p);
        FpMat::from_fn(p, a.rows(), a.cols(), |i, j| {
            let r = a.get(i, j).mod_floor(&pb);
            r.to_u64().expect("reduced entry fits u64")
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FpMat {
        FpMat::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.p, other.p);
        let mut out = FpMat::zero(self.p, self.rows, other.cols);
        let mut acc = vec![0u128; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let a = a as u128;
                let brow = other.row(k);
                for (j, &b) in brow.iter().enumerate() {
                    acc[j] += a * b as u128;
                }
            }
            for j in 0..other.cols {
                out.data[i * other.cols + j] = (acc[j] % self.p as u128) as u64;
            }
        }
        out
    }

    pub fn add(&self, other: &FpMat) -> FpMat {
        FpMat::from_fn(self.p, self.rows, self.cols, |i, j| (self.get(i, j) + other.get(i, j)) % self.p)
    }

    pub fn sub(&self, other: &FpMat) -> FpMat {
        FpMat::from_fn(self.p, self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.p - other.get(i, j)) % self.p
        })
    }

    pub fn scalar_mul(&self, c: u64) -> FpMat {
        let c = c % self.p;
        FpMat::from_fn(self.p, self.rows, self.cols, |i, j| (self.get(i, j) as u128 * c as u128 % self.p as u128) as u64)
    }

    /// `v * self` for a row vector `v`.
    pub fn apply_row(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows);
        let mut acc = vec![0u128; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = a as u128;
            for (j, &b) in self.row(k).iter().enumerate() {
                acc[j] += a * b as u128;
            }
        }
        acc.into_iter().map(|x| (x % self.p as u128) as u64).collect()
    }

    /// Reduced row echelon form, returning (rref, pivot columns).
    pub fn rref(&self) -> (FpMat, Vec<usize>) {
        let mut m = self.clone();
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, j) != 0) else { continue };
            if pr != r {
                for col in 0..m.cols {
                    let tmp = m.get(pr, col);
                    let tmp2 = m.get(r, col);
                    m.set(pr, col, tmp2);
                    m.set(r, col, tmp);
                }
            }
            let inv = inv_mod(m.get(r, j), p);
            for col in 0..m.cols {
                let v = (m.get(r, col) as u128 * inv as u128 % p as u128) as u64;
                m.set(r, col, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, j);
                if f == 0 {
                    continue;
                }
                for col in 0..m.cols {
                    let v = (m.get(i, col) as u128 + (p as u128 - f as u128) * m.get(r, col) as u128)
                        % p as u128;
                    m.set(i, col, v as u64);
                }
            }
            pivots.push(j);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{ x column : A x = 0 }`, rows of the
    /// result, in reduced row echelon form.
    pub fn right_nullspace(&self) -> FpMat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut out = FpMat::zero(self.p, free.len(), self.cols);
        for (row, &fj) in free.iter().enumerate() {
            out.set(row, fj, 1);
            for (pr, &pj) in pivots.iter().enumerate() {
                let v = r.get(pr, fj);
                if v != 0 {
                    out.set(row, pj, self.p - v);
                }
            }
        }
        out.rref().0
    }

    /// Basis of the left kernel `{ x row : x A = 0 }`.
    pub fn left_nullspace(&self) -> FpMat {
        self.transpose().right_nullspace()
    }

    pub fn inverse(&self) -> Option<FpMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = FpMat::from_fn(self.p, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j)
            } else if j - n == i {
                1
            } else {
                0
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(FpMat::from_fn(self.p, n, n, |i, j| r.get(i, j + n)))
    }
}

/// F_p-basis of the right kernel of `a`; errors when `p` is not prime.
pub fn nullspace_mod_p(a: &IntMatrix, p: u64) -> Result<FpMat> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(FpMat::from_int_matrix(a, p).right_nullspace())
}

// ---------------------------------------------------------------------------
// Polynomials over F_p: little-endian coefficient vectors, no leading zeros.
// ---------------------------------------------------------------------------

pub type Poly = Vec<u64>;

pub fn poly_trim(f: &mut Poly) {
    while let Some(&0) = f.last() {
        f.pop();
    }
}

pub fn poly_deg(f: &Poly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn poly_x() -> Poly {
    vec![0, 1]
}

pub fn poly_add(p: u64, a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = (out[i] + c) % p;
    }
    poly_trim(&mut out);
    out
}

pub fn poly_sub(p: u64, a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = (out[i] + p - c) % p;
    }
    poly_trim(&mut out);
    out
}

pub fn poly_mul(p: u64, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x as u128 * y as u128;
        }
    }
    let mut out: Poly = out.into_iter().map(|c| (c % p as u128) as u64).collect();
    poly_trim(&mut out);
    out
}

/// Quotient and remainder of `a` by nonzero `b`.
pub fn poly_divmod(p: u64, a: &Poly, b: &Poly) -> (Poly, Poly) {
    assert!(!b.is_empty());
    let mut rem = a.clone();
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![0u64; rem.len() - b.len() + 1];
    let lead_inv = inv_mod(*b.last().unwrap(), p);
    for i in (b.len() - 1..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        let q = (c as u128 * lead_inv as u128 % p as u128) as u64;
        let shift = i + 1 - b.len();
        quot[shift] = q;
        for (j, &bc) in b.iter().enumerate() {
            rem[shift + j] = ((rem[shift + j] as u128 + (p as u128 - q as u128) * bc as u128)
                % p as u128) as u64;
        }
    }
    poly_trim(&mut rem);
    poly_trim(&mut quot);
    (quot, rem)
}

pub fn poly_rem(p: u64, a: &Poly, b: &Poly) -> Poly {
    poly_divmod(p, a, b).1
}

pub fn poly_monic(p: u64, f: &Poly) -> Poly {
    if f.is_empty() {
        return vec![];
    }
    let inv = inv_mod(*f.last().unwrap(), p);
    let mut out: Poly =
        f.iter().map(|&c| (c as u128 * inv as u128 % p as u128) as u64).collect();
    poly_trim(&mut out);
    out
}

pub fn poly_gcd(p: u64, a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    poly_monic(p, &a)
}

pub fn poly_derivative(p: u64, f: &Poly) -> Poly {
    let mut out: Poly =
        f.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) as u128 as u64 * c % p).collect();
    poly_trim(&mut out);
    out
}

/// `base^exp mod modulus` with a big-integer exponent.
pub fn poly_pow_mod(p: u64, base: &Poly, exp: &BigUint, modulus: &Poly) -> Poly {
    let mut result = vec![1u64];
    let mut b = poly_rem(p, base, modulus);
    let bits = exp.bits();
    for i in 0..bits {
        if exp.bit(i) {
            result = poly_rem(p, &poly_mul(p, &result, &b), modulus);
        }
        if i + 1 < bits {
            b = poly_rem(p, &poly_mul(p, &b, &b), modulus);
        }
    }
    result
}

/// Squarefree factorization in characteristic p: returns pairs
/// `(g, multiplicity)` with the `g` squarefree and pairwise coprime.
pub fn squarefree_decomposition(p: u64, f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    sqfree_rec(p, &poly_monic(p, f), 1, &mut out);
    out
}

fn sqfree_rec(p: u64, f: &Poly, outer: usize, out: &mut Vec<(Poly, usize)>) {
    if poly_deg(f) == Some(0) || f.is_empty() {
        return;
    }
    let df = poly_derivative(p, f);
    if df.is_empty() {
        // f = g(x^p); take the p-th root (Frobenius fixes F_p coefficients)
        let mut g = Vec::new();
        for (i, &c) in f.iter().enumerate() {
            if i % p as usize == 0 {
                g.push(c);
            } else {
                assert_eq!(c, 0);
            }
        }
        sqfree_rec(p, &g, outer * p as usize, out);
        return;
    }
    let mut c = poly_gcd(p, f, &df);
    let mut w = poly_divmod(p, f, &c).0;
    let mut mult = 1usize;
    while poly_deg(&w) != Some(0) {
        let y = poly_gcd(p, &w, &c);
        let part = poly_divmod(p, &w, &y).0;
        if poly_deg(&part) != Some(0) {
            out.push((poly_monic(p, &part), outer * mult));
        }
        w = y.clone();
        c = poly_divmod(p, &c, &y).0;
        mult += 1;
    }
    // what remains of c has all multiplicities divisible by p; its
    // derivative vanishes, so the recursion takes the p-th root itself
    if poly_deg(&c) != Some(0) {
        sqfree_rec(p, &c, outer, out);
    }
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// pairs `(product of irreducibles of degree d, d)`.
pub fn distinct_degree(p: u64, f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut f = poly_monic(p, f);
    let mut h = poly_rem(p, &poly_x(), &f);
    let mut d = 0;
    while poly_deg(&f).map_or(false, |deg| deg >= 1) {
        d += 1;
        if 2 * d > poly_deg(&f).unwrap() {
            out.push((f.clone(), poly_deg(&f).unwrap()));
            break;
        }
        h = poly_pow_mod(p, &h, &BigUint::from(p), &f);
        let g = poly_gcd(p, &poly_sub(p, &h, &poly_x()), &f);
        if poly_deg(&g).map_or(false, |deg| deg >= 1) {
            out.push((g.clone(), d));
            f = poly_divmod(p, &f, &g).0;
            h = poly_rem(p, &h, &f);
        }
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting: `f` monic squarefree, all
/// irreducible factors of degree `d`.
pub fn equal_degree(p: u64, f: &Poly, d: usize, rng: &mut impl Rng) -> Vec<Poly> {
    let deg = poly_deg(f).unwrap();
    if deg == d {
        return vec![f.clone()];
    }
    loop {
        let a: Poly = {
            let mut v: Poly = (0..deg).map(|_| rng.gen_range(0..p)).collect();
            poly_trim(&mut v);
            v
        };
        if a.is_empty() || poly_deg(&a) == Some(0) {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1)) mod f
            let mut acc = a.clone();
            let mut term = a.clone();
            for _ in 1..d {
                term = poly_rem(p, &poly_mul(p, &term, &term), f);
                acc = poly_add(p, &acc, &term);
            }
            acc
        } else {
            let exp = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            let pw = poly_pow_mod(p, &a, &exp, f);
            poly_sub(p, &pw, &vec![1])
        };
        let g = poly_gcd(p, &b, f);
        if let Some(gd) = poly_deg(&g) {
            if gd >= 1 && gd < deg {
                let rest = poly_divmod(p, f, &g).0;
                let mut out = equal_degree(p, &g, d, rng);
                out.extend(equal_degree(p, &rest, d, rng));
                return out;
            }
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities,
/// deterministic given the RNG state.
pub fn factor_poly(p: u64, f: &Poly, rng: &mut impl Rng) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    for (sf, mult) in squarefree_decomposition(p, f) {
        for (prod, d) in distinct_degree(p, &sf) {
            for irr in equal_degree(p, &prod, d, rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    out
}

/// Monic generator of the relation `sum c_i (v * M^i) = 0` of least degree:
/// the order polynomial of `v` under `M`.
pub fn order_poly(m: &FpMat, v: &[u64]) -> Poly {
    let p = m.p;
    let n = m.cols();
    // echelon of krylov vectors, with coefficient history
    let mut basis: Vec<(Vec<u64>, Vec<u64>)> = Vec::new(); // (reduced vector, coeffs)
    let mut w = v.to_vec();
    let mut step = 0usize;
    loop {
        // coeff vector of w as a krylov element: x^step
        let mut coeffs = vec![0u64; step + 1];
        coeffs[step] = 1;
        let mut red = w.clone();
        for (bv, bc) in &basis {
            let lead = bv.iter().position(|&x| x != 0).unwrap();
            let c = red[lead];
            if c != 0 {
                let f = (p - c) % p;
                for j in 0..n {
                    red[j] = ((red[j] as u128 + f as u128 * bv[j] as u128) % p as u128) as u64;
                }
                for (j, &bcv) in bc.iter().enumerate() {
                    coeffs[j] = ((coeffs[j] as u128 + f as u128 * bcv as u128) % p as u128) as u64;
                }
            }
        }
        if red.iter().all(|&x| x == 0) {
            let mut poly = coeffs;
            poly_trim(&mut poly);
            return poly_monic(p, &poly);
        }
        // normalize to leading coefficient 1 so reductions stay single-step
        let lead = red.iter().position(|&x| x != 0).unwrap();
        let inv = inv_mod(red[lead], p);
        for x in red.iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        for x in coeffs.iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        basis.push((red, coeffs));
        basis.sort_by_key(|(bv, _)| bv.iter().position(|&x| x != 0).unwrap());
        w = m.apply_row(&w);
        step += 1;
        assert!(step <= n, "order polynomial exceeds dimension");
    }
}

/// Evaluates `f(M)` by Horner's rule.
pub fn eval_poly_at_matrix(f: &Poly, m: &FpMat) -> FpMat {
    let n = m.rows();
    let p = m.p;
    if f.is_empty() {
        return FpMat::zero(p, n, n);
    }
    let mut acc = FpMat::identity(p, n).scalar_mul(*f.last().unwrap());
    for &c in f.iter().rev().skip(1) {
        acc = acc.mul(m);
        for i in 0..n {
            let v = (acc.get(i, i) + c) % p;
            acc.set(i, i, v);
        }
    }
    acc
}
