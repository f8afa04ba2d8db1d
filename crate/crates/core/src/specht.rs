//! Specht lattices: the Young permutation lattice, standard polytabloid
//! bases, generator action matrices, the invariant bilinear form, exterior
//! powers, dualization, and the Wildon embedding of the dual lattice.
//!
//! Hook contexts `(n-k, 1^k)` are the main path; the basis indexed by
//! increasing tails `2 <= i_1 < ... < i_k <= n` matches the exterior-power
//! identification of the hook Specht lattice with the k-th wedge of the
//! natural one.

use crate::combinatorics::{
    combinations, young_subgroup_elements, Partition, Perm, Tableau, TabloidTable,
};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, ZLattice};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::OnceLock;

/// A Specht lattice in fixed coordinates: tabloid table, sparse polytabloid
/// expansions, and the action of the adjacent transpositions on the
/// standard-polytabloid basis.
pub struct SpechtContext {
    pub lambda: Partition,
    pub n: usize,
    /// `Some(k)` when `lambda = (n-k, 1^k)`.
    pub hook_k: Option<usize>,
    pub rank: usize,
    pub tabloids: TabloidTable,
    pub standard: Vec<Tableau>,
    /// `e_t` in tabloid coordinates, one sparse row per basis element.
    expansions: Vec<Vec<(usize, i64)>>,
    /// Tabloid column of the standard tabloid `{t_i}` of each basis element.
    std_cols: Vec<usize>,
    /// Reverse lookup: tabloid column -> basis index, for standard columns.
    std_col_of: HashMap<usize, usize>,
    /// Integer inverse of the standard-column submatrix; `None` when that
    /// submatrix is the identity (always the case for hooks).
    inv_std: Option<IntMatrix>,
    /// Action of `(i, i+1)` for `i = 1..n-1` on the polytabloid basis.
    pub generators: Vec<IntMatrix>,
    gram: OnceLock<IntMatrix>,
    dual_gram: OnceLock<(IntMatrix, BigInt)>,
}

/// Builds the hook Specht context for `(n-k, 1^k)`.
///
/// The basis is ordered by lexicographically increasing tails, so that the
/// compound matrices of the `k = 1` generators agree entrywise with the
/// generators built here.
pub fn build_hook_specht(n: usize, k: usize) -> Result<SpechtContext> {
    if n < 1 || k + 1 > n {
        return Err(Error::BadHookIndex { n, k });
    }
    let lambda = Partition::hook(n, k)?;
    let tails = combinations(&(2..=n).collect::<Vec<_>>(), k);
    let standard: Vec<Tableau> = tails
        .iter()
        .map(|tail| {
            let mut row0 = vec![1usize];
            row0.extend((2..=n).filter(|x| !tail.contains(x)));
            let mut rows = vec![row0];
            rows.extend(tail.iter().map(|&x| vec![x]));
            Tableau::new(rows)
        })
        .collect();
    build_from_standard(lambda, standard, Some(k))
}

/// Builds a Specht context for an arbitrary partition (used by the Wildon
/// embedding and cross-checks; hooks are the optimized main path).
pub fn build_specht(lambda: &Partition) -> Result<SpechtContext> {
    let standard = crate::combinatorics::standard_tableaux(lambda);
    let hook_k = {
        let parts = lambda.parts();
        let is_hook = parts.len() == 1 || parts[1..].iter().all(|&p| p == 1);
        if is_hook {
            Some(parts.len() - 1)
        } else {
            None
        }
    };
    build_from_standard(lambda.clone(), standard, hook_k)
}

fn build_from_standard(
    lambda: Partition,
    standard: Vec<Tableau>,
    hook_k: Option<usize>,
) -> Result<SpechtContext> {
    let n = lambda.n();
    let tabloids = TabloidTable::new(&lambda)?;
    let rank = standard.len();

    let mut expansions = Vec::with_capacity(rank);
    for t in &standard {
        let col_sets = t.columns();
        if col_sets.iter().map(|c| crate::combinatorics::factorial(c.len())).product::<u128>()
            > 1_000_000
        {
            return Err(Error::Feasibility("column stabilizer too large".into()));
        }
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for (sigma, sign) in young_subgroup_elements(n, &col_sets) {
            let tb = crate::combinatorics::act_on_tabloid(&sigma, &t.tabloid())?;
            *acc.entry(tabloids.position(&tb)).or_insert(0) += sign;
        }
        let mut row: Vec<(usize, i64)> =
            acc.into_iter().filter(|&(_, c)| c != 0).collect();
        row.sort_unstable();
        debug_assert!(row.iter().all(|&(_, c)| c == 1 || c == -1));
        expansions.push(row);
    }

    let std_cols: Vec<usize> =
        standard.iter().map(|t| tabloids.position(&t.tabloid())).collect();
    let std_col_of: HashMap<usize, usize> =
        std_cols.iter().copied().enumerate().map(|(i, c)| (c, i)).collect();
    if std_col_of.len() != rank {
        return Err(Error::BadPartition("standard tabloids are not distinct".into()));
    }

    // submatrix of the expansion matrix on standard-tabloid columns;
    // unimodular, and the identity for hooks
    let e_std = IntMatrix::from_fn(rank, rank, |i, j| {
        let col = std_cols[j];
        let v = expansions[i].iter().find(|&&(c, _)| c == col).map_or(0, |&(_, s)| s);
        BigInt::from(v)
    });
    let inv_std = if e_std == IntMatrix::identity(rank) {
        None
    } else {
        let (adj, det) = e_std.adjugate();
        assert!(det.clone().abs().is_one(), "standard-column submatrix must be unimodular");
        Some(if det.is_negative() { adj.neg() } else { adj })
    };

    let mut ctx = SpechtContext {
        lambda,
        n,
        hook_k,
        rank,
        tabloids,
        standard,
        expansions,
        std_cols,
        std_col_of,
        inv_std,
        generators: Vec::new(),
        gram: OnceLock::new(),
        dual_gram: OnceLock::new(),
    };
    let mut gens = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let sigma = Perm::transposition(n, i, i + 1);
        let mut a = IntMatrix::zero(ctx.rank, ctx.rank);
        for t in 0..ctx.rank {
            let image = ctx.act_expansion(&sigma, t)?;
            let coords = ctx.tabloid_sparse_to_coords(&image);
            for (j, v) in coords.into_iter().enumerate() {
                if !v.is_zero() {
                    a.set(t, j, v);
                }
            }
        }
        gens.push(a);
    }
    ctx.generators = gens;
    Ok(ctx)
}

impl SpechtContext {
    /// Sparse tabloid expansion of the image `sigma . e_t`.
    pub fn act_expansion(&self, sigma: &Perm, t: usize) -> Result<Vec<(usize, i64)>> {
        let mut out = Vec::with_capacity(self.expansions[t].len());
        for &(idx, c) in &self.expansions[t] {
            let tb = crate::combinatorics::act_on_tabloid(sigma, &self.tabloids.tabloids[idx])?;
            out.push((self.tabloids.position(&tb), c));
        }
        Ok(out)
    }

    /// Expresses a vector of `S` given sparsely in tabloid coordinates in the
    /// standard-polytabloid basis.
    fn tabloid_sparse_to_coords(&self, v: &[(usize, i64)]) -> Vec<BigInt> {
        let mut std_part = vec![BigInt::zero(); self.rank];
        for &(idx, c) in v {
            if let Some(&j) = self.std_col_of.get(&idx) {
                std_part[j] += c;
            }
        }
        self.std_restrict_to_coords(std_part)
    }

    fn std_restrict_to_coords(&self, std_part: Vec<BigInt>) -> Vec<BigInt> {
        match &self.inv_std {
            None => std_part,
            Some(inv) => {
                let mut out = vec![BigInt::zero(); self.rank];
                for j in 0..self.rank {
                    let mut acc = BigInt::zero();
                    for i in 0..self.rank {
                        acc += &std_part[i] * inv.get(i, j);
                    }
                    out[j] = acc;
                }
                out
            }
        }
    }

    /// Dense tabloid vector to polytabloid coordinates.
    pub fn tabloid_dense_to_coords(&self, v: &[BigInt]) -> Vec<BigInt> {
        let std_part: Vec<BigInt> = self.std_cols.iter().map(|&c| v[c].clone()).collect();
        self.std_restrict_to_coords(std_part)
    }

    /// The polytabloid basis as a dense matrix in tabloid coordinates.
    pub fn basis_matrix(&self) -> IntMatrix {
        let mut b = IntMatrix::zero(self.rank, self.tabloids.len());
        for (i, row) in self.expansions.iter().enumerate() {
            for &(j, c) in row {
                b.set(i, j, BigInt::from(c));
            }
        }
        b
    }

    /// Gram matrix of the canonical tabloid form restricted to the
    /// polytabloid basis; symmetric and invariant under every generator.
    pub fn gram_form(&self) -> &IntMatrix {
        self.gram.get_or_init(|| {
            let maps: Vec<HashMap<usize, i64>> = self
                .expansions
                .iter()
                .map(|row| row.iter().copied().collect())
                .collect();
            IntMatrix::from_fn(self.rank, self.rank, |i, j| {
                let mut acc = 0i64;
                for &(idx, c) in &self.expansions[i] {
                    if let Some(&d) = maps[j].get(&idx) {
                        acc += c * d;
                    }
                }
                BigInt::from(acc)
            })
        })
    }

    /// An integer matrix `G` proportional to the inverse Gram matrix of an
    /// invariant form, together with the scalar `c` such that `G * gram`
    /// is `c` times the identity (so `p^v_p(c) G^{-1}` is p-integral).  For
    /// hooks the wedge form is used, whose inverse is closed-form; otherwise
    /// the adjugate of [`Self::gram_form`].
    pub fn dual_gram_scaled_with_denominator(&self) -> &(IntMatrix, BigInt) {
        self.dual_gram.get_or_init(|| match self.hook_k {
            Some(k) if k >= 1 => {
                // gram of the wedge form is C_k(I + J); its inverse is
                // C_k(n I - J) / n^k by Sherman-Morrison and multiplicativity
                let r = self.n - 1;
                let m = IntMatrix::from_fn(r, r, |i, j| {
                    let diag = if i == j { BigInt::from(self.n as i64) } else { BigInt::zero() };
                    diag - BigInt::one()
                });
                let g = compound_matrix(&m, k);
                (g, BigInt::from(self.n as u64).pow(k as u32))
            }
            _ => {
                let (adj, det) = self.gram_form().adjugate();
                (adj, det.abs())
            }
        })
    }

    pub fn dual_gram_scaled(&self) -> &IntMatrix {
        &self.dual_gram_scaled_with_denominator().0
    }

    /// Generator matrices of `S^lambda ⊗ sgn`: adjacent transpositions are
    /// odd, so each generator is negated.
    pub fn sign_twist(&self) -> Vec<IntMatrix> {
        self.generators.iter().map(|a| a.neg()).collect()
    }
}

/// All `k`-element index subsets of `{0, …, r-1}` in lexicographic order.
pub fn index_subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    combinations(&(0..r).map(|x| x + 1).collect::<Vec<_>>(), k)
        .into_iter()
        .map(|s| s.into_iter().map(|x| x - 1).collect())
        .collect()
}

fn minor(a: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    debug_assert_eq!(rows.len(), cols.len());
    match rows.len() {
        0 => BigInt::one(),
        1 => a.get(rows[0], cols[0]).clone(),
        2 => {
            a.get(rows[0], cols[0]) * a.get(rows[1], cols[1])
                - a.get(rows[0], cols[1]) * a.get(rows[1], cols[0])
        }
        _ => {
            // Laplace expansion along the first row
            let mut acc = BigInt::zero();
            let sub_rows = &rows[1..];
            for (idx, &c) in cols.iter().enumerate() {
                let entry = a.get(rows[0], c);
                if entry.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> =
                    cols.iter().copied().filter(|&x| x != c).collect();
                let term = entry * minor(a, sub_rows, &sub_cols);
                if idx % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// The `k`-th compound matrix: entry `(I, J)` is the minor of `a` on rows
/// `I` and columns `J`, subsets ordered lexicographically.
pub fn compound_matrix(a: &IntMatrix, k: usize) -> IntMatrix {
    let row_sets = index_subsets(a.rows(), k);
    let col_sets = index_subsets(a.cols(), k);
    let mut out = IntMatrix::zero(row_sets.len(), col_sets.len());
    for (i, rs) in row_sets.iter().enumerate() {
        for (j, cs) in col_sets.iter().enumerate() {
            out.set(i, j, minor(a, rs, cs));
        }
    }
    out
}

/// Compound matrices of each `k = 1` generator: the action on the `k`-th
/// exterior power.  Agrees entrywise with [`build_hook_specht`]'s generators
/// under the hook basis identification.
pub fn exterior_power_action(gens: &[IntMatrix], k: usize) -> Vec<IntMatrix> {
    gens.iter().map(|a| compound_matrix(a, k)).collect()
}

/// HNF basis of the lattice spanned by all `k`-fold wedges of the rows of
/// `nl`'s basis, in the wedge coordinates of the ambient exterior power.
pub fn exterior_power_lattice(nl: &ZLattice, k: usize) -> Result<ZLattice> {
    ZLattice::from_rows(&compound_matrix(nl.basis(), k))
}

/// The dual lattice `L* = { x : <x, L> ⊆ Z }` realized inside the reference
/// Specht lattice: computed via an invariant form, saturated away from `p`
/// and normalized to p-power index.  Scaling does not change the
/// isomorphism class.
pub fn dual_form(l: &ZLattice, ctx: &SpechtContext, p: u64) -> Result<ZLattice> {
    if l.dim() != ctx.rank {
        return Err(Error::AmbientMismatch(l.dim(), ctx.rank));
    }
    let (g, denom) = ctx.dual_gram_scaled_with_denominator();
    let adj_b = l.basis().adjugate_triangular();
    let d = adj_b.transpose().mul(g);
    // the p-exponent of Z^r / rowspan(d) is at most v_p(det B_L) + v_p(c):
    // p to that power times the inverse of adj(B_L)^T G is p-integral, so
    // p^beta Z^r already lies in the row span locally at p
    let beta = l.index_valuation(p)? + crate::linalg::p_valuation(denom, p).unwrap_or(0);
    if beta == 0 {
        return Ok(ZLattice::full(ctx.rank));
    }
    let modulus = BigInt::from(p).pow(beta as u32);
    let h = crate::linalg::hnf_modular(&d, &modulus);
    Ok(ZLattice::from_hnf_unchecked(h).normalize_scaling(p).0)
}

/// The Wildon embedding `(S^lambda)* -> S^lambda`, as a matrix in
/// dual-polytabloid / polytabloid coordinates: the dual of the standard
/// tabloid functional of `t` maps to the row-stabilizer sum of `e_t`.
pub fn wildon_embedding(ctx: &SpechtContext) -> Result<IntMatrix> {
    if ctx.n > 10 {
        return Err(Error::Feasibility("wildon embedding limited to n <= 10".into()));
    }
    let t_count = ctx.tabloids.len();
    let mut phi_b = IntMatrix::zero(ctx.rank, ctx.rank);
    for i in 0..ctx.rank {
        let t = &ctx.standard[i];
        let mut acc = vec![0i128; t_count];
        for (sigma, _) in young_subgroup_elements(ctx.n, t.rows()) {
            for &(idx, c) in &ctx.act_expansion(&sigma, i)? {
                acc[idx] += c as i128;
            }
        }
        let dense: Vec<BigInt> = acc.into_iter().map(BigInt::from).collect();
        let coords = ctx.tabloid_dense_to_coords(&dense);
        for (j, v) in coords.into_iter().enumerate() {
            phi_b.set(i, j, v);
        }
    }
    // change the domain basis from standard-tabloid functionals to
    // dual polytabloids (identity for hooks)
    match &ctx.inv_std {
        None => Ok(phi_b),
        Some(inv) => Ok(inv.transpose().mul(&phi_b)),
    }
}

/// The elements `f(i, j)` of the dual hook lattice for `lambda = (n-2,1,1)`,
/// in polytabloid coordinates of `S(2)`: row `(i, j)` of the result, tails
/// ordered lexicographically.  Built directly from the wedge expansion, an
/// independent route from [`wildon_embedding`].
pub fn hook_f_matrix(n: usize) -> Result<IntMatrix> {
    if n < 4 {
        return Err(Error::BadHookIndex { n, k: 2 });
    }
    let tails = combinations(&(2..=n).collect::<Vec<_>>(), 2);
    let wedge_pairs = combinations(&(1..=n).collect::<Vec<_>>(), 2);
    let wedge_idx: HashMap<(usize, usize), usize> =
        wedge_pairs.iter().enumerate().map(|(i, p)| ((p[0], p[1]), i)).collect();
    let add_wedge = |acc: &mut Vec<i64>, a: usize, b: usize, c: i64| {
        if a < b {
            acc[wedge_idx[&(a, b)]] += c;
        } else {
            acc[wedge_idx[&(b, a)]] -= c;
        }
    };
    let mut out = IntMatrix::zero(tails.len(), tails.len());
    for (row, tail) in tails.iter().enumerate() {
        let (i, j) = (tail[0], tail[1]);
        let mut acc = vec![0i64; wedge_pairs.len()];
        for m in 1..=n {
            if m == i || m == j {
                continue;
            }
            add_wedge(&mut acc, i, j, 1);
            add_wedge(&mut acc, m, i, 1);
            add_wedge(&mut acc, m, j, -1);
        }
        // coordinates in the b(i1,i2) basis: the coefficient at the wedge
        // basis element (i1, i2) with i1 >= 2, since b(i1,i2) is the only
        // basis vector involving it
        let coords: Vec<i64> =
            tails.iter().map(|t2| acc[wedge_idx[&(t2[0], t2[1])]]).collect();
        // verify the remainder: acc must equal sum coords * b-expansion
        let mut check = vec![0i64; wedge_pairs.len()];
        for (bi, t2) in tails.iter().enumerate() {
            let c = coords[bi];
            if c != 0 {
                add_wedge(&mut check, t2[0], t2[1], c);
                add_wedge(&mut check, 1, t2[0], c);
                add_wedge(&mut check, 1, t2[1], -c);
            }
        }
        assert_eq!(acc, check, "f({i},{j}) does not lie in the Specht lattice");
        for (col, v) in coords.into_iter().enumerate() {
            out.set(row, col, BigInt::from(v));
        }
    }
    Ok(out)
}
