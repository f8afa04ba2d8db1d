//! Partitions, tabloids, tableaux and the symmetric-group action on them.
//!
//! Everything downstream fixes its coordinates here: tabloids are kept in a
//! canonical total order (lexicographic on the tuple of sorted row sets), so
//! matrix coordinates are stable across runs.

use crate::error::{Error, Result};
use std::collections::HashMap;

/// An integer partition of `n`, stored as a weakly decreasing list of parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::BadPartition("no parts".into()));
        }
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::BadPartition(format!("{parts:?} not weakly decreasing")));
            }
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::BadPartition("zero part".into()));
        }
        Ok(Partition { parts })
    }

    /// The hook partition `(n-k, 1^k)`.
    pub fn hook(n: usize, k: usize) -> Result<Self> {
        if n < 1 || k + 1 > n {
            return Err(Error::BadHookIndex { n, k });
        }
        let mut parts = vec![n - k];
        parts.extend(std::iter::repeat(1).take(k));
        Partition::new(parts)
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn conjugate(&self) -> Partition {
        let mut parts = Vec::with_capacity(self.parts[0]);
        for j in 1..=self.parts[0] {
            parts.push(self.parts.iter().filter(|&&p| p >= j).count());
        }
        Partition { parts }
    }
}

/// A permutation of `{1, …, n}` in one-line notation.
///
/// Composition applies the right factor first: `(a * b)(x) = a(b(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (1..=n).collect() }
    }

    /// One-line notation; `images[i]` is the image of `i + 1`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(Error::BadPartition(format!("not a permutation: {images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    /// The transposition `(a b)` in the symmetric group of degree `n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(a - 1, b - 1);
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1]
    }

    /// `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm { images: other.images.iter().map(|&x| self.images[x - 1]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x - 1] = i + 1;
        }
        Perm { images }
    }

    pub fn sign(&self) -> i64 {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut sign = 1i64;
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut j = i;
            let mut len = 0;
            while !seen[j] {
                seen[j] = true;
                j = self.images[j] - 1;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }
}

/// A tabloid: an ordered list of disjoint sets partitioning `{1, …, n}`,
/// with row sizes given by the shape.  Rows are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tabloid {
    rows: Vec<Vec<usize>>,
}

impl Tabloid {
    pub fn new(mut rows: Vec<Vec<usize>>) -> Self {
        for r in rows.iter_mut() {
            r.sort_unstable();
        }
        Tabloid { rows }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }
}

/// Applies `sigma` to a tabloid elementwise and renormalizes.
pub fn act_on_tabloid(sigma: &Perm, t: &Tabloid) -> Result<Tabloid> {
    let n: usize = t.rows.iter().map(|r| r.len()).sum();
    if sigma.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, found: sigma.degree() });
    }
    Ok(Tabloid::new(
        t.rows.iter().map(|r| r.iter().map(|&x| sigma.apply(x)).collect()).collect(),
    ))
}

/// Enumerates all tabloids of shape `lambda` in the canonical order
/// (lexicographic on the tuple of sorted row sets).
pub fn enumerate_tabloids(lambda: &Partition) -> Result<Vec<Tabloid>> {
    let n = lambda.n();
    if n > 16 {
        return Err(Error::Feasibility(format!("tabloid enumeration capped at n <= 16, got n = {n}")));
    }
    let mut out = Vec::new();
    let universe: Vec<usize> = (1..=n).collect();
    let mut rows: Vec<Vec<usize>> = Vec::new();
    fill_rows(lambda.parts(), 0, &universe, &mut rows, &mut out);
    out.sort();
    Ok(out)
}

fn fill_rows(
    parts: &[usize],
    i: usize,
    remaining: &[usize],
    rows: &mut Vec<Vec<usize>>,
    out: &mut Vec<Tabloid>,
) {
    if i == parts.len() {
        out.push(Tabloid::new(rows.clone()));
        return;
    }
    // last row takes whatever is left
    if i + 1 == parts.len() {
        rows.push(remaining.to_vec());
        fill_rows(parts, i + 1, &[], rows, out);
        rows.pop();
        return;
    }
    for subset in combinations(remaining, parts[i]) {
        let rest: Vec<usize> = remaining.iter().copied().filter(|x| !subset.contains(x)).collect();
        rows.push(subset);
        fill_rows(parts, i + 1, &rest, rows, out);
        rows.pop();
    }
}

/// All `k`-element subsets of `items`, each sorted, in lexicographic order.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// Indexed tabloid list with constant-time lookup.
pub struct TabloidTable {
    pub tabloids: Vec<Tabloid>,
    index: HashMap<Tabloid, usize>,
}

impl TabloidTable {
    pub fn new(lambda: &Partition) -> Result<Self> {
        let tabloids = enumerate_tabloids(lambda)?;
        let index = tabloids.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Ok(TabloidTable { tabloids, index })
    }

    pub fn len(&self) -> usize {
        self.tabloids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tabloids.is_empty()
    }

    pub fn position(&self, t: &Tabloid) -> usize {
        self.index[t]
    }
}

/// A Young tableau, stored by rows.  `is_standard` checks strict increase
/// along rows and down columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Self {
        Tableau { rows }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition::new(self.rows.iter().map(|r| r.len()).collect()).expect("tableau shape")
    }

    pub fn is_standard(&self) -> bool {
        for r in &self.rows {
            if r.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
        }
        for i in 1..self.rows.len() {
            for j in 0..self.rows[i].len() {
                if self.rows[i - 1][j] >= self.rows[i][j] {
                    return false;
                }
            }
        }
        true
    }

    /// Column sets of the tableau.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let width = self.rows[0].len();
        let mut cols = vec![Vec::new(); width];
        for r in &self.rows {
            for (j, &x) in r.iter().enumerate() {
                cols[j].push(x);
            }
        }
        cols
    }

    pub fn transpose(&self) -> Tableau {
        Tableau { rows: self.columns() }
    }

    /// The tabloid of this tableau (row sets, order of entries forgotten).
    pub fn tabloid(&self) -> Tabloid {
        Tabloid::new(self.rows.clone())
    }

    pub fn apply(&self, sigma: &Perm) -> Tableau {
        Tableau {
            rows: self.rows.iter().map(|r| r.iter().map(|&x| sigma.apply(x)).collect()).collect(),
        }
    }
}

/// All standard tableaux of shape `lambda`, ordered by their row reading word.
pub fn standard_tableaux(lambda: &Partition) -> Vec<Tableau> {
    let n = lambda.n();
    let parts = lambda.parts().to_vec();
    let mut rows: Vec<Vec<usize>> = parts.iter().map(|&p| Vec::with_capacity(p)).collect();
    let mut out = Vec::new();
    fn rec(next: usize, n: usize, parts: &[usize], rows: &mut Vec<Vec<usize>>, out: &mut Vec<Tableau>) {
        if next > n {
            out.push(Tableau::new(rows.clone()));
            return;
        }
        for i in 0..parts.len() {
            if rows[i].len() == parts[i] {
                continue;
            }
            let j = rows[i].len();
            // row condition is automatic (entries placed in increasing order);
            // column condition: the cell above must be filled
            if i > 0 && rows[i - 1].len() <= j {
                continue;
            }
            rows[i].push(next);
            rec(next + 1, n, parts, rows, out);
            rows[i].pop();
        }
    }
    rec(1, n, &parts, &mut rows, &mut out);
    out
}

/// Description of a row (or column) stabilizer: the order and a generating
/// set of transpositions.
#[derive(Debug, Clone)]
pub struct StabilizerDesc {
    pub order: u128,
    pub generators: Vec<Perm>,
}

fn stabilizer_of_sets(n: usize, sets: &[Vec<usize>]) -> StabilizerDesc {
    let mut order: u128 = 1;
    let mut generators = Vec::new();
    for s in sets {
        order *= factorial(s.len());
        for w in s.windows(2) {
            generators.push(Perm::transposition(n, w[0], w[1]));
        }
    }
    StabilizerDesc { order, generators }
}

/// The row stabilizer `R_t` of a tableau.
pub fn row_stabilizer(t: &Tableau) -> StabilizerDesc {
    let n = t.shape().n();
    stabilizer_of_sets(n, t.rows())
}

/// The column stabilizer `C_t` of a tableau.
pub fn column_stabilizer(t: &Tableau) -> StabilizerDesc {
    let n = t.shape().n();
    stabilizer_of_sets(n, &t.columns())
}

pub fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Enumerates every element of the Young subgroup `Sym(sets[0]) × Sym(sets[1]) × …`
/// inside the symmetric group of degree `n`, together with its sign.
pub fn young_subgroup_elements(n: usize, sets: &[Vec<usize>]) -> Vec<(Perm, i64)> {
    let mut elems = vec![(Perm::identity(n), 1i64)];
    for s in sets {
        let perms_of_s = all_arrangements(s);
        let mut next = Vec::with_capacity(elems.len() * perms_of_s.len());
        for (base, base_sign) in &elems {
            for arr in &perms_of_s {
                // permutation sending s[i] -> arr[i]
                let mut images: Vec<usize> = (1..=n).collect();
                for (i, &x) in s.iter().enumerate() {
                    images[x - 1] = arr[i];
                }
                let p = Perm { images };
                let sign = p.sign() * base_sign;
                next.push((base.compose(&p), sign));
            }
        }
        elems = next;
    }
    elems
}

fn all_arrangements(items: &[usize]) -> Vec<Vec<usize>> {
    let mut v = items.to_vec();
    let mut out = Vec::new();
    heap_permute(&mut v, items.len(), &mut out);
    out
}

fn heap_permute(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(v.clone());
        return;
    }
    for i in 0..k {
        heap_permute(v, k - 1, out);
        if k % 2 == 0 {
            v.swap(i, k - 1);
        } else {
            v.swap(0, k - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn conjugate_is_involutive() {
        for parts in [vec![4, 2, 1], vec![3, 3], vec![5], vec![1, 1, 1]] {
            let p = Partition::new(parts).unwrap();
            assert_eq!(p.conjugate().conjugate(), p);
        }
        assert_eq!(part(&[3, 1, 1]).conjugate(), part(&[3, 1, 1]).conjugate());
        assert_eq!(part(&[4, 1, 1]).conjugate(), part(&[3, 1, 1, 1]));
    }

    #[test]
    fn tabloid_counts() {
        // (n-1,1): n tabloids, identified with <1>..<n>
        for n in 2..=7 {
            let t = enumerate_tabloids(&Partition::hook(n, 1).unwrap()).unwrap();
            assert_eq!(t.len(), n);
        }
        // single row: exactly one tabloid
        assert_eq!(enumerate_tabloids(&part(&[6])).unwrap().len(), 1);
        // (2,1): 3!/2! = 3 tabloids, enumerated by hand
        let t21 = enumerate_tabloids(&part(&[2, 1])).unwrap();
        assert_eq!(t21.len(), 3);
        let expected: Vec<Tabloid> = vec![
            Tabloid::new(vec![vec![1, 2], vec![3]]),
            Tabloid::new(vec![vec![1, 3], vec![2]]),
            Tabloid::new(vec![vec![2, 3], vec![1]]),
        ];
        assert_eq!(t21, expected);
        // generic multinomial count
        let t = enumerate_tabloids(&part(&[2, 2, 1])).unwrap();
        assert_eq!(t.len(), 30);
    }

    #[test]
    fn empty_partition_rejected() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![2, 3]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn tabloid_action_examples() {
        let t = Tabloid::new(vec![vec![1, 2], vec![3]]);
        let id = Perm::identity(3);
        assert_eq!(act_on_tabloid(&id, &t).unwrap(), t);
        // (1 2) is in the row stabilizer
        let s12 = Perm::transposition(3, 1, 2);
        assert_eq!(act_on_tabloid(&s12, &t).unwrap(), t);
        // (2 3) moves it
        let s23 = Perm::transposition(3, 2, 3);
        assert_eq!(act_on_tabloid(&s23, &t).unwrap(), Tabloid::new(vec![vec![1, 3], vec![2]]));
        // degree mismatch is an error
        assert!(act_on_tabloid(&Perm::identity(4), &t).is_err());
    }

    #[test]
    fn action_is_compatible_with_composition() {
        let lambda = part(&[3, 1, 1]);
        let tabloids = enumerate_tabloids(&lambda).unwrap();
        let sigma = Perm::from_images(vec![2, 3, 1, 5, 4]).unwrap();
        let tau = Perm::from_images(vec![1, 4, 2, 3, 5]).unwrap();
        let st = sigma.compose(&tau);
        for t in &tabloids {
            let a = act_on_tabloid(&st, t).unwrap();
            let b = act_on_tabloid(&sigma, &act_on_tabloid(&tau, t).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn stabilizer_orders() {
        // (n-2,1,1): |R_t| = (n-2)!
        for n in 4..=8 {
            let t = standard_tableaux(&Partition::hook(n, 2).unwrap())[0].clone();
            assert_eq!(row_stabilizer(&t).order, factorial(n - 2));
        }
        // (1^n): trivial row stabilizer
        let t = standard_tableaux(&part(&[1, 1, 1, 1]))[0].clone();
        assert_eq!(row_stabilizer(&t).order, 1);
        // (2,1) with rows (1 2 / 3): R_t = {e, (1 2)}
        let t = Tableau::new(vec![vec![1, 2], vec![3]]);
        let d = row_stabilizer(&t);
        assert_eq!(d.order, 2);
        let elems = young_subgroup_elements(3, t.rows());
        assert_eq!(elems.len(), 2);
        assert!(elems.iter().any(|(p, _)| *p == Perm::identity(3)));
        assert!(elems.iter().any(|(p, _)| *p == Perm::transposition(3, 1, 2)));
    }

    #[test]
    fn stabilizers_conjugate_correctly() {
        // R_{pi t} = pi R_t pi^{-1} and C_{pi t} = pi C_t pi^{-1}, checked on
        // element sets for lambda = (3,1,1)
        let lambda = part(&[3, 1, 1]);
        let t = standard_tableaux(&lambda)[0].clone();
        let pi = Perm::from_images(vec![3, 1, 4, 5, 2]).unwrap();
        let tp = t.apply(&pi);
        let lhs: std::collections::HashSet<Perm> =
            young_subgroup_elements(5, tp.rows()).into_iter().map(|(p, _)| p).collect();
        let rhs: std::collections::HashSet<Perm> = young_subgroup_elements(5, t.rows())
            .into_iter()
            .map(|(p, _)| pi.compose(&p).compose(&pi.inverse()))
            .collect();
        assert_eq!(lhs, rhs);
        let lhs_c: std::collections::HashSet<Perm> =
            young_subgroup_elements(5, &tp.columns()).into_iter().map(|(p, _)| p).collect();
        let rhs_c: std::collections::HashSet<Perm> = young_subgroup_elements(5, &t.columns())
            .into_iter()
            .map(|(p, _)| pi.compose(&p).compose(&pi.inverse()))
            .collect();
        assert_eq!(lhs_c, rhs_c);
    }

    #[test]
    fn row_meets_column_trivially() {
        for lambda in [part(&[3, 1, 1]), part(&[2, 2, 1]), part(&[4, 2])] {
            for t in standard_tableaux(&lambda) {
                let rows: std::collections::HashSet<Perm> =
                    young_subgroup_elements(lambda.n(), t.rows()).into_iter().map(|(p, _)| p).collect();
                let cols: std::collections::HashSet<Perm> =
                    young_subgroup_elements(lambda.n(), &t.columns()).into_iter().map(|(p, _)| p).collect();
                let both: Vec<&Perm> = rows.intersection(&cols).collect();
                assert_eq!(both.len(), 1);
            }
        }
    }

    #[test]
    fn standard_tableau_counts() {
        assert_eq!(standard_tableaux(&part(&[2, 1])).len(), 2);
        // hooks: binom(n-1, k)
        for n in 3..=7 {
            for k in 0..n {
                let cnt = standard_tableaux(&Partition::hook(n, k).unwrap()).len();
                assert_eq!(cnt as u128, binom(n - 1, k));
            }
        }
        assert!(standard_tableaux(&part(&[2, 2])).iter().all(|t| t.is_standard()));
    }

    fn binom(n: usize, k: usize) -> u128 {
        if k > n {
            return 0;
        }
        factorial(n) / (factorial(k) * factorial(n - k))
    }

    #[test]
    fn sign_is_multiplicative() {
        let a = Perm::from_images(vec![2, 1, 3, 4]).unwrap();
        assert_eq!(a.sign(), -1);
        let b = Perm::from_images(vec![2, 3, 4, 1]).unwrap();
        assert_eq!(b.sign(), -1);
        assert_eq!(a.compose(&b).sign(), 1);
    }
}
