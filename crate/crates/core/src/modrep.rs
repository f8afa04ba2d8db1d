//! Modular representation analysis over `F_p`: meataxe splitting with
//! Norton's irreducibility criterion, homomorphism spaces via parallel
//! standard-basis spinning, radical and Loewy series, simple head quotients.
//!
//! Randomness is confined to seeded algebra words; every public entry point
//! takes the seed explicitly, so runs are reproducible bit-for-bit.

use crate::error::{Error, Result};
use crate::fp::{
    eval_poly_at_matrix, factor_poly, order_poly, poly_deg, FpMat, Poly,
};
use crate::linalg::IntMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Label of a simple `F_p S_n`-module, as used in Loewy series and census
/// output.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimpleLabel {
    Trivial,
    Sign,
    /// `D^(n-1,1)`.
    DNat,
    /// `D^(n-2,2)`.
    DTwoRow,
    /// `D(k)` of odd-p hooks, of dimension `binom(n-2, k-1)`.
    DHook(usize),
    /// A simple module not matching any reference; `id` numbers the
    /// isomorphism classes encountered within one labeling context.
    Other { dim: usize, id: usize },
}

impl std::fmt::Display for SimpleLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SimpleLabel::Trivial => write!(f, "TRIVIAL"),
            SimpleLabel::Sign => write!(f, "SIGN"),
            SimpleLabel::DNat => write!(f, "D(n-1,1)"),
            SimpleLabel::DTwoRow => write!(f, "D(n-2,2)"),
            SimpleLabel::DHook(k) => write!(f, "D({k})"),
            SimpleLabel::Other { dim, id } => write!(f, "OTHER(dim={dim},id={id})"),
        }
    }
}

/// An `F_p`-representation given by invertible generator matrices acting on
/// row vectors.
#[derive(Clone, Debug)]
pub struct FpModule {
    pub p: u64,
    pub dim: usize,
    pub gens: Vec<FpMat>,
}

impl FpModule {
    pub fn new(p: u64, gens: Vec<FpMat>) -> Self {
        let dim = gens.first().map_or(0, |g| g.rows());
        for g in &gens {
            assert_eq!(g.rows(), dim);
            assert_eq!(g.cols(), dim);
            debug_assert!(g.inverse().is_some(), "generator not invertible mod p");
        }
        FpModule { p, dim, gens }
    }

    pub fn from_int_generators(gens: &[IntMatrix], p: u64) -> Self {
        FpModule::new(p, gens.iter().map(|g| FpMat::from_int_matrix(g, p)).collect())
    }

    /// The dual module: generators `(A^{-1})^T`.
    pub fn dual(&self) -> FpModule {
        FpModule::new(
            self.p,
            self.gens.iter().map(|g| g.inverse().expect("invertible").transpose()).collect(),
        )
    }
}

/// Formal element of the group algebra: a sum of scaled generator products,
/// evaluable on any module with the same generator list.
#[derive(Clone, Debug)]
pub struct AlgebraWord {
    terms: Vec<(u64, Vec<usize>)>,
}

impl AlgebraWord {
    pub fn eval(&self, m: &FpModule) -> FpMat {
        let mut acc = FpMat::zero(m.p, m.dim, m.dim);
        for (c, prod) in &self.terms {
            let mut term = FpMat::identity(m.p, m.dim).scalar_mul(*c);
            for &g in prod {
                term = term.mul(&m.gens[g]);
            }
            acc = acc.add(&term);
        }
        acc
    }
}

fn random_word(m: &FpModule, rng: &mut ChaCha8Rng) -> AlgebraWord {
    let n_terms = rng.gen_range(2..=4);
    let terms = (0..n_terms)
        .map(|_| {
            let c = rng.gen_range(1..m.p.max(2));
            let len = rng.gen_range(1..=3);
            let prod = (0..len).map(|_| rng.gen_range(0..m.gens.len())).collect();
            (c, prod)
        })
        .collect();
    AlgebraWord { terms }
}

/// Echelonized submodule closure of the given seed rows under the module
/// generators; rows of the result form a basis in echelon form.
pub fn spin(m: &FpModule, seeds: &FpMat) -> FpMat {
    spin_with(&m.gens, m.p, m.dim, seeds)
}

fn spin_with(gens: &[FpMat], p: u64, dim: usize, seeds: &FpMat) -> FpMat {
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut queue: Vec<Vec<u64>> = (0..seeds.rows()).map(|i| seeds.row(i).to_vec()).collect();
    while let Some(v) = queue.pop() {
        let red = reduce_against(&mut basis, v, p);
        if let Some(newv) = red {
            for g in gens {
                queue.push(g.apply_row(&newv));
            }
        }
        if basis.len() == dim {
            break;
        }
    }
    basis.sort_by_key(|r| r.iter().position(|&x| x != 0).unwrap());
    let mut out = FpMat::zero(p, basis.len(), dim);
    for (i, row) in basis.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            out.set(i, j, x);
        }
    }
    out
}

/// Reduces `v` against the echelon `basis`; inserts and returns the reduced
/// vector when independent.
fn reduce_against(basis: &mut Vec<Vec<u64>>, mut v: Vec<u64>, p: u64) -> Option<Vec<u64>> {
    for b in basis.iter() {
        let lead = b.iter().position(|&x| x != 0).unwrap();
        if v[lead] != 0 {
            let c = v[lead] % p;
            // b is normalized to lead coefficient 1
            for (x, &y) in v.iter_mut().zip(b.iter()) {
                *x = (*x + (p - c) * y) % p;
            }
        }
    }
    let lead = v.iter().position(|&x| x != 0)?;
    let inv = mod_inv(v[lead], p);
    for x in v.iter_mut() {
        *x = (*x as u128 * inv as u128 % p as u128) as u64;
    }
    // keep echelon sorted by leading position
    let pos = basis
        .iter()
        .position(|b| b.iter().position(|&x| x != 0).unwrap() > lead)
        .unwrap_or(basis.len());
    basis.insert(pos, v.clone());
    // back-substitute so earlier rows stay reduced
    for i in 0..basis.len() {
        if i == pos {
            continue;
        }
        let c = basis[i][lead];
        if c != 0 {
            let vi = basis[pos].clone();
            for (x, &y) in basis[i].iter_mut().zip(vi.iter()) {
                *x = (*x + (p - c) * y) % p;
            }
        }
    }
    Some(v)
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = (result as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    result
}

/// The submodule spanned by `basis` (rows, echelonized) as a module in its
/// own coordinates.
pub fn submodule(m: &FpModule, basis: &FpMat) -> FpModule {
    let q = basis.rows();
    let gens = m
        .gens
        .iter()
        .map(|g| {
            FpMat::from_fn(m.p, q, q, |i, j| {
                // express basis[i] * g in the basis rows
                solve_in_echelon(basis, &g.apply_row(basis.row(i)), m.p)[j]
            })
        })
        .collect();
    FpModule::new(m.p, gens)
}

fn solve_in_echelon(basis: &FpMat, v: &[u64], p: u64) -> Vec<u64> {
    let mut v = v.to_vec();
    let mut coeffs = vec![0u64; basis.rows()];
    for i in 0..basis.rows() {
        let lead = (0..basis.cols()).find(|&j| basis.get(i, j) != 0).unwrap();
        let c = (v[lead] as u128 * mod_inv(basis.get(i, lead), p) as u128 % p as u128) as u64;
        coeffs[i] = c;
        if c != 0 {
            for j in 0..basis.cols() {
                v[j] = ((v[j] as u128 + (p - c) as u128 * basis.get(i, j) as u128) % p as u128) as u64;
            }
        }
    }
    assert!(v.iter().all(|&x| x == 0), "vector not in the submodule");
    coeffs
}

/// Quotient module by the (echelonized) submodule `basis`, together with the
/// projection matrix onto quotient coordinates.
pub fn quotient(m: &FpModule, basis: &FpMat) -> (FpModule, FpMat) {
    let p = m.p;
    let dim = m.dim;
    let pivots: Vec<usize> = (0..basis.rows())
        .map(|i| (0..dim).find(|&j| basis.get(i, j) != 0).unwrap())
        .collect();
    let free: Vec<usize> = (0..dim).filter(|j| !pivots.contains(j)).collect();
    let reduce = |v: &[u64]| -> Vec<u64> {
        let mut v = v.to_vec();
        for i in 0..basis.rows() {
            let c = v[pivots[i]];
            if c != 0 {
                let inv = mod_inv(basis.get(i, pivots[i]), p);
                let c = (c as u128 * inv as u128 % p as u128) as u64;
                for j in 0..dim {
                    v[j] = ((v[j] as u128 + (p - c) as u128 * basis.get(i, j) as u128)
                        % p as u128) as u64;
                }
            }
        }
        free.iter().map(|&j| v[j]).collect()
    };
    let projection = {
        let mut pr = FpMat::zero(p, dim, free.len());
        for i in 0..dim {
            let mut e = vec![0u64; dim];
            e[i] = 1;
            for (j, v) in reduce(&e).into_iter().enumerate() {
                pr.set(i, j, v);
            }
        }
        pr
    };
    let gens = m
        .gens
        .iter()
        .map(|g| {
            FpMat::from_fn(p, free.len(), free.len(), |i, j| {
                let mut e = vec![0u64; dim];
                e[free[i]] = 1;
                reduce(&g.apply_row(&e))[j]
            })
        })
        .collect();
    (FpModule::new(p, gens), projection)
}

/// One meataxe splitting step: `Ok(None)` proves simplicity (Norton),
/// `Ok(Some(basis))` exhibits a proper nonzero submodule.
pub fn split_once(m: &FpModule, seed: u64) -> Result<Option<FpMat>> {
    if m.dim == 1 {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51f7);
    for _attempt in 0..120 {
        let word = random_word(m, &mut rng);
        let theta = word.eval(m);
        let v_seed: Vec<u64> = (0..m.dim).map(|_| rng.gen_range(0..m.p)).collect();
        if v_seed.iter().all(|&x| x == 0) {
            continue;
        }
        let g = order_poly(&theta, &v_seed);
        if poly_deg(&g).unwrap_or(0) == 0 {
            continue;
        }
        let factors = factor_poly(m.p, &g, &mut rng);
        // factors come sorted by degree; trying a few small ones per word is
        // cheaper than evaluating a large factor at the matrix
        for (f, _) in factors.iter().take(4) {
            let f_theta = if poly_deg(f) == Some(m.dim) {
                // f is the full characteristic polynomial: f(theta) = 0
                FpMat::zero(m.p, m.dim, m.dim)
            } else {
                eval_poly_at_matrix(f, &theta)
            };
            // row action: the kernel of v -> v f(theta) is the left nullspace
            let kernel = f_theta.left_nullspace();
            debug_assert!(kernel.rows() > 0);
            let first = FpMat::from_fn(m.p, 1, m.dim, |_, j| kernel.get(0, j));
            let u = spin(m, &first);
            if u.rows() < m.dim {
                return Ok(Some(u));
            }
            if kernel.rows() == poly_deg(f).unwrap() {
                // Norton's criterion: spin a row-kernel vector of f(theta)^T
                // under the transposed generators; that kernel is the right
                // nullspace of f(theta)
                let k_t = f_theta.right_nullspace();
                let first_t = FpMat::from_fn(m.p, 1, m.dim, |_, j| k_t.get(0, j));
                let gens_t: Vec<FpMat> = m.gens.iter().map(|g| g.transpose()).collect();
                let u_t = spin_with(&gens_t, m.p, m.dim, &first_t);
                if u_t.rows() < m.dim {
                    return Ok(Some(u_t.right_nullspace()));
                }
                return Ok(None);
            }
            // inconclusive unless some kernel vector spins to a proper submodule
            for i in 1..kernel.rows().min(3) {
                let row = FpMat::from_fn(m.p, 1, m.dim, |_, j| kernel.get(i, j));
                let u = spin(m, &row);
                if u.rows() < m.dim {
                    return Ok(Some(u));
                }
            }
        }
    }
    Err(Error::CapExceeded("meataxe failed to decide irreducibility".into()))
}

/// Meataxe composition factors, as simple modules (multiset).
pub fn composition_factors(m: &FpModule, seed: u64) -> Result<Vec<FpModule>> {
    let mut out = Vec::new();
    let mut stack = vec![m.clone()];
    while let Some(v) = stack.pop() {
        if v.dim == 0 {
            continue;
        }
        match split_once(&v, seed)? {
            None => out.push(v),
            Some(basis) => {
                stack.push(submodule(&v, &basis));
                stack.push(quotient(&v, &basis).0);
            }
        }
    }
    out.sort_by_key(|f| f.dim);
    Ok(out)
}

/// Finds a word and an irreducible factor of its order polynomial whose
/// kernel on the simple module `d` has dimension equal to the factor degree
/// (the seed data for standard-basis spinning).
pub fn find_cyclic_word(d: &FpModule, seed: u64) -> Result<(AlgebraWord, Poly)> {
    let p = d.p;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x40e3);
    for _ in 0..200 {
        let word = random_word(d, &mut rng);
        let theta = word.eval(d);
        let v_seed: Vec<u64> = (0..d.dim).map(|_| rng.gen_range(0..p)).collect();
        if v_seed.iter().all(|&x| x == 0) {
            continue;
        }
        let g = order_poly(&theta, &v_seed);
        for (f, _) in factor_poly(p, &g, &mut rng).into_iter().take(4) {
            let ft = if poly_deg(&f) == Some(d.dim) {
                FpMat::zero(p, d.dim, d.dim)
            } else {
                eval_poly_at_matrix(&f, &theta)
            };
            if ft.left_nullspace().rows() == poly_deg(&f).unwrap() {
                return Ok((word, f));
            }
        }
    }
    Err(Error::CapExceeded("no cyclic word found for hom space".into()))
}

/// Basis of `Hom(D, W)` for a simple module `D`, via parallel spinning of a
/// standard basis of `D`.  Each element is the matrix of a homomorphism in
/// the row convention (`phi(v) = v * X`).
pub fn hom_space_simple(d: &FpModule, w: &FpModule, seed: u64) -> Result<Vec<FpMat>> {
    let (word, f) = find_cyclic_word(d, seed)?;
    hom_space_with_word(d, w, &word, &f)
}

/// [`hom_space_simple`] with a precomputed cyclic word for `d`.
pub fn hom_space_with_word(
    d: &FpModule,
    w: &FpModule,
    word: &AlgebraWord,
    f: &Poly,
) -> Result<Vec<FpMat>> {
    assert_eq!(d.p, w.p);
    assert_eq!(d.gens.len(), w.gens.len());
    let p = d.p;
    let f = f.clone();
    let theta_d = word.eval(d);
    let f_theta_d = if poly_deg(&f) == Some(d.dim) {
        FpMat::zero(p, d.dim, d.dim)
    } else {
        eval_poly_at_matrix(&f, &theta_d)
    };
    let null_d = f_theta_d.left_nullspace();
    let d0: Vec<u64> = (0..d.dim).map(|j| null_d.get(0, j)).collect();

    // standard basis of D from d0, recording the spinning schedule
    let mut bs: Vec<Vec<u64>> = vec![d0.clone()];
    let mut defs: Vec<(usize, usize)> = Vec::new(); // bs[m] = bs[i] * gen[g]
    let mut constraints: Vec<(usize, usize, Vec<u64>)> = Vec::new();
    {
        // echelon rows with expressions in terms of bs, kept sorted by
        // leading position so a single forward pass reduces completely
        let mut ech: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
        let insert = |ech: &mut Vec<(Vec<u64>, Vec<u64>)>, v: Vec<u64>, expr: Vec<u64>| {
            let lead = v.iter().position(|&x| x != 0).unwrap();
            let pos = ech
                .iter()
                .position(|(row, _)| row.iter().position(|&x| x != 0).unwrap() > lead)
                .unwrap_or(ech.len());
            ech.insert(pos, (v, expr));
        };
        insert(&mut ech, d0.clone(), vec![1]);
        let mut cursor = 0usize;
        while cursor < bs.len() {
            for g in 0..d.gens.len() {
                let v = d.gens[g].apply_row(&bs[cursor]);
                // reduce against ech, collecting the expression
                let mut red = v.clone();
                let mut expr = vec![0u64; bs.len()];
                for (row, e) in ech.iter() {
                    let lead = row.iter().position(|&x| x != 0).unwrap();
                    if red[lead] != 0 {
                        let c = (red[lead] as u128 * mod_inv(row[lead], p) as u128 % p as u128)
                            as u64;
                        for (x, &y) in red.iter_mut().zip(row.iter()) {
                            *x = ((*x as u128 + (p - c) as u128 * y as u128) % p as u128) as u64;
                        }
                        for (x, &y) in expr.iter_mut().zip(e.iter()) {
                            *x = ((*x as u128 + c as u128 * y as u128) % p as u128) as u64;
                        }
                    }
                }
                if red.iter().all(|&x| x == 0) {
                    constraints.push((cursor, g, expr));
                } else {
                    defs.push((cursor, g));
                    bs.push(v.clone());
                    let mut e = vec![0u64; bs.len()];
                    e[bs.len() - 1] = 1;
                    for (x, &y) in e.iter_mut().zip(expr.iter()) {
                        *x = (*x + p - y) % p;
                    }
                    insert(&mut ech, red, e);
                }
            }
            cursor += 1;
        }
        assert_eq!(bs.len(), d.dim, "standard basis of a simple module spans");
    }

    // kernel of f(theta) on W parametrizes candidate images of d0
    let theta_w = word.eval(w);
    let f_theta_w = if poly_deg(&f) == Some(w.dim) {
        FpMat::zero(p, w.dim, w.dim)
    } else {
        eval_poly_at_matrix(&f, &theta_w)
    };
    let null_w = f_theta_w.left_nullspace();
    let m_dim = null_w.rows();
    if m_dim == 0 {
        return Ok(vec![]);
    }
    // y[l]: (w.dim x m_dim) with column u giving the image of bs[l]
    let mut y: Vec<FpMat> = Vec::with_capacity(bs.len());
    y.push(null_w.transpose());
    for &(i, g) in &defs {
        y.push(w.gens[g].transpose().mul(&y[i]));
    }
    // constraints: w.gens[g]^T * y[i] == sum_l expr[l] * y[l]
    let mut c_rows: Vec<Vec<u64>> = Vec::new();
    for (i, g, expr) in &constraints {
        let lhs = w.gens[*g].transpose().mul(&y[*i]);
        let mut rhs = FpMat::zero(p, w.dim, m_dim);
        for (l, &c) in expr.iter().enumerate() {
            if c != 0 {
                rhs = rhs.add(&y[l].scalar_mul(c));
            }
        }
        let diff = lhs.sub(&rhs);
        for r in 0..w.dim {
            if (0..m_dim).any(|c| diff.get(r, c) != 0) {
                c_rows.push(diff.row(r).to_vec());
            }
        }
    }
    let kernel = if c_rows.is_empty() {
        FpMat::identity(p, m_dim)
    } else {
        let cmat = FpMat::from_fn(p, c_rows.len(), m_dim, |i, j| c_rows[i][j]);
        cmat.right_nullspace()
    };
    // assemble homs: X = Bs^{-1} * Y(u)
    let bs_mat = FpMat::from_fn(p, d.dim, d.dim, |i, j| bs[i][j]);
    let bs_inv = bs_mat.inverse().expect("standard basis invertible");
    let mut out = Vec::new();
    for r in 0..kernel.rows() {
        let u: Vec<u64> = (0..m_dim).map(|j| kernel.get(r, j)).collect();
        let yu = FpMat::from_fn(p, d.dim, w.dim, |l, c| {
            let mut acc = 0u128;
            for (t, &uc) in u.iter().enumerate() {
                acc += y[l].get(c, t) as u128 * uc as u128;
            }
            (acc % p as u128) as u64
        });
        out.push(bs_inv.mul(&yu));
    }
    Ok(out)
}

/// Isomorphism test for two modules already known to be simple.
pub fn simple_modules_isomorphic(a: &FpModule, b: &FpModule, seed: u64) -> Result<bool> {
    if a.dim != b.dim || a.p != b.p {
        return Ok(false);
    }
    Ok(!hom_space_simple(a, b, seed)?.is_empty())
}

/// General isomorphism test: true iff an invertible intertwiner exists over
/// `F_p`.  Simple inputs use the hom-space route; small non-simple inputs
/// fall back to a full intertwiner solve.
pub fn is_isomorphic(a: &FpModule, b: &FpModule, seed: u64) -> Result<bool> {
    if a.dim != b.dim || a.p != b.p {
        return Ok(false);
    }
    if a.dim == 0 {
        return Ok(true);
    }
    let a_simple = split_once(a, seed)?.is_none();
    let b_simple = split_once(b, seed)?.is_none();
    if a_simple != b_simple {
        return Ok(false);
    }
    if a_simple {
        return simple_modules_isomorphic(a, b, seed);
    }
    if a.dim > 24 {
        return Err(Error::CapExceeded(
            "generic isomorphism solve capped at dim 24".into(),
        ));
    }
    // solve A_g X = X B_g for X (dim x dim): kernel over F_p
    let p = a.p;
    let d = a.dim;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (ag, bg) in a.gens.iter().zip(b.gens.iter()) {
        // condition entry (i,j): sum_k A[i][k] X[k][j] - X[i][k] B[k][j] = 0
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![0u64; d * d];
                for k in 0..d {
                    row[k * d + j] = (row[k * d + j] + ag.get(i, k)) % p;
                    row[i * d + k] = (row[i * d + k] + p - bg.get(k, j)) % p;
                }
                rows.push(row);
            }
        }
    }
    let cmat = FpMat::from_fn(p, rows.len(), d * d, |i, j| rows[i][j]);
    let hom = cmat.right_nullspace();
    if hom.rows() == 0 {
        return Ok(false);
    }
    if hom.rows() > 16 {
        return Err(Error::CapExceeded("hom space too large to enumerate".into()));
    }
    // search an invertible element of the hom space
    let count = (p as u128).pow(hom.rows() as u32);
    if count > 1 << 20 {
        return Err(Error::CapExceeded("hom space too large to enumerate".into()));
    }
    let mut coeffs = vec![0u64; hom.rows()];
    for idx in 1..count {
        let mut rem = idx;
        for c in coeffs.iter_mut() {
            *c = (rem % p as u128) as u64;
            rem /= p as u128;
        }
        let x = FpMat::from_fn(p, d, d, |i, j| {
            let mut acc = 0u128;
            for (t, &c) in coeffs.iter().enumerate() {
                acc += c as u128 * hom.get(t, i * d + j) as u128;
            }
            (acc % p as u128) as u64
        });
        if x.inverse().is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Distinct simple composition factors of a module and its dual, with
/// cached cyclic words and endomorphism dimensions.  Socle, radical and head
/// computations against a fixed factor set avoid re-running the meataxe for
/// every lattice in an enumeration: by Brauer–Nesbitt all reductions of
/// forms of one module share their factors.
pub struct FactorSet {
    pub distinct: Vec<FpModule>,
    words: Vec<Option<(AlgebraWord, Poly)>>,
    end_dims: Vec<Option<usize>>,
    seed: u64,
}

impl FactorSet {
    /// Factor set of `v` (factors of the dual included, so socles of duals
    /// of submodules are always covered).
    pub fn for_module(v: &FpModule, seed: u64) -> Result<FactorSet> {
        let mut factors = composition_factors(v, seed)?;
        factors.extend(composition_factors(&v.dual(), seed)?);
        let distinct = dedupe_simples(&factors, seed)?;
        let len = distinct.len();
        Ok(FactorSet { distinct, words: vec![None; len], end_dims: vec![None; len], seed })
    }

    fn word(&mut self, i: usize) -> Result<&(AlgebraWord, Poly)> {
        if self.words[i].is_none() {
            self.words[i] = Some(find_cyclic_word(&self.distinct[i], self.seed)?);
        }
        Ok(self.words[i].as_ref().unwrap())
    }

    /// Basis of `Hom(distinct[i], w)`.
    pub fn hom_into(&mut self, i: usize, w: &FpModule) -> Result<Vec<FpMat>> {
        let (word, f) = self.word(i)?.clone();
        hom_space_with_word(&self.distinct[i], w, &word, &f)
    }

    /// `dim End(distinct[i])` (1 for absolutely simple factors).
    pub fn end_dim(&mut self, i: usize) -> Result<usize> {
        if self.end_dims[i].is_none() {
            let d = self.distinct[i].clone();
            let e = self.hom_into(i, &d)?.len();
            self.end_dims[i] = Some(e);
        }
        Ok(self.end_dims[i].unwrap())
    }

    /// Socle data of the dual of `m`: per factor index the hom basis into
    /// `m.dual()`, flattened functional rows, and constituent multiplicities.
    fn dual_socle(&mut self, m: &FpModule) -> Result<DualSocle> {
        let dual = m.dual();
        let mut homs_per = Vec::new();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for i in 0..self.distinct.len() {
            if self.distinct[i].dim > m.dim || self.distinct[i].p != m.p {
                homs_per.push(Vec::new());
                continue;
            }
            let homs = self.hom_into(i, &dual)?;
            for h in &homs {
                for r in 0..h.rows() {
                    rows.push(h.row(r).to_vec());
                }
            }
            homs_per.push(homs);
        }
        if rows.is_empty() {
            return Err(Error::Internal("factor set does not cover the module".into()));
        }
        let functional = FpMat::from_fn(m.p, rows.len(), m.dim, |i, j| rows[i][j]);
        Ok(DualSocle { homs_per, functional })
    }
}

struct DualSocle {
    /// Hom bases `distinct[i] -> m.dual()`, one entry per factor index.
    homs_per: Vec<Vec<FpMat>>,
    /// All image rows stacked: functionals cutting out the radical.
    functional: FpMat,
}

/// Radical of `V` relative to a factor set: the annihilator of the socle of
/// the dual module.
pub fn radical_with(m: &FpModule, fs: &mut FactorSet) -> Result<FpMat> {
    Ok(fs.dual_socle(m)?.functional.right_nullspace())
}

/// Radical of `V`, computing the factor set on the fly.
pub fn radical(m: &FpModule, seed: u64) -> Result<FpMat> {
    radical_with(m, &mut FactorSet::for_module(m, seed)?)
}

fn dedupe_simples(factors: &[FpModule], seed: u64) -> Result<Vec<FpModule>> {
    let mut distinct: Vec<FpModule> = Vec::new();
    for f in factors {
        let mut known = false;
        for d in &distinct {
            if simple_modules_isomorphic(f, d, seed)? {
                known = true;
                break;
            }
        }
        if !known {
            distinct.push(f.clone());
        }
    }
    Ok(distinct)
}

/// Loewy series relative to a factor set: radical layers top-down.  Each
/// layer lists one representative per constituent with multiplicity; simple
/// modules of symmetric groups are self-dual, so the socle constituents of
/// the dual represent the head constituents faithfully.
pub fn loewy_series_with(m: &FpModule, fs: &mut FactorSet) -> Result<Vec<Vec<FpModule>>> {
    let mut layers = Vec::new();
    let mut cur = m.clone();
    while cur.dim > 0 {
        let socle = fs.dual_socle(&cur)?;
        let mut layer = Vec::new();
        for (i, homs) in socle.homs_per.iter().enumerate() {
            if homs.is_empty() {
                continue;
            }
            let mult = homs.len() / fs.end_dim(i)?;
            for _ in 0..mult {
                layer.push(fs.distinct[i].clone());
            }
        }
        layers.push(layer);
        let rad = socle.functional.right_nullspace();
        if rad.rows() == 0 {
            break;
        }
        cur = submodule(&cur, &rad);
    }
    Ok(layers)
}

/// Loewy series, computing the factor set on the fly.
pub fn loewy_series(m: &FpModule, seed: u64) -> Result<Vec<Vec<FpModule>>> {
    loewy_series_with(m, &mut FactorSet::for_module(m, seed)?)
}

/// A simple quotient of a module: the quotient itself, the projection onto
/// it, and the kernel (a maximal submodule).
pub struct HeadQuotient {
    pub quotient: FpModule,
    pub projection: FpMat,
    pub kernel: FpMat,
}

/// The simple quotients of `V` relative to a factor set, one per head
/// constituent.  Errors when the head is not multiplicity-free (callers may
/// fall back to [`maximal_submodules_with`]).
pub fn head_simple_quotients_with(
    m: &FpModule,
    fs: &mut FactorSet,
) -> Result<Vec<HeadQuotient>> {
    let socle = fs.dual_socle(m)?;
    let mut out = Vec::new();
    for (i, homs) in socle.homs_per.iter().enumerate() {
        if homs.is_empty() {
            continue;
        }
        let end_dim = fs.end_dim(i)?;
        if homs.len() > end_dim {
            return Err(Error::HeadNotMultiplicityFree {
                dim: fs.distinct[i].dim,
                mult: homs.len() / end_dim,
            });
        }
        // the image of the embedding D -> V* spans the D-socle of the dual;
        // its annihilator is the maximal submodule
        let kernel = homs[0].right_nullspace();
        let (q, projection) = quotient(m, &kernel);
        out.push(HeadQuotient { quotient: q, projection, kernel });
    }
    Ok(out)
}

/// [`head_simple_quotients_with`] with a fresh factor set.
pub fn head_simple_quotients(m: &FpModule, seed: u64) -> Result<Vec<HeadQuotient>> {
    head_simple_quotients_with(m, &mut FactorSet::for_module(m, seed)?)
}

/// All maximal submodules of `V`, handling head multiplicity by enumerating
/// the projective space of each hom space.
pub fn maximal_submodules_with(m: &FpModule, fs: &mut FactorSet) -> Result<Vec<FpMat>> {
    let socle = fs.dual_socle(m)?;
    let mut out: Vec<FpMat> = Vec::new();
    for homs in &socle.homs_per {
        if homs.is_empty() {
            continue;
        }
        let s = homs.len();
        let count = (m.p as u128).pow(s as u32);
        if count > 1 << 16 {
            return Err(Error::CapExceeded("too many maximal submodules to enumerate".into()));
        }
        let mut seen: Vec<FpMat> = Vec::new();
        let mut coeffs = vec![0u64; s];
        for idx in 1..count {
            let mut rem = idx;
            for c in coeffs.iter_mut() {
                *c = (rem % m.p as u128) as u64;
                rem /= m.p as u128;
            }
            let mut x = FpMat::zero(m.p, homs[0].rows(), m.dim);
            for (t, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    x = x.add(&homs[t].scalar_mul(c));
                }
            }
            if x.is_zero() {
                continue;
            }
            let kernel = x.right_nullspace();
            if kernel.rows() + homs[0].rows() != m.dim {
                // not injective: a proper combination, skip
                continue;
            }
            if !seen.iter().any(|k| *k == kernel) {
                seen.push(kernel);
            }
        }
        out.extend(seen);
    }
    Ok(out)
}

/// [`maximal_submodules_with`] with a fresh factor set.
pub fn maximal_submodules(m: &FpModule, seed: u64) -> Result<Vec<FpMat>> {
    maximal_submodules_with(m, &mut FactorSet::for_module(m, seed)?)
}
