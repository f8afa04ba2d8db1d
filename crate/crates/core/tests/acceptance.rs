//! Acceptance suite: every classification claim the library is built to
//! reproduce, each as one criterion with a printed pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specht_forms_core::combinatorics::combinations;
use specht_forms_core::forms::{
    binom, conjectured_count, craig_plesken_lattice, enumerate_p_forms_ctx, exterior_transfer,
    global_forms, is_isomorphic_at_p, random_sublattice, s1_lattice, s2_lattice, t_chain, Config,
    EnumerationResult, Provenance,
};
use specht_forms_core::fp::is_prime;
use specht_forms_core::linalg::{order_ideal_index, p_valuation, ZLattice};
use specht_forms_core::modrep::SimpleLabel;
use specht_forms_core::specht::{
    build_hook_specht, dual_form, exterior_power_lattice, hook_f_matrix, wildon_embedding,
    SpechtContext,
};

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {criterion:02} [{status}] {name}{detail}");
    assert!(pass, "criterion {criterion} failed: {name}{detail}");
}

fn odd_primes_upto(n: usize) -> Vec<u64> {
    (3..=n as u64).filter(|&q| is_prime(q)).collect()
}

fn nu(n: usize, p: u64) -> u64 {
    p_valuation(&BigInt::from(n as u64), p).unwrap_or(0)
}

fn divisor_count(n: usize) -> usize {
    (1..=n).filter(|d| n % d == 0).count()
}

/// Theorem (a): h_p(k) = v_p(n) + 1 for every odd prime p <= n,
/// 5 <= n <= 12, k in {1,2,3}.
#[test]
fn criterion_01_theorem_a_odd_p_counts() {
    let cfg = Config::default();
    let mut failures = Vec::new();
    for n in 5..=12usize {
        for k in 1..=3.min(n - 2) {
            let ctx = build_hook_specht(n, k).unwrap();
            for p in odd_primes_upto(n) {
                let res = enumerate_p_forms_ctx(&ctx, p, &cfg).unwrap();
                let expect = (nu(n, p) + 1) as usize;
                if res.count() != expect {
                    failures.push(format!("(n={n},k={k},p={p}): {} != {expect}", res.count()));
                }
            }
        }
    }
    report(
        1,
        "h_p(k) = v_p(n)+1 for odd p, 5 <= n <= 12, k <= 3",
        failures.is_empty(),
        &format!(" {}", failures.join("; ")),
    );
}

fn loewy_of(res: &EnumerationResult, val: u64) -> Option<&Vec<Vec<SimpleLabel>>> {
    res.classes.iter().find(|c| c.index_valuation == val).map(|c| &c.loewy)
}

/// Theorem (b)(i): n odd, p = 2, k = 2: exactly 3 classes, with the
/// uniserial Loewy series of S1 and S2 and the dual pairing.
#[test]
fn criterion_02_theorem_b_odd() {
    use SimpleLabel::{DTwoRow, Trivial};
    let cfg = Config::default();
    let mut failures = Vec::new();
    for n in [5usize, 7, 9, 11] {
        let ctx = build_hook_specht(n, 2).unwrap();
        let res = enumerate_p_forms_ctx(&ctx, 2, &cfg).unwrap();
        if res.count() != 3 {
            failures.push(format!("n={n}: {} classes", res.count()));
            continue;
        }
        let r = binom(n - 1, 2) as u64;
        let (f, d) = (Trivial, DTwoRow);
        let expected: Vec<(u64, Vec<Vec<SimpleLabel>>)> = if n % 4 == 1 {
            vec![
                (0, vec![vec![f.clone()], vec![d.clone()], vec![f.clone()]]),
                (1, vec![vec![d.clone()], vec![f.clone()], vec![f.clone()]]),
                (r - 1, vec![vec![f.clone()], vec![f.clone()], vec![d.clone()]]),
            ]
        } else {
            vec![
                (0, vec![vec![f.clone(), d.clone()]]),
                (1, vec![vec![d.clone()], vec![f.clone()]]),
                (r - 1, vec![vec![f.clone()], vec![d.clone()]]),
            ]
        };
        for (val, series) in &expected {
            if loewy_of(&res, *val) != Some(series) {
                failures.push(format!("n={n}: Loewy mismatch at valuation {val}"));
            }
        }
        // dual pairing: S self-dual, S1 <-> S2
        let pos = |val: u64| res.classes.iter().position(|c| c.index_valuation == val).unwrap();
        let (i_s, i_s1, i_s2) = (pos(0), pos(1), pos(r - 1));
        if res.classes[i_s].dual_partner != Some(i_s)
            || res.classes[i_s1].dual_partner != Some(i_s2)
            || res.classes[i_s2].dual_partner != Some(i_s1)
        {
            failures.push(format!("n={n}: dual pairing wrong"));
        }
        // explicit bases match the enumerated classes
        let s1 = s1_lattice(n).unwrap();
        let s2 = s2_lattice(n).unwrap();
        if !is_isomorphic_at_p(&s1, &res.classes[i_s1].lattice, 2, &ctx).unwrap()
            || !is_isomorphic_at_p(&s2, &res.classes[i_s2].lattice, 2, &ctx).unwrap()
        {
            failures.push(format!("n={n}: explicit S1/S2 bases do not match"));
        }
    }
    report(
        2,
        "p=2, n odd: 3 classes with S1/S2 Loewy series and duality",
        failures.is_empty(),
        &format!(" {}", failures.join("; ")),
    );
}

/// Theorem (b)(ii): n = 2 mod 4, p = 2, k = 2: exactly 4 classes; T3 is the
/// dual of S and T1 the dual of T2 (Hom-generator oracle); T-chain Loewy
/// series as in the uniserial corollary.
#[test]
fn criterion_03_theorem_b_2mod4() {
    use SimpleLabel::{DNat, DTwoRow, Trivial};
    let cfg = Config::default();
    let mut failures = Vec::new();
    for n in [6usize, 10] {
        let ctx = build_hook_specht(n, 2).unwrap();
        let res = enumerate_p_forms_ctx(&ctx, 2, &cfg).unwrap();
        if res.count() != 4 {
            failures.push(format!("n={n}: {} classes", res.count()));
            continue;
        }
        let s = ZLattice::full(ctx.rank);
        let chain = t_chain(n, &ctx, cfg.seed).unwrap();
        if chain[0] != s1_lattice(n).unwrap() {
            failures.push(format!("n={n}: T1 != S1"));
        }
        let dual_s = dual_form(&s, &ctx, 2).unwrap();
        if !is_isomorphic_at_p(&chain[2], &dual_s, 2, &ctx).unwrap() {
            failures.push(format!("n={n}: T3 not dual to S"));
        }
        let dual_t2 = dual_form(&chain[1], &ctx, 2).unwrap();
        if !is_isomorphic_at_p(&chain[0], &dual_t2, 2, &ctx).unwrap() {
            failures.push(format!("n={n}: T1 not dual to T2"));
        }
        let (f, d, dn) = (Trivial, DTwoRow, DNat);
        let expect_s = vec![vec![f.clone()], vec![d.clone()], vec![f.clone()], vec![dn.clone()]];
        let expect_t = [
            vec![vec![d.clone()], vec![f.clone()], vec![dn.clone()], vec![f.clone()]],
            vec![vec![f.clone()], vec![dn.clone()], vec![f.clone()], vec![d.clone()]],
            vec![vec![dn.clone()], vec![f.clone()], vec![d.clone()], vec![f.clone()]],
        ];
        if loewy_of(&res, 0) != Some(&expect_s) {
            failures.push(format!("n={n}: Loewy of S mismatch"));
        }
        for (t, expect) in chain.iter().zip(expect_t.iter()) {
            let class = res
                .classes
                .iter()
                .find(|c| is_isomorphic_at_p(t, &c.lattice, 2, &ctx).unwrap());
            match class {
                Some(c) if &c.loewy == expect => {}
                _ => failures.push(format!("n={n}: T-chain Loewy mismatch")),
            }
        }
    }
    report(
        3,
        "p=2, n=2 mod 4: 4 classes, T3 dual to S, T1 dual to T2",
        failures.is_empty(),
        &format!(" {}", failures.join("; ")),
    );
}

/// Craig–Plesken: [M:M_d] = d^(n-2); the M_(p^i) are pairwise
/// non-isomorphic at p and M_d is locally M_(p^(v_p(d))).
#[test]
fn criterion_04_craig_plesken() {
    let mut failures = Vec::new();
    for n in 3..=12usize {
        let m = ZLattice::full(n - 1);
        let ctx = build_hook_specht(n, 1).unwrap();
        for d in (1..=n as u64).filter(|d| n as u64 % d == 0) {
            let md = craig_plesken_lattice(n, d).unwrap();
            if order_ideal_index(&m, &md).unwrap() != BigInt::from(d).pow((n - 2) as u32) {
                failures.push(format!("n={n} d={d}: index"));
            }
        }
        for p in (2..=n as u64).filter(|&q| is_prime(q) && n as u64 % q == 0) {
            let lats: Vec<ZLattice> = (0..=nu(n, p))
                .map(|i| craig_plesken_lattice(n, p.pow(i as u32)).unwrap())
                .collect();
            for i in 0..lats.len() {
                for j in i + 1..lats.len() {
                    if is_isomorphic_at_p(&lats[i], &lats[j], p, &ctx).unwrap() {
                        failures.push(format!("n={n} p={p}: M_(p^{i}) iso M_(p^{j})"));
                    }
                }
            }
            for d in (1..=n as u64).filter(|d| n as u64 % d == 0) {
                let vp = p_valuation(&BigInt::from(d), p).unwrap_or(0);
                let a = craig_plesken_lattice(n, d).unwrap();
                let b = craig_plesken_lattice(n, p.pow(vp as u32)).unwrap();
                if !is_isomorphic_at_p(&a, &b, p, &ctx).unwrap() {
                    failures.push(format!("n={n} p={p} d={d}: local class"));
                }
            }
        }
    }
    report(
        4,
        "Craig-Plesken indices and local classes for n <= 12",
        failures.is_empty(),
        &format!(" {}", failures.join("; ")),
    );
}

/// Exterior transfer: the wedge images of the Craig–Plesken classes match
/// the directly enumerated class set bijectively.
#[test]
fn criterion_05_exterior_transfer_equivalence() {
    let cfg = Config::default();
    let mut failures = Vec::new();
    let cases: &[(usize, u64)] = &[(6, 3), (9, 3), (12, 3), (10, 5)];
    for &(n, p) in cases {
        for k in 2..=3usize {
            let ctx = build_hook_specht(n, k).unwrap();
            let transfer = exterior_transfer(n, k, p, &ctx).unwrap();
            let res = enumerate_p_forms_ctx(&ctx, p, &cfg).unwrap();
            if transfer.len() != res.count() {
                failures.push(format!("(n={n},k={k},p={p}): {} vs {}", transfer.len(), res.count()));
                continue;
            }
            let mut hit = vec![false; res.count()];
            for t in &transfer {
                let pos = res
                    .classes
                    .iter()
                    .position(|c| is_isomorphic_at_p(t, &c.lattice, p, &ctx).unwrap());
                match pos {
                    Some(i) if !hit[i] => hit[i] = true,
                    _ => failures.push(format!("(n={n},k={k},p={p}): not bijective")),
                }
            }
        }
    }
    report(
        5,
        "exterior transfer matches direct enumeration bijectively",
        failures.is_empty(),
        &format!(" {}", failures.join("; ")),
    );
}

/// Global counts: j(2) = 3 d(n) for odd n, 2 d(n) for n = 2 mod 4, with
/// localizations matching the chosen local classes.
#[test]
fn criterion_06_global_counts() {
    let cfg = Config::default();
    let mut failures = Vec::new();
    for n in [5usize, 6, 7, 9, 10] {
        let res = global_forms(n, 2, &cfg).unwrap();
        let expect = if n % 2 == 1 { 3 * divisor_count(n) } else { 2 * divisor_count(n) };
        if res.forms.len() != expect {
            failures.push(format!("n={n}: {} forms != {expect}", res.forms.len()));
        }
        let reference = ZLattice::full(binom(n - 1, 2) as usize);
        let mut signatures = std::collections::BTreeSet::new();
        for form in &res.forms {
            let idx = order_ideal_index(&reference, &form.lattice).unwrap();
            let mut sig = Vec::new();
            for (p, ci) in &form.local_choices {
                let local = &res.locals[res.primes.iter().position(|q| q == p).unwrap()];
                let val = p_valuation(&idx, *p).unwrap_or(0);
                if val != local.classes[*ci].index_valuation {
                    failures.push(format!("n={n}: localization mismatch at p={p}"));
                }
                sig.push((*p, val));
            }
            signatures.insert(sig);
        }
        if signatures.len() != res.forms.len() {
            failures.push(format!("n={n}: local signatures not pairwise distinct"));
        }
    }
    report(
        6,
        "global Z-form counts 3d(n) / 2d(n) with matching localizations",
        failures.is_empty(),
        &format!(" {}", failures.join("; ")),
    );
}

/// Exterior index law on random sublattices: the directly computed HNF index
/// of the wedge lattice equals [M:N]^binom(rank-1, k-1).
#[test]
fn criterion_07_exterior_index_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    let mut failures = Vec::new();
    for n in 5..=8usize {
        let r = n - 1;
        for k in 2..=3.min(n - 2) {
            let m = ZLattice::full(r);
            let wedge_m = exterior_power_lattice(&m, k).unwrap();
            for trial in 0..20 {
                let sub = random_sublattice(r, &mut rng);
                let wedge_n = exterior_power_lattice(&sub, k).unwrap();
                let direct = order_ideal_index(&wedge_m, &wedge_n).unwrap();
                let base = order_ideal_index(&m, &sub).unwrap();
                if direct != base.pow(binom(r - 1, k - 1) as u32) {
                    failures.push(format!("n={n} k={k} trial={trial}"));
                }
            }
        }
    }
    report(
        7,
        "wedge index law on 20 random sublattices per (n, k)",
        failures.is_empty(),
        &format!(" {}", failures.join("; ")),
    );
}

/// Wildon embedding: injective, equivariant, and the exact integer identity
/// n b(2,3) = 3 f(2,3) + sum (f(2,u) - f(3,u)).
#[test]
fn criterion_08_wildon_embedding() {
    let mut failures = Vec::new();
    let contexts: Vec<SpechtContext> = vec![
        build_hook_specht(3, 1).unwrap(),  // (2,1)
        build_hook_specht(5, 2).unwrap(),  // (3,1,1)
        build_hook_specht(6, 2).unwrap(),  // (4,1,1)
        build_hook_specht(10, 2).unwrap(), // (8,1,1)
    ];
    for ctx in &contexts {
        let phi = match wildon_embedding(ctx) {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("n={}: {e}", ctx.n));
                continue;
            }
        };
        if phi.det().is_zero() {
            failures.push(format!("n={}: phi not injective", ctx.n));
        }
        // generators are involutions, so the dual action matrix is A^T
        if !ctx.generators.iter().all(|a| a.transpose().mul(&phi) == phi.mul(a)) {
            failures.push(format!("n={}: phi not equivariant", ctx.n));
        }
        if ctx.hook_k == Some(2) {
            let n = ctx.n;
            let f = hook_f_matrix(n).unwrap();
            let fact =
                BigInt::from(specht_forms_core::combinatorics::factorial(n - 3) as u64);
            if phi != f.scalar_mul(&fact) {
                failures.push(format!("n={n}: phi != (n-3)! f"));
            }
            // exact integer identity for n b(2,3)
            let tails = combinations(&(2..=n).collect::<Vec<_>>(), 2);
            let idx = |a: usize, b: usize| tails.iter().position(|t| t == &vec![a, b]).unwrap();
            let dim = tails.len();
            let mut rhs = vec![BigInt::zero(); dim];
            for j in 0..dim {
                rhs[j] += f.get(idx(2, 3), j) * BigInt::from(3);
            }
            for u in 4..=n {
                for j in 0..dim {
                    rhs[j] += f.get(idx(2, u), j);
                    rhs[j] -= f.get(idx(3, u), j);
                }
            }
            let mut lhs = vec![BigInt::zero(); dim];
            lhs[idx(2, 3)] = BigInt::from(n as u64);
            if lhs != rhs {
                failures.push(format!("n={n}: f(2,3) identity"));
            }
        }
    }
    report(
        8,
        "Wildon embedding injective, equivariant, f(2,3) identity exact",
        failures.is_empty(),
        &format!(" {}", failures.join("; ")),
    );
}

/// Conjecture census at p = 2 (reported, never asserted as theorem): the
/// observed counts against the conjectured formulas, flagged CONJECTURE.
#[test]
fn criterion_09_conjecture_census() {
    let cfg = Config::default();
    let mut failures = Vec::new();
    // k = 2, n = 0 mod 4: conjectured 3 v_2(n) + 1
    for n in [8usize, 12] {
        let res = enumerate_p_forms_ctx(&build_hook_specht(n, 2).unwrap(), 2, &cfg).unwrap();
        let conj = conjectured_count(n, 2).unwrap();
        let flag = if res.count() as u64 == conj { "MATCH" } else { "MISMATCH" };
        println!("census [CONJECTURE] n={n} k=2 p=2: observed {} vs conjectured {conj}: {flag}", res.count());
        if res.count() as u64 != conj {
            failures.push(format!("n={n} k=2: observed {} vs conjectured {conj}", res.count()));
        }
    }
    // k = 3: conjectured {8, 3, 3} for n = {6, 7, 9}; at n = 6 the case is
    // theorem-covered (k = n-3) with value 4, so the conjectured formula is
    // reported but the theorem value is the assertion
    for (n, conj) in [(6usize, 8u64), (7, 3), (9, 3)] {
        let res = enumerate_p_forms_ctx(&build_hook_specht(n, 3).unwrap(), 2, &cfg).unwrap();
        let observed = res.count() as u64;
        let flag = if observed == conj { "MATCH" } else { "MISMATCH" };
        println!("census [CONJECTURE] n={n} k=3 p=2: observed {observed} vs conjectured {conj}: {flag}");
        assert_eq!(conjectured_count(n, 3), Some(conj));
        if n == 6 {
            // theorem h_2(n-3) = 4 takes precedence on the overlap
            if observed != 4 {
                failures.push(format!("n=6 k=3: observed {observed} vs theorem 4"));
            }
            if let Some((val, prov)) = specht_forms_core::forms::expected_count(6, 3, 2) {
                if val != 4 || prov != Provenance::Theorem {
                    failures.push("n=6 k=3: expected_count should be the theorem value 4".into());
                }
            }
        } else if observed != conj {
            failures.push(format!("n={n} k=3: observed {observed} vs conjectured {conj}"));
        }
    }
    report(
        9,
        "census at p=2 reported against conjectured counts (CONJECTURE)",
        failures.is_empty(),
        &format!(" {}", failures.join("; ")),
    );
}

/// Invariant suites: Brauer–Nesbitt multiset equality, duality closure, and
/// meataxe determinism under two seeds, across enumerated class lists.
#[test]
fn criterion_10_invariant_suites() {
    let cfg = Config::default();
    let mut failures = Vec::new();
    let cases: &[(usize, usize, u64)] = &[
        (5, 2, 2),
        (6, 2, 2),
        (7, 2, 2),
        (9, 2, 2),
        (10, 2, 2),
        (6, 2, 3),
        (9, 2, 3),
        (10, 2, 5),
        (6, 3, 2),
        (7, 3, 2),
        (9, 3, 3),
    ];
    for &(n, k, p) in cases {
        let ctx = build_hook_specht(n, k).unwrap();
        let res = enumerate_p_forms_ctx(&ctx, p, &cfg).unwrap();
        // Brauer-Nesbitt: all classes share the composition-factor multiset
        let multiset = |loewy: &Vec<Vec<SimpleLabel>>| {
            let mut all: Vec<SimpleLabel> = loewy.iter().flatten().cloned().collect();
            all.sort();
            all
        };
        let base = multiset(&res.classes[0].loewy);
        for c in &res.classes[1..] {
            if multiset(&c.loewy) != base {
                failures.push(format!("(n={n},k={k},p={p}): Brauer-Nesbitt violated"));
            }
        }
        // odd p dividing n: the reference lattice reduces uniserially with
        // Loewy series D(k+1) / D(k)
        if p != 2 && n % (p as usize) == 0 {
            let expect = vec![vec![SimpleLabel::DHook(k + 1)], vec![SimpleLabel::DHook(k)]];
            if loewy_of(&res, 0) != Some(&expect) {
                failures.push(format!("(n={n},k={k},p={p}): reference Loewy labels"));
            }
        }
        // every representative has a pure p-power index
        for c in &res.classes {
            if c.lattice.index_in_ambient() != BigInt::from(p).pow(c.index_valuation as u32) {
                failures.push(format!("(n={n},k={k},p={p}): index not a pure p-power"));
            }
        }
        // duality closure: every class has a partner and pairing is involutive
        for (i, c) in res.classes.iter().enumerate() {
            match c.dual_partner {
                None => failures.push(format!("(n={n},k={k},p={p}): class {i} has no dual")),
                Some(j) => {
                    if res.classes[j].dual_partner != Some(i) {
                        failures.push(format!("(n={n},k={k},p={p}): duality not involutive"));
                    }
                }
            }
        }
    }
    // determinism: two different seeds give identical class data
    for &(n, k, p) in &[(6usize, 2usize, 2u64), (9, 2, 3)] {
        let ctx = build_hook_specht(n, k).unwrap();
        let a = enumerate_p_forms_ctx(&ctx, p, &Config { seed: 1, ..Config::default() }).unwrap();
        let b = enumerate_p_forms_ctx(&ctx, p, &Config { seed: 9999, ..Config::default() }).unwrap();
        let data = |r: &EnumerationResult| {
            r.classes
                .iter()
                .map(|c| (c.index_valuation, c.loewy.clone(), c.lattice.basis().clone()))
                .collect::<Vec<_>>()
        };
        if a.count() != b.count() || data(&a) != data(&b) {
            failures.push(format!("(n={n},k={k},p={p}): seed dependence"));
        }
    }
    report(
        10,
        "Brauer-Nesbitt, duality closure, meataxe determinism",
        failures.is_empty(),
        &format!(" {}", failures.join("; ")),
    );
}
