#![allow(dead_code)]

//! Independent oracles shared by the integration suites.

use itertools::Itertools;
use mrcodes::completion::SupportPattern;
use mrcodes::gf::{linearly_independent_over, minimal_polynomial, Embedding};
use mrcodes::matrix::{cauchy, vandermonde};
use mrcodes::mrlrc::LocalityProfile;
use mrcodes::poly::PolyRing;
use mrcodes::{Elem, Field, GaloisField, GfMatrix, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn gf(p: u64, m: u32) -> GaloisField {
    GaloisField::new(p, m, None).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_elem(f: &GaloisField, r: &mut ChaCha8Rng) -> Elem {
    f.elem(r.gen_range(0..f.order())).unwrap()
}

pub fn random_matrix(f: &GaloisField, rows: usize, cols: usize, r: &mut ChaCha8Rng) -> GfMatrix {
    Matrix::from_fn(f.clone(), rows, cols, |_, _| random_elem(f, r))
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &GfMatrix) -> Elem {
    let f = m.field();
    let n = m.rows();
    assert_eq!(n, m.cols());
    if n == 0 {
        return Elem::ONE;
    }
    if n == 1 {
        return *m.get(0, 0);
    }
    let mut acc = Elem::ZERO;
    for c in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&x| x != c).collect();
        let sub = Matrix::from_fn(f.clone(), n - 1, n - 1, |i, j| *m.get(i + 1, rest[j]));
        let term = f.mul(m.get(0, c), &cofactor_det(&sub));
        acc = if c % 2 == 0 { f.add(&acc, &term) } else { f.sub(&acc, &term) };
    }
    acc
}

/// Column sets whose patterned determinant keeps at least one permutation term.
pub fn pattern_sets_by_expansion(p: &SupportPattern) -> Vec<Vec<usize>> {
    (0..p.cols())
        .combinations(p.rows())
        .filter(|cols| {
            cols.iter()
                .copied()
                .permutations(cols.len())
                .any(|perm| perm.iter().enumerate().all(|(r, &c)| p.is_free(r, c)))
        })
        .collect()
}

/// All `C(N, K)` column sets filtered by the per-group caps.
pub fn admissible_by_filter(p: &LocalityProfile) -> Vec<Vec<usize>> {
    (0..p.n_total())
        .combinations(p.k_total())
        .filter(|s| (0..p.ell).all(|i| s.iter().filter(|c| p.group_columns(i).contains(c)).count() <= p.ks[i]))
        .collect()
}

pub fn axioms_hold(f: &GaloisField, a: &Elem, b: &Elem, c: &Elem) -> Result<(), String> {
    let fail = |what: &str| Err(format!("{what} fails in GF({}) at ({a}, {b}, {c})", f.order()));
    if f.add(&f.add(a, b), c) != f.add(a, &f.add(b, c)) {
        return fail("additive associativity");
    }
    if f.mul(&f.mul(a, b), c) != f.mul(a, &f.mul(b, c)) {
        return fail("multiplicative associativity");
    }
    if f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a) {
        return fail("commutativity");
    }
    if f.mul(a, &f.add(b, c)) != f.add(&f.mul(a, b), &f.mul(a, c)) {
        return fail("distributivity");
    }
    if f.add(a, &f.zero()) != *a || f.mul(a, &f.one()) != *a {
        return fail("identities");
    }
    if !f.is_zero(&f.add(a, &f.neg(a))) {
        return fail("additive inverse");
    }
    match f.inv(a) {
        Some(i) if !f.is_zero(a) && f.mul(a, &i) == f.one() => {}
        None if f.is_zero(a) => {}
        _ => return fail("multiplicative inverse"),
    }
    Ok(())
}

/// Exhaustive field axioms for small fields, 10^4 random triples for larger ones.
pub fn field_axiom_suite() -> Result<usize, String> {
    let mut checked = 0;
    for (p, m) in [(2, 1), (2, 3), (2, 6), (3, 3), (5, 2), (7, 2), (61, 1)] {
        let f = gf(p, m);
        let all: Vec<Elem> = f.elements().collect();
        for a in &all {
            for b in &all {
                for c in &all {
                    axioms_hold(&f, a, b, c)?;
                    checked += 1;
                }
            }
        }
    }
    let mut r = rng(11);
    for (p, m) in [(2, 16), (3, 17), (101, 2), (65_521, 1), (2, 31)] {
        let f = gf(p, m);
        for _ in 0..10_000 {
            let (a, b, c) = (random_elem(&f, &mut r), random_elem(&f, &mut r), random_elem(&f, &mut r));
            axioms_hold(&f, &a, &b, &c)?;
            checked += 1;
        }
    }
    Ok(checked)
}

/// Embeddings from every source of order at most 64 into a few extensions
/// are injective, additive and multiplicative on all pairs.
pub fn embedding_suite() -> Result<usize, String> {
    let mut checked = 0;
    for (p, a, b) in [(2, 1, 3), (2, 2, 2), (2, 2, 3), (2, 3, 2), (2, 6, 2), (3, 1, 2), (3, 2, 2), (3, 3, 2), (5, 1, 3), (7, 1, 3), (7, 2, 2)] {
        let src = gf(p, a);
        let dst = gf(p, a * b);
        let e = Embedding::new(&src, &dst).map_err(|e| e.to_string())?;
        let all: Vec<Elem> = src.elements().collect();
        let images: Vec<Elem> = all.iter().map(|&x| e.apply(x)).collect();
        if images.iter().unique().count() != all.len() {
            return Err(format!("embedding GF({}) -> GF({}) is not injective", src.order(), dst.order()));
        }
        for (i, x) in all.iter().enumerate() {
            for (j, y) in all.iter().enumerate() {
                let (ex, ey) = (images[i], images[j]);
                if e.apply(src.mul(x, y)) != dst.mul(&ex, &ey) || e.apply(src.add(x, y)) != dst.add(&ex, &ey) {
                    return Err(format!("embedding GF({}) -> GF({}) is not a homomorphism at ({x}, {y})", src.order(), dst.order()));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Cauchy blocks from the first `k + n` elements, all shapes up to 3 x 4.
pub fn cauchy_suite() -> Result<usize, String> {
    let mut checked = 0;
    for (p, m) in [(7, 1), (2, 3), (11, 1)] {
        let f = gf(p, m);
        let pts: Vec<Elem> = f.elements().collect();
        for k in 1..=3 {
            for n in 1..=4 {
                let c = cauchy(&f, &pts[..k], &pts[k..k + n]).map_err(|e| e.to_string())?;
                if !c.is_superregular() {
                    return Err(format!("{k} x {n} Cauchy over GF({}) is not superregular", f.order()));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Vandermonde blocks on the first `n` points for `n <= 7`, `q <= 11`.
pub fn vandermonde_suite() -> Result<usize, String> {
    let mut checked = 0;
    for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1)] {
        let f = gf(p, m);
        let pts: Vec<Elem> = f.elements().collect();
        for n in 1..=7.min(pts.len()) {
            for k in 1..=n {
                let v = vandermonde(&f, &pts[..n], k).map_err(|e| e.to_string())?;
                if !v.is_mds().map_err(|e| e.to_string())? {
                    return Err(format!("{k} x {n} Vandermonde over GF({}) is not MDS", f.order()));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// `det(AB) = det(A) det(B)` and agreement with cofactor expansion on seeded
/// random matrices of size up to 4 over fields of order at most 49.
pub fn determinant_suite() -> Result<usize, String> {
    let mut checked = 0;
    let mut r = rng(23);
    for (p, m) in [(2, 1), (7, 1), (2, 3), (3, 2), (5, 2), (7, 2)] {
        let f = gf(p, m);
        for n in 1..=4 {
            for _ in 0..50 {
                let a = random_matrix(&f, n, n, &mut r);
                let b = random_matrix(&f, n, n, &mut r);
                let (da, db) = (a.det().unwrap(), b.det().unwrap());
                if a.mul(&b).unwrap().det().unwrap() != f.mul(&da, &db) {
                    return Err(format!("det(AB) != det(A)det(B) over GF({}) at size {n}", f.order()));
                }
                if da != cofactor_det(&a) {
                    return Err(format!("elimination and cofactor determinants differ over GF({})", f.order()));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Minimal polynomials over the prime field of every element of `GF(7^3)`:
/// subfield coefficients, a root at `x`, and no annihilator of lower degree.
pub fn minimal_polynomial_suite() -> Result<usize, String> {
    let f = gf(7, 3);
    let ring = PolyRing::new(f.clone());
    let mut checked = 0;
    for x in f.elements() {
        let mp = minimal_polynomial(&f, x, 1).map_err(|e| e.to_string())?;
        let deg = mp.degree().unwrap();
        if mp.coeffs().iter().any(|c| !f.in_subfield(*c, 1).unwrap()) {
            return Err(format!("minimal polynomial of {x} leaves the subfield"));
        }
        if !f.is_zero(&ring.eval(&mp, &x)) || mp.leading() != Some(&Elem::ONE) {
            return Err(format!("minimal polynomial of {x} is not a monic annihilator"));
        }
        let powers: Vec<Elem> = (0..deg as u64).map(|i| f.pow(x, i)).collect();
        if !linearly_independent_over(&f, &powers, 1).unwrap() {
            return Err(format!("{x} has an annihilator of degree below {deg}"));
        }
        checked += 1;
    }
    Ok(checked)
}
