//! Subfields of `GF(p^m)`: embeddings, minimal polynomials and linear
//! independence over a subfield.

use super::{Elem, GaloisField, GfError};
use crate::field::Field;
use crate::matrix::{Matrix, Solution};
use crate::poly::{Poly, PolyRing};

/// Ring homomorphism `GF(p^a) -> GF(p^(a*b))`.
///
/// The source generator is sent to the root of the source modulus with the
/// smallest canonical encoding in the target, so the map is reproducible.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: GaloisField,
    target: GaloisField,
    generator_image: Elem,
}

impl Embedding {
    pub fn new(source: &GaloisField, target: &GaloisField) -> Result<Self, GfError> {
        if source.p() != target.p() || target.check_subfield(source.m()).is_err() {
            return Err(GfError::NoSubfield { p: target.p(), sub: source.m(), m: target.m() });
        }
        let generator_image = if source.m() == 1 {
            Elem::ZERO
        } else {
            let f: Vec<Elem> = source.modulus().iter().map(|&c| target.from_i64(i64::from(c))).collect();
            let ring = PolyRing::new(target.clone());
            let f = ring.from_coeffs(f);
            subfield_elements(target, source.m())
                .into_iter()
                .filter(|y| target.is_zero(&ring.eval(&f, y)))
                .min()
                .expect("an irreducible polynomial of degree a splits in GF(p^(a*b))")
        };
        Ok(Embedding { source: source.clone(), target: target.clone(), generator_image })
    }

    pub fn source(&self) -> &GaloisField {
        &self.source
    }

    pub fn target(&self) -> &GaloisField {
        &self.target
    }

    pub fn apply(&self, x: Elem) -> Elem {
        let t = &self.target;
        if self.source.m() == 1 {
            return t.from_i64(x.enc() as i64);
        }
        self.source.coeffs(x).iter().rev().fold(Elem::ZERO, |acc, &c| {
            t.add(&t.mul(&acc, &self.generator_image), &t.from_i64(i64::from(c)))
        })
    }

    /// Inverse image, `None` if `y` is outside the embedded subfield.
    pub fn preimage(&self, y: Elem) -> Option<Elem> {
        let a = self.source.m() as usize;
        let t = &self.target;
        let prime = t.prime_subfield().clone();
        let lift = |v: Vec<u32>| v.into_iter().map(|c| prime.from_i64(i64::from(c))).collect::<Vec<_>>();
        // columns: coefficient vectors of 1, r, r^2, ... in the target
        let mut basis = Matrix::zeros(prime.clone(), t.m() as usize, a);
        let mut pw = Elem::ONE;
        for j in 0..a {
            for (i, c) in lift(t.coeffs(pw)).into_iter().enumerate() {
                basis.set(i, j, c);
            }
            pw = t.mul(&pw, &self.generator_image);
        }
        let rhs = Matrix::new(prime.clone(), t.m() as usize, 1, lift(t.coeffs(y))).ok()?;
        match basis.rank_and_solve(Some(&rhs)).ok()?.solution {
            Solution::Unique(sol) => {
                let c: Vec<u32> = sol.entries().iter().map(|e| e.enc() as u32).collect();
                self.source.from_coeffs(&c).ok()
            }
            _ => None,
        }
    }
}

/// Elements of the subfield of order `p^a` inside `field`, ascending.
fn subfield_elements(field: &GaloisField, a: u32) -> Vec<Elem> {
    let q = field.p().pow(a);
    let step = (field.order() - 1) / (q - 1);
    let g = field.pow(field.primitive_element(), step);
    let mut out: Vec<Elem> = std::iter::once(Elem::ZERO)
        .chain(std::iter::successors(Some(Elem::ONE), |&x| Some(field.mul(&x, &g))).take((q - 1) as usize))
        .collect();
    out.sort();
    out
}

/// Monic minimal polynomial of `x` over the subfield of degree `a`, returned
/// with coefficients in `field` (they lie in the subfield).
pub fn minimal_polynomial(field: &GaloisField, x: Elem, a: u32) -> Result<Poly<Elem>, GfError> {
    field.check_subfield(a)?;
    let ring = PolyRing::new(field.clone());
    let mut poly = ring.one();
    let mut c = x;
    loop {
        poly = ring.mul(&poly, &ring.linear(&c));
        c = field.frobenius(c, a);
        if c == x {
            break;
        }
    }
    Ok(poly)
}

/// Whether `elems` are linearly independent over the subfield `GF(p^a)`.
///
/// Each element is written in the basis `1, g, ..., g^(b-1)` of the big field
/// over the subfield (`g` primitive, `b = m / a`); the answer is whether the
/// resulting coordinate matrix over the subfield has full row rank.
pub fn linearly_independent_over(field: &GaloisField, elems: &[Elem], a: u32) -> Result<bool, GfError> {
    field.check_subfield(a)?;
    if let Some(&bad) = elems.iter().find(|e| !field.contains(**e)) {
        return Err(GfError::FieldMismatch(bad.enc()));
    }
    let m = field.m() as usize;
    let (a_us, b) = (a as usize, m / a as usize);
    let sub = GaloisField::new(field.p(), a, None)?;
    let emb = Embedding::new(&sub, field)?;
    let prime = field.prime_subfield().clone();
    let g = field.primitive_element();
    let s = emb.apply(sub.generator());

    // GF(p)-basis of the big field: g^i * s^t, column index i*a + t
    let mut basis = Matrix::zeros(prime.clone(), m, m);
    let mut gi = Elem::ONE;
    for i in 0..b {
        let mut st = Elem::ONE;
        for t in 0..a_us {
            let v = field.mul(&gi, &st);
            for (row, c) in field.coeffs(v).into_iter().enumerate() {
                basis.set(row, i * a_us + t, prime.from_i64(i64::from(c)));
            }
            st = field.mul(&st, &s);
        }
        gi = field.mul(&gi, &g);
    }

    let mut coords = Matrix::zeros(sub.clone(), elems.len(), b);
    for (r, e) in elems.iter().enumerate() {
        let rhs: Vec<Elem> = field.coeffs(*e).into_iter().map(|c| prime.from_i64(i64::from(c))).collect();
        let rhs = Matrix::new(prime.clone(), m, 1, rhs).expect("m coefficients");
        let Solution::Unique(sol) = basis.rank_and_solve(Some(&rhs)).expect("shapes agree").solution else {
            unreachable!("basis matrix is invertible");
        };
        for i in 0..b {
            let c: Vec<u32> = (0..a_us).map(|t| sol.get(i * a_us + t, 0).enc() as u32).collect();
            coords.set(r, i, sub.from_coeffs(&c)?);
        }
    }
    Ok(coords.rank() == elems.len())
}
