//! Dense univariate polynomials over a [`Field`].

use crate::field::Field;

/// Polynomial with little-endian coefficients and no trailing zeros.
///
/// Values are plain data; all arithmetic goes through a [`PolyRing`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    /// Coefficient of `X^i` (zero past the degree is reported as `None`).
    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

/// Arithmetic context for `F[X]`.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    field: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> Poly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> Poly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    /// `X`.
    pub fn x(&self) -> Poly<F::Elem> {
        self.monomial(self.field.one(), 1)
    }

    /// `c * X^deg`.
    pub fn monomial(&self, c: F::Elem, deg: usize) -> Poly<F::Elem> {
        let mut v = vec![self.field.zero(); deg];
        v.push(c);
        self.from_coeffs(v)
    }

    /// Monic linear factor `X - root`.
    pub fn linear(&self, root: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![self.field.neg(root), self.field.one()])
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.field.zero();
        let v = (0..n)
            .map(|i| {
                let x = a.coeffs.get(i).unwrap_or(&z);
                let y = b.coeffs.get(i).unwrap_or(&z);
                self.field.add(x, y)
            })
            .collect();
        self.from_coeffs(v)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut out = vec![self.field.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let t = self.field.mul(x, y);
                out[i + j] = self.field.add(&out[i + j], &t);
            }
        }
        self.from_coeffs(out)
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn divrem(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> Option<(Poly<F::Elem>, Poly<F::Elem>)> {
        let db = b.degree()?;
        let lead_inv = self.field.inv(b.leading()?)?;
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return Some((self.zero(), self.from_coeffs(rem)));
        }
        let mut quot = vec![self.field.zero(); rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = self.field.mul(&rem[i], &lead_inv);
            if self.field.is_zero(&c) {
                continue;
            }
            let shift = i - db;
            for (j, bj) in b.coeffs.iter().enumerate() {
                let t = self.field.mul(&c, bj);
                rem[shift + j] = self.field.sub(&rem[shift + j], &t);
            }
            quot[shift] = c;
        }
        rem.truncate(db);
        Some((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    /// `a / b` when `b` divides `a` exactly.
    pub fn exact_div(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Option<Poly<F::Elem>> {
        let (q, r) = self.divrem(a, b)?;
        r.is_zero().then_some(q)
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Option<Poly<F::Elem>> {
        self.divrem(a, b).map(|(_, r)| r)
    }

    /// Scales to leading coefficient one; the zero polynomial stays zero.
    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.leading().and_then(|l| self.field.inv(l)) {
            Some(li) => self.scale(a, &li),
            None => self.zero(),
        }
    }

    /// Monic greatest common divisor (`gcd(0, 0) = 0`).
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g` and `g` monic.
    pub fn ext_gcd(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1).expect("nonzero divisor");
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading().and_then(|l| self.field.inv(l)) {
            Some(li) => (
                self.scale(&r0, &li),
                self.scale(&s0, &li),
                self.scale(&t0, &li),
            ),
            None => (r0, s0, t0),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        a.coeffs.iter().rev().fold(self.field.zero(), |acc, c| {
            self.field.add(&self.field.mul(&acc, x), c)
        })
    }

    /// `a^e mod m`.
    pub fn powmod(&self, a: &Poly<F::Elem>, mut e: u64, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut acc = self.rem(&self.one(), m).expect("nonzero modulus");
        let mut base = self.rem(a, m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &base), m).unwrap();
            }
            base = self.rem(&self.mul(&base, &base), m).unwrap();
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumField;
    use crate::Rational;

    fn ring() -> PolyRing<NumField<Rational>> {
        PolyRing::new(NumField::new())
    }

    fn p(r: &PolyRing<NumField<Rational>>, c: &[i64]) -> Poly<Rational> {
        r.from_coeffs(c.iter().map(|&v| r.field().from_i64(v)).collect())
    }

    #[test]
    fn division_identity() {
        let r = ring();
        let a = p(&r, &[3, 0, -2, 5, 1]);
        let b = p(&r, &[1, 2, 1]);
        let (q, rem) = r.divrem(&a, &b).unwrap();
        assert!(rem.degree().unwrap_or(0) < 2);
        assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
        assert!(r.divrem(&a, &r.zero()).is_none());
    }

    #[test]
    fn gcd_finds_common_factor() {
        let r = ring();
        // (x+1)(x-2) and (x+1)(x+3)
        let a = r.mul(&p(&r, &[1, 1]), &p(&r, &[-2, 1]));
        let b = r.mul(&p(&r, &[1, 1]), &p(&r, &[3, 1]));
        assert_eq!(r.gcd(&a, &b), p(&r, &[1, 1]));
        let (g, s, t) = r.ext_gcd(&a, &b);
        assert_eq!(r.add(&r.mul(&s, &a), &r.mul(&t, &b)), g);
        assert_eq!(r.gcd(&r.zero(), &r.zero()), r.zero());
    }

    #[test]
    fn trailing_zeros_trimmed_and_eval() {
        let r = ring();
        let a = p(&r, &[1, 2, 0, 0]);
        assert_eq!(a.degree(), Some(1));
        assert_eq!(r.eval(&a, &r.field().from_i64(3)), r.field().from_i64(7));
        assert!(p(&r, &[0, 0]).is_zero());
    }
}
