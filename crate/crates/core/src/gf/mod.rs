//! Finite fields `GF(p^m)` with elements in the polynomial basis.
//!
//! An element is stored as its canonical integer encoding
//! `enc(x) = sum coeffs[i] * p^i`, which doubles as the external
//! serialization. Fields of order at most 2^16 additionally carry log/antilog
//! tables; these only speed up multiplication and inversion and agree with the
//! polynomial arithmetic bit for bit.

mod subfield;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::poly::{Poly, PolyRing};

pub use subfield::{linearly_independent_over, minimal_polynomial, Embedding};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;
const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds 2^31")]
    OrderOverflow { p: u64, m: u32 },
    #[error("modulus must be monic of degree {m} with coefficients below {p}")]
    BadModulus { p: u64, m: u32 },
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element encoding {0} is not in this field")]
    FieldMismatch(u64),
    #[error("GF({p}^{sub}) is not a subfield of GF({p}^{m})")]
    NoSubfield { p: u64, sub: u32, m: u32 },
}

/// Field element as its canonical encoding; the owning field is passed
/// alongside (see [`GaloisField`]).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn enc(self) -> u64 {
        u64::from(self.0)
    }

    /// Unchecked; callers guarantee `enc` is below the field order.
    pub(crate) fn from_enc(enc: u64) -> Elem {
        Elem(enc as u32)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Binary and power operations accepted by [`GaloisField::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arith {
    Add,
    Sub,
    Mul,
    Div,
    Pow(i64),
}

/// Serialized field description `{p, m, modulus}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u64>,
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
    primitive: OnceLock<Elem>,
    prime_subfield: OnceLock<GaloisField>,
}

/// `GF(p^m)`; cloning shares the underlying tables.
#[derive(Clone)]
pub struct GaloisField(Arc<Inner>);

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.m)
        }
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for GaloisField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power `q = p^a`, `None` otherwise.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let (mut a, mut r) = (0, q);
    while r > 1 {
        r /= p;
        a += 1;
    }
    Some((p, a))
}

impl GaloisField {
    /// Builds `GF(p^m)`. Without an explicit modulus the monic irreducible
    /// polynomial of degree `m` with the smallest canonical encoding is used.
    pub fn new(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        let order = p
            .checked_pow(m)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or(GfError::OrderOverflow { p, m })?;
        let modulus: Vec<u32> = match modulus {
            Some(c) => {
                let ok = c.len() == m as usize + 1 && c[m as usize] == 1 && c.iter().all(|&x| x < p);
                if !ok {
                    return Err(GfError::BadModulus { p, m });
                }
                let c: Vec<u32> = c.iter().map(|&x| x as u32).collect();
                if m > 1 && !is_irreducible(p as u32, &c) {
                    return Err(GfError::ReducibleModulus(p));
                }
                c
            }
            None => smallest_irreducible(p as u32, m),
        };
        let mut inner = Inner {
            p: p as u32,
            m,
            order: order as u32,
            modulus,
            tables: None,
            primitive: OnceLock::new(),
            prime_subfield: OnceLock::new(),
        };
        if order <= TABLE_LIMIT {
            let bare = GaloisField(Arc::new(inner));
            let g = bare.search_primitive();
            let tables = bare.build_tables(g);
            inner = Arc::into_inner(bare.0).expect("sole owner");
            inner.tables = Some(tables);
            inner.primitive.set(g).ok();
        }
        Ok(GaloisField(Arc::new(inner)))
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self, GfError> {
        GaloisField::new(spec.p, spec.m, Some(&spec.modulus))
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p(),
            m: self.m(),
            modulus: self.0.modulus.iter().map(|&c| u64::from(c)).collect(),
        }
    }

    pub fn p(&self) -> u64 {
        u64::from(self.0.p)
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u64 {
        u64::from(self.0.order)
    }

    /// Monic modulus, little-endian, `m + 1` coefficients.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// `GF(p)` with its default (implicit) modulus.
    pub fn prime_subfield(&self) -> &GaloisField {
        self.0
            .prime_subfield
            .get_or_init(|| GaloisField::new(self.p(), 1, None).expect("p is prime"))
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.0.order
    }

    pub fn elem(&self, enc: u64) -> Result<Elem, GfError> {
        if enc < self.order() {
            Ok(Elem(enc as u32))
        } else {
            Err(GfError::FieldMismatch(enc))
        }
    }

    /// All elements in ascending canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.order).map(Elem)
    }

    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        let p = self.0.p;
        let mut v = x.0;
        (0..self.0.m)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem, GfError> {
        let p = u64::from(self.0.p);
        if coeffs.len() > self.0.m as usize || coeffs.iter().any(|&c| u64::from(c) >= p) {
            return Err(GfError::FieldMismatch(0));
        }
        let enc = coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + u64::from(c));
        self.elem(enc)
    }

    /// Class of `X` modulo the field modulus.
    pub fn generator(&self) -> Elem {
        if self.0.m == 1 {
            let c0 = self.0.modulus[0];
            Elem((self.0.p - c0) % self.0.p)
        } else {
            Elem(self.0.p)
        }
    }

    /// Primitive element with the smallest canonical encoding.
    pub fn primitive_element(&self) -> Elem {
        *self.0.primitive.get_or_init(|| self.search_primitive())
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: Elem) -> Option<u64> {
        if x.0 == 0 || !self.contains(x) {
            return None;
        }
        let mut n = self.order() - 1;
        for r in prime_factors(n) {
            while n.is_multiple_of(r) && self.pow(x, n / r) == Elem::ONE {
                n /= r;
            }
        }
        Some(n)
    }

    fn search_primitive(&self) -> Elem {
        let n = self.order() - 1;
        let factors = prime_factors(n);
        (1..self.0.order)
            .map(Elem)
            .find(|&x| factors.iter().all(|&r| self.pow_slow(x, n / r) != Elem::ONE))
            .expect("the multiplicative group is cyclic")
    }

    fn build_tables(&self, g: Elem) -> Tables {
        let n = self.0.order as usize - 1;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.0.order as usize];
        let mut acc = Elem::ONE;
        for i in 0..n {
            exp[i] = acc.0;
            log[acc.0 as usize] = i as u32;
            acc = self.mul_slow(acc, g);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        Tables { exp, log }
    }

    fn add_raw(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if self.0.m == 1 {
            return Elem(((u64::from(a.0) + u64::from(b.0)) % u64::from(p)) as u32);
        }
        let (mut x, mut y, mut pw, mut out) = (a.0, b.0, 1u32, 0u32);
        for _ in 0..self.0.m {
            let d = ((x % p) + (y % p)) % p;
            out += d * pw;
            x /= p;
            y /= p;
            pw = pw.wrapping_mul(p);
        }
        Elem(out)
    }

    fn neg_raw(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let (mut x, mut pw, mut out) = (a.0, 1u32, 0u32);
        for _ in 0..self.0.m {
            let d = x % p;
            out += ((p - d) % p) * pw;
            x /= p;
            pw = pw.wrapping_mul(p);
        }
        Elem(out)
    }

    /// Schoolbook product reduced by the modulus; the reference path.
    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = u64::from(self.0.p);
        let m = self.0.m as usize;
        if m == 1 {
            return Elem(((u64::from(a.0) * u64::from(b.0)) % p) as u32);
        }
        let da: Vec<u64> = self.coeffs(a).into_iter().map(u64::from).collect();
        let db: Vec<u64> = self.coeffs(b).into_iter().map(u64::from).collect();
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for (j, &mc) in self.0.modulus[..m].iter().enumerate() {
                prod[i - m + j] = (prod[i - m + j] + (p - c) * u64::from(mc)) % p;
            }
        }
        let enc = prod[..m].iter().rev().fold(0u64, |acc, &c| acc * p + c);
        Elem(enc as u32)
    }

    fn pow_slow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut acc, mut base) = (Elem::ONE, a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    fn mul_raw(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    Elem::ZERO
                } else {
                    Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
            None => self.mul_slow(a, b),
        }
    }

    /// Inverse by the extended Euclidean algorithm on the modulus.
    fn inv_euclid(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        let p = i64::from(self.0.p);
        if self.0.m == 1 {
            let (mut r0, mut r1, mut s0, mut s1) = (p, i64::from(a.0), 0i64, 1i64);
            while r1 != 0 {
                let q = r0 / r1;
                (r0, r1) = (r1, r0 - q * r1);
                (s0, s1) = (s1, s0 - q * s1);
            }
            return Some(Elem(s0.rem_euclid(p) as u32));
        }
        let ring = PolyRing::new(self.prime_subfield().clone());
        let lift = |c: &[u32]| ring.from_coeffs(c.iter().map(|&x| Elem(x)).collect());
        let (g, s, _) = ring.ext_gcd(&lift(&self.coeffs(a)), &lift(&self.0.modulus));
        debug_assert_eq!(g, ring.one());
        let c: Vec<u32> = s.coeffs().iter().map(|e| e.0).collect();
        Some(self.from_coeffs(&c).expect("reduced representative"))
    }

    fn inv_raw(&self, a: Elem) -> Option<Elem> {
        match &self.0.tables {
            Some(t) => {
                if a.0 == 0 {
                    None
                } else {
                    let n = self.0.order - 1;
                    Some(Elem(t.exp[((n - t.log[a.0 as usize]) % n) as usize]))
                }
            }
            None => self.inv_euclid(a),
        }
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        match &self.0.tables {
            Some(t) if a.0 != 0 => {
                let n = u64::from(self.0.order - 1);
                let l = u64::from(t.log[a.0 as usize]);
                Elem(t.exp[((l * (e % n)) % n) as usize])
            }
            Some(_) => {
                if e == 0 {
                    Elem::ONE
                } else {
                    Elem::ZERO
                }
            }
            None => self.pow_slow(a, e),
        }
    }

    /// Signed exponent; negative powers need a nonzero base.
    pub fn pow_i64(&self, a: Elem, e: i64) -> Result<Elem, GfError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            let ai = self.inv_raw(a).ok_or(GfError::DivisionByZero)?;
            Ok(self.pow(ai, e.unsigned_abs()))
        }
    }

    /// Checked arithmetic on canonical encodings.
    pub fn arith(&self, a: Elem, b: Elem, op: Arith) -> Result<Elem, GfError> {
        for x in [a, b] {
            if !self.contains(x) {
                return Err(GfError::FieldMismatch(x.enc()));
            }
        }
        Ok(match op {
            Arith::Add => self.add_raw(a, b),
            Arith::Sub => self.add_raw(a, self.neg_raw(b)),
            Arith::Mul => self.mul_raw(a, b),
            Arith::Div => self.mul_raw(a, self.inv_raw(b).ok_or(GfError::DivisionByZero)?),
            Arith::Pow(e) => self.pow_i64(a, e)?,
        })
    }

    /// `x^(p^a)`, the Frobenius map of the subfield of degree `a`.
    pub fn frobenius(&self, x: Elem, a: u32) -> Elem {
        let q = self.p().pow(a);
        self.pow(x, q)
    }

    /// Whether `x` lies in the subfield `GF(p^a)`.
    pub fn in_subfield(&self, x: Elem, a: u32) -> Result<bool, GfError> {
        self.check_subfield(a)?;
        Ok(self.frobenius(x, a) == x)
    }

    pub(crate) fn check_subfield(&self, a: u32) -> Result<(), GfError> {
        if a == 0 || !self.0.m.is_multiple_of(a) {
            Err(GfError::NoSubfield { p: self.p(), sub: a, m: self.0.m })
        } else {
            Ok(())
        }
    }
}

impl Field for GaloisField {
    type Elem = Elem;

    fn zero(&self) -> Elem {
        Elem::ZERO
    }
    fn one(&self) -> Elem {
        Elem::ONE
    }
    fn is_zero(&self, a: &Elem) -> bool {
        a.0 == 0
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.add_raw(*a, *b)
    }
    fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add_raw(*a, self.neg_raw(*b))
    }
    fn neg(&self, a: &Elem) -> Elem {
        self.neg_raw(*a)
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.mul_raw(*a, *b)
    }
    fn inv(&self, a: &Elem) -> Option<Elem> {
        self.inv_raw(*a)
    }
    fn from_i64(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(i64::from(self.0.p)) as u32)
    }
    fn same_field(&self, other: &Self) -> bool {
        self == other
    }
    fn pow_u64(&self, a: &Elem, e: u64) -> Elem {
        self.pow(*a, e)
    }
}

/// Ben-Or test: no irreducible factor of degree at most `m / 2`.
fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let m = modulus.len() - 1;
    if m <= 1 {
        return m == 1;
    }
    let prime = GaloisField::new(u64::from(p), 1, None).expect("prime field");
    let ring = PolyRing::new(prime);
    let f: Poly<Elem> = ring.from_coeffs(modulus.iter().map(|&c| Elem(c)).collect());
    let x = ring.x();
    let mut h = x.clone();
    for _ in 0..m / 2 {
        h = ring.powmod(&h, u64::from(p), &f);
        let g = ring.gcd(&f, &ring.sub(&h, &x));
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let mut digits = vec![0u32; m as usize];
    if m == 1 {
        return vec![0, 1];
    }
    loop {
        let mut cand = digits.clone();
        cand.push(1);
        if cand[0] != 0 && is_irreducible(p, &cand) {
            return cand;
        }
        // odometer increment, little-endian
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
            assert!(i < digits.len(), "an irreducible polynomial of every degree exists");
        }
    }
}
