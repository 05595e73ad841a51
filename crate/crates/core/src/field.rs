//! Scalar abstraction shared by the linear algebra and polynomial code.
//!
//! A [`Field`] is a small context object (cheap to clone) that knows how to
//! combine its element values. Finite fields whose parameters are only known at
//! run time ([`crate::GaloisField`]) and exact number types from the `num`
//! ecosystem ([`NumField`]) both implement it, so every algorithm in
//! [`crate::matrix`], [`crate::poly`] and [`crate::polymat`] is written once.

use std::fmt::Debug;
use std::marker::PhantomData;

/// Exact arithmetic context for a commutative field.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Image of an integer under the canonical ring map `Z -> F`.
    fn from_i64(&self, v: i64) -> Self::Elem;

    /// Whether two contexts describe the same field.
    fn same_field(&self, other: &Self) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `a^e` for `e >= 0` by square-and-multiply.
    fn pow_u64(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Any exact `num-traits` number type used as a field, e.g. `BigRational`.
///
/// The caller is responsible for picking a type in which every nonzero value is
/// invertible; integer types do not qualify.
pub struct NumField<T>(PhantomData<fn() -> T>);

impl<T> NumField<T> {
    pub const fn new() -> Self {
        NumField(PhantomData)
    }
}

impl<T> Default for NumField<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for NumField<T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for NumField<T> {}

impl<T> Debug for NumField<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "NumField<{}>", std::any::type_name::<T>())
    }
}

impl<T> Field for NumField<T>
where
    T: num_traits::Num + num_traits::FromPrimitive + Clone + Debug + Send + Sync,
{
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }
    fn one(&self) -> T {
        T::one()
    }
    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &T, b: &T) -> T {
        a.clone() + b.clone()
    }
    fn sub(&self, a: &T, b: &T) -> T {
        a.clone() - b.clone()
    }
    fn neg(&self, a: &T) -> T {
        T::zero() - a.clone()
    }
    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }
    fn inv(&self, a: &T) -> Option<T> {
        if a.is_zero() {
            None
        } else {
            Some(T::one() / a.clone())
        }
    }
    fn from_i64(&self, v: i64) -> T {
        T::from_i64(v).expect("integer representable in the number type")
    }
    fn same_field(&self, _other: &Self) -> bool {
        true
    }
}
