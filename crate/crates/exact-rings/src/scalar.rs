//! Scalar abstraction shared by the solvers.
//!
//! Rings whose zero and one are context-free (`BigInt`, `BigRational`) pick
//! up [`Scalar`] through a blanket impl over `num_traits::Num`. The other
//! rings here carry a context — the radicand of `Z[√q]`, the modulus of
//! `Z/MZ`, the lattice of `Z^b/J` — so `Zero::zero()` cannot be written for
//! them; they implement [`Scalar`] directly and produce constants from an
//! existing element instead.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, RefNum, Signed};

pub trait Scalar: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse if `self` is a unit.
    fn unit_inverse(&self) -> Option<Self>;

    fn from_int_like(&self, n: i64) -> Self {
        let one = self.one_like();
        let mut acc = self.zero_like();
        // double-and-add keeps this logarithmic for big `n`
        let mut base = one;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.plus(&base);
            }
            base = base.plus(&base);
            k >>= 1;
        }
        if n < 0 {
            acc.negated()
        } else {
            acc
        }
    }
}

impl<T> Scalar for T
where
    T: Num + Clone + Debug,
    for<'a> &'a T: RefNum<T>,
{
    fn zero_like(&self) -> Self {
        T::zero()
    }
    fn one_like(&self) -> Self {
        T::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        &T::zero() - self
    }
    fn unit_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let q = T::one() / self.clone();
        // integer division truncates: only ±1 survive the round trip
        if &q * self == T::one() {
            Some(q)
        } else {
            None
        }
    }
}

/// A [`Scalar`] in which every nonzero element is a unit.
pub trait Field: Scalar {
    fn inverse(&self) -> Option<Self> {
        self.unit_inverse()
    }
    fn divided(&self, other: &Self) -> Option<Self> {
        other.inverse().map(|inv| self.times(&inv))
    }
}

/// An ordered field, used by the simplex and by the rounding maps.
pub trait OrderedField: Field {
    /// Sign relative to zero.
    fn signum_ord(&self) -> Ordering;

    fn compare(&self, other: &Self) -> Ordering {
        self.minus(other).signum_ord()
    }
    fn is_positive_elem(&self) -> bool {
        self.signum_ord() == Ordering::Greater
    }
    fn is_negative_elem(&self) -> bool {
        self.signum_ord() == Ordering::Less
    }
}

impl Field for BigRational {}

impl OrderedField for BigRational {
    fn signum_ord(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

/// Sign of a big integer as an [`Ordering`] against zero.
pub fn int_sign(n: &BigInt) -> Ordering {
    n.sign().cmp(&num_bigint::Sign::NoSign)
}
