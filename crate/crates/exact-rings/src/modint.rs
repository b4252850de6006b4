use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::RingError;
use crate::scalar::Scalar;

/// An element of `Z/MZ` with `0 ≤ value < M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModInt {
    value: u64,
    modulus: u64,
}

impl ModInt {
    pub fn new(value: i128, modulus: u64) -> Result<Self, RingError> {
        if modulus == 0 {
            return Err(RingError::ZeroModulus);
        }
        Ok(Self::reduce(value, modulus))
    }

    pub fn from_bigint(value: &BigInt, modulus: u64) -> Result<Self, RingError> {
        if modulus == 0 {
            return Err(RingError::ZeroModulus);
        }
        let v = value.mod_floor(&BigInt::from(modulus)).to_u64().expect("reduced below modulus");
        Ok(ModInt { value: v, modulus })
    }

    fn reduce(value: i128, modulus: u64) -> Self {
        ModInt { value: value.rem_euclid(modulus as i128) as u64, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn same(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "modulus mismatch");
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        if self.modulus != other.modulus {
            return Err(RingError::ModulusMismatch);
        }
        Ok(self.plus(other))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }

    /// `gcd(value, M)`; the element is a unit iff this is 1.
    pub fn gcd_with_modulus(&self) -> u64 {
        self.value.gcd(&self.modulus)
    }
}

impl fmt::Display for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Scalar for ModInt {
    fn zero_like(&self) -> Self {
        Self::reduce(0, self.modulus)
    }
    fn one_like(&self) -> Self {
        Self::reduce(1, self.modulus)
    }
    fn is_zero_elem(&self) -> bool {
        self.value == 0
    }
    fn plus(&self, o: &Self) -> Self {
        self.same(o);
        Self::reduce(self.value as i128 + o.value as i128, self.modulus)
    }
    fn minus(&self, o: &Self) -> Self {
        self.same(o);
        Self::reduce(self.value as i128 - o.value as i128, self.modulus)
    }
    fn times(&self, o: &Self) -> Self {
        self.same(o);
        let p = (self.value as u128 * o.value as u128) % self.modulus as u128;
        ModInt { value: p as u64, modulus: self.modulus }
    }
    fn negated(&self) -> Self {
        Self::reduce(-(self.value as i128), self.modulus)
    }
    fn unit_inverse(&self) -> Option<Self> {
        let e = (self.value as i128).extended_gcd(&(self.modulus as i128));
        (e.gcd == 1).then(|| Self::reduce(e.x, self.modulus))
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::reduce(n as i128, self.modulus)
    }
}
