//! Exact signs of sums `Σ c_m √m` with rational `c_m` and squarefree `m`.
//!
//! Needed wherever coordinates from different quadratic rings meet, e.g. a
//! partition cell `x < y` with `x ∈ Z[√2]`, `y ∈ Z[√3]`. Square roots of
//! distinct squarefree integers are linearly independent over `Q`, so a sum
//! is zero iff every coefficient is; a nonzero sum's sign comes from
//! rational interval bounds refined until they exclude zero.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::quad::QuadElem;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiQuad {
    /// squarefree radicand → coefficient; `1` holds the rational part
    terms: BTreeMap<u64, Rational>,
}

/// Splits `m = s²·k` with `k` squarefree.
fn squarefree_split(mut m: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut k = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            k *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (s, k * m)
}

impl MultiQuad {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(r: Rational) -> Self {
        let mut x = Self::zero();
        x.add_term(1, r);
        x
    }

    /// `c·√m` for any positive `m`.
    pub fn term(m: u64, c: Rational) -> Self {
        let mut x = Self::zero();
        x.add_term(m, c);
        x
    }

    pub fn from_quad(e: &QuadElem) -> Self {
        let mut x = Self::rational(Rational::from_integer(e.a.clone()));
        x.add_term(e.q(), Rational::from_integer(e.b.clone()));
        x
    }

    fn add_term(&mut self, m: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let (s, k) = squarefree_split(m);
        let c = c * Rational::from_integer(BigInt::from(s));
        let slot = self.terms.entry(k).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiQuad { terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Panics if a product radicand overflows `u64`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&m1, c1) in &self.terms {
            for (&m2, c2) in &other.terms {
                let m = m1.checked_mul(m2).expect("radicand product overflows u64");
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero();
        for (&m, c) in &self.terms {
            out.add_term(m, c * r);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::rational(Rational::from_integer(1.into()));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact sign. Bounds `⌊√(m·4^k)⌋/2^k ≤ √m < (⌊√(m·4^k)⌋+1)/2^k`
    /// are tightened by doubling `k` until the enclosure avoids zero.
    pub fn sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut k = 32u32;
        loop {
            let scale = BigInt::from(1u8) << (2 * k);
            let den = Rational::from_integer(BigInt::from(1u8) << k);
            let (mut lo, mut hi) = (Rational::zero(), Rational::zero());
            for (&m, c) in &self.terms {
                if m == 1 {
                    lo += c;
                    hi += c;
                    continue;
                }
                let r = (BigInt::from(m) * &scale).sqrt();
                let a = Rational::from_integer(r.clone()) / &den;
                let b = Rational::from_integer(r + 1) / &den;
                if c.is_positive() {
                    lo += c * &a;
                    hi += c * &b;
                } else {
                    lo += c * &b;
                    hi += c * &a;
                }
            }
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            k *= 2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::QuadRing;
    use crate::rational::rat;

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_split(12), (2, 3));
        assert_eq!(squarefree_split(72), (6, 2));
        assert_eq!(squarefree_split(1), (1, 1));
        assert_eq!(squarefree_split(97), (1, 97));
    }

    #[test]
    fn cross_ring_order() {
        let x = MultiQuad::from_quad(&QuadRing::new(2).unwrap().elem(-1, 1));
        let y = MultiQuad::from_quad(&QuadRing::new(3).unwrap().elem(2, -1));
        // √2 − 1 ≈ 0.414 > 2 − √3 ≈ 0.268
        assert_eq!(x.sub(&y).sign(), Ordering::Greater);
        assert_eq!(y.sub(&x).sign(), Ordering::Less);
    }

    #[test]
    fn exact_cancellation() {
        // √2·√8 − 4 = 0 and √2·√3 − √6 = 0
        let a = MultiQuad::term(2, rat(1, 1)).mul(&MultiQuad::term(8, rat(1, 1)));
        assert_eq!(a.sub(&MultiQuad::rational(rat(4, 1))).sign(), Ordering::Equal);
        let b = MultiQuad::term(2, rat(1, 1)).mul(&MultiQuad::term(3, rat(1, 1)));
        assert!(b.sub(&MultiQuad::term(6, rat(1, 1))).is_zero());
    }

    #[test]
    fn tiny_differences() {
        // 1/√2 vs 70/99: differ by ≈ 7.2e-5
        let x = MultiQuad::term(2, rat(1, 2)).sub(&MultiQuad::rational(rat(70, 99)));
        assert_eq!(x.sign(), Ordering::Greater);
        // 99/70 ≈ 1.4142857 > √2
        let y = MultiQuad::term(2, rat(1, 1)).sub(&MultiQuad::rational(rat(99, 70)));
        assert_eq!(y.sign(), Ordering::Less);
    }
}
