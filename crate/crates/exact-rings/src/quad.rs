//! `Z[√q]` and its fraction field `Q[√q]`.
//!
//! An element `a + b√q` is stored as the integer pair `(a, b)` plus the
//! radicand. Since `q` is not a perfect square, `1` and `√q` are linearly
//! independent over `Q`, so the pair is unique and equality is structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::RingError;
use crate::rational::{floor_int, Rational};
use crate::scalar::{int_sign, Field, OrderedField, Scalar};

fn check_radicand(q: u64) -> Result<(), RingError> {
    if q < 2 || q > i64::MAX as u64 {
        return Err(RingError::BadRadicand(q));
    }
    let s = q.isqrt();
    if s * s == q {
        return Err(RingError::BadRadicand(q));
    }
    Ok(())
}

/// A quadratic ring `Z[√q]` together with its fixed base element
/// `α₀ ∈ (1/2, 2/3)` for [`dense_element`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadRing {
    q: u64,
    alpha0: QuadElem,
}

impl QuadRing {
    pub fn new(q: u64) -> Result<Self, RingError> {
        check_radicand(q)?;
        let alpha0 = find_alpha0(q);
        Ok(QuadRing { q, alpha0 })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn alpha0(&self) -> &QuadElem {
        &self.alpha0
    }

    pub fn elem(&self, a: impl Into<BigInt>, b: impl Into<BigInt>) -> QuadElem {
        QuadElem { a: a.into(), b: b.into(), q: self.q }
    }

    pub fn int(&self, a: impl Into<BigInt>) -> QuadElem {
        self.elem(a, 0)
    }

    pub fn zero(&self) -> QuadElem {
        self.int(0)
    }

    pub fn one(&self) -> QuadElem {
        self.int(1)
    }

    /// `√q` itself.
    pub fn root(&self) -> QuadElem {
        self.elem(0, 1)
    }
}

/// Scans `|n| = 1, 2, …, 64`; for each `n` at most one integer `m` puts
/// `m + n√q` in the open interval `(1/2, 2/3)` of width `1/6`. Among the two
/// signs of the first hit the smaller `|m|` wins (then positive `n`).
///
/// When `q` sits right next to a perfect square, `n√q mod 1` drifts so
/// slowly that the scan would need ~`√q` steps; then take
/// `d = min(√q − ⌊√q⌋, ⌈√q⌉ − √q)^k < 1/6` and return `⌊(2/3)/d⌋·d`.
fn find_alpha0(q: u64) -> QuadElem {
    let two_thirds = Rational::new(2.into(), 3.into());
    let half = Rational::new(1.into(), 2.into());
    for n in 1..=64i64 {
        let mut best: Option<QuadElem> = None;
        for nn in [n, -n] {
            let s = QuadElem { a: BigInt::zero(), b: nn.into(), q };
            // m = ⌊2/3 − n√q⌋ is the only candidate below 2/3
            let m = QuadRat::from_elem(s.neg()).add_rational(&two_thirds).floor();
            let cand = QuadElem { a: m, b: nn.into(), q };
            if cand.cmp_rational(&half) == Ordering::Greater
                && best.as_ref().is_none_or(|b| cand.a.abs() < b.a.abs())
            {
                best = Some(cand);
            }
        }
        if let Some(b) = best {
            return b;
        }
    }
    let s = BigInt::from(q.isqrt());
    let lo = QuadElem { a: -&s, b: BigInt::one(), q };
    let hi = QuadElem { a: s + 1, b: -BigInt::one(), q };
    let half_elem = QuadElem { a: BigInt::one(), b: BigInt::zero(), q };
    let d0 = if (&lo + &lo).quad_cmp(&half_elem) == Ok(Ordering::Less) { lo } else { hi };
    let mut d = d0.clone();
    while d.cmp_rational(&Rational::new(1.into(), 6.into())) != Ordering::Less {
        d = &d * &d0;
    }
    let m = QuadRat::from_rational(&two_thirds, q).times(&QuadRat::from_elem(d.clone()).inverse().expect("d > 0")).floor();
    d.scale(&m)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadElem {
    #[serde(with = "big_string")]
    pub a: BigInt,
    #[serde(with = "big_string")]
    pub b: BigInt,
    q: u64,
}

mod big_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.trim().parse().map_err(serde::de::Error::custom)
    }
}

impl QuadElem {
    /// Validating constructor; prefer [`QuadRing::elem`] in loops.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, q: u64) -> Result<Self, RingError> {
        check_radicand(q)?;
        Ok(QuadElem { a: a.into(), b: b.into(), q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Re-validates the radicand, e.g. after deserialisation.
    pub fn validate(&self) -> Result<(), RingError> {
        check_radicand(self.q)
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem { a: self.a.clone(), b: -&self.b, q: self.q }
    }

    /// `a² − q b²`, the product with the conjugate.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.b * &self.b * BigInt::from(self.q)
    }

    pub fn sign(&self) -> Ordering {
        sign_of(&self.a, &self.b, self.q)
    }

    pub fn scale(&self, k: &BigInt) -> QuadElem {
        QuadElem { a: &self.a * k, b: &self.b * k, q: self.q }
    }

    /// Exact comparison against a rational: sign of `a·d − n + b·d·√q`.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        let d = r.denom();
        sign_of(&(&self.a * d - r.numer()), &(&self.b * d), self.q)
    }

    pub fn pow(&self, mut e: u32) -> QuadElem {
        let mut base = self.clone();
        let mut acc = QuadElem { a: BigInt::one(), b: BigInt::zero(), q: self.q };
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Bit length of the larger coefficient.
    pub fn bits(&self) -> u64 {
        self.a.bits().max(self.b.bits())
    }

    /// A `f64` approximation for diagnostics only; never used in decisions.
    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.q as f64).sqrt()
    }
}

/// Sign of `a + b√q`: equal signs decide at once; otherwise compare `a²`
/// with `b²q` (never equal unless both vanish, as `q` is not a square).
fn sign_of(a: &BigInt, b: &BigInt, q: u64) -> Ordering {
    let sa = int_sign(a);
    let sb = int_sign(b);
    if sb == Ordering::Equal || sa == sb {
        return sa;
    }
    if sa == Ordering::Equal {
        return sb;
    }
    let a2 = a * a;
    let b2q = b * b * BigInt::from(q);
    if a2 > b2q {
        sa
    } else {
        sb
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√{}", self.b, self.q),
            (false, false) if self.b.is_negative() => {
                write!(f, "{}-{}√{}", self.a, -&self.b, self.q)
            }
            _ => write!(f, "{}+{}√{}", self.a, self.b, self.q),
        }
    }
}

impl PartialOrd for QuadElem {
    /// `None` when the radicands differ.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        quad_compare(self, other).ok()
    }
}

/// Exact order comparison; errors on mismatched radicands.
pub fn quad_compare<T: QuadOrdered>(x: &T, y: &T) -> Result<Ordering, RingError> {
    x.quad_cmp(y)
}

/// Both `QuadElem` and `QuadRat` are comparable through [`quad_compare`].
pub trait QuadOrdered {
    fn quad_cmp(&self, other: &Self) -> Result<Ordering, RingError>;
}

impl QuadOrdered for QuadElem {
    fn quad_cmp(&self, other: &Self) -> Result<Ordering, RingError> {
        if self.q != other.q {
            return Err(RingError::RingMismatch);
        }
        Ok(sign_of(&(&self.a - &other.a), &(&self.b - &other.b), self.q))
    }
}

impl QuadOrdered for QuadRat {
    fn quad_cmp(&self, other: &Self) -> Result<Ordering, RingError> {
        if self.q() != other.q() {
            return Err(RingError::RingMismatch);
        }
        Ok(self.minus(other).sign())
    }
}

/// `⌊a + b√q⌋ = a + ⌊b√q⌋`, where `⌊b√q⌋` is `isqrt(b²q)` for `b ≥ 0` and
/// `−isqrt(b²q) − 1` for `b < 0` (`b²q` is never a square when `b ≠ 0`).
pub fn quad_floor(x: &QuadElem) -> BigInt {
    if x.b.is_zero() {
        return x.a.clone();
    }
    let r = (&x.b * &x.b * BigInt::from(x.q)).sqrt();
    if x.b.is_positive() {
        &x.a + r
    } else {
        &x.a - r - 1
    }
}

macro_rules! quad_binop {
    ($tr:ident, $m:ident, |$x:ident, $y:ident| $body:expr) => {
        impl $tr<&QuadElem> for &QuadElem {
            type Output = QuadElem;
            fn $m(self, $y: &QuadElem) -> QuadElem {
                assert_eq!(self.q, $y.q, "ring mismatch");
                let $x = self;
                $body
            }
        }
        impl $tr<QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: QuadElem) -> QuadElem {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: &QuadElem) -> QuadElem {
                (&self).$m(rhs)
            }
        }
    };
}

quad_binop!(Add, add, |x, y| QuadElem { a: &x.a + &y.a, b: &x.b + &y.b, q: x.q });
quad_binop!(Sub, sub, |x, y| QuadElem { a: &x.a - &y.a, b: &x.b - &y.b, q: x.q });
quad_binop!(Mul, mul, |x, y| QuadElem {
    a: &x.a * &y.a + &x.b * &y.b * BigInt::from(x.q),
    b: &x.a * &y.b + &x.b * &y.a,
    q: x.q
});

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { a: -self.a, b: -self.b, q: self.q }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        self.clone().neg()
    }
}

impl Scalar for QuadElem {
    fn zero_like(&self) -> Self {
        QuadElem { a: BigInt::zero(), b: BigInt::zero(), q: self.q }
    }
    fn one_like(&self) -> Self {
        QuadElem { a: BigInt::one(), b: BigInt::zero(), q: self.q }
    }
    fn is_zero_elem(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
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
        -self
    }
    /// Units of `Z[√q]` are exactly the elements of norm ±1.
    fn unit_inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_one() {
            Some(self.conj())
        } else if (-&n).is_one() {
            Some(-self.conj())
        } else {
            None
        }
    }
    fn from_int_like(&self, n: i64) -> Self {
        QuadElem { a: n.into(), b: BigInt::zero(), q: self.q }
    }
}

/// An element of `Q[√q]`, kept as `(A + B√q) / N` with `N > 0` and
/// `gcd(A, B, N) = 1`.
///
/// The constructor rationalises any quadratic denominator by multiplying
/// through with its conjugate, so `den` always has zero `√q` part; equality
/// is still decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct QuadRat {
    num: QuadElem,
    den: QuadElem,
}

impl QuadRat {
    pub fn new(num: QuadElem, den: QuadElem) -> Result<Self, RingError> {
        if num.q != den.q {
            return Err(RingError::RingMismatch);
        }
        if den.is_zero_elem() {
            return Err(RingError::DivisionByZero);
        }
        let (num, n) = if den.b.is_zero() {
            (num, den.a)
        } else {
            (&num * &den.conj(), den.norm())
        };
        Ok(Self::normalized(num.a, num.b, n, num.q))
    }

    fn normalized(mut a: BigInt, mut b: BigInt, mut n: BigInt, q: u64) -> Self {
        if n.is_negative() {
            a = -a;
            b = -b;
            n = -n;
        }
        let g = a.gcd(&b).gcd(&n);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            n /= &g;
        }
        QuadRat {
            num: QuadElem { a, b, q },
            den: QuadElem { a: n, b: BigInt::zero(), q },
        }
    }

    pub fn from_elem(x: QuadElem) -> Self {
        let q = x.q;
        QuadRat { num: x, den: QuadElem { a: BigInt::one(), b: BigInt::zero(), q } }
    }

    pub fn from_rational(r: &Rational, q: u64) -> Self {
        Self::normalized(r.numer().clone(), BigInt::zero(), r.denom().clone(), q)
    }

    pub fn num(&self) -> &QuadElem {
        &self.num
    }

    pub fn den(&self) -> &QuadElem {
        &self.den
    }

    pub fn q(&self) -> u64 {
        self.num.q
    }

    fn n(&self) -> &BigInt {
        &self.den.a
    }

    /// Rational and `√q` parts, `r + s√q`.
    pub fn parts(&self) -> (Rational, Rational) {
        (
            Rational::new(self.num.a.clone(), self.n().clone()),
            Rational::new(self.num.b.clone(), self.n().clone()),
        )
    }

    /// `Some` when the value lies in `Z[√q]`.
    pub fn to_elem(&self) -> Option<QuadElem> {
        self.n().is_one().then(|| self.num.clone())
    }

    pub fn sign(&self) -> Ordering {
        self.num.sign()
    }

    pub fn floor(&self) -> BigInt {
        quad_floor(&self.num).div_floor(self.n())
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        self.plus(&QuadRat::from_rational(r, self.q()))
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        self.times(&QuadRat::from_rational(r, self.q()))
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        // (A + B√q)/N vs n/d  ⟺  A·d − n·N + B·d·√q vs 0
        let d = r.denom();
        sign_of(&(&self.num.a * d - r.numer() * self.n()), &(&self.num.b * d), self.q())
    }
}

impl PartialEq for QuadRat {
    fn eq(&self, other: &Self) -> bool {
        self.q() == other.q() && &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.n())
        }
    }
}

impl PartialOrd for QuadRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        quad_compare(self, other).ok()
    }
}

impl Scalar for QuadRat {
    fn zero_like(&self) -> Self {
        QuadRat::from_elem(self.num.zero_like())
    }
    fn one_like(&self) -> Self {
        QuadRat::from_elem(self.num.one_like())
    }
    fn is_zero_elem(&self) -> bool {
        self.num.is_zero_elem()
    }
    fn plus(&self, o: &Self) -> Self {
        assert_eq!(self.q(), o.q(), "ring mismatch");
        if self.n() == o.n() {
            return Self::normalized(&self.num.a + &o.num.a, &self.num.b + &o.num.b, self.n().clone(), self.q());
        }
        let a = &self.num.a * o.n() + &o.num.a * self.n();
        let b = &self.num.b * o.n() + &o.num.b * self.n();
        Self::normalized(a, b, self.n() * o.n(), self.q())
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        let p = &self.num * &o.num;
        Self::normalized(p.a, p.b, self.n() * o.n(), self.q())
    }
    fn negated(&self) -> Self {
        QuadRat { num: -&self.num, den: self.den.clone() }
    }
    fn unit_inverse(&self) -> Option<Self> {
        if self.is_zero_elem() {
            None
        } else {
            QuadRat::new(self.den.clone(), self.num.clone()).ok()
        }
    }
    fn from_int_like(&self, n: i64) -> Self {
        QuadRat::from_elem(self.num.from_int_like(n))
    }
}

impl Field for QuadRat {}

impl OrderedField for QuadRat {
    fn signum_ord(&self) -> Ordering {
        self.sign()
    }
}

/// Result of [`dense_element`]: the element and the number of loop
/// iterations spent finding it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseElement {
    pub elem: QuadElem,
    pub iterations: u32,
}

/// Finds an element of `Z[√q]` strictly between `p` and `r`.
///
/// After shifting by `⌊p⌋` into `[0, 1)`, the loop adds `α₀^k` for
/// `k = 1, 2, …` whenever that keeps the running sum below the upper end,
/// and stops once it passes the lower end. The gap to the upper end never
/// exceeds `α₀^k` after step `k` (because `α₀ > 1/2`), so the loop ends
/// within `⌊log_{α₀}(r − p)⌋ + 1` iterations.
pub fn dense_element(p: &Rational, r: &Rational, ring: &QuadRing) -> Result<DenseElement, RingError> {
    if p >= r {
        return Err(RingError::EmptyInterval);
    }
    let zero = Rational::zero();
    if *p < zero && zero < *r {
        return Ok(DenseElement { elem: ring.zero(), iterations: 0 });
    }
    if *r <= zero {
        let d = dense_element(&-r, &-p, ring)?;
        return Ok(DenseElement { elem: -d.elem, iterations: d.iterations });
    }
    let f = floor_int(p);
    let fr = Rational::from_integer(f.clone());
    let (p1, r1) = (p - &fr, r - &fr);
    if r1 > Rational::one() {
        return Ok(DenseElement { elem: ring.int(f + 1), iterations: 0 });
    }
    let mut acc = ring.zero();
    let mut pow = ring.one();
    let mut iterations = 0u32;
    loop {
        pow = &pow * &ring.alpha0;
        iterations += 1;
        let cand = &acc + &pow;
        if cand.cmp_rational(&r1) == Ordering::Less {
            acc = cand;
            if acc.cmp_rational(&p1) == Ordering::Greater {
                return Ok(DenseElement { elem: acc + ring.int(f), iterations });
            }
        }
    }
}
