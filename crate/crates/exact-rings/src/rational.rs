//! `BigRational` helpers and the `"p/q"` text form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::RingError;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int_rat(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn floor_int(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil_int(r: &Rational) -> BigInt {
    -(-r.numer()).div_floor(r.denom())
}

/// Parses `"p/q"` or a bare integer. Surrounding whitespace is ignored.
pub fn parse_rational(s: &str) -> Result<Rational, RingError> {
    let bad = || RingError::Parse(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(RingError::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(int_rat(t.parse::<BigInt>().map_err(|_| bad())?)),
    }
}

/// Canonical text: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational row by the lcm of its denominators and divides out the
/// content, giving a primitive integer row with the same sign pattern.
pub fn primitive_integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = common_denominator(row);
    let ints: Vec<BigInt> = row.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// `#[serde(with = "serde_rational")]` for a single value.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = StrOrInt::deserialize(d)?;
        raw.into_rational().map_err(serde::de::Error::custom)
    }

    /// Accepts `"3/4"`, `"5"` or a bare JSON integer.
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    pub(crate) enum StrOrInt {
        S(String),
        I(i64),
    }

    impl StrOrInt {
        pub(crate) fn into_rational(self) -> Result<Rational, RingError> {
            match self {
                StrOrInt::S(s) => parse_rational(&s),
                StrOrInt::I(i) => Ok(int_rat(i)),
            }
        }
    }
}

pub mod serde_rational_vec {
    use super::serde_rational::StrOrInt;
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<StrOrInt>::deserialize(d)?
            .into_iter()
            .map(|x| x.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_rational_matrix {
    use super::serde_rational::StrOrInt;
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|row| row.iter().map(format_rational).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        Vec::<Vec<StrOrInt>>::deserialize(d)?
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| x.into_rational().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["0", "-7", "3/4", "-22/7"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational(" 6/4 ").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("1/0"), Err(RingError::DivisionByZero));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn floors_and_ceils() {
        assert_eq!(floor_int(&rat(-7, 2)), BigInt::from(-4));
        assert_eq!(ceil_int(&rat(-7, 2)), BigInt::from(-3));
        assert_eq!(ceil_int(&rat(6, 3)), BigInt::from(2));
    }

    #[test]
    fn primitive_rows() {
        let row = [rat(1, 2), rat(-3, 4), rat(0, 1)];
        assert_eq!(
            primitive_integer_row(&row),
            vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]
        );
    }
}
