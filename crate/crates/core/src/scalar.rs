//! Scalar abstraction shared by the matrix and polynomial kernels.
//!
//! Everything here is exact: the kernels only ever test scalars for equality
//! with zero, so any exact field (`BigRational`, `Ratio<i64>`, ...) can be
//! plugged in. The decision procedures themselves are written against the
//! arbitrary-precision [`Rational`](crate::Rational) alias.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact field usable as matrix/polynomial entries.
pub trait Field: Clone + PartialEq + Debug + Num + Neg<Output = Self> {
    /// Embeds a machine integer by repeated doubling, so no conversion trait is needed.
    fn from_i64(n: i64) -> Self {
        let mut acc = Self::zero();
        let mut base = Self::one();
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc + base.clone();
            }
            base = base.clone() + base;
            k >>= 1;
        }
        if n < 0 {
            -acc
        } else {
            acc
        }
    }
}

impl<T> Field for T where T: Clone + PartialEq + Debug + Num + Neg<Output = T> {}

/// Parses `"p"`, `"p/q"`, with an optional leading ASCII `-` or Unicode `−`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let (neg, body) = if let Some(rest) = t.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = t.strip_prefix('\u{2212}') {
        (true, rest)
    } else {
        (false, t)
    };
    if body.is_empty() || body.starts_with('-') || body.starts_with('+') {
        return Err(Error::Parse(format!("malformed rational {s:?}")));
    }
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d),
        None => (body, "1"),
    };
    let bad = |_| Error::Parse(format!("malformed rational {s:?}"));
    if !num.bytes().all(|b| b.is_ascii_digit()) || !den.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("malformed rational {s:?}")));
    }
    let n: BigInt = num.parse().map_err(bad)?;
    let d: BigInt = den.parse().map_err(bad)?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    let r = BigRational::new(n, d);
    Ok(if neg { -r } else { r })
}

/// Canonical `"p/q"` (or `"p"`) form with ASCII minus.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a BigRational>,
{
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn abs(r: &BigRational) -> BigRational {
    r.abs()
}

/// Serde adaptors for the rational-string wire format.
pub mod serde_rational {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = RationalRepr::deserialize(d)?;
        s.into_rational().map_err(D::Error::custom)
    }

    /// Accepts rational strings and, leniently, bare JSON integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RationalRepr {
        Str(String),
        Int(i64),
    }

    impl RationalRepr {
        pub(crate) fn into_rational(self) -> Result<BigRational> {
            match self {
                RationalRepr::Str(s) => parse_rational(&s),
                RationalRepr::Int(i) => Ok(int(i)),
            }
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
            let raw = Vec::<RationalRepr>::deserialize(d)?;
            raw.into_iter()
                .map(|r| r.into_rational().map_err(D::Error::custom))
                .collect()
        }
    }
}
