//! Numbers `p + q·√d` in a quadratic field, `d` a squarefree integer.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::square_part;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct QuadraticNumber {
    p: BigRational,
    q: BigRational,
    d: BigInt,
}

impl PartialEq for QuadraticNumber {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q && (self.q.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadraticNumber {}

impl QuadraticNumber {
    /// `p + q·√d`, with `d` any nonzero rational; the radicand is rewritten to
    /// its squarefree integer part and a rational `d` folds into `p`.
    pub fn new(p: BigRational, q: BigRational, d: &BigRational) -> Result<Self> {
        if d.is_zero() {
            return Ok(Self::rational(p));
        }
        // √(a/b) = √(ab)/b and ab = f²·s
        let ab = d.numer() * d.denom();
        let (f, s) = square_part(&ab).ok_or_else(|| Error::Overflow("radicand too large to normalize".into()))?;
        let s = if ab.is_negative() { -s } else { s };
        let q = q * BigRational::new(f, d.denom().clone());
        if s.is_one() {
            return Ok(Self::rational(p + q));
        }
        Ok(QuadraticNumber { p, q, d: s })
    }

    pub fn rational(p: BigRational) -> Self {
        QuadraticNumber {
            p,
            q: BigRational::zero(),
            d: BigInt::zero(),
        }
    }

    /// `√d` itself.
    pub fn sqrt(d: &BigRational) -> Result<Self> {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    /// Squarefree radicand; meaningless when `q = 0`.
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.p.is_one() && self.q.is_zero()
    }

    fn field(&self, other: &Self) -> Result<BigInt> {
        match (self.q.is_zero(), other.q.is_zero()) {
            (true, true) => Ok(BigInt::zero()),
            (false, true) => Ok(self.d.clone()),
            (true, false) => Ok(other.d.clone()),
            (false, false) if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::FieldMismatch),
        }
    }

    fn make(p: BigRational, q: BigRational, d: BigInt) -> Self {
        if q.is_zero() {
            Self::rational(p)
        } else {
            QuadraticNumber { p, q, d }
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let d = self.field(o)?;
        Ok(Self::make(&self.p + &o.p, &self.q + &o.q, d))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self::make(-&self.p, -&self.q, self.d.clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let d = self.field(o)?;
        let dr = BigRational::from_integer(d.clone());
        Ok(Self::make(
            &self.p * &o.p + &self.q * &o.q * dr,
            &self.p * &o.q + &self.q * &o.p,
            d,
        ))
    }

    pub fn conj(&self) -> Self {
        Self::make(self.p.clone(), -&self.q, self.d.clone())
    }

    /// `p² − q²d`, the product with the conjugate.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - &self.q * &self.q * BigRational::from_integer(self.d.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        let c = self.conj();
        Ok(Self::make(c.p / &n, c.q / &n, self.d.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.field(o)?;
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::rational(BigRational::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            k >>= 1;
        }
        acc
    }

    pub fn is_real(&self) -> bool {
        self.q.is_zero() || self.d.is_positive()
    }

    /// Exact sign of a real quadratic number.
    pub fn signum(&self) -> Result<i8> {
        if !self.is_real() {
            return Err(Error::InvalidInput("sign of a non-real number".into()));
        }
        let sp = sign(&self.p);
        let sq = sign(&self.q);
        if sq == 0 {
            return Ok(sp);
        }
        if sp == 0 || sp == sq {
            return Ok(sq);
        }
        // opposite signs: compare p² with q²d
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * BigRational::from_integer(self.d.clone());
        Ok(match lhs.cmp(&rhs) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0,
        })
    }

    pub fn abs(&self) -> Result<Self> {
        Ok(if self.signum()? < 0 { self.neg() } else { self.clone() })
    }

    /// Exact comparison of two real numbers in the same field.
    pub fn cmp_real(&self, o: &Self) -> Result<Ordering> {
        Ok(match self.sub(o)?.signum()? {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }
}

fn sign(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Least `r ≥ 1` with `z^r = 1`, or `None` when `z` is not a root of unity.
/// Roots of unity in a quadratic field have order 1, 2, 3, 4 or 6.
pub fn root_of_unity_order(z: &QuadraticNumber) -> Option<u32> {
    if z.is_zero() || !z.norm().abs().is_one() {
        return None;
    }
    [1u32, 2, 3, 4, 6].into_iter().find(|&r| z.pow(r as u64).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn qn(p: BigRational, q: BigRational, d: i64) -> QuadraticNumber {
        QuadraticNumber::new(p, q, &int(d)).unwrap()
    }

    #[test]
    fn normalizes_radicand() {
        let a = qn(int(0), int(1), 12);
        assert_eq!(a, qn(int(0), int(2), 3));
        let b = QuadraticNumber::new(int(0), int(1), &rat(1, 2)).unwrap();
        assert_eq!(b, qn(int(0), rat(1, 2), 2));
        assert_eq!(qn(int(1), int(1), 9), QuadraticNumber::rational(int(4)));
    }

    #[test]
    fn field_arithmetic() {
        let s2 = qn(int(1), int(1), 2);
        assert_eq!(s2.mul(&s2.conj()).unwrap(), QuadraticNumber::rational(int(-1)));
        assert_eq!(s2.mul(&s2.inv().unwrap()).unwrap(), QuadraticNumber::rational(int(1)));
        assert_eq!(s2.add(&qn(int(0), int(1), 3)), Err(Error::FieldMismatch));
        assert!(s2.add(&QuadraticNumber::rational(int(3))).is_ok());
    }

    #[test]
    fn real_sign() {
        assert_eq!(qn(int(1), int(-1), 2).signum().unwrap(), -1);
        assert_eq!(qn(int(-1), int(1), 2).signum().unwrap(), 1);
        assert_eq!(qn(int(3), int(-2), 2).signum().unwrap(), 1);
        assert!(qn(int(0), int(1), -1).signum().is_err());
    }

    #[test]
    fn root_of_unity_examples() {
        assert_eq!(root_of_unity_order(&QuadraticNumber::rational(int(-1))), Some(2));
        assert_eq!(root_of_unity_order(&qn(rat(-1, 2), rat(1, 2), -3)), Some(3));
        assert_eq!(root_of_unity_order(&qn(rat(1, 2), rat(1, 2), 5)), None);
        assert_eq!(root_of_unity_order(&qn(int(0), int(1), -1)), Some(4));
        assert_eq!(root_of_unity_order(&qn(rat(1, 2), rat(1, 2), -3)), Some(6));
        assert_eq!(root_of_unity_order(&qn(rat(3, 5), rat(4, 5), -1)), None);
    }

    proptest::proptest! {
        #[test]
        fn order_is_least(a in -4i64..=4, b in -4i64..=4, den in 1i64..=3, d in -5i64..=5) {
            proptest::prop_assume!(d != 0 && (a, b) != (0, 0));
            let z = qn(rat(a, den), rat(b, den), d);
            if let Some(r) = root_of_unity_order(&z) {
                proptest::prop_assert!(z.pow(r as u64).is_one());
                for s in 1..r {
                    proptest::prop_assert!(!z.pow(s as u64).is_one());
                }
            }
        }
    }
}
