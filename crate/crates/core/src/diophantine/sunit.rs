//! S-unit solutions of `a·x + b·y + c·z = 0` and exponent matching against them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{solve_linear_nat, vp, LinearConstraint, LinearSet, PrimeSet};
use crate::error::{Error, Result};
use crate::Rational;

/// Primitive `(x, y, z)` with `a·x + b·y + c·z = 0` and all entries S-units.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SUnitTriple {
    pub x: i128,
    pub y: i128,
    pub z: i128,
}

impl SUnitTriple {
    pub fn new(x: i128, y: i128, z: i128) -> Self {
        SUnitTriple { x, y, z }
    }

    pub fn neg(&self) -> Self {
        SUnitTriple::new(-self.x, -self.y, -self.z)
    }
}

/// Positive integers up to `bound` whose prime factors all lie in `primes`, ascending.
pub fn smooth_numbers(primes: &PrimeSet, bound: u64) -> Vec<u64> {
    let mut out = vec![];
    if bound == 0 {
        return out;
    }
    out.push(1u64);
    for &p in primes.primes() {
        let mut next = Vec::new();
        for &n in &out {
            let mut v = n;
            while let Some(w) = v.checked_mul(p).filter(|&w| w <= bound) {
                next.push(w);
                v = w;
            }
        }
        out.extend(next);
    }
    out.sort_unstable();
    out
}

fn is_smooth_u128(mut n: u128, primes: &[u64]) -> bool {
    for &p in primes {
        let p = p as u128;
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    n == 1
}

/// Every primitive triple with `|x|, |y|, |z| ≤ bound`, sorted; both signs of each
/// triple are listed.
pub fn enumerate_sunit_triples(a: &BigInt, b: &BigInt, c: &BigInt, s: &PrimeSet, bound: u64) -> Result<Vec<SUnitTriple>> {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(Error::InvalidInput("coefficients must be nonzero".into()));
    }
    let narrow = |v: &BigInt| v.to_i64().map(i128::from).ok_or_else(|| Error::Overflow(format!("coefficient {v} too large")));
    let (a, b, c) = (narrow(a)?, narrow(b)?, narrow(c)?);
    if bound > i64::MAX as u64 {
        return Err(Error::Overflow("bound too large".into()));
    }
    let smooth = smooth_numbers(s, bound);
    let mut out = Vec::new();
    for &x in &smooth {
        let x = x as i128;
        for &y0 in &smooth {
            for y in [y0 as i128, -(y0 as i128)] {
                let num = -(a * x + b * y);
                if num % c != 0 {
                    continue;
                }
                let z = num / c;
                let za = z.unsigned_abs();
                if z == 0 || za > bound as u128 || !is_smooth_u128(za, s.primes()) {
                    continue;
                }
                if x.gcd(&y).gcd(&z) != 1 {
                    continue;
                }
                let t = SUnitTriple::new(x, y, z);
                out.push(t.neg());
                out.push(t);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Exponent pairs `(m, n)` with `(sᵐrⁿ, sᵐtⁿ, qᵐtⁿ) = g·(x, y, z)` for some `g > 0`.
pub fn match_exponents(s: &Rational, r: &Rational, t: &Rational, q: &Rational, triple: &SUnitTriple) -> Result<Vec<LinearSet>> {
    if [s, r, t, q].iter().any(|v| v.is_zero()) {
        return Err(Error::InvalidInput("zero base".into()));
    }
    let (x, y, z) = (big(triple.x), big(triple.y), big(triple.z));
    if [&x, &y, &z].iter().any(|v| v.is_zero()) {
        return Err(Error::InvalidInput("zero triple entry".into()));
    }
    // proportionality is (r/t)ⁿ = x/y and (s/q)ᵐ = y/z; g > 0 fixes the sign of y
    let rt = r / t;
    let sq = s / q;
    let xy = &x / &y;
    let yz = &y / &z;
    let primes = PrimeSet::of_rationals([&rt, &sq, &xy, &yz]).ok_or_else(|| Error::Overflow("could not factor".into()))?;
    let mut cons = Vec::new();
    for &p in primes.primes() {
        cons.push(LinearConstraint::equation(vec![0.into(), vp(&rt, p)?.into()], vp(&xy, p)?.into()));
        cons.push(LinearConstraint::equation(vec![vp(&sq, p)?.into(), 0.into()], vp(&yz, p)?.into()));
    }
    let bit = |v: &Rational| BigInt::from(v.is_negative() as i64);
    cons.push(LinearConstraint::congruence(vec![0.into(), bit(&rt)], bit(&xy), 2));
    cons.push(LinearConstraint::congruence(vec![bit(&sq), 0.into()], bit(&yz), 2));
    cons.push(LinearConstraint::congruence(vec![bit(s), bit(t)], bit(&y), 2));
    solve_linear_nat(2, &cons)
}

fn big(v: i128) -> Rational {
    Rational::from_integer(BigInt::from(v))
}
