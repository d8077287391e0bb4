//! Arithmetic solvers: p-adic valuations, linear systems over ℕ with
//! congruences, eventually periodic modular powers, and S-unit triples.

mod linear;
mod sunit;

pub use linear::{solve_linear_nat, LinearConstraint, LinearSet};
pub use sunit::{enumerate_sunit_triples, match_exponents, smooth_numbers, SUnitTriple};

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factor_integer, is_prime, vp_int};
use crate::error::{Error, Result};
use crate::semilinear::SemilinearSet;
use crate::Rational;

/// Largest residue-sequence length followed by [`solve_modular_exponential`].
pub const MODEXP_CAP: u64 = 10_000_000;

/// Exponent of `p` in a nonzero rational; negative for denominators.
pub fn vp(x: &Rational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::InvalidInput("valuation of zero".into()));
    }
    let p = BigInt::from(p);
    Ok(vp_int(x.numer(), &p) as i64 - vp_int(x.denom(), &p) as i64)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimeSet {
    primes: Vec<u64>,
}

impl PrimeSet {
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        primes.sort_unstable();
        primes.dedup();
        Ok(PrimeSet { primes })
    }

    /// Primes dividing numerator or denominator of any of the values, or
    /// `None` when one cannot be factored.
    pub fn of_rationals<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Option<Self> {
        let mut primes = Vec::new();
        for v in values {
            for part in [v.numer(), v.denom()] {
                if part.is_zero() {
                    continue;
                }
                for (p, _) in factor_integer(part)? {
                    primes.push(p.to_u64()?);
                }
            }
        }
        primes.sort_unstable();
        primes.dedup();
        Some(PrimeSet { primes })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Nonzero and free of primes outside the set.
    pub fn is_smooth(&self, n: &BigInt) -> bool {
        if n.is_zero() {
            return false;
        }
        let mut n = n.abs();
        for &p in &self.primes {
            let p = BigInt::from(p);
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        n.is_one()
    }
}

/// `{m : c·sᵐ ≡ a (mod b)}`, read off the eventually periodic residues.
pub fn solve_modular_exponential(c: &BigInt, s: &BigInt, a: &BigInt, b: &BigInt) -> Result<SemilinearSet> {
    if b.is_zero() {
        return Err(Error::InvalidInput("zero modulus".into()));
    }
    let modulus = b.abs();
    let target = a.mod_floor(&modulus);
    let mut seen: HashMap<BigInt, u64> = HashMap::new();
    let mut x = c.mod_floor(&modulus);
    let s = s.mod_floor(&modulus);
    let mut hits = Vec::new();
    for m in 0..MODEXP_CAP {
        if let Some(&first) = seen.get(&x) {
            let period = m - first;
            let finite = hits.iter().copied().filter(|&h| h < first);
            let progs = hits.iter().filter(|&&h| h >= first).map(|&h| (h, period)).collect();
            return Ok(SemilinearSet::new(finite.collect(), progs));
        }
        if x == target {
            hits.push(m);
        }
        seen.insert(x.clone(), m);
        x = (&x * &s) % &modulus;
    }
    Err(Error::Overflow(format!("residue sequence longer than {MODEXP_CAP}")))
}

/// Pairs `(m, n)` with `Xᵐ·Yⁿ = Z`, as linear sets over ℕ².
pub fn solve_power_product(x: &Rational, y: &Rational, z: &Rational) -> Result<Vec<LinearSet>> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::InvalidInput("zero base".into()));
    }
    if z.is_zero() {
        return Ok(Vec::new());
    }
    let primes = PrimeSet::of_rationals([x, y, z]).ok_or_else(|| Error::Overflow("could not factor".into()))?;
    let mut cons = Vec::new();
    for &p in primes.primes() {
        cons.push(LinearConstraint::equation(vec![vp(x, p)?.into(), vp(y, p)?.into()], vp(z, p)?.into()));
    }
    cons.push(sign_congruence(&[x, y], z));
    solve_linear_nat(2, &cons)
}

/// `[X<0]·m + [Y<0]·n ≡ [Z<0] (mod 2)`.
fn sign_congruence(bases: &[&Rational], target: &Rational) -> LinearConstraint {
    let bit = |r: &Rational| BigInt::from(r.is_negative() as i64);
    LinearConstraint::congruence(bases.iter().map(|b| bit(b)).collect(), bit(target), 2)
}

/// `{n : ρⁿ = target}`.
pub fn solve_rational_power(rho: &Rational, target: &Rational) -> SemilinearSet {
    if rho.is_zero() {
        return if target.is_one() {
            SemilinearSet::singleton(0)
        } else if target.is_zero() {
            SemilinearSet::tail(1)
        } else {
            SemilinearSet::empty()
        };
    }
    if target.is_zero() {
        return SemilinearSet::empty();
    }
    if rho.abs().is_one() {
        return match (rho.is_one(), target.is_one(), (-target).is_one()) {
            (true, true, _) => SemilinearSet::naturals(),
            (false, true, _) => SemilinearSet::progression(0, 2),
            (false, _, true) => SemilinearSet::progression(1, 2),
            _ => SemilinearSet::empty(),
        };
    }
    // |ρ|ⁿ is strictly monotone, so at most one exponent matches
    let growing = rho.abs() > Rational::one();
    let goal = target.abs();
    let mut power = Rational::one();
    let mut n = 0u64;
    loop {
        if power.abs() == goal {
            return if &power == target {
                SemilinearSet::singleton(n)
            } else {
                SemilinearSet::empty()
            };
        }
        if (growing && power.abs() > goal) || (!growing && power.abs() < goal) {
            return SemilinearSet::empty();
        }
        power *= rho;
        n += 1;
    }
}
