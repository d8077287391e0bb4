//! Depth-2 recurrences with an irreducible characteristic polynomial
//! `x² − a₁x − a₀`, so the roots are conjugate in `ℚ(√D)`, `D = a₁² + 4a₀`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factor_integer, vp_int};
use crate::lrs::Lrs;
use crate::poly::{root_of_unity_order, QuadraticNumber};
use crate::Rational;

use super::Decision;

pub(super) struct Roots {
    pub lambda1: QuadraticNumber,
    pub lambda2: QuadraticNumber,
    pub disc: Rational,
}

pub(super) fn roots(s: &Lrs) -> Result<Roots, String> {
    let (a0, a1) = (&s.coeffs()[0], &s.coeffs()[1]);
    let disc = a1 * a1 + Rational::from_integer(4.into()) * a0;
    let half = Rational::new(1.into(), 2.into());
    let l1 = QuadraticNumber::new(a1 * &half, half, &disc).map_err(|e| e.to_string())?;
    Ok(Roots {
        lambda2: l1.conj(),
        lambda1: l1,
        disc,
    })
}

/// Order of `λ₁/λ₂` as a root of unity, or 1.
pub(super) fn period(r: &Roots) -> Result<u64, String> {
    let z = r.lambda1.div(&r.lambda2).map_err(|e| e.to_string())?;
    Ok(root_of_unity_order(&z).unwrap_or(1) as u64)
}

fn q(e: crate::Error) -> String {
    e.to_string()
}

/// `uₙ = v₁λ₁ⁿ + v₂λ₂ⁿ`.
fn coefficients(s: &Lrs, r: &Roots) -> Result<(QuadraticNumber, QuadraticNumber), String> {
    let u0 = QuadraticNumber::rational(s.initials()[0].clone());
    let u1 = QuadraticNumber::rational(s.initials()[1].clone());
    let diff = r.lambda1.sub(&r.lambda2).map_err(q)?;
    let v1 = u1.sub(&u0.mul(&r.lambda2).map_err(q)?).map_err(q)?.div(&diff).map_err(q)?;
    let v2 = u0.mul(&r.lambda1).map_err(q)?.sub(&u1).map_err(q)?.div(&diff).map_err(q)?;
    Ok((v1, v2))
}

pub(super) fn least_zero(s: &Lrs, witness_cap: u64) -> Decision {
    let r = roots(s)?;
    let period = period(&r)?;
    if period > 1 {
        // λ₁ʳ = λ₂ʳ is rational, so u_{n+r} = λ₁ʳ·uₙ
        return Ok((0..period).find(|&i| s.eval(i).is_zero()));
    }
    if r.disc.is_positive() {
        real_least_zero(s, &r, witness_cap)
    } else {
        complex_least_zero(s)
    }
}

/// Distinct moduli: a zero needs `|λ₁/λ₂|ⁿ = |v₂/v₁|`, and the powers of the
/// ratio increase strictly, so at most one index qualifies.
fn real_least_zero(s: &Lrs, r: &Roots, witness_cap: u64) -> Decision {
    let (mut l1, mut l2) = (r.lambda1.clone(), r.lambda2.clone());
    let (mut v1, mut v2) = coefficients(s, r)?;
    if l1.abs().map_err(q)?.cmp_real(&l2.abs().map_err(q)?).map_err(q)? == Ordering::Less {
        std::mem::swap(&mut l1, &mut l2);
        std::mem::swap(&mut v1, &mut v2);
    }
    let rho = l1.div(&l2).map_err(q)?.abs().map_err(q)?;
    let tau = v2.div(&v1).map_err(q)?.abs().map_err(q)?;
    let mut power = QuadraticNumber::rational(Rational::one());
    for n in 0..=witness_cap {
        match power.cmp_real(&tau).map_err(q)? {
            Ordering::Less => power = power.mul(&rho).map_err(q)?,
            Ordering::Equal => return Ok(s.eval(n).is_zero().then_some(n)),
            Ordering::Greater => return Ok(None),
        }
    }
    Err(format!("ratio powers did not pass the target within {witness_cap} steps"))
}

/// Conjugate complex roots whose ratio is not a root of unity. After scaling
/// to an integer recurrence `wₙ = A·w_{n−1} + B·w_{n−2}` and removing common
/// factors, a prime `p | B` with `p ∤ A` splits the roots into a unit and a
/// root of valuation `e = v_p(B)`; a zero at `n` then forces
/// `n·e ≤ v_p(w₁² − A·w₀·w₁ − B·w₀²)`.
fn complex_least_zero(s: &Lrs) -> Decision {
    let (a0, a1) = (&s.coeffs()[0], &s.coeffs()[1]);
    let c = a0.denom().lcm(a1.denom());
    let mut a = (a1 * Rational::from_integer(c.clone())).to_integer();
    let mut b = (a0 * Rational::from_integer(&c * &c)).to_integer();
    // wₙ = K·cⁿ·uₙ with K clearing the initial denominators
    let k = s.initials()[0].denom().lcm(s.initials()[1].denom());
    let kr = Rational::from_integer(k);
    let mut w0 = (&s.initials()[0] * &kr).to_integer();
    let w1 = (&s.initials()[1] * &kr * Rational::from_integer(c)).to_integer();
    let primes = factor_integer(&b).ok_or("could not factor the recurrence constant")?;
    for (p, _) in &primes {
        let p2 = p * p;
        while (&a % p).is_zero() && (&b % &p2).is_zero() {
            a /= p;
            b /= &p2;
            w0 *= p;
        }
    }
    let Some((p, _)) = primes.iter().find(|(p, _)| (&b % p).is_zero() && !(&a % p).is_zero()) else {
        return Err("no prime separates the root valuations".into());
    };
    let e = vp_int(&b, p) as u64;
    let nv: BigInt = &w1 * &w1 - &a * &w0 * &w1 - &b * &w0 * &w0;
    if nv.is_zero() {
        return Err("degenerate norm".into());
    }
    let bound = vp_int(&nv, p) as u64 / e;
    let bound = bound.to_u64().unwrap_or(u64::MAX);
    Ok(s.first_zero_up_to(bound))
}
