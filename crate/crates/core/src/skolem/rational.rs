//! Zero finding for recurrences whose characteristic roots are all rational
//! and nonzero, by an exact dominant-root bound.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::Matrix;
use crate::lrs::{Lrs, LrsMatrixForm};
use crate::poly::{factor_over_rationals, Poly};
use crate::{Rational, RationalPolynomial};

use super::Decision;

/// Largest dominance index accepted before giving up.
const MAX_DOMINANCE: u64 = 1_000_000;

/// Period 2 when some root `λ` has `−λ` as a root too, otherwise 1.
pub(super) fn rational_period(roots: &[Rational]) -> u64 {
    if roots.iter().any(|r| roots.contains(&-r.clone())) {
        2
    } else {
        1
    }
}

/// `u_{i+mL}` as a recurrence in `m`.
pub(super) fn subsequence(s: &Lrs, period: u64, i: u64) -> Lrs {
    if period == 1 && i == 0 {
        return s.clone();
    }
    let f = s.to_matrix_form();
    let m = f.m.pow(period).expect("square");
    let v = f.m.pow(i).and_then(|p| p.mul_vec(&f.v)).expect("square");
    Lrs::from_matrix_form(&LrsMatrixForm { u: f.u, m, v }).expect("consistent dimensions")
}

/// Least zero of a recurrence with rational nonzero roots.
pub(super) fn least_zero(s: &Lrs, roots: &[Rational]) -> Decision {
    let period = rational_period(roots);
    let mut best: Option<u64> = None;
    for i in 0..period {
        let class = subsequence(s, period, i);
        if let Some(m) = class_least_zero(&class)? {
            let n = i + period * m;
            best = Some(best.map_or(n, |b| b.min(n)));
        }
    }
    Ok(best)
}

struct ClosedForm {
    /// `(μ, q)` with `wₘ = Σ q(m)·μᵐ`, sorted by decreasing `|μ|`.
    terms: Vec<(Rational, RationalPolynomial)>,
}

fn closed_form(w: &Lrs) -> Result<ClosedForm, String> {
    let fac = factor_over_rationals(&w.char_poly()).map_err(|e| e.to_string())?;
    let mut roots = Vec::new();
    for (p, mult) in &fac.factors {
        if p.degree() != Some(1) {
            return Err("subsequence has an irrational root".into());
        }
        roots.push((-p.coeff(0), *mult as usize));
    }
    let d = w.depth();
    let mut mat = Matrix::zeros(d, d);
    for m in 0..d {
        let mut col = 0;
        for (mu, mult) in &roots {
            let base = num_traits::pow(mu.clone(), m);
            for e in 0..*mult {
                let me = if e == 0 { Rational::one() } else { num_traits::pow(Rational::from_integer(m.into()), e) };
                mat[(m, col)] = me * &base;
                col += 1;
            }
        }
    }
    let coeffs = mat
        .solve(&crate::Vector(w.initials().to_vec()))
        .map_err(|e| format!("closed form: {e}"))?;
    let mut terms = Vec::new();
    let mut col = 0;
    for (mu, mult) in roots {
        let q = Poly::new(coeffs.0[col..col + mult].to_vec());
        col += mult;
        if !q.is_zero() {
            terms.push((mu, q));
        }
    }
    terms.sort_by(|a, b| b.0.abs().cmp(&a.0.abs()));
    if terms.windows(2).any(|p| p[0].0.abs() == p[1].0.abs()) {
        return Err("two roots share a modulus".into());
    }
    Ok(ClosedForm { terms })
}

fn class_least_zero(w: &Lrs) -> Decision {
    if w.is_zero() {
        return Ok(Some(0));
    }
    let cf = closed_form(w)?;
    if cf.terms.len() == 1 {
        return Ok(least_natural_root(&cf.terms[0].1));
    }
    let n0 = dominance_index(&cf)?;
    Ok(w.first_zero_up_to(n0))
}

fn least_natural_root(q: &RationalPolynomial) -> Option<u64> {
    if q.degree().unwrap_or(0) == 0 {
        return None;
    }
    let fac = factor_over_rationals(q).ok()?;
    fac.factors
        .iter()
        .filter(|(p, _)| p.degree() == Some(1))
        .map(|(p, _)| -p.coeff(0))
        .filter(|r| r.is_integer() && !r.is_negative())
        .filter_map(|r| r.to_integer().to_u64())
        .min()
}

/// An index `N` such that no zero lies beyond `N`. With `q₁` of degree `d₁`
/// and leading coefficient `c`, `|q₁(m)| ≥ |c|mᵈ¹/2` once `m ≥ 2·S₁/|c|`,
/// while the remaining terms are at most `H·m^D·rᵐ` relative to `μ₁ᵐ`, which
/// decreases once `(1 + 1/m)^D·r < 1`.
fn dominance_index(cf: &ClosedForm) -> Result<u64, String> {
    let (mu1, q1) = &cf.terms[0];
    let lc = q1.leading().abs();
    let s1: Rational = q1.coeffs()[..q1.coeffs().len() - 1].iter().map(|c| c.abs()).sum();
    let m0 = (Rational::from_integer(2.into()) * s1 / &lc).ceil().to_integer();
    let m0 = m0.to_u64().unwrap_or(u64::MAX).max(1);
    let mut h = Rational::zero();
    let mut dmax = 0u32;
    let mut r = Rational::zero();
    for (mu, q) in &cf.terms[1..] {
        for c in q.coeffs() {
            h += c.abs();
        }
        dmax = dmax.max(q.degree().unwrap_or(0) as u32);
        r = r.max((mu / mu1).abs());
    }
    let half = lc / Rational::from_integer(2.into());
    let holds = |m: u64| -> bool {
        let mr = Rational::from_integer(BigInt::from(m));
        let step = num_traits::pow(Rational::one() + Rational::one() / &mr, dmax as usize) * &r;
        if step >= Rational::one() {
            return false;
        }
        let tail = &h * num_traits::pow(mr, dmax as usize) * pow_rational(&r, m);
        tail < half
    };
    let mut hi = m0;
    while !holds(hi) {
        if hi > MAX_DOMINANCE {
            return Err(format!("dominance index exceeds {MAX_DOMINANCE}"));
        }
        hi = hi.saturating_mul(2);
    }
    let mut lo = m0;
    if holds(lo) {
        return Ok(lo);
    }
    // holds(hi), !holds(lo)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn pow_rational(r: &Rational, e: u64) -> Rational {
    Rational::new(
        num_traits::pow(r.numer().clone(), e as usize),
        num_traits::pow(r.denom().clone(), e as usize),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominance_is_sound() {
        // uₙ = 100·(9/10)ⁿ − n·1ⁿ style: roots 1 (double) and 9/10
        let s = Lrs::from_terms(&(0..12).map(|n| {
            let nine = crate::scalar::rat(9, 10);
            Rational::from_integer(100.into()) * num_traits::pow(nine, n) - Rational::from_integer((n as i64).into())
        }).collect::<Vec<_>>());
        let cf = closed_form(&s).unwrap();
        let n0 = dominance_index(&cf).unwrap();
        let zeros = s.zeros_up_to(n0 + 200);
        assert!(zeros.iter().all(|&z| z <= n0));
    }

    #[test]
    fn periods() {
        let r = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x.into())).collect::<Vec<_>>();
        assert_eq!(rational_period(&r(&[1, -1])), 2);
        assert_eq!(rational_period(&r(&[2, 3])), 1);
    }
}
