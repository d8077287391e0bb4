//! Factorization over the rationals: squarefree decomposition, rational-root
//! extraction, then Kronecker's interpolation search for the remaining
//! higher-degree factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Poly;
use crate::arith::divisors;
use crate::error::{Error, Result};
use crate::RationalPolynomial;

/// Bound on candidate interpolations tried per factor degree.
const KRONECKER_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub leading: BigRational,
    /// Monic irreducible factors with multiplicities, ordered by degree and
    /// then by coefficients (lowest degree first).
    pub factors: Vec<(RationalPolynomial, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> RationalPolynomial {
        self.factors
            .iter()
            .fold(Poly::constant(self.leading.clone()), |acc, (q, m)| acc.mul(&q.pow(*m)))
    }
}

pub fn factor_over_rationals(p: &RationalPolynomial) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::InvalidInput("cannot factor the zero polynomial".into()));
    }
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&p.monic()) {
        for q in factor_squarefree(&part)? {
            factors.push((q, mult));
        }
    }
    factors.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| coeff_order(a, b)));
    Ok(Factorization {
        leading: p.leading(),
        factors,
    })
}

/// Lowest degree first; each coefficient by magnitude, negative before positive.
fn coeff_order(a: &RationalPolynomial, b: &RationalPolynomial) -> std::cmp::Ordering {
    let key = |c: &BigRational| (c.abs(), !c.is_negative());
    a.coeffs()
        .iter()
        .map(key)
        .cmp(b.coeffs().iter().map(key))
}

/// Yun's algorithm on a monic polynomial: `f = Π aᵢ^i` with squarefree,
/// pairwise coprime monic `aᵢ`. Trivial parts are dropped.
fn squarefree_decomposition(f: &RationalPolynomial) -> Vec<(RationalPolynomial, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.divmod(&a0).unwrap().0;
    let c = df.divmod(&a0).unwrap().0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        b = b.divmod(&a).unwrap().0;
        let c = d.divmod(&a).unwrap().0;
        d = c.sub(&b.derivative());
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Scales to a primitive integer polynomial with positive leading coefficient.
fn primitive_part(p: &RationalPolynomial) -> Vec<BigInt> {
    let den = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) { -1 } else { 1 };
    ints.into_iter().map(|c| c / &g * sign).collect()
}

fn eval_int(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
}

fn factor_squarefree(p: &RationalPolynomial) -> Result<Vec<RationalPolynomial>> {
    let mut out = Vec::new();
    let mut rest = p.monic();
    if rest.x_adic_order() > 0 {
        out.push(Poly::x());
        rest = rest.shift_down(1);
    }
    rest = extract_rational_roots(&rest, &mut out)?;
    let deg = rest.degree().unwrap_or(0);
    if deg <= 3 {
        if deg > 0 {
            out.push(rest);
        }
        return Ok(out);
    }
    kronecker(&rest, &mut out)?;
    Ok(out)
}

fn overflow(what: &str) -> Error {
    Error::Overflow(format!("could not factor {what}"))
}

/// Removes every linear factor `x − a/b` with `a | c₀` and `b | lc`.
fn extract_rational_roots(p: &RationalPolynomial, out: &mut Vec<RationalPolynomial>) -> Result<RationalPolynomial> {
    let mut rest = p.clone();
    if rest.degree().unwrap_or(0) == 0 {
        return Ok(rest);
    }
    let ints = primitive_part(&rest);
    let nums = divisors(&ints[0]).ok_or_else(|| overflow("constant coefficient"))?;
    let dens = divisors(ints.last().unwrap()).ok_or_else(|| overflow("leading coefficient"))?;
    let mut roots = Vec::new();
    for a in &nums {
        for b in &dens {
            if !a.gcd(b).is_one() {
                continue;
            }
            for s in [1, -1] {
                let r = BigRational::new(a * s, b.clone());
                if !roots.contains(&r) && rest.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    for r in roots {
        let lin = Poly::linear(r);
        rest = rest.divmod(&lin)?.0;
        out.push(lin);
    }
    Ok(rest)
}

/// Kronecker's method: a degree-`d` integer factor is pinned down by its values
/// at `d+1` integer points, each of which divides the value of `p` there.
fn kronecker(p: &RationalPolynomial, out: &mut Vec<RationalPolynomial>) -> Result<()> {
    let mut rest = p.clone();
    let mut d = 2;
    while 2 * d <= rest.degree().unwrap_or(0) {
        match find_factor(&rest, d)? {
            Some(h) => {
                rest = rest.divmod(&h)?.0.monic();
                out.push(h.monic());
            }
            None => d += 1,
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest.monic());
    }
    Ok(())
}

fn find_factor(p: &RationalPolynomial, d: usize) -> Result<Option<RationalPolynomial>> {
    let ints = primitive_part(p);
    let lc = ints.last().unwrap().clone();
    // Prefer evaluation points whose values have few divisors.
    let mut candidates = Vec::new();
    let span = (d + 8) as i64;
    for x in -span..=span {
        let x = BigInt::from(x);
        let v = eval_int(&ints, &x);
        if v.is_zero() {
            continue;
        }
        let divs = divisors(&v).ok_or_else(|| overflow("an interpolation value"))?;
        candidates.push((divs.len(), x, divs));
    }
    candidates.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.abs().cmp(&b.1.abs())));
    candidates.truncate(d + 1);
    if candidates.len() < d + 1 {
        return Err(overflow("a polynomial without enough evaluation points"));
    }
    let work: u64 = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| c.0 as u64 * if i == 0 { 1 } else { 2 })
        .try_fold(1u64, |acc, n| acc.checked_mul(n))
        .unwrap_or(u64::MAX);
    if work > KRONECKER_BUDGET {
        return Err(overflow("a polynomial within the Kronecker search budget"));
    }
    let xs: Vec<BigRational> = candidates.iter().map(|c| BigRational::from_integer(c.1.clone())).collect();
    let choices: Vec<Vec<BigInt>> = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i == 0 {
                // A factor and its negation are interchangeable.
                c.2.clone()
            } else {
                c.2.iter().flat_map(|v| [v.clone(), -v]).collect()
            }
        })
        .collect();
    let mut idx = vec![0usize; d + 1];
    loop {
        let ys: Vec<BigRational> = idx
            .iter()
            .zip(&choices)
            .map(|(&i, c)| BigRational::from_integer(c[i].clone()))
            .collect();
        let h = interpolate(&xs, &ys);
        if h.degree() == Some(d) && h.coeffs().iter().all(|c| c.is_integer()) {
            let hl = h.leading().to_integer();
            if (&lc % &hl).is_zero() && h.divides(p) {
                return Ok(Some(h));
            }
        }
        // odometer step
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(None);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Lagrange interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> RationalPolynomial {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = Poly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis
                    .mul(&Poly::linear(xj.clone()))
                    .scale(&(BigRational::one() / (xi - xj)));
            }
        }
        acc = acc.add(&basis);
    }
    acc
}

/// Every monic divisor of the factored polynomial, in nondecreasing degree.
pub fn monic_divisors(f: &Factorization) -> Vec<RationalPolynomial> {
    let mut out: Vec<RationalPolynomial> = vec![Poly::one()];
    for (q, m) in &f.factors {
        let prev = out.clone();
        let mut qk = Poly::one();
        for _ in 0..*m {
            qk = qk.mul(q);
            out.extend(prev.iter().map(|d| d.mul(&qk)));
        }
    }
    out.sort_by_key(|p| p.degree());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RationalPolynomial as P;
    use proptest::prelude::*;

    fn fac(c: &[i64]) -> Vec<(P, u32)> {
        factor_over_rationals(&P::from_ints(c)).unwrap().factors
    }

    #[test]
    fn factor_examples() {
        assert_eq!(fac(&[6, -5, 1]), vec![(P::from_ints(&[-2, 1]), 1), (P::from_ints(&[-3, 1]), 1)]);
        assert_eq!(fac(&[1, 0, 1]), vec![(P::from_ints(&[1, 0, 1]), 1)]);
        assert_eq!(
            fac(&[0, -1, 0, 1]),
            vec![(P::from_ints(&[0, 1]), 1), (P::from_ints(&[-1, 1]), 1), (P::from_ints(&[1, 1]), 1)]
        );
    }

    #[test]
    fn quartic_into_quadratics() {
        // (x² + 1)(x² + x + 2)
        let p = P::from_ints(&[1, 0, 1]).mul(&P::from_ints(&[2, 1, 1]));
        let f = factor_over_rationals(&p).unwrap();
        assert_eq!(f.factors, vec![(P::from_ints(&[1, 0, 1]), 1), (P::from_ints(&[2, 1, 1]), 1)]);
        // x⁴ + 1 is irreducible
        assert_eq!(fac(&[1, 0, 0, 0, 1]).len(), 1);
    }

    #[test]
    fn repeated_and_rational_factors() {
        // 4(x − 1/2)²(x² − 2)
        let p = P::from_ints(&[-1, 2]).pow(2).mul(&P::from_ints(&[-2, 0, 1]));
        let f = factor_over_rationals(&p).unwrap();
        assert_eq!(f.leading, crate::scalar::int(4));
        assert_eq!(f.factors[0], (P::new(vec![crate::scalar::rat(-1, 2), crate::scalar::int(1)]), 2));
        assert_eq!(f.factors[1], (P::from_ints(&[-2, 0, 1]), 1));
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn divisor_examples() {
        let d = monic_divisors(&factor_over_rationals(&P::from_ints(&[-1, 1]).pow(2)).unwrap());
        assert_eq!(d, vec![P::one(), P::from_ints(&[-1, 1]), P::from_ints(&[1, -2, 1])]);
        let d = monic_divisors(&factor_over_rationals(&P::from_ints(&[6, -5, 1])).unwrap());
        assert_eq!(d.len(), 4);
        assert_eq!(d[3], P::from_ints(&[6, -5, 1]));
        let d = monic_divisors(&factor_over_rationals(&P::from_ints(&[0, 0, 1])).unwrap());
        assert_eq!(d, vec![P::one(), P::x(), P::monomial(2)]);
    }

    fn factor_product() -> impl Strategy<Value = P> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, 2..4), 1..4).prop_map(|fs| {
            fs.iter().fold(P::one(), |acc, f| {
                let q = P::from_ints(f);
                if q.is_zero() { acc } else { acc.mul(&q) }
            })
        })
    }

    proptest! {
        #[test]
        fn factorization_reexpands(p in factor_product()) {
            prop_assume!(!p.is_zero());
            let f = factor_over_rationals(&p).unwrap();
            prop_assert_eq!(f.expand(), p.clone());
            for (q, _) in &f.factors {
                prop_assert!(q.is_monic());
            }
            for d in monic_divisors(&f) {
                prop_assert!(d.divides(&p));
            }
        }
    }
}
