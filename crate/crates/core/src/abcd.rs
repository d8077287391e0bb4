//! Deciding `AᵏBᵐCⁿDˡ = O` for 2×2 upper-triangular rational matrices.
//!
//! With `A` and `D` both singular and not nilpotent they have rank one, so
//! `Aᵏ` and `Dˡ` are scalar multiples of `A` and `D` once positive, and every
//! solution yields one with `k = ℓ = 1`. Mortality then reduces to the scalar
//! condition `yᵀBᵐCⁿz = 0`, whose shape depends on whether `B` and `C` have
//! distinct or repeated diagonal entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::abc::{decide_abc, AbcInstance, AbcOutcome};
use crate::decomposition::is_nilpotent;
use crate::diophantine::{
    enumerate_sunit_triples, match_exponents, smooth_numbers, solve_linear_nat, solve_modular_exponential,
    solve_power_product, solve_rational_power, vp, LinearConstraint, LinearSet, PrimeSet,
};
use crate::error::{Error, Result};
use crate::linalg::{serde_matrix, Matrix};
use crate::lrs::{Lrs, LrsMatrixForm};
use crate::oracle::{first_mortal, is_mortal};
use crate::scalar::common_denominator;
use crate::semilinear::SemilinearSet;
use crate::skolem::{skolem_decide, SkolemOutcome};
use crate::{Rational, RationalMatrix, RationalVector, SearchConfig};

pub type Quad = (u64, u64, u64, u64);

/// Most smooth numbers enumerated per S-unit search; the bound shrinks to fit.
pub const SMOOTH_CAP: usize = 4000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbcdInstance {
    #[serde(rename = "A", with = "serde_matrix")]
    pub a: RationalMatrix,
    #[serde(rename = "B", with = "serde_matrix")]
    pub b: RationalMatrix,
    #[serde(rename = "C", with = "serde_matrix")]
    pub c: RationalMatrix,
    #[serde(rename = "D", with = "serde_matrix")]
    pub d: RationalMatrix,
}

impl AbcdInstance {
    pub fn new(a: RationalMatrix, b: RationalMatrix, c: RationalMatrix, d: RationalMatrix) -> Result<Self> {
        let inst = AbcdInstance { a, b, c, d };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, m) in [("A", &self.a), ("B", &self.b), ("C", &self.c), ("D", &self.d)] {
            if m.rows() != 2 || m.cols() != 2 {
                return Err(Error::DimensionMismatch(format!("{name} is {}x{}, expected 2x2", m.rows(), m.cols())));
            }
            if !m.is_upper_triangular() {
                return Err(Error::InvalidInput(format!("{name} is not upper triangular")));
            }
        }
        Ok(())
    }

    pub fn matrices(&self) -> [RationalMatrix; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }

    pub fn vanishes_at(&self, (k, m, n, l): Quad) -> Result<bool> {
        is_mortal(&self.matrices(), &[k, m, n, l])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AbcdOutcome {
    Sat { witness: Quad },
    UnsatCertified,
    /// No solution whose S-unit triple has entries of absolute value at most `bound`.
    UnsatUpToBound { bound: u64 },
    Undecided { reason: String },
}

/// `Mᵏ` from the diagonal closed forms.
pub fn closed_form_power(m: &RationalMatrix, k: u64) -> Result<RationalMatrix> {
    if m.rows() != 2 || m.cols() != 2 || !m.is_upper_triangular() {
        return Err(Error::InvalidInput("expected a 2x2 upper-triangular matrix".into()));
    }
    if k == 0 {
        return Ok(Matrix::identity(2));
    }
    let (a, b, c) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 1)]);
    let ak = pow(a, k);
    let ck = pow(c, k);
    let top = if a != c {
        b * (&ak - &ck) / (a - c)
    } else {
        b * Rational::from_integer(k.into()) * pow(a, k - 1)
    };
    Matrix::from_rows(vec![vec![ak, top], vec![Rational::zero(), ck]])
}

fn pow(x: &Rational, k: u64) -> Rational {
    num_traits::pow(x.clone(), k as usize)
}

/// `S⁻¹·diag(λ, 0)·S = M` for a rank-one, non-nilpotent upper-triangular `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank1Form {
    pub similarity: RationalMatrix,
    pub eigenvalue: Rational,
    /// The nonzero eigenvalue sat at position (2,2), so an eigenvector basis was used.
    pub swapped: bool,
}

pub fn diagonalize_rank1(m: &RationalMatrix) -> Result<Rank1Form> {
    if m.rows() != 2 || m.cols() != 2 || !m.is_upper_triangular() {
        return Err(Error::InvalidInput("expected a 2x2 upper-triangular matrix".into()));
    }
    let (a, b, c) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 1)]);
    if m.rank() != 1 || a == c {
        return Err(Error::InvalidInput("expected rank one with distinct diagonal entries".into()));
    }
    let zero = Rational::zero();
    let one = Rational::one();
    if c.is_zero() {
        let s = Matrix::from_rows(vec![vec![one.clone(), b / a], vec![zero, one]])?;
        Ok(Rank1Form { similarity: s, eigenvalue: a.clone(), swapped: false })
    } else {
        // columns of S⁻¹: eigenvector (b, c) for c, kernel vector (1, 0)
        let s_inv = Matrix::from_rows(vec![vec![b.clone(), one], vec![c.clone(), zero]])?;
        Ok(Rank1Form { similarity: s_inv.inverse()?, eigenvalue: c.clone(), swapped: true })
    }
}

/// Coefficients `(α, β, γ)` with `yᵀBᵐCⁿz = α·b₁ᵐc₁ⁿ + β·b₁ᵐc₂ⁿ + γ·b₂ᵐc₂ⁿ` when both
/// `B` and `C` have distinct diagonal entries.
pub fn distinct_expansion(y: &RationalVector, b: &RationalMatrix, c: &RationalMatrix, z: &RationalVector) -> (Rational, Rational, Rational) {
    let (b1, bb, b2) = (&b[(0, 0)], &b[(0, 1)], &b[(1, 1)]);
    let (c1, cc, c2) = (&c[(0, 0)], &c[(0, 1)], &c[(1, 1)]);
    let (y1, y2, z1, z2) = (&y.0[0], &y.0[1], &z.0[0], &z.0[1]);
    let fb = bb / (b1 - b2);
    let fc = cc / (c1 - c2);
    let cross = y1 * z2;
    let alpha = y1 * z1 + &cross * &fc;
    let beta = &cross * (&fb - &fc);
    let gamma = y2 * z2 - &cross * &fb;
    (alpha, beta, gamma)
}

/// Result of searching `(m, n)` with `yᵀBᵐCⁿz = 0`.
#[derive(Debug)]
enum Pair {
    Found(u64, u64),
    None,
    NoneUpTo(u64),
    Undecided(String),
}

fn least(sets: &[LinearSet]) -> Option<(u64, u64)> {
    sets.iter().map(|s| (s.base[0], s.base[1])).min_by_key(|&(m, n)| (m + n, m))
}

fn from_sets(r: Result<Vec<LinearSet>>) -> Pair {
    match r {
        Ok(sets) => least(&sets).map_or(Pair::None, |(m, n)| Pair::Found(m, n)),
        Err(e) => Pair::Undecided(e.to_string()),
    }
}

fn first_zero(u: &RationalVector, m: &RationalMatrix, v: &RationalVector, cfg: &SearchConfig) -> std::result::Result<Option<u64>, String> {
    let seq = Lrs::from_matrix_form(&LrsMatrixForm { u: u.clone(), m: m.clone(), v: v.clone() }).map_err(|e| e.to_string())?;
    match skolem_decide(&seq, cfg) {
        SkolemOutcome::NonEmpty { witness } => Ok(Some(witness)),
        SkolemOutcome::Empty => Ok(None),
        SkolemOutcome::Undecided { reason } => Err(reason),
    }
}

fn solve_pair(y: &RationalVector, b: &RationalMatrix, c: &RationalMatrix, z: &RationalVector, cfg: &SearchConfig) -> Pair {
    let b_singular = b[(0, 0)].is_zero() || b[(1, 1)].is_zero();
    let c_singular = c[(0, 0)].is_zero() || c[(1, 1)].is_zero();
    if b_singular || c_singular {
        return solve_pair_singular(y, b, c, z, b_singular, cfg);
    }
    let b_distinct = b[(0, 0)] != b[(1, 1)];
    let c_distinct = c[(0, 0)] != c[(1, 1)];
    match (b_distinct, c_distinct) {
        (true, true) => solve_distinct(y, b, c, z, cfg),
        (false, false) => solve_repeated(y, b, c, z),
        (true, false) => {
            let (b1, bb, b2) = (&b[(0, 0)], &b[(0, 1)], &b[(1, 1)]);
            let (c0, cc) = (&c[(0, 0)], &c[(0, 1)]);
            let (y1, y2, z1, z2) = (&y.0[0], &y.0[1], &z.0[0], &z.0[1]);
            let fb = bb / (b1 - b2);
            let p = c0 * y1 * z1 + c0 * y1 * z2 * &fb;
            let q = y1 * z2 * cc;
            let r = c0 * y2 * z2 - c0 * y1 * z2 * &fb;
            match solve_mixed(&p, &q, &r, &(b1 / b2)) {
                Ok(Some((m, n))) => Pair::Found(m, n),
                Ok(None) => Pair::None,
                Err(e) => Pair::Undecided(e.to_string()),
            }
        }
        (false, true) => {
            let (b0, bb) = (&b[(0, 0)], &b[(0, 1)]);
            let (c1, cc, c2) = (&c[(0, 0)], &c[(0, 1)], &c[(1, 1)]);
            let (y1, y2, z1, z2) = (&y.0[0], &y.0[1], &z.0[0], &z.0[1]);
            let fc = cc / (c1 - c2);
            let r = b0 * y1 * z1 + b0 * y1 * z2 * &fc;
            let p = b0 * y2 * z2 - b0 * y1 * z2 * &fc;
            let q = y1 * z2 * bb;
            match solve_mixed(&p, &q, &r, &(c2 / c1)) {
                Ok(Some((n, m))) => Pair::Found(m, n),
                Ok(None) => Pair::None,
                Err(e) => Pair::Undecided(e.to_string()),
            }
        }
    }
}

/// A singular, non-nilpotent factor `X` satisfies `Xʲ = tr(X)^{j−1}·X`, so its
/// exponent only matters through being zero or positive.
fn solve_pair_singular(y: &RationalVector, b: &RationalMatrix, c: &RationalMatrix, z: &RationalVector, b_singular: bool, cfg: &SearchConfig) -> Pair {
    let attempts = if b_singular {
        [(0u64, y.clone(), c, z.clone()), (1, b.vec_mul(y).expect("2x2"), c, z.clone())]
    } else {
        [(0, y.clone(), b, z.clone()), (1, y.clone(), b, c.mul_vec(z).expect("2x2"))]
    };
    let mut best: Option<(u64, u64)> = None;
    for (fixed, u, m, v) in attempts {
        match first_zero(&u, m, &v, cfg) {
            Ok(Some(free)) => {
                let pair = if b_singular { (fixed, free) } else { (free, fixed) };
                if best.is_none_or(|b| pair.0 + pair.1 < b.0 + b.1) {
                    best = Some(pair);
                }
            }
            Ok(None) => {}
            Err(reason) => return Pair::Undecided(reason),
        }
    }
    best.map_or(Pair::None, |(m, n)| Pair::Found(m, n))
}

/// `α·b₁ᵐc₁ⁿ + β·b₁ᵐc₂ⁿ + γ·b₂ᵐc₂ⁿ = 0`.
fn solve_distinct(y: &RationalVector, b: &RationalMatrix, c: &RationalMatrix, z: &RationalVector, cfg: &SearchConfig) -> Pair {
    let (alpha, beta, gamma) = distinct_expansion(y, b, c, z);
    let (b1, b2, c1, c2) = (&b[(0, 0)], &b[(1, 1)], &c[(0, 0)], &c[(1, 1)]);
    let one = Rational::one();
    match (alpha.is_zero(), beta.is_zero(), gamma.is_zero()) {
        (true, true, true) => Pair::Found(0, 0),
        (true, true, false) | (true, false, true) | (false, true, true) => Pair::None,
        // βY + γZ = 0 with Y/Z = (b₁/b₂)ᵐ
        (true, false, false) => from_sets(solve_power_product(&(b1 / b2), &one, &(-&gamma / &beta))),
        // X/Z = (b₁/b₂)ᵐ(c₁/c₂)ⁿ
        (false, true, false) => from_sets(solve_power_product(&(b1 / b2), &(c1 / c2), &(-&gamma / &alpha))),
        // X/Y = (c₁/c₂)ⁿ
        (false, false, true) => from_sets(solve_power_product(&one, &(c1 / c2), &(-&beta / &alpha))),
        (false, false, false) => solve_sunit(&alpha, &beta, &gamma, b, c, cfg),
    }
}

fn solve_sunit(alpha: &Rational, beta: &Rational, gamma: &Rational, b: &RationalMatrix, c: &RationalMatrix, cfg: &SearchConfig) -> Pair {
    let (s, q, r, t) = (&b[(0, 0)], &b[(1, 1)], &c[(0, 0)], &c[(1, 1)]);
    let den = common_denominator([alpha, beta, gamma]);
    let ints: Vec<BigInt> = [alpha, beta, gamma].iter().map(|v| (*v * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let ints: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
    let Some(primes) = PrimeSet::of_rationals([s, q, r, t]) else {
        return Pair::Undecided("could not factor the diagonal entries".into());
    };
    let mut bound = cfg.sunit_bound;
    while bound > 1 && smooth_numbers(&primes, bound).len() > SMOOTH_CAP {
        bound /= 2;
    }
    let triples = match enumerate_sunit_triples(&ints[0], &ints[1], &ints[2], &primes, bound) {
        Ok(t) => t,
        Err(e) => return Pair::Undecided(e.to_string()),
    };
    let mut best: Option<(u64, u64)> = None;
    for triple in &triples {
        match match_exponents(s, r, t, q, triple) {
            Ok(sets) => {
                if let Some(p) = least(&sets) {
                    if best.is_none_or(|b| (p.0 + p.1, p.0) < (b.0 + b.1, b.0)) {
                        best = Some(p);
                    }
                }
            }
            Err(e) => return Pair::Undecided(e.to_string()),
        }
    }
    match best {
        Some((m, n)) => Pair::Found(m, n),
        // with no primes the only S-units are ±1, all within any bound
        None if primes.is_empty() => Pair::None,
        None => Pair::NoneUpTo(bound),
    }
}

/// Equal diagonals: `yᵀBᵐCⁿz = b^{m−1}c^{n−1}·(P + m·Q + n·R)`.
fn solve_repeated(y: &RationalVector, b: &RationalMatrix, c: &RationalMatrix, z: &RationalVector) -> Pair {
    let (b0, bb, c0, cc) = (&b[(0, 0)], &b[(0, 1)], &c[(0, 0)], &c[(0, 1)]);
    let (y1, y2, z1, z2) = (&y.0[0], &y.0[1], &z.0[0], &z.0[1]);
    let p = (y1 * z1 + y2 * z2) * b0 * c0;
    let q = y1 * z2 * bb * c0;
    let r = y1 * z2 * cc * b0;
    let den = common_denominator([&p, &q, &r]);
    let int = |v: &Rational| (v * Rational::from_integer(den.clone())).to_integer();
    from_sets(solve_linear_nat(2, &[LinearConstraint::equation(vec![int(&q), int(&r)], -int(&p))]))
}

/// Least `(e, x)` in ℕ² with `(P + x·Q)·ρᵉ = −R`, for `ρ ∉ {0, 1}`.
fn solve_mixed(p: &Rational, q: &Rational, r: &Rational, rho: &Rational) -> Result<Option<(u64, u64)>> {
    let natural = |v: &Rational| if v.is_integer() && !v.is_negative() { v.to_integer().to_u64() } else { None };
    if q.is_zero() {
        if p.is_zero() {
            return Ok(r.is_zero().then_some((0, 0)));
        }
        return Ok(solve_rational_power(rho, &(-r / p)).min().map(|e| (e, 0)));
    }
    if r.is_zero() {
        return Ok(natural(&(-p / q)).map(|x| (0, x)));
    }
    // x_e = (−R·σᵉ − P)/Q with σ = 1/ρ
    let sigma = rho.recip();
    let x_at = |e: u64| natural(&((-r * pow(&sigma, e) - p) / q));
    if !sigma.denom().is_one() {
        // a prime of the denominator drives −R·σᵉ out of reach of P + x·Q
        let prime = crate::arith::factor_integer(sigma.denom())
            .and_then(|f| f.first().and_then(|(p, _)| p.to_u64()))
            .ok_or_else(|| Error::Overflow("could not factor a denominator".into()))?;
        let floor = if p.is_zero() { vp(q, prime)? } else { vp(q, prime)?.min(vp(p, prime)?) };
        let slope = -vp(&sigma, prime)?;
        let top = (vp(r, prime)? - floor).div_euclid(slope);
        return Ok((0..=top.max(-1)).filter_map(|e| u64::try_from(e).ok()).find_map(|e| x_at(e).map(|x| (e, x))));
    }
    let s = sigma.to_integer();
    if s.abs().is_one() {
        return Ok((0..2).find_map(|e| x_at(e).map(|x| (e, x))));
    }
    let den = common_denominator([p, q, r]);
    let int = |v: &Rational| (v * Rational::from_integer(den.clone())).to_integer();
    let (pi, qi, ri) = (int(p), int(q), int(r));
    let integral = solve_modular_exponential(&ri, &s, &-&pi, &qi)?;
    // beyond `cut`, |R·σᵉ| exceeds |P| and fixes the sign of x_e
    let mut cut = 0u64;
    let mut mag = ri.abs();
    while mag <= pi.abs() {
        mag *= s.abs();
        cut += 1;
    }
    if let Some(e) = integral.elements_up_to(cut.saturating_sub(1)).into_iter().filter(|&e| e < cut).find(|&e| x_at(e).is_some()) {
        return Ok(x_at(e).map(|x| (e, x)));
    }
    let lead_positive = (-&ri).signum() * qi.signum() > BigInt::zero();
    let tail = SemilinearSet::tail(cut);
    let admissible = if s.is_positive() {
        if lead_positive { tail } else { SemilinearSet::empty() }
    } else {
        let parity = if lead_positive { 0 } else { 1 };
        tail.intersect(&SemilinearSet::progression(parity, 2))
    };
    Ok(integral.intersect(&admissible).min().and_then(|e| x_at(e).map(|x| (e, x))))
}

fn from_abc(outcome: AbcOutcome, place: impl Fn((u64, u64, u64)) -> Quad) -> AbcdOutcome {
    match outcome {
        AbcOutcome::Solvable { witness, .. } | AbcOutcome::Undecided { witness: Some(witness), .. } => AbcdOutcome::Sat { witness: place(witness) },
        AbcOutcome::UnsolvableCertified => AbcdOutcome::UnsatCertified,
        AbcOutcome::Undecided { reason, .. } => AbcdOutcome::Undecided { reason },
    }
}

pub fn decide_abcd(inst: &AbcdInstance, cfg: &SearchConfig) -> Result<AbcdOutcome> {
    cfg.validate()?;
    inst.validate()?;
    let outcome = decide_unchecked(inst, cfg)?;
    Ok(match outcome {
        AbcdOutcome::Sat { witness } if !inst.vanishes_at(witness)? => AbcdOutcome::Undecided {
            reason: format!("witness {witness:?} failed exact verification"),
        },
        AbcdOutcome::Undecided { reason } => {
            let cap = cfg.brute_cap;
            match first_mortal(&inst.matrices(), &[cap; 4])? {
                Some(w) => AbcdOutcome::Sat { witness: (w[0], w[1], w[2], w[3]) },
                None => AbcdOutcome::Undecided { reason },
            }
        }
        other => other,
    })
}

fn decide_unchecked(inst: &AbcdInstance, cfg: &SearchConfig) -> Result<AbcdOutcome> {
    let mats = inst.matrices();
    for (i, m) in mats.iter().enumerate() {
        if is_nilpotent(m)? {
            let mut w = [0u64; 4];
            w[i] = if m.is_zero() { 1 } else { 2 };
            return Ok(AbcdOutcome::Sat { witness: (w[0], w[1], w[2], w[3]) });
        }
    }
    let invertible = |m: &RationalMatrix| !m[(0, 0)].is_zero() && !m[(1, 1)].is_zero();
    if invertible(&inst.a) {
        let sub = AbcInstance::new(inst.b.clone(), inst.c.clone(), inst.d.clone())?;
        return Ok(from_abc(decide_abc(&sub, cfg)?, |(m, n, l)| (0, m, n, l)));
    }
    if invertible(&inst.d) {
        let sub = AbcInstance::new(inst.a.clone(), inst.b.clone(), inst.c.clone())?;
        return Ok(from_abc(decide_abc(&sub, cfg)?, |(k, m, n)| (k, m, n, 0)));
    }
    let sa = diagonalize_rank1(&inst.a)?;
    let sd = diagonalize_rank1(&inst.d)?;
    let y = sa.similarity.row(0);
    let z = sd.similarity.inverse()?.col(0);
    match solve_pair(&y, &inst.b, &inst.c, &z, cfg) {
        Pair::Found(m, n) => Ok(AbcdOutcome::Sat { witness: (1, m, n, 1) }),
        Pair::None => Ok(AbcdOutcome::UnsatCertified),
        Pair::NoneUpTo(bound) => Ok(AbcdOutcome::UnsatUpToBound { bound }),
        Pair::Undecided(reason) => boundary_fallback(inst, cfg, reason),
    }
}

/// Exponent-zero subproblems, each a three-matrix instance; consulted only
/// when the main analysis gives up, since any of their solutions extends to
/// one with `k = ℓ = 1`.
fn boundary_fallback(inst: &AbcdInstance, cfg: &SearchConfig, reason: String) -> Result<AbcdOutcome> {
    let [a, b, c, d] = inst.matrices();
    let subs: [([RationalMatrix; 3], fn((u64, u64, u64)) -> Quad); 4] = [
        ([b.clone(), c.clone(), d.clone()], |(m, n, l)| (0, m, n, l)),
        ([a.clone(), b.clone(), c.clone()], |(k, m, n)| (k, m, n, 0)),
        ([a.clone(), c, d.clone()], |(k, n, l)| (k, 0, n, l)),
        ([a, b, d], |(k, m, l)| (k, m, 0, l)),
    ];
    for ([x, y, z], place) in subs {
        if let AbcdOutcome::Sat { witness } = from_abc(decide_abc(&AbcInstance::new(x, y, z)?, cfg)?, place) {
            return Ok(AbcdOutcome::Sat { witness });
        }
    }
    Ok(AbcdOutcome::Undecided { reason })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_mortality;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    fn inst(a: &[&[i64]], b: &[&[i64]], c: &[&[i64]], d: &[&[i64]]) -> AbcdInstance {
        AbcdInstance::new(m(a), m(b), m(c), m(d)).unwrap()
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    fn oracle_has_witness(i: &AbcdInstance, cap: u64) -> bool {
        first_mortal(&i.matrices(), &[cap; 4]).unwrap().is_some()
    }

    #[test]
    fn zero_d_is_sat() {
        let i = inst(&[&[1, 2], &[0, 3]], &[&[1, 0], &[0, 1]], &[&[2, 0], &[0, 1]], &[&[0, 0], &[0, 0]]);
        assert_eq!(decide_abcd(&i, &cfg()).unwrap(), AbcdOutcome::Sat { witness: (0, 0, 0, 1) });
    }

    #[test]
    fn distinct_case_without_witness() {
        let i = inst(&[&[1, 0], &[0, 0]], &[&[2, 1], &[0, 1]], &[&[1, 0], &[0, 3]], &[&[0, 1], &[0, -1]]);
        assert!(!oracle_has_witness(&i, 12));
        let out = decide_abcd(&i, &cfg()).unwrap();
        assert!(matches!(out, AbcdOutcome::UnsatCertified | AbcdOutcome::UnsatUpToBound { .. }), "{out:?}");
    }

    #[test]
    fn repeated_case_matches_oracle() {
        let i = inst(&[&[1, 0], &[0, 0]], &[&[1, 1], &[0, 1]], &[&[1, 1], &[0, 1]], &[&[0, 1], &[0, -1]]);
        let out = decide_abcd(&i, &cfg()).unwrap();
        let found = oracle_has_witness(&i, 12);
        match out {
            AbcdOutcome::Sat { witness } => assert!(found && i.vanishes_at(witness).unwrap()),
            AbcdOutcome::UnsatCertified => assert!(!found),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_triangular_is_rejected() {
        let bad = AbcdInstance { a: m(&[&[1, 0], &[1, 0]]), b: m(&[&[1, 0], &[0, 1]]), c: m(&[&[1, 0], &[0, 1]]), d: m(&[&[1, 0], &[0, 1]]) };
        assert!(decide_abcd(&bad, &cfg()).is_err());
    }

    #[test]
    fn rank_one_forms() {
        let f = diagonalize_rank1(&m(&[&[1, -1], &[0, 0]])).unwrap();
        assert_eq!(f.similarity, m(&[&[1, -1], &[0, 1]]));
        assert!(!f.swapped);
        let f = diagonalize_rank1(&m(&[&[3, 0], &[0, 0]])).unwrap();
        assert_eq!(f.similarity, RationalMatrix::identity(2));
        let f = diagonalize_rank1(&m(&[&[0, 1], &[0, 2]])).unwrap();
        assert!(f.swapped);
        assert_eq!(f.eigenvalue, int(2));
        // first column of S⁻¹ is the eigenvector (1, 2)
        let s_inv = f.similarity.inverse().unwrap();
        assert_eq!(s_inv.col(0).0, vec![int(1), int(2)]);
        for g in [m(&[&[1, -1], &[0, 0]]), m(&[&[0, 1], &[0, 2]]), m(&[&[0, 5], &[0, -3]])] {
            let f = diagonalize_rank1(&g).unwrap();
            let back = f.similarity.inverse().unwrap().mul(&Matrix::diagonal(&[f.eigenvalue.clone(), int(0)])).unwrap().mul(&f.similarity).unwrap();
            assert_eq!(back, g);
        }
        assert!(diagonalize_rank1(&m(&[&[0, 1], &[0, 0]])).is_err());
        assert!(diagonalize_rank1(&m(&[&[1, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let d = m(&[&[2, 5], &[0, 3]]);
        assert_eq!(closed_form_power(&d, 2).unwrap(), m(&[&[4, 25], &[0, 9]]));
        let e = m(&[&[2, 5], &[0, 2]]);
        assert_eq!(closed_form_power(&e, 3).unwrap(), m(&[&[8, 60], &[0, 8]]));
        assert_eq!(closed_form_power(&e, 0).unwrap(), RationalMatrix::identity(2));
        assert_eq!(closed_form_power(&m(&[&[0, 1], &[0, 0]]), 1).unwrap(), m(&[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn distinct_expansion_has_no_cross_term() {
        let y = crate::linalg::Vector(vec![rat(1, 2), int(-3)]);
        let z = crate::linalg::Vector(vec![int(2), rat(5, 3)]);
        let b = Matrix::from_rows(vec![vec![int(2), int(-1)], vec![int(0), rat(1, 3)]]).unwrap();
        let c = Matrix::from_rows(vec![vec![int(-1), rat(2, 5)], vec![int(0), int(3)]]).unwrap();
        let (al, be, ga) = distinct_expansion(&y, &b, &c, &z);
        for mm in 0..6u64 {
            for n in 0..6u64 {
                let direct = b.pow(mm).unwrap().mul(&c.pow(n).unwrap()).unwrap().vec_mul(&y).unwrap().dot(&z).unwrap();
                let (b1, b2, c1, c2) = (&b[(0, 0)], &b[(1, 1)], &c[(0, 0)], &c[(1, 1)]);
                let closed = &al * pow(b1, mm) * pow(c1, n) + &be * pow(b1, mm) * pow(c2, n) + &ga * pow(b2, mm) * pow(c2, n);
                assert_eq!(direct, closed);
            }
        }
    }

    #[test]
    fn mixed_equation_cases() {
        // (1 + x)·2ᵉ = 8 has least solution e = 0, x = 7
        assert_eq!(solve_mixed(&int(1), &int(1), &int(-8), &int(2)).unwrap(), Some((0, 7)));
        // (x − 3)·(1/2)ᵉ = 1: σ = 2, x = 2ᵉ + 3
        assert_eq!(solve_mixed(&int(-3), &int(1), &int(-1), &rat(1, 2)).unwrap(), Some((0, 4)));
        // (2x)·(1/2)ᵉ = −1 never
        assert_eq!(solve_mixed(&int(0), &int(2), &int(1), &rat(1, 2)).unwrap(), None);
        // (3x + 1)·(1/2)ᵉ = 1: 2ᵉ ≡ 1 (mod 3), so e even
        assert_eq!(solve_mixed(&int(1), &int(3), &int(-1), &rat(1, 2)).unwrap(), Some((0, 0)));
        assert_eq!(solve_mixed(&int(2), &int(3), &int(-1), &rat(1, 2)).unwrap(), Some((1, 0)));
        assert_eq!(solve_mixed(&int(0), &int(3), &int(-1), &rat(1, 2)).unwrap(), None);
        // σ = 3/2 keeps only finitely many integral terms
        assert_eq!(solve_mixed(&rat(1, 2), &int(1), &int(-1), &rat(2, 3)).unwrap(), Some((1, 1)));
        assert_eq!(solve_mixed(&int(0), &int(1), &int(1), &rat(2, 3)).unwrap(), None);
        assert_eq!(solve_mixed(&int(0), &int(1), &int(-9), &rat(3, 2)).unwrap(), Some((0, 9)));
        assert_eq!(solve_mixed(&int(-5), &int(1), &int(-4), &rat(-1, 1)).unwrap(), Some((0, 9)));
    }

    fn entry() -> impl Strategy<Value = Rational> {
        (-3i64..=3, 1i64..=3).prop_map(|(n, d)| rat(n, d))
    }

    fn tri() -> impl Strategy<Value = RationalMatrix> {
        (entry(), entry(), entry()).prop_map(|(a, b, c)| Matrix::from_rows(vec![vec![a, b], vec![int(0), c]]).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]
        #[test]
        fn closed_form_equals_power(m in tri(), k in 0u64..=50) {
            prop_assert_eq!(closed_form_power(&m, k).unwrap(), m.pow(k).unwrap());
        }

        #[test]
        fn agrees_with_oracle(a in tri(), b in tri(), c in tri(), d in tri()) {
            let i = AbcdInstance::new(a, b, c, d).unwrap();
            let out = decide_abcd(&i, &cfg()).unwrap();
            match out {
                AbcdOutcome::Sat { witness } => prop_assert!(i.vanishes_at(witness).unwrap()),
                AbcdOutcome::UnsatCertified | AbcdOutcome::UnsatUpToBound { .. } => {
                    prop_assert!(brute_mortality(&i.matrices(), &[8, 8, 8, 8]).unwrap().witnesses.is_empty())
                }
                AbcdOutcome::Undecided { reason } => prop_assert!(false, "undecided: {}", reason),
            }
        }
    }
}
