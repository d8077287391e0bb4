//! Linear recurrence sequences over the rationals.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::poly::Poly;
use crate::scalar::serde_rational;
use crate::{Rational, RationalMatrix, RationalPolynomial, RationalVector};

/// `uₙ = a_{k−1}u_{n−1} + ··· + a₀u_{n−k}` for `n ≥ k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LrsRepr", into = "LrsRepr")]
pub struct Lrs {
    coeffs: Vec<Rational>,
    initials: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LrsRepr {
    #[serde(with = "serde_rational::vec")]
    coeffs: Vec<Rational>,
    #[serde(with = "serde_rational::vec")]
    initials: Vec<Rational>,
}

impl TryFrom<LrsRepr> for Lrs {
    type Error = Error;

    fn try_from(r: LrsRepr) -> Result<Self> {
        Lrs::new(r.coeffs, r.initials)
    }
}

impl From<Lrs> for LrsRepr {
    fn from(l: Lrs) -> Self {
        LrsRepr {
            coeffs: l.coeffs,
            initials: l.initials,
        }
    }
}

/// `uₙ = uᵀ Mⁿ v`.
#[derive(Clone, Debug, PartialEq)]
pub struct LrsMatrixForm {
    pub u: RationalVector,
    pub m: RationalMatrix,
    pub v: RationalVector,
}

impl LrsMatrixForm {
    pub fn term(&self, n: u64) -> Result<Rational> {
        self.u.dot(&self.m.pow(n)?.mul_vec(&self.v)?)
    }

    /// `u_0, …, u_{count−1}` by repeated multiplication.
    pub fn terms(&self, count: usize) -> Result<Vec<Rational>> {
        let mut w = self.v.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(self.u.dot(&w)?);
            w = self.m.mul_vec(&w)?;
        }
        Ok(out)
    }
}

const SCREEN_PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 4_611_686_018_427_387_847];

fn to_mod(r: &Rational, p: u64) -> Option<u64> {
    let pb = num_bigint::BigInt::from(p);
    let n = r.numer().mod_floor(&pb).to_u64()?;
    let d = r.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    let inv = num_bigint::BigInt::from(d).modpow(&num_bigint::BigInt::from(p - 2), &pb).to_u64()?;
    Some(((n as u128 * inv as u128) % p as u128) as u64)
}

/// Iterating the recurrence is cheaper than a matrix power below this index.
const ITERATE_LIMIT: u64 = 4096;

impl Lrs {
    /// Coefficients `a₀..a_{k−1}` and initial terms `u₀..u_{k−1}`.
    pub fn new(coeffs: Vec<Rational>, initials: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() != initials.len() {
            return Err(Error::InvalidInput(format!(
                "a recurrence needs k ≥ 1 coefficients and k initials, got {} and {}",
                coeffs.len(),
                initials.len()
            )));
        }
        Ok(Lrs { coeffs, initials })
    }

    pub fn from_ints(coeffs: &[i64], initials: &[i64]) -> Result<Self> {
        let r = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x.into())).collect();
        Self::new(r(coeffs), r(initials))
    }

    pub fn zero() -> Self {
        Lrs {
            coeffs: vec![Rational::zero()],
            initials: vec![Rational::zero()],
        }
    }

    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn initials(&self) -> &[Rational] {
        &self.initials
    }

    /// The sequence vanishes identically iff its first `k` terms do.
    pub fn is_zero(&self) -> bool {
        self.initials.iter().all(Zero::is_zero)
    }

    /// `xᵏ − a_{k−1}x^{k−1} − ··· − a₀`.
    pub fn char_poly(&self) -> RationalPolynomial {
        let mut c: Vec<Rational> = self.coeffs.iter().map(|a| -a.clone()).collect();
        c.push(Rational::one());
        Poly::new(c)
    }

    fn step(&self, window: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(window)
            .fold(Rational::zero(), |acc, (a, u)| acc + a * u)
    }

    /// `u_0, …, u_{count−1}`.
    pub fn terms(&self, count: usize) -> Vec<Rational> {
        let k = self.depth();
        let mut out: Vec<Rational> = self.initials.iter().take(count).cloned().collect();
        while out.len() < count {
            let n = out.len();
            let next = self.step(&out[n - k..]);
            out.push(next);
        }
        out
    }

    pub fn eval(&self, n: u64) -> Rational {
        if n < ITERATE_LIMIT {
            return self.terms(n as usize + 1).pop().expect("nonempty");
        }
        self.to_matrix_form().term(n).expect("consistent dimensions")
    }

    pub fn companion(&self) -> RationalMatrix {
        let k = self.depth();
        let mut m = Matrix::zeros(k, k);
        for j in 0..k {
            m[(0, j)] = self.coeffs[k - 1 - j].clone();
        }
        for i in 1..k {
            m[(i, i - 1)] = Rational::one();
        }
        m
    }

    /// Companion matrix with `u = e_k` and `v = (u_{k−1}, …, u₀)`.
    pub fn to_matrix_form(&self) -> LrsMatrixForm {
        let k = self.depth();
        LrsMatrixForm {
            u: Vector::unit(k, k - 1),
            m: self.companion(),
            v: Vector(self.initials.iter().rev().cloned().collect()),
        }
    }

    /// Recovers a recurrence of depth at most `dim M` from `2·dim + 1` terms.
    pub fn from_matrix_form(f: &LrsMatrixForm) -> Result<Self> {
        let d = f.m.rows();
        if !f.m.is_square() || f.u.len() != d || f.v.len() != d {
            return Err(Error::DimensionMismatch("matrix form".into()));
        }
        Ok(Self::from_terms(&f.terms(2 * d + 1)?))
    }

    /// Shortest recurrence generating the given prefix (Berlekamp–Massey).
    pub fn from_terms(s: &[Rational]) -> Self {
        let conn = berlekamp_massey(s);
        let l = conn.len() - 1;
        if l == 0 {
            return Self::zero();
        }
        let coeffs = (0..l).map(|j| -conn[l - j].clone()).collect();
        Lrs {
            coeffs,
            initials: s[..l].to_vec(),
        }
    }

    pub fn minimal_depth(&self) -> Self {
        Self::from_terms(&self.terms(2 * self.depth()))
    }

    /// `(u_{n+t})ₙ` under the same recurrence.
    pub fn shift(&self, t: u64) -> Self {
        let k = self.depth();
        let initials = if t < ITERATE_LIMIT {
            self.terms(t as usize + k).split_off(t as usize)
        } else {
            let f = self.to_matrix_form();
            let w = f.m.pow(t).and_then(|p| p.mul_vec(&f.v)).expect("consistent dimensions");
            w.0.into_iter().rev().collect()
        };
        Lrs {
            coeffs: self.coeffs.clone(),
            initials,
        }
    }

    /// Index of the first zero among `u_0..=u_bound`. Terms are screened
    /// modulo two large primes and candidates confirmed exactly.
    pub fn first_zero_up_to(&self, bound: u64) -> Option<u64> {
        let residues: Option<Vec<(Vec<u64>, Vec<u64>, u64)>> = SCREEN_PRIMES
            .iter()
            .map(|&p| {
                let c = self.coeffs.iter().map(|a| to_mod(a, p)).collect::<Option<Vec<_>>>()?;
                let w = self.initials.iter().map(|a| to_mod(a, p)).collect::<Option<Vec<_>>>()?;
                Some((c, w, p))
            })
            .collect();
        let Some(mut residues) = residues else {
            return self.zeros_up_to(bound).first().copied();
        };
        let k = self.depth();
        for n in 0..=bound {
            let idx = (n as usize) % k;
            let mut all_zero = true;
            for (c, w, p) in residues.iter_mut() {
                if n >= k as u64 {
                    // w holds u_{n−k}..u_{n−1} cyclically starting at idx
                    let mut acc: u128 = 0;
                    for (j, a) in c.iter().enumerate() {
                        acc = (acc + *a as u128 * w[(idx + j) % k] as u128) % *p as u128;
                    }
                    w[idx] = acc as u64;
                }
                all_zero &= w[idx] == 0;
            }
            if all_zero && self.eval(n).is_zero() {
                return Some(n);
            }
        }
        None
    }

    /// Period of the sequence modulo the prime `p` and the residues below it
    /// where the term vanishes mod `p`. `None` when `p` divides a denominator or
    /// `a₀`, or when the period exceeds `cap`.
    pub fn zero_residues_mod(&self, p: u64, cap: u64) -> Option<(u64, Vec<u64>)> {
        let c = self.coeffs.iter().map(|a| to_mod(a, p)).collect::<Option<Vec<_>>>()?;
        if c[0] == 0 {
            return None;
        }
        let start = self.initials.iter().map(|a| to_mod(a, p)).collect::<Option<Vec<_>>>()?;
        let mut w = start.clone();
        let mut zeros = Vec::new();
        for n in 0..cap {
            if w[0] == 0 {
                zeros.push(n);
            }
            let next = c.iter().zip(&w).fold(0u128, |acc, (a, x)| (acc + *a as u128 * *x as u128) % p as u128) as u64;
            w.rotate_left(1);
            *w.last_mut().expect("depth at least one") = next;
            if w == start {
                return Some((n + 1, zeros));
            }
        }
        None
    }

    /// All zeros `n ≤ bound`.
    pub fn zeros_up_to(&self, bound: u64) -> Vec<u64> {
        self.terms(bound as usize + 1)
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_zero())
            .map(|(i, _)| i as u64)
            .collect()
    }
}

/// Connection polynomial `1 + c₁x + ··· + c_Lx^L` of the shortest linear
/// recurrence `sₙ + c₁s_{n−1} + ··· + c_Ls_{n−L} = 0`; the result has length `L + 1`.
fn berlekamp_massey(s: &[Rational]) -> Vec<Rational> {
    let mut c = vec![Rational::one()];
    let mut b = vec![Rational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = Rational::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l {
            if let Some(ci) = c.get(i) {
                d += ci * &s[n - i];
            }
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &bd;
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, Rational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, Rational::zero());
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use proptest::prelude::*;

    fn fib() -> Lrs {
        Lrs::from_ints(&[1, 1], &[1, 1]).unwrap()
    }

    fn sixes() -> Lrs {
        Lrs::from_ints(&[-6, 5], &[1, 0]).unwrap()
    }

    #[test]
    fn residues_modulo_small_primes() {
        let fib = Lrs::from_ints(&[1, 1], &[0, 1]).unwrap();
        assert_eq!(fib.zero_residues_mod(2, 100), Some((3, vec![0])));
        assert_eq!(fib.zero_residues_mod(5, 100), Some((20, vec![0, 5, 10, 15])));
        // a₀ ≡ 0 (mod 2) leaves the sequence only eventually periodic
        assert_eq!(Lrs::from_ints(&[2, 1], &[1, 1]).unwrap().zero_residues_mod(2, 100), None);
        assert_eq!(fib.zero_residues_mod(7, 5), None);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(fib().eval(5), int(8));
        assert_eq!(Lrs::zero().eval(17), int(0));
        assert_eq!(sixes().eval(2), int(-6));
        let big = sixes().eval(5000);
        let expect = Rational::from_integer(num_bigint::BigInt::from(3) * num_bigint::BigInt::from(2).pow(5000) - num_bigint::BigInt::from(2) * num_bigint::BigInt::from(3).pow(5000));
        assert_eq!(big, expect);
    }

    #[test]
    fn matrix_form_examples() {
        let f = fib().to_matrix_form();
        assert_eq!(f.m, fib().companion());
        assert_eq!(f.m.to_rows(), vec![vec![int(1), int(1)], vec![int(1), int(0)]]);
        for n in 0..=6 {
            assert_eq!(f.term(n).unwrap(), fib().eval(n));
        }
        let g = LrsMatrixForm {
            u: Vector(vec![int(1)]),
            m: Matrix::from_rows(vec![vec![int(2)]]).unwrap(),
            v: Vector(vec![int(1)]),
        };
        let l = Lrs::from_matrix_form(&g).unwrap();
        assert_eq!(l, Lrs::from_ints(&[2], &[1]).unwrap());
        let rt = Lrs::from_matrix_form(&sixes().to_matrix_form()).unwrap();
        assert_eq!(rt.terms(5), sixes().terms(5));
    }

    #[test]
    fn minimal_depth_examples() {
        let p = Lrs::from_ints(&[-2, 3], &[1, 2]).unwrap().minimal_depth();
        assert_eq!(p, Lrs::from_ints(&[2], &[1]).unwrap());
        assert_eq!(fib().minimal_depth(), fib());
        assert_eq!(Lrs::from_ints(&[3, 1, 4], &[0, 0, 0]).unwrap().minimal_depth(), Lrs::zero());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(fib().shift(1).initials(), &[int(1), int(2)]);
        assert_eq!(fib().shift(0), fib());
        assert!(Lrs::zero().shift(9).is_zero());
        assert_eq!(fib().shift(5000).initials()[0], fib().eval(5000));
    }

    #[test]
    fn screened_scan_matches_exact() {
        let s = Lrs::new(vec![crate::scalar::rat(-1, 3), crate::scalar::rat(4, 3)], vec![int(3), int(1)]).unwrap();
        assert_eq!(s.first_zero_up_to(300), s.zeros_up_to(300).first().copied());
        let late = Lrs::from_ints(&[-1, 2], &[-4000, -3999]).unwrap();
        assert_eq!(late.first_zero_up_to(5000), Some(4000));
    }

    #[test]
    fn zero_scans() {
        assert_eq!(sixes().first_zero_up_to(100), Some(1));
        assert_eq!(Lrs::from_ints(&[-6, 5], &[2, 5]).unwrap().first_zero_up_to(100), None);
        assert_eq!(Lrs::from_ints(&[1, 0], &[2, 0]).unwrap().zeros_up_to(6), vec![1, 3, 5]);
        assert_eq!(Lrs::from_ints(&[0, 1], &[2, 0]).unwrap().first_zero_up_to(10), Some(1));
    }

    #[test]
    fn json_round_trip() {
        let j = serde_json::to_string(&sixes()).unwrap();
        assert_eq!(j, r#"{"coeffs":["-6","5"],"initials":["1","0"]}"#);
        assert_eq!(serde_json::from_str::<Lrs>(&j).unwrap(), sixes());
        assert!(serde_json::from_str::<Lrs>(r#"{"coeffs":[],"initials":[]}"#).is_err());
    }

    fn any_lrs() -> impl Strategy<Value = Lrs> {
        (1usize..=4).prop_flat_map(|k| {
            (
                proptest::collection::vec((-3i64..=3, 1i64..=2), k),
                proptest::collection::vec(-3i64..=3, k),
            )
                .prop_map(|(c, i)| {
                    Lrs::new(
                        c.into_iter().map(|(n, d)| crate::scalar::rat(n, d)).collect(),
                        i.into_iter().map(int).collect(),
                    )
                    .unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn iteration_matches_matrix_form(s in any_lrs()) {
            let f = s.to_matrix_form();
            let t = s.terms(51);
            prop_assert_eq!(f.terms(51).unwrap(), t.clone());
            for n in [0u64, 7, 50] {
                prop_assert_eq!(f.term(n).unwrap(), t[n as usize].clone());
            }
        }

        #[test]
        fn minimal_depth_is_equivalent(s in any_lrs()) {
            let m = s.minimal_depth();
            prop_assert!(m.depth() <= s.depth());
            prop_assert_eq!(m.terms(4 * s.depth() + 4), s.terms(4 * s.depth() + 4));
        }

        #[test]
        fn round_trip_through_matrix_form(s in any_lrs()) {
            let r = Lrs::from_matrix_form(&s.to_matrix_form()).unwrap();
            prop_assert_eq!(r.terms(3 * s.depth() + 3), s.terms(3 * s.depth() + 3));
        }

        #[test]
        fn window_of_zeros_forces_zero(s in any_lrs(), start in 0usize..6) {
            let k = s.depth();
            let t = s.terms(start + k + 20);
            if t[start..start + k].iter().all(Zero::is_zero) && !s.coeffs()[0].is_zero() {
                prop_assert!(t.iter().all(Zero::is_zero));
            }
            if t[start..start + k].iter().all(Zero::is_zero) {
                prop_assert!(t[start..].iter().all(Zero::is_zero));
            }
        }
    }
}
