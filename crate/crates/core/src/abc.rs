//! Deciding `AᵐBⁿCˡ = O` over ℕ³ for square rational matrices.
//!
//! Each of `A` and `C` is split into an invertible and a nilpotent part.
//! Once an exponent reaches the dimension `k` the nilpotent part is gone,
//! so the problem falls into four regimes (`m` and `ℓ` each below `k` or
//! not), and in every regime the condition on `n` is a finite family of
//! recurrences `uᵀBⁿv = 0`. The answer is the union over the regimes of
//! direct products of semilinear sets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::decomposition::inv_nil_split;
use crate::error::{Error, Result};
use crate::linalg::{serde_matrix, Matrix};
use crate::lrs::{Lrs, LrsMatrixForm};
use crate::oracle::{first_mortal, is_mortal};
use crate::semilinear::{SemilinearSet, TripleSolutionSet};
use crate::skolem::{skolem_zero_set, ZeroSetOutcome};
use crate::{Rational, RationalMatrix, RationalVector, SearchConfig};

pub type Triple = (u64, u64, u64);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbcInstance {
    #[serde(rename = "A", with = "serde_matrix")]
    pub a: RationalMatrix,
    #[serde(rename = "B", with = "serde_matrix")]
    pub b: RationalMatrix,
    #[serde(rename = "C", with = "serde_matrix")]
    pub c: RationalMatrix,
}

impl AbcInstance {
    pub fn new(a: RationalMatrix, b: RationalMatrix, c: RationalMatrix) -> Result<Self> {
        let inst = AbcInstance { a, b, c };
        inst.dim()?;
        Ok(inst)
    }

    /// Common dimension, or an error when the matrices are not all `k×k`.
    pub fn dim(&self) -> Result<usize> {
        let k = self.a.rows();
        for (name, m) in [("A", &self.a), ("B", &self.b), ("C", &self.c)] {
            if m.rows() != k || m.cols() != k {
                return Err(Error::DimensionMismatch(format!("{name} is {}x{}, expected {k}x{k}", m.rows(), m.cols())));
            }
        }
        if k == 0 {
            return Err(Error::InvalidInput("empty matrices".into()));
        }
        Ok(k)
    }

    pub fn matrices(&self) -> [RationalMatrix; 3] {
        [self.a.clone(), self.b.clone(), self.c.clone()]
    }

    pub fn vanishes_at(&self, (m, n, l): Triple) -> Result<bool> {
        is_mortal(&self.matrices(), &[m, n, l])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AbcOutcome {
    #[serde(rename = "sat")]
    Solvable { witness: Triple, solution_set: TripleSolutionSet },
    #[serde(rename = "unsat_certified")]
    UnsolvableCertified,
    Undecided {
        reason: String,
        partial: TripleSolutionSet,
        witness: Option<Triple>,
    },
}

impl AbcOutcome {
    pub fn witness(&self) -> Option<Triple> {
        match self {
            AbcOutcome::Solvable { witness, .. } => Some(*witness),
            AbcOutcome::Undecided { witness, .. } => *witness,
            AbcOutcome::UnsolvableCertified => None,
        }
    }
}

/// Zero sets of `n ↦ uᵀBⁿv`, shared across families with the same minimal recurrence.
struct ZeroSets<'a> {
    b: &'a RationalMatrix,
    cfg: &'a SearchConfig,
    cache: HashMap<Lrs, std::result::Result<SemilinearSet, String>>,
}

impl<'a> ZeroSets<'a> {
    fn new(b: &'a RationalMatrix, cfg: &'a SearchConfig) -> Self {
        ZeroSets { b, cfg, cache: HashMap::new() }
    }

    fn single(&mut self, u: &RationalVector, v: &RationalVector) -> std::result::Result<SemilinearSet, String> {
        if u.is_zero() || v.is_zero() {
            return Ok(SemilinearSet::naturals());
        }
        let form = LrsMatrixForm { u: u.clone(), m: self.b.clone(), v: v.clone() };
        let seq = Lrs::from_matrix_form(&form).map_err(|e| e.to_string())?;
        let cfg = self.cfg;
        self.cache
            .entry(seq)
            .or_insert_with_key(|seq| match skolem_zero_set(seq, cfg) {
                ZeroSetOutcome::Described { zero_set } => Ok(zero_set),
                ZeroSetOutcome::Undecided { reason } => Err(reason),
            })
            .clone()
    }

    /// `{n : uᵢᵀBⁿvⱼ = 0 for all i, j}`.
    fn family(&mut self, rows: &[RationalVector], cols: &[RationalVector]) -> std::result::Result<SemilinearSet, String> {
        let mut acc = SemilinearSet::naturals();
        let mut pending = None;
        for u in rows {
            for v in cols {
                match self.single(u, v) {
                    Ok(z) => {
                        acc = acc.intersect_capped(&z, self.cfg.lcm_cap);
                        if acc.is_empty() {
                            return Ok(acc);
                        }
                    }
                    Err(reason) => {
                        pending.get_or_insert(reason);
                    }
                }
            }
        }
        match pending {
            Some(reason) => Err(reason),
            None => Ok(acc),
        }
    }
}

fn rows_of(m: &RationalMatrix, count: usize) -> Vec<RationalVector> {
    (0..count).map(|i| m.row(i)).collect()
}

fn cols_of(m: &RationalMatrix, count: usize) -> Vec<RationalVector> {
    (0..count).map(|j| m.col(j)).collect()
}

/// Left vectors `eᵢᵀS⁻¹` (i < s) and right vectors `Teⱼ` (j < t) that
/// govern the regime where both outer exponents are at least `k`.
pub fn outer_vectors(a: &RationalMatrix, c: &RationalMatrix) -> Result<(Vec<RationalVector>, Vec<RationalVector>)> {
    let sa = inv_nil_split(a)?;
    let sc = inv_nil_split(c)?;
    Ok((rows_of(&sa.similarity.inverse()?, sa.inv_size()), cols_of(&sc.similarity, sc.inv_size())))
}

/// Full solution set, or the decided part together with a reason.
fn structural(inst: &AbcInstance, k: usize, cfg: &SearchConfig) -> std::result::Result<TripleSolutionSet, (String, TripleSolutionSet)> {
    let mut set = TripleSolutionSet::default();
    let (left, right) = match outer_vectors(&inst.a, &inst.c) {
        Ok(v) => v,
        Err(e) => return Err((format!("invertible/nilpotent split failed: {e}"), set)),
    };
    let k64 = k as u64;
    let a_pows: Vec<RationalMatrix> = (0..k64).map(|m| inst.a.pow(m).expect("square")).collect();
    let c_pows: Vec<RationalMatrix> = (0..k64).map(|l| inst.c.pow(l).expect("square")).collect();
    let mut zeros = ZeroSets::new(&inst.b, cfg);
    let mut reason = None;
    let mut add = |set: &mut TripleSolutionSet, m: SemilinearSet, n: std::result::Result<SemilinearSet, String>, l: SemilinearSet| match n {
        Ok(n) if !n.is_empty() => set.push(m, n, l),
        Ok(_) => {}
        Err(r) => {
            reason.get_or_insert(r);
        }
    };

    let z1 = zeros.family(&left, &right);
    add(&mut set, SemilinearSet::tail(k64), z1, SemilinearSet::tail(k64));
    for m in 0..k {
        for l in 0..k {
            let z2 = zeros.family(&rows_of(&a_pows[m], k), &cols_of(&c_pows[l], k));
            add(&mut set, SemilinearSet::singleton(m as u64), z2, SemilinearSet::singleton(l as u64));
        }
    }
    for l in 0..k {
        let z3 = zeros.family(&left, &cols_of(&c_pows[l], k));
        add(&mut set, SemilinearSet::tail(k64), z3, SemilinearSet::singleton(l as u64));
    }
    for m in 0..k {
        let z4 = zeros.family(&rows_of(&a_pows[m], k), &right);
        add(&mut set, SemilinearSet::singleton(m as u64), z4, SemilinearSet::tail(k64));
    }
    match reason {
        None => Ok(set),
        Some(r) => Err((r, set)),
    }
}

pub fn decide_abc(inst: &AbcInstance, cfg: &SearchConfig) -> Result<AbcOutcome> {
    cfg.validate()?;
    let k = inst.dim()?;
    cfg.check_dim(k)?;
    let cap = cfg.brute_cap;
    let brute = first_mortal(&inst.matrices(), &[cap, cap, cap])?.map(|w| (w[0], w[1], w[2]));

    let (set, reason) = match structural(inst, k, cfg) {
        Ok(set) => (set, None),
        Err((r, partial)) => (partial, Some(r)),
    };
    let witness = match brute.or_else(|| set.sample()) {
        Some(w) if inst.vanishes_at(w)? => Some(w),
        _ => None,
    };
    if let Some(reason) = reason {
        return Ok(AbcOutcome::Undecided { reason, partial: set, witness });
    }
    if set.is_empty() {
        return Ok(match brute {
            None => AbcOutcome::UnsolvableCertified,
            Some(w) => AbcOutcome::Undecided {
                reason: format!("search found {w:?} outside the computed solution set"),
                partial: set,
                witness: Some(w),
            },
        });
    }
    if let Some(w) = brute.filter(|w| !set.contains(*w)) {
        return Ok(AbcOutcome::Undecided {
            reason: format!("search found {w:?} outside the computed solution set"),
            partial: set,
            witness: Some(w),
        });
    }
    for t in set.sample_members(cfg.sample_cap) {
        if !inst.vanishes_at(t)? {
            return Ok(AbcOutcome::Undecided {
                reason: format!("sampled member {t:?} does not vanish"),
                partial: set,
                witness,
            });
        }
    }
    match witness {
        Some(witness) => Ok(AbcOutcome::Solvable { witness, solution_set: set }),
        None => Ok(AbcOutcome::Undecided {
            reason: "solution set has no verifiable member".into(),
            partial: set,
            witness: None,
        }),
    }
}

/// Instance with `A¹BⁿC¹` equal to `uₙ` in its top-right entry and zero elsewhere;
/// more generally `AᵐBⁿCˡ` carries `u_{k−1}^{m−1}·uₙ` for `m, ℓ ≥ 1`.
pub fn skolem_to_abc(s: &Lrs) -> Result<AbcInstance> {
    if s.is_zero() {
        return Err(Error::InvalidInput("sequence is identically zero".into()));
    }
    let k = s.depth();
    let coeffs = s.coeffs();
    if coeffs[0] == Rational::from_integer(0.into()) {
        return Err(Error::InvalidInput("constant coefficient a0 must be nonzero".into()));
    }
    let mut a = Matrix::zeros(k, k);
    for (j, u) in s.initials().iter().rev().enumerate() {
        a[(0, j)] = u.clone();
    }
    let mut b = Matrix::zeros(k, k);
    for i in 0..k {
        b[(i, 0)] = coeffs[k - 1 - i].clone();
        if i + 1 < k {
            b[(i, i + 1)] = Rational::from_integer(1.into());
        }
    }
    let mut c = Matrix::zeros(k, k);
    c[(k - 1, k - 1)] = Rational::from_integer(1.into());
    AbcInstance::new(a, b, c)
}

/// Shifts the sequence by the least `t < k` with `u_{t+k−1} ≠ 0` before
/// building the instance, so `A` is not nilpotent; returns `t` as well.
pub fn skolem_to_abc_shifted(s: &Lrs) -> Result<(AbcInstance, u64)> {
    if s.is_zero() {
        return Err(Error::InvalidInput("sequence is identically zero".into()));
    }
    let k = s.depth() as u64;
    let t = (0..k)
        .find(|&t| !num_traits::Zero::is_zero(&s.eval(t + k - 1)))
        .ok_or_else(|| Error::InvalidInput("k consecutive zero terms with a0 ≠ 0".into()))?;
    Ok((skolem_to_abc(&s.shift(t))?, t))
}

/// Conditions `uᵢᵀA₁^{m₁}⋯A_t^{m_t}vᵢ = 0` equivalent to mortality of
/// `A₀^{m₀}A₁^{m₁}⋯A_t^{m_t}A_{t+1}^{m_{t+1}}` once both outer exponents
/// are at least the dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct MortalitySystem {
    pub conditions: Vec<(RationalVector, RationalVector)>,
    pub inner: Vec<RationalMatrix>,
}

pub fn reduce_bounded_mortality(mats: &[RationalMatrix]) -> Result<MortalitySystem> {
    if mats.len() < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 matrices, got {}", mats.len())));
    }
    let k = mats[0].rows();
    if let Some(m) = mats.iter().find(|m| m.rows() != k || m.cols() != k) {
        return Err(Error::DimensionMismatch(format!("expected {k}x{k}, found {}x{}", m.rows(), m.cols())));
    }
    let (left, right) = outer_vectors(&mats[0], &mats[mats.len() - 1])?;
    let mut conditions = Vec::with_capacity(left.len() * right.len());
    for u in &left {
        for v in &right {
            conditions.push((u.clone(), v.clone()));
        }
    }
    Ok(MortalitySystem { conditions, inner: mats[1..mats.len() - 1].to_vec() })
}

impl MortalitySystem {
    /// Whether every condition holds at the given inner exponents.
    pub fn holds_at(&self, exps: &[u64]) -> Result<bool> {
        if exps.len() != self.inner.len() {
            return Err(Error::DimensionMismatch(format!("{} exponents for {} matrices", exps.len(), self.inner.len())));
        }
        let k = self.inner[0].rows();
        let mut p = Matrix::identity(k);
        for (m, &e) in self.inner.iter().zip(exps) {
            p = p.mul(&m.pow(e)?)?;
        }
        for (u, v) in &self.conditions {
            if !num_traits::Zero::is_zero(&p.vec_mul(u)?.dot(v)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_mortality;
    use crate::scalar::int;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    fn inst(a: &[&[i64]], b: &[&[i64]], c: &[&[i64]]) -> AbcInstance {
        AbcInstance::new(m(a), m(b), m(c)).unwrap()
    }

    #[test]
    fn nilpotent_a_is_solvable() {
        let i = inst(&[&[0, 1], &[0, 0]], &[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]]);
        match decide_abc(&i, &cfg()).unwrap() {
            AbcOutcome::Solvable { witness, solution_set } => {
                assert_eq!(witness, (2, 0, 0));
                assert!(solution_set.contains((5, 17, 3)));
                assert!(!solution_set.contains((1, 4, 4)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identities_are_unsolvable() {
        let id = RationalMatrix::identity(2);
        let i = AbcInstance::new(id.clone(), id.clone(), id).unwrap();
        assert_eq!(decide_abc(&i, &cfg()).unwrap(), AbcOutcome::UnsolvableCertified);
        let json = serde_json::to_string(&AbcOutcome::UnsolvableCertified).unwrap();
        assert_eq!(json, r#"{"status":"unsat_certified"}"#);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(AbcInstance::new(RationalMatrix::identity(2), RationalMatrix::identity(3), RationalMatrix::identity(2)).is_err());
    }

    #[test]
    fn skolem_instance_example() {
        let s = Lrs::from_ints(&[-6, 5], &[1, 0]).unwrap();
        let i = skolem_to_abc(&s).unwrap();
        assert_eq!(i.a, m(&[&[0, 1], &[0, 0]]));
        assert_eq!(i.b, m(&[&[5, 1], &[-6, 0]]));
        assert_eq!(i.c, m(&[&[0, 0], &[0, 1]]));
        assert!(i.vanishes_at((1, 1, 1)).unwrap());
        match decide_abc(&i, &cfg()).unwrap() {
            AbcOutcome::Solvable { witness, .. } => assert_eq!(witness.1, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fibonacci_instance_carries_terms() {
        let fib = Lrs::from_ints(&[1, 1], &[0, 1]).unwrap();
        let i = skolem_to_abc(&fib).unwrap();
        let f = fib.terms(6);
        for n in 0..=5u64 {
            let p = i.a.mul(&i.b.pow(n).unwrap()).unwrap().mul(&i.c).unwrap();
            assert_eq!(p[(0, 1)], f[n as usize]);
            let mut rest = p.clone();
            rest[(0, 1)] = int(0);
            assert!(rest.is_zero());
        }
        // u_{k−1} = F₁ = 1, so higher powers of A keep the same entry
        let p = i.a.pow(3).unwrap().mul(&i.b.pow(4).unwrap()).unwrap().mul(&i.c.pow(2).unwrap()).unwrap();
        assert_eq!(p[(0, 1)], f[4]);
    }

    #[test]
    fn reverse_construction_preconditions() {
        assert!(skolem_to_abc(&Lrs::zero()).is_err());
        assert!(skolem_to_abc(&Lrs::from_ints(&[0, 1], &[1, 1]).unwrap()).is_err());
        let (i, t) = skolem_to_abc_shifted(&Lrs::from_ints(&[-6, 5], &[1, 0]).unwrap()).unwrap();
        assert_eq!(t, 1);
        assert_ne!(i.a[(0, 0)], int(0));
    }

    #[test]
    fn three_matrix_reduction_matches_outer_vectors() {
        let a = m(&[&[1, 1], &[0, 0]]);
        let b = m(&[&[2, 1], &[1, 1]]);
        let c = m(&[&[0, 0], &[1, 1]]);
        let sys = reduce_bounded_mortality(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let (l, r) = outer_vectors(&a, &c).unwrap();
        assert_eq!(sys.conditions.len(), l.len() * r.len());
        assert_eq!(sys.inner, vec![b.clone()]);
        for n in 0..6 {
            let whole = brute_mortality(&[a.clone(), b.clone(), c.clone()], &[2, n, 2]).unwrap();
            assert_eq!(whole.witnesses.contains(&vec![2, n, 2]), sys.holds_at(&[n]).unwrap());
        }
    }

    #[test]
    fn four_matrix_reduction_gives_power_of_two_condition() {
        let a0 = m(&[&[0, 0], &[0, 1]]);
        let a1 = m(&[&[1, 0], &[1, 1]]);
        let a2 = m(&[&[1, 0], &[0, 2]]);
        let a3 = m(&[&[1, 0], &[-1, 0]]);
        let sys = reduce_bounded_mortality(&[a0, a1, a2, a3]).unwrap();
        assert_eq!(sys.conditions.len(), 1);
        let (u, v) = &sys.conditions[0];
        for n in 0..20u64 {
            for k in 0..5u32 {
                let val = sys.inner[0].pow(n).unwrap().mul(&sys.inner[1].pow(k as u64).unwrap()).unwrap().vec_mul(u).unwrap().dot(v).unwrap();
                assert_eq!(num_traits::Zero::is_zero(&val), n == 1 << k);
            }
        }
    }

    #[test]
    fn invertible_outer_pair_uses_every_entry() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let sys = reduce_bounded_mortality(&[a.clone(), a.clone(), a]).unwrap();
        assert_eq!(sys.conditions.len(), 4);
    }

    #[test]
    fn case_one_set_is_independent_of_outer_exponents() {
        let i = inst(&[&[1, 0], &[0, 0]], &[&[0, 1], &[1, 0]], &[&[1, 0], &[0, 0]]);
        let AbcOutcome::Solvable { solution_set, .. } = decide_abc(&i, &cfg()).unwrap() else { panic!() };
        for n in 0..8 {
            let expected = i.vanishes_at((2, n, 2)).unwrap();
            for (mm, l) in [(2, 2), (3, 5), (7, 2), (9, 9)] {
                assert_eq!(solution_set.contains((mm, n, l)), expected);
                assert_eq!(i.vanishes_at((mm, n, l)).unwrap(), expected);
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(60))]
        #[test]
        fn agrees_with_oracle(entries in proptest::collection::vec(-2i64..=2, 12)) {
            let i = inst(&[&entries[0..2], &entries[2..4]], &[&entries[4..6], &entries[6..8]], &[&entries[8..10], &entries[10..12]]);
            let outcome = decide_abc(&i, &cfg()).unwrap();
            let brute = brute_mortality(&i.matrices(), &[6, 6, 6]).unwrap();
            match outcome {
                AbcOutcome::Solvable { witness, solution_set } => {
                    proptest::prop_assert!(i.vanishes_at(witness).unwrap());
                    for mm in 0..=6 { for n in 0..=6 { for l in 0..=6 {
                        let hit = brute.witnesses.contains(&vec![mm, n, l]);
                        proptest::prop_assert_eq!(solution_set.contains((mm, n, l)), hit);
                    }}}
                }
                AbcOutcome::UnsolvableCertified => proptest::prop_assert!(brute.witnesses.is_empty()),
                AbcOutcome::Undecided { reason, .. } => proptest::prop_assert!(false, "undecided: {}", reason),
            }
        }
    }
}
