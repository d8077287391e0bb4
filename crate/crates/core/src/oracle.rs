//! Exhaustive brute-force scans used as ground truth.
//!
//! Every matrix is first scaled by the common denominator of its entries;
//! the scaled products vanish exactly when the original ones do, and integer
//! arithmetic avoids renormalizing fractions at every step.

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{serde_matrix, Matrix, Vector};
use crate::scalar::{common_denominator, serde_rational};
use crate::{RationalMatrix, RationalVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Exponent tuples with a zero product, in lexicographic order.
    pub witnesses: Vec<Vec<u64>>,
    pub searched_bounds: Vec<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Input of [`brute_mortality`]: `{"matrices": [M₁, M₂, …]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MortalityInstance {
    #[serde(with = "serde_matrix::vec")]
    pub matrices: Vec<RationalMatrix>,
}

/// Input of [`brute_zero_pairs`]: `{"u": […], "A": …, "B": …, "v": […]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairsInstance {
    #[serde(with = "vector")]
    pub u: RationalVector,
    #[serde(rename = "A", with = "serde_matrix")]
    pub a: RationalMatrix,
    #[serde(rename = "B", with = "serde_matrix")]
    pub b: RationalMatrix,
    #[serde(with = "vector")]
    pub v: RationalVector,
}

mod vector {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &RationalVector, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rational::vec::serialize(&v.0, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<RationalVector, D::Error> {
        serde_rational::vec::deserialize(d).map(Vector)
    }
}

fn integral(m: &RationalMatrix) -> Matrix<BigInt> {
    let d = common_denominator(m.entries());
    let data = m.entries().iter().map(|x| (x * &d).to_integer()).collect();
    Matrix::new(m.rows(), m.cols(), data).expect("same shape")
}

fn integral_vec(v: &RationalVector) -> Vector<BigInt> {
    let d = common_denominator(&v.0);
    Vector(v.0.iter().map(|x| (x * &d).to_integer()).collect())
}

fn check_square_family(mats: &[RationalMatrix]) -> Result<usize> {
    let first = mats.first().ok_or_else(|| Error::InvalidInput("no matrices".into()))?;
    let k = first.rows();
    if let Some(m) = mats.iter().find(|m| m.rows() != k || m.cols() != k) {
        return Err(Error::DimensionMismatch(format!("expected {k}x{k}, found {}x{}", m.rows(), m.cols())));
    }
    Ok(k)
}

/// Visits exponent tuples within `caps` in lexicographic order, passing
/// each one whose product vanishes to `visit`.
fn scan<F>(mats: &[Matrix<BigInt>], caps: &[u64], visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[u64]) -> ControlFlow<()>,
{
    let k = mats[0].rows();
    let mut exps = Vec::with_capacity(mats.len());
    walk(mats, caps, &Matrix::identity(k), &mut exps, visit)
}

fn walk<F>(mats: &[Matrix<BigInt>], caps: &[u64], prefix: &Matrix<BigInt>, exps: &mut Vec<u64>, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[u64]) -> ControlFlow<()>,
{
    let depth = exps.len();
    if depth == mats.len() {
        return if prefix.is_zero() { visit(exps) } else { ControlFlow::Continue(()) };
    }
    if prefix.is_zero() {
        // every completion vanishes
        return complete_all(caps, exps, visit);
    }
    let mut running = prefix.clone();
    for e in 0..=caps[depth] {
        if e > 0 {
            running = running.mul(&mats[depth]).expect("square");
        }
        exps.push(e);
        let flow = walk(mats, caps, &running, exps, visit);
        exps.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

fn complete_all<F>(caps: &[u64], exps: &mut Vec<u64>, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[u64]) -> ControlFlow<()>,
{
    if exps.len() == caps.len() {
        return visit(exps);
    }
    for e in 0..=caps[exps.len()] {
        exps.push(e);
        let flow = complete_all(caps, exps, visit);
        exps.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

/// All tuples `(m₁, …, m_t)` with `mᵢ ≤ caps[i]` and `A₁^{m₁}⋯A_t^{m_t} = O`.
pub fn brute_mortality(mats: &[RationalMatrix], caps: &[u64]) -> Result<OracleReport> {
    check_square_family(mats)?;
    if caps.len() != mats.len() {
        return Err(Error::DimensionMismatch(format!("{} caps for {} matrices", caps.len(), mats.len())));
    }
    let start = Instant::now();
    let ints: Vec<_> = mats.iter().map(integral).collect();
    let mut witnesses = Vec::new();
    let _ = scan(&ints, caps, &mut |e| {
        witnesses.push(e.to_vec());
        ControlFlow::Continue(())
    });
    let report = OracleReport { witnesses, searched_bounds: caps.to_vec(), elapsed: start.elapsed() };
    debug_assert!(report.witnesses.iter().take(64).all(|w| is_mortal(mats, w).unwrap_or(false)));
    Ok(report)
}

/// Lexicographically least tuple within `caps` with a zero product.
pub fn first_mortal(mats: &[RationalMatrix], caps: &[u64]) -> Result<Option<Vec<u64>>> {
    check_square_family(mats)?;
    if caps.len() != mats.len() {
        return Err(Error::DimensionMismatch(format!("{} caps for {} matrices", caps.len(), mats.len())));
    }
    let ints: Vec<_> = mats.iter().map(integral).collect();
    let mut found = None;
    let _ = scan(&ints, caps, &mut |e| {
        found = Some(e.to_vec());
        ControlFlow::Break(())
    });
    Ok(found)
}

/// Exact check of `A₁^{m₁}⋯A_t^{m_t} = O`.
pub fn is_mortal(mats: &[RationalMatrix], exps: &[u64]) -> Result<bool> {
    check_square_family(mats)?;
    if exps.len() != mats.len() {
        return Err(Error::DimensionMismatch(format!("{} exponents for {} matrices", exps.len(), mats.len())));
    }
    let k = mats[0].rows();
    let mut acc = Matrix::<BigInt>::identity(k);
    for (m, &e) in mats.iter().zip(exps) {
        acc = acc.mul(&integral(m).pow(e)?)?;
        if acc.is_zero() {
            return Ok(true);
        }
    }
    Ok(acc.is_zero())
}

/// All `(n, m)` with `n ≤ N`, `m ≤ M` and `uᵀAⁿBᵐv = 0`, lexicographically.
pub fn brute_zero_pairs(
    u: &RationalVector,
    a: &RationalMatrix,
    b: &RationalMatrix,
    v: &RationalVector,
    (cap_n, cap_m): (u64, u64),
) -> Result<Vec<(u64, u64)>> {
    let k = check_square_family(&[a.clone(), b.clone()])?;
    if u.len() != k || v.len() != k {
        return Err(Error::DimensionMismatch(format!("vectors of length {} and {} for {k}x{k} matrices", u.len(), v.len())));
    }
    let (ai, bi) = (integral(a), integral(b));
    let mut rows = Vec::with_capacity(cap_n as usize + 1);
    let mut row = integral_vec(u);
    for n in 0..=cap_n {
        if n > 0 {
            row = ai.vec_mul(&row)?;
        }
        rows.push(row.clone());
    }
    let mut cols = Vec::with_capacity(cap_m as usize + 1);
    let mut col = integral_vec(v);
    for m in 0..=cap_m {
        if m > 0 {
            col = bi.mul_vec(&col)?;
        }
        cols.push(col.clone());
    }
    let mut out = Vec::new();
    for (n, r) in rows.iter().enumerate() {
        for (m, c) in cols.iter().enumerate() {
            if r.dot(c)?.is_zero() {
                out.push((n as u64, m as u64));
            }
        }
    }
    Ok(out)
}
