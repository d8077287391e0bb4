//! Small linear systems over ℕ (at most three unknowns) with optional
//! congruence constraints.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::Rational;

/// Largest number of points listed for a bounded solution segment.
pub const POINT_CAP: u64 = 100_000;
/// Largest search box used for minimal solutions of one equation in three unknowns.
pub const BOX_CAP: u64 = 8_000_000;

/// `Σ coeffs[i]·x[i] = rhs`, or `≡ rhs (mod modulus)` when a modulus is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<BigInt>,
    pub rhs: BigInt,
    pub modulus: Option<u64>,
}

impl LinearConstraint {
    pub fn equation(coeffs: Vec<BigInt>, rhs: BigInt) -> Self {
        LinearConstraint { coeffs, rhs, modulus: None }
    }

    pub fn congruence(coeffs: Vec<BigInt>, rhs: BigInt, modulus: u64) -> Self {
        LinearConstraint { coeffs, rhs, modulus: Some(modulus) }
    }

    pub fn from_ints(coeffs: &[i64], rhs: i64, modulus: Option<u64>) -> Self {
        LinearConstraint { coeffs: coeffs.iter().map(|&c| c.into()).collect(), rhs: rhs.into(), modulus }
    }

    pub fn holds(&self, x: &[u64]) -> bool {
        let lhs: BigInt = self.coeffs.iter().zip(x).map(|(c, &v)| c * BigInt::from(v)).sum();
        match self.modulus {
            None => lhs == self.rhs,
            Some(m) => (lhs - &self.rhs).mod_floor(&BigInt::from(m)).is_zero(),
        }
    }
}

/// `{base + Σ tⱼ·periods[j] : tⱼ ∈ ℕ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSet {
    pub base: Vec<u64>,
    pub periods: Vec<Vec<u64>>,
}

impl LinearSet {
    pub fn point(base: Vec<u64>) -> Self {
        LinearSet { base, periods: Vec::new() }
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        if x.len() != self.base.len() || x.iter().zip(&self.base).any(|(a, b)| a < b) {
            return false;
        }
        let rest: Vec<u64> = x.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        reachable(&rest, &self.periods)
    }

    /// Members with every coordinate at most `bound`.
    pub fn points_up_to(&self, bound: u64) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut stack = vec![(self.base.clone(), 0usize)];
        while let Some((p, from)) = stack.pop() {
            if p.iter().any(|&c| c > bound) {
                continue;
            }
            out.push(p.clone());
            for (j, per) in self.periods.iter().enumerate().skip(from) {
                if per.iter().any(|&c| c > 0) {
                    stack.push((p.iter().zip(per).map(|(a, b)| a + b).collect(), j));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

fn reachable(rest: &[u64], periods: &[Vec<u64>]) -> bool {
    if rest.iter().all(|&c| c == 0) {
        return true;
    }
    let Some((first, others)) = periods.split_first() else {
        return false;
    };
    if first.iter().all(|&c| c == 0) {
        return reachable(rest, others);
    }
    let mut cur = rest.to_vec();
    loop {
        if reachable(&cur, others) {
            return true;
        }
        if cur.iter().zip(first).any(|(a, b)| a < b) {
            return false;
        }
        for (a, b) in cur.iter_mut().zip(first) {
            *a -= b;
        }
    }
}

/// All solutions in ℕᵘ (u ≤ 3) as a finite union of linear sets.
pub fn solve_linear_nat(unknowns: usize, constraints: &[LinearConstraint]) -> Result<Vec<LinearSet>> {
    if !(1..=3).contains(&unknowns) {
        return Err(Error::InvalidInput(format!("{unknowns} unknowns; supported are 1 to 3")));
    }
    if let Some(c) = constraints.iter().find(|c| c.coeffs.len() != unknowns) {
        return Err(Error::DimensionMismatch(format!("constraint has {} coefficients, expected {unknowns}", c.coeffs.len())));
    }
    if constraints.iter().any(|c| c.modulus == Some(0)) {
        return Err(Error::InvalidInput("zero modulus".into()));
    }
    let step = constraints.iter().filter_map(|c| c.modulus).fold(1u64, |a, m| a.lcm(&m));
    if step.checked_pow(unknowns as u32).is_none_or(|n| n > POINT_CAP) {
        return Err(Error::Overflow(format!("congruence modulus {step} too large")));
    }
    let equations: Vec<&LinearConstraint> = constraints.iter().filter(|c| c.modulus.is_none()).collect();
    let congruences: Vec<&LinearConstraint> = constraints.iter().filter(|c| c.modulus.is_some()).collect();

    // x = ρ + step·y for every residue vector ρ meeting the congruences
    let mut out = Vec::new();
    for rho in residue_vectors(unknowns, step) {
        if !congruences.iter().all(|c| c.holds(&rho)) {
            continue;
        }
        let shifted: Vec<(Vec<BigInt>, BigInt)> = equations
            .iter()
            .map(|c| {
                let off: BigInt = c.coeffs.iter().zip(&rho).map(|(a, &r)| a * BigInt::from(r)).sum();
                (c.coeffs.iter().map(|a| a * BigInt::from(step)).collect(), &c.rhs - off)
            })
            .collect();
        for set in solve_equations(unknowns, &shifted)? {
            out.push(LinearSet {
                base: rho.iter().zip(&set.base).map(|(r, b)| r + step * b).collect(),
                periods: set.periods.iter().map(|p| p.iter().map(|c| c * step).collect()).collect(),
            });
        }
    }
    out.sort_by(|a, b| a.base.cmp(&b.base));
    out.dedup();
    Ok(out)
}

fn residue_vectors(unknowns: usize, step: u64) -> Vec<Vec<u64>> {
    let mut all = vec![Vec::new()];
    for _ in 0..unknowns {
        all = all
            .into_iter()
            .flat_map(|v: Vec<u64>| {
                (0..step).map(move |r| {
                    let mut w = v.clone();
                    w.push(r);
                    w
                })
            })
            .collect();
    }
    all
}

fn solve_equations(u: usize, eqs: &[(Vec<BigInt>, BigInt)]) -> Result<Vec<LinearSet>> {
    let rows: Vec<Vec<Rational>> = eqs
        .iter()
        .map(|(c, d)| c.iter().chain(std::iter::once(d)).map(|v| Rational::from_integer(v.clone())).collect())
        .collect();
    let (reduced, pivots) = if rows.is_empty() {
        (Matrix::zeros(0, u + 1), Vec::new())
    } else {
        Matrix::from_rows(rows)?.rref()
    };
    if pivots.contains(&u) {
        return Ok(Vec::new());
    }
    let rank = pivots.len();
    if rank == 0 {
        let periods = (0..u).map(|i| (0..u).map(|j| (i == j) as u64).collect()).collect();
        return Ok(vec![LinearSet { base: vec![0; u], periods }]);
    }
    let mut particular = vec![Rational::zero(); u];
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = reduced[(r, u)].clone();
    }
    match u - rank {
        0 => Ok(to_naturals(&particular).map(LinearSet::point).into_iter().collect()),
        1 => {
            let coeff = reduced.submatrix(0, rank, 0, u);
            let dir = primitive(&coeff.null_space_basis()[0].0);
            solve_line(&particular, &dir)
        }
        _ => {
            let row: Vec<Rational> = (0..=u).map(|j| reduced[(0, j)].clone()).collect();
            let den = crate::scalar::common_denominator(&row);
            let ints: Vec<BigInt> = row.iter().map(|v| (v * Rational::from_integer(den.clone())).to_integer()).collect();
            solve_single(&ints[..u], &ints[u])
        }
    }
}

fn to_naturals(x: &[Rational]) -> Option<Vec<u64>> {
    x.iter().map(|v| if v.is_integer() { v.to_integer().to_u64() } else { None }).collect()
}

/// Integer multiple of `v` with coprime entries.
fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let den = crate::scalar::common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.into_iter().map(|x| x / &g).collect()
}

/// Natural points on `x₀ + t·w`, t ∈ ℚ.
fn solve_line(x0: &[Rational], w: &[BigInt]) -> Result<Vec<LinearSet>> {
    let (i, wi) = w.iter().enumerate().filter(|(_, c)| !c.is_zero()).min_by_key(|(_, c)| c.abs()).expect("nonzero direction");
    let wi_abs = wi.abs().to_u64().ok_or_else(|| Error::Overflow("direction entry too large".into()))?;
    let at = |t: &Rational| -> Vec<Rational> { x0.iter().zip(w).map(|(a, b)| a + t * Rational::from_integer(b.clone())).collect() };
    // integral points, if any, form t₀ + ℤ
    let mut start = None;
    for k in 0..wi_abs {
        let t = (Rational::from_integer(k.into()) - &x0[i]) / Rational::from_integer(wi.clone());
        let p = at(&t);
        if p.iter().all(|v| v.is_integer()) {
            start = Some(p.iter().map(|v| v.to_integer()).collect::<Vec<_>>());
            break;
        }
    }
    let Some(y0) = start else { return Ok(Vec::new()) };
    let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
    for (y, d) in y0.iter().zip(w) {
        if d.is_zero() {
            if y.is_negative() {
                return Ok(Vec::new());
            }
        } else if d.is_positive() {
            let b = (-y).div_ceil(d);
            lo = Some(lo.map_or(b.clone(), |l| l.max(b)));
        } else {
            let b = y.div_floor(&-d);
            hi = Some(hi.map_or(b.clone(), |h| h.min(b)));
        }
    }
    let point = |z: &BigInt| -> Result<Vec<u64>> {
        y0.iter()
            .zip(w)
            .map(|(y, d)| (y + z * d).to_u64().ok_or_else(|| Error::Overflow("solution coordinate too large".into())))
            .collect()
    };
    let abs_dir = || -> Result<Vec<u64>> {
        w.iter().map(|d| d.abs().to_u64().ok_or_else(|| Error::Overflow("period too large".into()))).collect()
    };
    match (lo, hi) {
        (Some(lo), Some(hi)) => {
            if hi < lo {
                return Ok(Vec::new());
            }
            if (&hi - &lo).to_u64().is_none_or(|n| n >= POINT_CAP) {
                return Err(Error::Overflow("too many solutions to list".into()));
            }
            let mut out = Vec::new();
            let mut z = lo;
            while z <= hi {
                out.push(LinearSet::point(point(&z)?));
                z += 1;
            }
            Ok(out)
        }
        (Some(lo), None) => Ok(vec![LinearSet { base: point(&lo)?, periods: vec![abs_dir()?] }]),
        (None, Some(hi)) => Ok(vec![LinearSet { base: point(&hi)?, periods: vec![abs_dir()?] }]),
        (None, None) => unreachable!("direction is nonzero"),
    }
}

/// `c·x = d` over ℕᵘ via minimal solutions inside the component bound
/// `max(|cᵢ|, |d|)`.
fn solve_single(c: &[BigInt], d: &BigInt) -> Result<Vec<LinearSet>> {
    let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !(d % &g).is_zero() {
        return Ok(Vec::new());
    }
    let c: Vec<i128> = c
        .iter()
        .map(|x| (x / &g).to_i128().ok_or_else(|| Error::Overflow("coefficient too large".into())))
        .collect::<Result<_>>()?;
    let d = (d / &g).to_i128().ok_or_else(|| Error::Overflow("right-hand side too large".into()))?;
    let bound = c.iter().map(|x| x.unsigned_abs()).chain([d.unsigned_abs()]).max().unwrap_or(0);
    let u = c.len();
    let free: Vec<bool> = c.iter().map(|&x| x == 0).collect();
    let active = free.iter().filter(|f| !**f).count() as u32;
    let boxed = (bound + 1).checked_pow(active).filter(|&n| n <= BOX_CAP as u128);
    if boxed.is_none() {
        return Err(Error::Overflow(format!("search box with side {bound} too large")));
    }
    let bound = bound as u64;
    let mut homogeneous: Vec<Vec<u64>> = Vec::new();
    let mut particular: Vec<Vec<u64>> = Vec::new();
    let mut x = vec![0u64; u];
    loop {
        let lhs: i128 = c.iter().zip(&x).map(|(a, &b)| a * b as i128).sum();
        if lhs == d {
            particular.push(x.clone());
        }
        if lhs == 0 && x.iter().any(|&v| v > 0) {
            homogeneous.push(x.clone());
        }
        // odometer over the non-free coordinates
        let mut k = 0;
        loop {
            if k == u {
                let mut periods = minimal(homogeneous);
                for (i, &f) in free.iter().enumerate() {
                    if f {
                        periods.push((0..u).map(|j| (i == j) as u64).collect());
                    }
                }
                return Ok(minimal(particular).into_iter().map(|base| LinearSet { base, periods: periods.clone() }).collect());
            }
            if free[k] || x[k] == bound {
                x[k] = 0;
                k += 1;
            } else {
                x[k] += 1;
                break;
            }
        }
    }
}

/// Elements not componentwise above another element.
fn minimal(mut items: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    items.sort_by_key(|v| v.iter().sum::<u64>());
    let mut keep: Vec<Vec<u64>> = Vec::new();
    for v in items {
        if !keep.iter().any(|k| k.iter().zip(&v).all(|(a, b)| a <= b)) {
            keep.push(v);
        }
    }
    keep.sort();
    keep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(c: &[i64], d: i64) -> LinearConstraint {
        LinearConstraint::from_ints(c, d, None)
    }

    fn members(sets: &[LinearSet], bound: u64) -> Vec<Vec<u64>> {
        let mut all: Vec<Vec<u64>> = sets.iter().flat_map(|s| s.points_up_to(bound)).collect();
        all.sort();
        all.dedup();
        all
    }

    fn brute(u: usize, cons: &[LinearConstraint], bound: u64) -> Vec<Vec<u64>> {
        residue_vectors(u, bound + 1).into_iter().filter(|x| cons.iter().all(|c| c.holds(x))).collect()
    }

    #[test]
    fn two_m_plus_three_n() {
        let sets = solve_linear_nat(2, &[eq(&[2, 3], 12)]).unwrap();
        assert_eq!(members(&sets, 100), vec![vec![0, 4], vec![3, 2], vec![6, 0]]);
        assert!(sets.iter().all(|s| s.periods.is_empty()));
    }

    #[test]
    fn rays_and_unique_points() {
        let sets = solve_linear_nat(2, &[eq(&[1, -1], 2)]).unwrap();
        assert_eq!(sets, vec![LinearSet { base: vec![2, 0], periods: vec![vec![1, 1]] }]);
        let sets = solve_linear_nat(2, &[eq(&[1, 1], 3), eq(&[1, -1], 1)]).unwrap();
        assert_eq!(sets, vec![LinearSet::point(vec![2, 1])]);
        assert!(solve_linear_nat(2, &[eq(&[1, 1], 3), eq(&[1, -1], 0)]).unwrap().is_empty());
        assert!(solve_linear_nat(1, &[eq(&[2], 3)]).unwrap().is_empty());
        assert!(solve_linear_nat(2, &[eq(&[0, 0], 1)]).unwrap().is_empty());
    }

    #[test]
    fn congruences_split_residues() {
        let cons = [LinearConstraint::from_ints(&[1, 1], 1, Some(2))];
        let sets = solve_linear_nat(2, &cons).unwrap();
        assert_eq!(members(&sets, 6), brute(2, &cons, 6));
        let evens = solve_linear_nat(1, &[LinearConstraint::from_ints(&[1], 0, Some(2))]).unwrap();
        assert_eq!(evens, vec![LinearSet { base: vec![0], periods: vec![vec![2]] }]);
    }

    #[test]
    fn single_equation_three_unknowns() {
        let cons = [eq(&[1, 1, -2], 1)];
        let sets = solve_linear_nat(3, &cons).unwrap();
        assert_eq!(members(&sets, 8), brute(3, &cons, 8));
        let cons = [eq(&[3, 0, 5], 8)];
        let sets = solve_linear_nat(3, &cons).unwrap();
        assert_eq!(members(&sets, 8), brute(3, &cons, 8));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(solve_linear_nat(4, &[]).is_err());
        assert!(solve_linear_nat(2, &[eq(&[1], 1)]).is_err());
        assert!(solve_linear_nat(1, &[LinearConstraint::from_ints(&[1], 0, Some(0))]).is_err());
    }

    #[test]
    fn membership_agrees_with_listing() {
        let set = LinearSet { base: vec![1, 0], periods: vec![vec![2, 1], vec![0, 3]] };
        for p in set.points_up_to(12) {
            assert!(set.contains(&p));
        }
        assert!(!set.contains(&[0, 0]) && !set.contains(&[2, 0]));
        assert!(set.contains(&[5, 8]));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(120))]
        #[test]
        fn matches_brute_force(
            u in 1usize..=3,
            rows in proptest::collection::vec((proptest::collection::vec(-6i64..=6, 3), -10i64..=10, 0u64..=3), 0..=2),
        ) {
            let cons: Vec<LinearConstraint> = rows
                .iter()
                .map(|(c, d, m)| LinearConstraint::from_ints(&c[..u], *d, if *m >= 2 { Some(*m) } else { None }))
                .collect();
            let sets = solve_linear_nat(u, &cons).unwrap();
            let bound = 7;
            let got: Vec<Vec<u64>> = members(&sets, bound);
            proptest::prop_assert_eq!(got, brute(u, &cons, bound));
        }
    }
}
