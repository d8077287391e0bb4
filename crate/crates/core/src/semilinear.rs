//! Semilinear subsets of ℕ (a finite set plus arithmetic progressions) and
//! finite unions of their triple products.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Default bound on the common period used by canonical normalization.
pub const DEFAULT_LCM_CAP: u64 = 1 << 16;

/// Normalized semilinear set. When the periods have a common multiple within
/// the cap the representation is canonical: every progression shares the
/// least eventual period, starts as early as possible, and the finite part
/// holds exactly the members outside the progressions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemilinearSet {
    finite: Vec<u64>,
    progressions: Vec<(u64, u64)>,
}

fn lcm_capped(a: u64, b: u64, cap: u64) -> Option<u64> {
    let l = (a as u128).lcm(&(b as u128));
    (l <= cap as u128).then_some(l as u64)
}

fn in_progression(n: u64, (o, p): (u64, u64)) -> bool {
    n >= o && (n - o).is_multiple_of(p)
}

impl SemilinearSet {
    pub fn empty() -> Self {
        SemilinearSet {
            finite: Vec::new(),
            progressions: Vec::new(),
        }
    }

    /// All of ℕ.
    pub fn naturals() -> Self {
        Self::progression(0, 1)
    }

    /// `{n : n ≥ k}`.
    pub fn tail(k: u64) -> Self {
        Self::progression(k, 1)
    }

    pub fn singleton(n: u64) -> Self {
        Self::from_finite([n])
    }

    pub fn from_finite<I: IntoIterator<Item = u64>>(items: I) -> Self {
        let set: BTreeSet<u64> = items.into_iter().collect();
        SemilinearSet {
            finite: set.into_iter().collect(),
            progressions: Vec::new(),
        }
    }

    /// `{offset + period·m : m ∈ ℕ}`.
    pub fn progression(offset: u64, period: u64) -> Self {
        assert!(period >= 1, "progression period must be positive");
        SemilinearSet {
            finite: Vec::new(),
            progressions: vec![(offset, period)],
        }
    }

    /// Builds and normalizes with the default cap.
    pub fn new(finite: Vec<u64>, progressions: Vec<(u64, u64)>) -> Self {
        Self::new_capped(finite, progressions, DEFAULT_LCM_CAP)
    }

    pub fn new_capped(finite: Vec<u64>, progressions: Vec<(u64, u64)>, cap: u64) -> Self {
        assert!(progressions.iter().all(|&(_, p)| p >= 1), "progression period must be positive");
        SemilinearSet { finite, progressions }.normalize(cap)
    }

    pub fn finite_part(&self) -> &[u64] {
        &self.finite
    }

    pub fn progressions(&self) -> &[(u64, u64)] {
        &self.progressions
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.progressions.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.progressions.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.finite.binary_search(&n).is_ok() || self.progressions.iter().any(|&pr| in_progression(n, pr))
    }

    pub fn min(&self) -> Option<u64> {
        let a = self.finite.first().copied();
        let b = self.progressions.iter().map(|&(o, _)| o).min();
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    /// Members `≤ bound`, ascending.
    pub fn elements_up_to(&self, bound: u64) -> Vec<u64> {
        let mut out: BTreeSet<u64> = self.finite.iter().copied().filter(|&n| n <= bound).collect();
        for &(o, p) in &self.progressions {
            let mut x = o;
            while x <= bound {
                out.insert(x);
                match x.checked_add(p) {
                    Some(y) => x = y,
                    None => break,
                }
            }
        }
        out.into_iter().collect()
    }

    /// The `count` smallest members (fewer if the set is smaller).
    pub fn first_n(&self, count: usize) -> Vec<u64> {
        let mut out = BTreeSet::new();
        out.extend(self.finite.iter().take(count).copied());
        for &(o, p) in &self.progressions {
            out.extend((0..count as u64).filter_map(|m| o.checked_add(p.checked_mul(m)?)));
        }
        out.into_iter().take(count).collect()
    }

    /// `{i + step·z : z ∈ self}`.
    pub fn affine_image(&self, i: u64, step: u64) -> Self {
        SemilinearSet {
            finite: self.finite.iter().map(|&z| i + step * z).collect(),
            progressions: self.progressions.iter().map(|&(o, p)| (i + step * o, step * p)).collect(),
        }
        .normalize(DEFAULT_LCM_CAP)
    }

    pub fn normalize(self, cap: u64) -> Self {
        let reduced = self.reduce();
        let common = reduced
            .progressions
            .iter()
            .try_fold(1u64, |acc, &(_, p)| lcm_capped(acc, p, cap));
        match common {
            Some(l) if !reduced.progressions.is_empty() => reduced.canonical(l),
            _ => reduced,
        }
    }

    fn canonical(self, l: u64) -> Self {
        let start = self
            .progressions
            .iter()
            .map(|&(o, _)| o)
            .chain(self.finite.iter().map(|&f| f + 1))
            .max()
            .unwrap_or(0);
        let pattern: Vec<bool> = (0..l).map(|r| self.contains(start + r)).collect();
        let period = (1..=l)
            .filter(|p| l.is_multiple_of(*p))
            .find(|&p| (0..l as usize).all(|r| pattern[r] == pattern[r % p as usize]))
            .unwrap_or(l);
        let mut progressions = Vec::new();
        for r in 0..period {
            if !pattern[r as usize] {
                continue;
            }
            let mut s = start + r;
            while s >= period && self.contains(s - period) {
                s -= period;
            }
            progressions.push((s, period));
        }
        progressions.sort_unstable();
        let finite: Vec<u64> = (0..start)
            .filter(|&n| self.contains(n) && !progressions.iter().any(|&pr| in_progression(n, pr)))
            .collect();
        SemilinearSet { finite, progressions }
    }

    /// Normalization without a common period: drop duplicate and subsumed
    /// progressions and absorbed finite elements.
    fn reduce(self) -> Self {
        let mut progs = self.progressions;
        progs.sort_unstable();
        progs.dedup();
        let subsumed = |a: (u64, u64), b: (u64, u64)| a != b && a.1.is_multiple_of(b.1) && in_progression(a.0, b);
        let kept: Vec<(u64, u64)> = progs
            .iter()
            .copied()
            .filter(|&a| !progs.iter().any(|&b| subsumed(a, b)))
            .collect();
        let mut finite = self.finite;
        finite.sort_unstable();
        finite.dedup();
        finite.retain(|&n| !kept.iter().any(|&pr| in_progression(n, pr)));
        SemilinearSet {
            finite,
            progressions: kept,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.union_capped(other, DEFAULT_LCM_CAP)
    }

    pub fn union_capped(&self, other: &Self, cap: u64) -> Self {
        SemilinearSet {
            finite: self.finite.iter().chain(&other.finite).copied().collect(),
            progressions: self.progressions.iter().chain(&other.progressions).copied().collect(),
        }
        .normalize(cap)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.intersect_capped(other, DEFAULT_LCM_CAP)
    }

    pub fn intersect_capped(&self, other: &Self, cap: u64) -> Self {
        let mut finite: Vec<u64> = self.finite.iter().copied().filter(|&n| other.contains(n)).collect();
        finite.extend(other.finite.iter().copied().filter(|&n| self.contains(n)));
        let mut progressions = Vec::new();
        for &a in &self.progressions {
            for &b in &other.progressions {
                if let Some(c) = intersect_progressions(a, b) {
                    progressions.push(c);
                }
            }
        }
        SemilinearSet { finite, progressions }.normalize(cap)
    }
}

/// Chinese remaindering on `x ≡ o₁ (p₁)`, `x ≡ o₂ (p₂)`, `x ≥ max(o₁, o₂)`.
fn intersect_progressions((o1, p1): (u64, u64), (o2, p2): (u64, u64)) -> Option<(u64, u64)> {
    let (o1, p1, o2, p2) = (o1 as i128, p1 as i128, o2 as i128, p2 as i128);
    let eg = p1.extended_gcd(&p2);
    let g = eg.gcd;
    if (o2 - o1) % g != 0 {
        return None;
    }
    let l = p1 / g * p2;
    // x = o1 + p1·t with p1·t ≡ o2 − o1 (mod p2)
    let t = ((o2 - o1) / g % (p2 / g)) * eg.x % (p2 / g);
    let x0 = (o1 + p1 * t).rem_euclid(l);
    let lo = o1.max(o2);
    let x = if x0 >= lo { x0 } else { x0 + (lo - x0 + l - 1) / l * l };
    Some((u64::try_from(x).ok()?, u64::try_from(l).ok()?))
}

/// `⋃ msetᵢ × nsetᵢ × lsetᵢ ⊆ ℕ³`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSolutionSet {
    pub terms: Vec<TripleTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleTerm {
    pub m: SemilinearSet,
    pub n: SemilinearSet,
    pub l: SemilinearSet,
}

impl TripleTerm {
    pub fn is_empty(&self) -> bool {
        self.m.is_empty() || self.n.is_empty() || self.l.is_empty()
    }

    pub fn contains(&self, (m, n, l): (u64, u64, u64)) -> bool {
        self.m.contains(m) && self.n.contains(n) && self.l.contains(l)
    }
}

impl TripleSolutionSet {
    pub fn push(&mut self, m: SemilinearSet, n: SemilinearSet, l: SemilinearSet) {
        self.terms.push(TripleTerm { m, n, l });
    }

    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(TripleTerm::is_empty)
    }

    pub fn contains(&self, t: (u64, u64, u64)) -> bool {
        self.terms.iter().any(|term| term.contains(t))
    }

    /// Least member of the first nonempty term.
    pub fn sample(&self) -> Option<(u64, u64, u64)> {
        let t = self.terms.iter().find(|t| !t.is_empty())?;
        Some((t.m.min()?, t.n.min()?, t.l.min()?))
    }

    /// Up to `count` distinct members, drawn round-robin from the terms.
    pub fn sample_members(&self, count: usize) -> Vec<(u64, u64, u64)> {
        let per_axis = (count as f64).cbrt().ceil() as usize + 1;
        let mut pools: Vec<Vec<(u64, u64, u64)>> = Vec::new();
        for t in self.terms.iter().filter(|t| !t.is_empty()) {
            let (ms, ns, ls) = (t.m.first_n(per_axis), t.n.first_n(per_axis), t.l.first_n(per_axis));
            let mut pool = Vec::new();
            for &m in &ms {
                for &n in &ns {
                    for &l in &ls {
                        pool.push((m, n, l));
                    }
                }
            }
            pools.push(pool);
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let longest = pools.iter().map(Vec::len).max().unwrap_or(0);
        'outer: for i in 0..longest {
            for pool in &pools {
                if let Some(&t) = pool.get(i) {
                    if seen.insert(t) {
                        out.push(t);
                        if out.len() == count {
                            break 'outer;
                        }
                    }
                }
            }
        }
        out
    }
}
