//! Deciding whether a linear recurrence vanishes, and describing its zero set.
//!
//! Supported exactly: every root rational (any depth), and depth two with
//! conjugate irrational or complex roots. Anything else falls back to a
//! bounded search that can only report a witness or give up.

mod quadratic;
mod rational;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::lrs::Lrs;
use crate::poly::factor_over_rationals;
use crate::semilinear::SemilinearSet;
use crate::{Rational, SearchConfig};

/// `Ok(Some(n))`: least zero; `Ok(None)`: no zero; `Err`: outside the class.
type Decision = Result<Option<u64>, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SkolemOutcome {
    Empty,
    NonEmpty { witness: u64 },
    Undecided { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum ZeroSetOutcome {
    Described { zero_set: SemilinearSet },
    Undecided { reason: String },
}

/// `u_{i+mL}` for `i < L`; each class is identically zero or has finitely
/// many zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SmlSplit {
    pub period: u64,
    pub subsequences: Vec<Lrs>,
}

impl SmlSplit {
    pub fn everywhere_zero(&self, i: usize) -> bool {
        self.subsequences[i].is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SmlOutcome {
    Split(SmlSplit),
    Undecided(String),
}

/// Minimal recurrence with the zero root split off: the first `j` terms are
/// transients, and from index `j` on the sequence follows `tail` (absent when
/// it vanishes from `j` on).
struct Stripped {
    minimal: Lrs,
    j: u64,
    tail: Option<Lrs>,
}

fn strip_zero_root(s: &Lrs) -> Stripped {
    let minimal = s.minimal_depth();
    let k = minimal.depth();
    let j = minimal.char_poly().x_adic_order();
    let tail = if j == 0 {
        Some(minimal.clone())
    } else if j == k {
        None
    } else {
        let shifted = minimal.shift(j as u64);
        Some(
            Lrs::new(minimal.coeffs()[j..].to_vec(), shifted.initials()[..k - j].to_vec())
                .expect("matching lengths"),
        )
    };
    Stripped {
        minimal,
        j: j as u64,
        tail,
    }
}

enum RootClass {
    Rational(Vec<Rational>),
    Quadratic,
}

fn classify(t: &Lrs) -> Result<RootClass, String> {
    let fac = factor_over_rationals(&t.char_poly()).map_err(|e| e.to_string())?;
    if fac.factors.iter().all(|(p, _)| p.degree() == Some(1)) {
        return Ok(RootClass::Rational(fac.factors.iter().map(|(p, _)| -p.coeff(0)).collect()));
    }
    if t.depth() == 2 {
        return Ok(RootClass::Quadratic);
    }
    Err(format!(
        "depth {} with irrational characteristic roots is outside the supported classes",
        t.depth()
    ))
}

fn least_zero_nonzero_roots(t: &Lrs, cfg: &SearchConfig) -> Decision {
    match classify(t)? {
        RootClass::Rational(roots) => rational::least_zero(t, &roots),
        RootClass::Quadratic => quadratic::least_zero(t, cfg.witness_cap),
    }
}

pub fn sml_decompose(s: &Lrs) -> SmlOutcome {
    if s.is_zero() {
        return SmlOutcome::Split(SmlSplit {
            period: 1,
            subsequences: vec![Lrs::zero()],
        });
    }
    let st = strip_zero_root(s);
    let period = match &st.tail {
        None => Ok(1),
        Some(t) => classify(t).and_then(|c| match c {
            RootClass::Rational(roots) => Ok(rational::rational_period(&roots)),
            RootClass::Quadratic => quadratic::roots(t).and_then(|r| quadratic::period(&r)),
        }),
    };
    match period {
        Ok(period) => SmlOutcome::Split(SmlSplit {
            period,
            subsequences: (0..period).map(|i| rational::subsequence(s, period, i)).collect(),
        }),
        Err(reason) => SmlOutcome::Undecided(reason),
    }
}

pub fn skolem_decide(s: &Lrs, cfg: &SearchConfig) -> SkolemOutcome {
    let outcome = decide_unchecked(s, cfg);
    if let SkolemOutcome::NonEmpty { witness } = outcome {
        if !s.eval(witness).is_zero() {
            return SkolemOutcome::Undecided {
                reason: format!("witness {witness} failed exact re-evaluation"),
            };
        }
    }
    outcome
}

fn decide_unchecked(s: &Lrs, cfg: &SearchConfig) -> SkolemOutcome {
    if s.is_zero() {
        return SkolemOutcome::NonEmpty { witness: 0 };
    }
    let st = strip_zero_root(s);
    if let Some(n) = (0..st.j).find(|&n| st.minimal.eval(n).is_zero()) {
        return SkolemOutcome::NonEmpty { witness: n };
    }
    let Some(tail) = st.tail else {
        return SkolemOutcome::NonEmpty { witness: st.j };
    };
    match least_zero_nonzero_roots(&tail, cfg) {
        Ok(Some(x)) => SkolemOutcome::NonEmpty { witness: st.j + x },
        Ok(None) => SkolemOutcome::Empty,
        Err(reason) => match s.first_zero_up_to(cfg.witness_cap) {
            Some(n) => SkolemOutcome::NonEmpty { witness: n },
            None if modular_obstruction(&tail).is_some() => SkolemOutcome::Empty,
            None => SkolemOutcome::Undecided {
                reason: format!("{reason}; no zero up to {}", cfg.witness_cap),
            },
        },
    }
}

/// Primes tried when looking for a modulus at which the sequence never vanishes.
const OBSTRUCTION_PRIMES: [u64; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
/// Longest period followed per prime.
const OBSTRUCTION_PERIOD_CAP: u64 = 200_000;

/// Longest common period over which residue patterns of several primes are combined.
const OBSTRUCTION_LCM_CAP: u64 = 1_000_000;

/// Proves the sequence has no zeros: every zero must vanish modulo each
/// prime, so the zero residues of several primes are intersected over their
/// common period. Returns the primes used when the intersection is empty.
fn modular_obstruction(t: &Lrs) -> Option<Vec<u64>> {
    let mut period = 1u64;
    let mut alive = vec![true];
    let mut used = Vec::new();
    for p in OBSTRUCTION_PRIMES {
        let Some((q, zeros)) = t.zero_residues_mod(p, OBSTRUCTION_PERIOD_CAP) else { continue };
        let l = num_integer::lcm(period, q);
        if l > OBSTRUCTION_LCM_CAP {
            continue;
        }
        let mut hit = vec![false; q as usize];
        for z in zeros {
            hit[z as usize] = true;
        }
        alive = (0..l).map(|r| alive[(r % period) as usize] && hit[(r % q) as usize]).collect();
        period = l;
        used.push(p);
        if !alive.contains(&true) {
            return Some(used);
        }
    }
    None
}

/// Zeros of a class with finitely many of them: repeatedly ask for the least
/// zero of the sequence shifted past the zeros found so far.
fn finite_zeros(class: &Lrs, cfg: &SearchConfig) -> Result<Vec<u64>, String> {
    let mut zeros = Vec::new();
    let mut shift = 0u64;
    for _ in 0..cfg.witness_cap {
        match skolem_decide(&class.shift(shift), cfg) {
            SkolemOutcome::NonEmpty { witness } => {
                zeros.push(shift + witness);
                shift += witness + 1;
            }
            SkolemOutcome::Empty => return Ok(zeros),
            SkolemOutcome::Undecided { reason } => return Err(reason),
        }
    }
    Err(format!("more than {} zeros in one residue class", cfg.witness_cap))
}

pub fn skolem_zero_set(s: &Lrs, cfg: &SearchConfig) -> ZeroSetOutcome {
    match zero_set_unchecked(s, cfg) {
        Ok(set) => {
            let brute = s.terms(cfg.verify_cap as usize + 1);
            match brute.iter().enumerate().find(|(n, x)| set.contains(*n as u64) != x.is_zero()) {
                None => ZeroSetOutcome::Described { zero_set: set },
                Some((n, _)) => ZeroSetOutcome::Undecided {
                    reason: format!("description disagrees with direct evaluation at {n}"),
                },
            }
        }
        Err(reason) => ZeroSetOutcome::Undecided { reason },
    }
}

fn zero_set_unchecked(s: &Lrs, cfg: &SearchConfig) -> Result<SemilinearSet, String> {
    if s.is_zero() {
        return Ok(SemilinearSet::naturals());
    }
    let st = strip_zero_root(s);
    let prefix = SemilinearSet::from_finite((0..st.j).filter(|&n| st.minimal.eval(n).is_zero()));
    let Some(tail) = st.tail else {
        return Ok(prefix.union_capped(&SemilinearSet::tail(st.j), cfg.lcm_cap));
    };
    let split = match sml_decompose(&tail) {
        SmlOutcome::Split(split) => split,
        SmlOutcome::Undecided(_) if modular_obstruction(&tail).is_some() => return Ok(prefix),
        SmlOutcome::Undecided(reason) => return Err(reason),
    };
    let mut set = prefix;
    for (i, class) in split.subsequences.iter().enumerate() {
        let zeros = if class.is_zero() {
            SemilinearSet::naturals()
        } else {
            SemilinearSet::from_finite(finite_zeros(class, cfg)?)
        };
        let placed = zeros.affine_image(st.j + i as u64, split.period);
        set = set.union_capped(&placed, cfg.lcm_cap);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    fn lrs(c: &[i64], i: &[i64]) -> Lrs {
        Lrs::from_ints(c, i).unwrap()
    }

    #[test]
    fn modular_obstruction_settles_cubic() {
        // x³ = x + 1 is irreducible; this start never vanishes mod 5
        let s = lrs(&[1, 1, 0], &[-2, 1, 2]);
        assert_eq!(skolem_decide(&s, &cfg()), SkolemOutcome::Empty);
        assert_eq!(skolem_zero_set(&s, &cfg()), ZeroSetOutcome::Described { zero_set: SemilinearSet::empty() });
        // zeros mod every small prime: out of reach, witness or not
        let t = lrs(&[1, 1, 0], &[1, 0, 1]);
        assert_eq!(skolem_decide(&t, &cfg()), SkolemOutcome::NonEmpty { witness: 1 });
        assert!(matches!(skolem_zero_set(&t, &cfg()), ZeroSetOutcome::Undecided { .. }));
    }

    #[test]
    fn sml_examples() {
        match sml_decompose(&lrs(&[1, 0], &[2, 0])) {
            SmlOutcome::Split(s) => {
                assert_eq!(s.period, 2);
                assert!(!s.everywhere_zero(0) && s.everywhere_zero(1));
            }
            other => panic!("{other:?}"),
        }
        match sml_decompose(&lrs(&[-6, 5], &[1, 0])) {
            SmlOutcome::Split(s) => assert_eq!(s.period, 1),
            other => panic!("{other:?}"),
        }
        // x³ − 2 has irrational roots
        assert!(matches!(sml_decompose(&lrs(&[2, 0, 0], &[1, 1, 1])), SmlOutcome::Undecided(_)));
        // x² + 1: ratio −1, period 2; x² + x + 1: ratio a primitive cube root, period 3
        match sml_decompose(&lrs(&[-1, 0], &[1, 1])) {
            SmlOutcome::Split(s) => assert_eq!(s.period, 2),
            other => panic!("{other:?}"),
        }
        match sml_decompose(&lrs(&[-1, -1], &[1, 1])) {
            SmlOutcome::Split(s) => assert_eq!(s.period, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn decide_examples() {
        assert_eq!(skolem_decide(&lrs(&[-6, 5], &[1, 0]), &cfg()), SkolemOutcome::NonEmpty { witness: 1 });
        assert_eq!(skolem_decide(&lrs(&[-6, 5], &[2, 5]), &cfg()), SkolemOutcome::Empty);
        assert_eq!(skolem_decide(&lrs(&[-6, 5], &[0, 7]), &cfg()), SkolemOutcome::NonEmpty { witness: 0 });
    }

    #[test]
    fn zero_set_examples() {
        let z = |s: Lrs| match skolem_zero_set(&s, &cfg()) {
            ZeroSetOutcome::Described { zero_set } => zero_set,
            other => panic!("{other:?}"),
        };
        assert_eq!(z(lrs(&[1, 0], &[2, 0])), SemilinearSet::progression(1, 2));
        assert_eq!(z(lrs(&[3, 1], &[0, 0])), SemilinearSet::naturals());
        assert_eq!(z(lrs(&[-6, 5], &[1, 0])), SemilinearSet::singleton(1));
        // transient zero root: 1, 0, 0, ...
        assert_eq!(z(lrs(&[0, 0], &[1, 0])), SemilinearSet::tail(1));
        // uₙ = n − 3 with double root 1
        assert_eq!(z(lrs(&[-1, 2], &[-3, -2])), SemilinearSet::singleton(3));
    }

    #[test]
    fn outside_classes_search_then_give_up() {
        let c = SearchConfig { witness_cap: 200, ..cfg() };
        // 2^⌊n/3⌋ never vanishes, and is never 0 mod 3
        assert_eq!(skolem_decide(&lrs(&[2, 0, 0], &[1, 1, 1]), &c), SkolemOutcome::Empty);
        // past its only zero this cubic still vanishes mod every prime at the
        // residue of index −1, so no certificate exists
        let shifted = lrs(&[1, 1, 0], &[1, 0, 1]).shift(2);
        assert!(matches!(skolem_decide(&shifted, &c), SkolemOutcome::Undecided { .. }));
        assert_eq!(skolem_decide(&lrs(&[2, 0, 0], &[1, 0, 1]), &c), SkolemOutcome::NonEmpty { witness: 1 });
    }

    #[test]
    fn outcome_json() {
        let j = serde_json::to_string(&SkolemOutcome::NonEmpty { witness: 1 }).unwrap();
        assert_eq!(j, r#"{"status":"nonempty","witness":1}"#);
        let j = serde_json::to_string(&ZeroSetOutcome::Described { zero_set: SemilinearSet::singleton(1) }).unwrap();
        assert_eq!(j, r#"{"status":"described","zero_set":{"finite":[1],"progressions":[]}}"#);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(150))]
        #[test]
        fn decisions_agree_with_evaluation(
            c in proptest::collection::vec(-4i64..=4, 1..=3),
            i in proptest::collection::vec(-4i64..=4, 3),
        ) {
            let k = c.len();
            let s = lrs(&c, &i[..k]);
            let small = SearchConfig { witness_cap: 2000, verify_cap: 200, ..cfg() };
            let brute = s.first_zero_up_to(2000);
            match skolem_decide(&s, &small) {
                SkolemOutcome::NonEmpty { witness } => proptest::prop_assert_eq!(Some(witness), brute),
                SkolemOutcome::Empty => proptest::prop_assert_eq!(brute, None),
                SkolemOutcome::Undecided { .. } => {}
            }
            if let ZeroSetOutcome::Described { zero_set } = skolem_zero_set(&s, &small) {
                for n in 0..=200u64 {
                    proptest::prop_assert_eq!(zero_set.contains(n), s.eval(n).is_zero());
                }
            }
        }
    }
}
