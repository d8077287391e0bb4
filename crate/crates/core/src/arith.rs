//! Integer helpers: factoring by trial division with a primality fallback,
//! divisor lists and valuations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Trial division runs up to this bound before a primality test is tried.
pub const TRIAL_LIMIT: u64 = 1 << 20;

/// Deterministic Miller-Rabin bases: valid below 3.3·10²⁴.
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn mr_ceiling() -> BigInt {
    "3317044064679887385961981".parse().unwrap()
}

/// Prime factorization of `|n|` in increasing prime order, or `None` when a
/// cofactor is too large to certify. `n = 0` has no factorization.
pub fn factor_integer(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut out = Vec::new();
    if let Some(small) = n.to_u64() {
        return Some(
            factor_u64(small)?
                .into_iter()
                .map(|(p, e)| (BigInt::from(p), e))
                .collect(),
        );
    }
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
            if let Some(small) = n.to_u64() {
                out.extend(factor_u64(small)?.into_iter().map(|(p, e)| (BigInt::from(p), e)));
                return Some(out);
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n.is_one() {
        return Some(out);
    }
    let lim = BigInt::from(TRIAL_LIMIT);
    if n <= &lim * &lim || (n < mr_ceiling() && is_prime_mr(&n)) {
        out.push((n, 1));
        return Some(out);
    }
    None
}

fn factor_u64(mut n: u64) -> Option<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && p.saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if p.saturating_mul(p) > n || is_prime_mr(&BigInt::from(n)) {
            out.push((n, 1));
        } else {
            return None;
        }
    }
    Some(out)
}

fn is_prime_mr(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    for b in MR_BASES {
        let bb = BigInt::from(b);
        if n == &bb {
            return true;
        }
        if (n % &bb).is_zero() {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for b in MR_BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor_u64(n).is_some_and(|f| f.len() == 1 && f[0].1 == 1)
}

/// Positive divisors of `|n|`, ascending.
pub fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let f = factor_integer(n)?;
    let mut divs = vec![BigInt::one()];
    for (p, e) in f {
        let prev = divs.clone();
        let mut pk = BigInt::one();
        for _ in 0..e {
            pk *= &p;
            divs.extend(prev.iter().map(|d| d * &pk));
        }
    }
    divs.sort();
    Some(divs)
}

/// Exponent of `p` in nonzero `n`.
pub fn vp_int(n: &BigInt, p: &BigInt) -> u32 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        n = q;
        e += 1;
    }
}

/// Splits `|n| = f² · s` with `s` squarefree; returns `(f, s)`.
pub fn square_part(n: &BigInt) -> Option<(BigInt, BigInt)> {
    let mut f = BigInt::one();
    let mut s = BigInt::one();
    for (p, e) in factor_integer(n)? {
        f *= num_traits::pow(p.clone(), (e / 2) as usize);
        if e % 2 == 1 {
            s *= p;
        }
    }
    Some((f, s))
}

/// Exact integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn factors_small_and_large() {
        assert_eq!(factor_integer(&b(360)).unwrap(), vec![(b(2), 3), (b(3), 2), (b(5), 1)]);
        assert_eq!(factor_integer(&b(-7)).unwrap(), vec![(b(7), 1)]);
        assert!(factor_integer(&b(1)).unwrap().is_empty());
        let p: BigInt = "1000000000000000003".parse().unwrap();
        assert_eq!(factor_integer(&(&p * 6)).unwrap(), vec![(b(2), 1), (b(3), 1), (p, 1)]);
        assert!(factor_integer(&b(0)).is_none());
    }

    #[test]
    fn refuses_uncertifiable_cofactor() {
        let p: BigInt = "1000000000000000003".parse().unwrap();
        let q: BigInt = "1000000000000000009".parse().unwrap();
        assert!(factor_integer(&(p * q)).is_none());
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(&b(12)).unwrap(), vec![b(1), b(2), b(3), b(4), b(6), b(12)]);
        assert_eq!(divisors(&b(1)).unwrap(), vec![b(1)]);
    }

    #[test]
    fn squarefree_split() {
        assert_eq!(square_part(&b(72)).unwrap(), (b(6), b(2)));
        assert_eq!(square_part(&b(-3)).unwrap(), (b(1), b(3)));
        assert_eq!(exact_sqrt(&b(49)), Some(b(7)));
        assert_eq!(exact_sqrt(&b(50)), None);
    }

    #[test]
    fn valuations() {
        assert_eq!(vp_int(&b(48), &b(2)), 4);
        assert_eq!(vp_int(&b(7), &b(2)), 0);
        assert!(is_prime(97) && !is_prime(91) && !is_prime(1));
    }
}
