//! Small exact-arithmetic helpers: primality by trial division, modular
//! arithmetic on machine words, and partial factorization of big integers.
//!
//! Everything here is deliberately elementary — the primes this crate
//! touches are small enough that trial division is the honest tool.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Primality by trial division with a 6k±1 wheel. Exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// All primes in the inclusive range `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// `(a * b) mod m` without overflow.
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by square-and-multiply.
pub(crate) fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    debug_assert!(m > 1);
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` mod the prime `p` via Fermat.
pub(crate) fn invmod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

/// Legendre symbol (a/p) for odd prime p: 1 for a nonzero square,
/// -1 for a nonsquare, 0 when p | a. Euler's criterion, exact.
pub(crate) fn legendre(a: u64, p: u64) -> i32 {
    debug_assert!(p > 2 && is_prime(p));
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let e = powmod(a, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, p - 1);
        -1
    }
}

/// Largest prime factor of `n` (n >= 2) by trial division.
pub(crate) fn largest_prime_factor(mut n: u128) -> u64 {
    debug_assert!(n >= 2);
    let mut largest = 0u64;
    for q in [2u128, 3, 5] {
        while n % q == 0 {
            n /= q;
            largest = largest.max(q as u64);
        }
    }
    let mut d = 7u128;
    // 2/4-alternating wheel over numbers coprime to 2 and 3
    let mut step = 4u128;
    while d * d <= n {
        while n % d == 0 {
            n /= d;
            largest = largest.max(d as u64);
        }
        d += step;
        step = 6 - step;
    }
    if n > 1 {
        largest = largest.max(n as u64);
    }
    largest
}

/// Divide out every prime `<= bound` from `|n|`.
///
/// Returns the list of `(prime, exponent)` pairs found (ascending) and the
/// remaining unfactored cofactor of `|n|`. The cofactor is 1 exactly when
/// the factorization is complete.
pub(crate) fn small_prime_factors(n: &BigInt, bound: u64) -> (Vec<(u64, u64)>, BigInt) {
    assert!(!n.is_zero());
    let mut rest = n.abs();
    let mut found = Vec::new();
    for q in primes_in(2, bound) {
        let qb = BigInt::from(q);
        let mut e = 0u64;
        loop {
            let (quot, rem) = num_integer::Integer::div_rem(&rest, &qb);
            if rem.is_zero() {
                rest = quot;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            found.push((q, e));
        }
        if rest == BigInt::from(1) {
            break;
        }
    }
    (found, rest)
}

/// Exponent of the multiplicative group modulo `m`: the least `e` with
/// `u^e ≡ 1` for every unit `u`, computed as the lcm of all unit
/// orders. Brute force, so only sensible for small moduli.
pub(crate) fn unit_group_exponent(m: u64) -> u64 {
    assert!(m > 0 && m <= 1 << 20, "modulus too large for brute force");
    if m <= 2 {
        return 1;
    }
    let mut exponent = 1u64;
    for u in 2..m {
        if num_integer::gcd(u, m) != 1 {
            continue;
        }
        let mut order = 1u64;
        let mut acc = u;
        while acc != 1 {
            acc = mulmod(acc, u, m);
            order += 1;
        }
        exponent = num_integer::lcm(exponent, order);
    }
    exponent
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_cases() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(7919));
        assert!(!is_prime(7917));
        assert!(is_prime(499));
        assert!(!is_prime(1));
    }

    #[test]
    fn prime_window_for_the_theorem_range() {
        // 95 primes below 500, of which 4 are excluded by ell > 7
        assert_eq!(primes_in(11, 499).len(), 91);
        assert_eq!(primes_in(11, 31), vec![11, 13, 17, 19, 23, 29, 31]);
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(powmod(3, 11, 5), 2); // 3^11 = 177147 = 5*35429 + 2
        assert_eq!(invmod_prime(4, 17), 13);
        assert_eq!(mulmod(u64::MAX - 1, u64::MAX - 1, u64::MAX), 1);
        // squares mod 17: i = 4 is a root of -1, so -1 is a QR
        assert_eq!(legendre(16, 17), 1);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(legendre(0, 7), 0);
    }

    #[test]
    fn largest_factor_by_trial_division() {
        assert_eq!(largest_prime_factor(145), 29); // 5 * 29
        assert_eq!(largest_prime_factor(7), 7);
        assert_eq!(largest_prime_factor(2u128.pow(20)), 2);
        assert_eq!(largest_prime_factor(851840), 11); // 2^7 * 5 * 11^3
    }

    #[test]
    fn partial_factorization_tracks_cofactor() {
        let (facs, rest) = small_prime_factors(&BigInt::from(-851840), 11);
        assert_eq!(facs, vec![(2, 7), (5, 1), (11, 3)]);
        assert_eq!(rest, BigInt::from(1));

        // bound too small to finish: cofactor keeps the rest
        let (facs, rest) = small_prime_factors(&BigInt::from(851840), 5);
        assert_eq!(facs, vec![(2, 7), (5, 1)]);
        assert_eq!(rest, BigInt::from(1331));
    }

    #[test]
    fn unit_group_exponents() {
        // (Z/16)* ≅ C2 x C4, (Z/8)* ≅ C2 x C2, (Z/p)* cyclic of order p-1
        assert_eq!(unit_group_exponent(16), 4);
        assert_eq!(unit_group_exponent(8), 2);
        assert_eq!(unit_group_exponent(5), 4);
        assert_eq!(unit_group_exponent(7), 6);
        assert_eq!(unit_group_exponent(9), 6);
        assert_eq!(unit_group_exponent(15), 4);
        assert_eq!(unit_group_exponent(1), 1);
        assert_eq!(unit_group_exponent(2), 1);
    }
}
