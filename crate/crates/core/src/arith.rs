//! Elementary integer arithmetic shared by every other module.
//!
//! Primality and factorization of `u64` values are delegated to `num-prime`;
//! everything else here is small enough to write out.

use std::collections::BTreeMap;

pub use num_integer::{gcd, lcm};

/// `a * b mod m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m`. Returns 0 when `m == 1`.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Reduce a possibly negative integer into `[0, m)`.
#[inline]
pub fn reduce_signed(n: i64, m: u64) -> u64 {
    let r = (n as i128).rem_euclid(m as i128);
    r as u64
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

/// Prime factorization as `(p, a)` pairs in increasing order of `p`.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    if n <= 1 {
        return Vec::new();
    }
    num_prime::nt_funcs::factorize64(n)
        .into_iter()
        .map(|(p, a)| (p, a as u32))
        .collect()
}

pub fn factor_map(n: u64) -> BTreeMap<u64, u32> {
    factorize(n).into_iter().collect()
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Classical Möbius function on positive integers.
pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, a)| a > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All positive divisors of `n`, sorted.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, a) in factorize(n) {
        let current = divs.len();
        let mut pk = 1u64;
        for _ in 0..a {
            pk *= p;
            for i in 0..current {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// `p`-adic valuation of `n` (`n > 0`).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Checked `p^a`.
pub fn checked_pow(p: u64, a: u32) -> Option<u64> {
    p.checked_pow(a)
}

/// Multiplicative order of `a` modulo `m`, given the factorization of a
/// multiple `n` of that order (typically the group order).
pub fn multiplicative_order(a: u64, m: u64, n: u64, n_factors: &[(u64, u32)]) -> u64 {
    let mut order = n;
    for &(q, _) in n_factors {
        while order.is_multiple_of(q) && pow_mod(a, order / q, m) == 1 {
            order /= q;
        }
    }
    order
}

/// Primes up to and including `limit` by a plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::with_capacity(n / 10 + 16);
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Integer square root: largest `r` with `r*r <= n`.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, a)| a == 1)
}

/// Whether `d` is a fundamental discriminant (the discriminant of a quadratic field).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let m4 = d.rem_euclid(4);
    if m4 == 1 {
        return is_squarefree(d.unsigned_abs());
    }
    if m4 == 0 {
        let q = d / 4;
        let r = q.rem_euclid(4);
        return (r == 2 || r == 3) && is_squarefree(q.unsigned_abs());
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_helpers() {
        assert_eq!(pow_mod(2, 10, 1000), 24);
        assert_eq!(pow_mod(5, 0, 1), 0);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(reduce_signed(-1, 8), 7);
        assert_eq!(mul_mod(u64::MAX - 1, u64::MAX - 1, u64::MAX), 1);
    }

    #[test]
    fn divisor_functions() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(totient(36), 12);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(1), 1);
        assert_eq!(valuation(48, 2), 4);
    }

    #[test]
    fn sieve_and_roots() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(isqrt(99), 9);
        assert_eq!(isqrt(100), 10);
        assert_eq!(isqrt(u64::MAX), 4294967295);
    }

    #[test]
    fn order_of_two_mod_nine() {
        assert_eq!(multiplicative_order(2, 9, 6, &factorize(6)), 6);
        assert_eq!(multiplicative_order(4, 9, 6, &factorize(6)), 3);
    }

    #[test]
    fn fundamental_discriminants_small() {
        let fd: Vec<i64> = (-20..=20)
            .filter(|&d| is_fundamental_discriminant(d))
            .collect();
        assert_eq!(
            fd,
            vec![-20, -19, -15, -11, -8, -7, -4, -3, 5, 8, 12, 13, 17]
        );
    }
}
