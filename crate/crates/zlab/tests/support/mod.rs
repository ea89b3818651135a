//! Independent oracles for the integration suites. Everything here is built
//! from first principles (trial division, Euler's criterion, brute-force
//! enumeration) so it shares no code path with the library implementations
//! it checks.
//!
//! Each test binary uses its own subset of these helpers.
#![allow(dead_code)]

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

pub fn is_prime_naive(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut c = 2u64;
    while c * c <= n {
        if n.is_multiple_of(c) {
            return false;
        }
        c += 1;
    }
    true
}

/// Legendre symbol by Euler's criterion: a^((p-1)/2) mod p, for odd prime p.
pub fn legendre_euler(a: i64, p: u64) -> i8 {
    let a = (a as i128).rem_euclid(p as i128) as u64;
    if a == 0 {
        return 0;
    }
    match pow_mod(a, (p - 1) / 2, p) {
        1 => 1,
        x if x == p - 1 => -1,
        x => panic!("Euler criterion failed for a={a}, p={p}: got {x}"),
    }
}

pub fn squarefree_naive(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn odd_prime_factors_naive(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            if d % 2 == 1 {
                out.push(d);
            }
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 && n % 2 == 1 {
        out.push(n);
    }
    out
}

/// Direct translation of the three Zimmert membership conditions, with the
/// quadratic-residue test done by Euler's criterion.
pub fn zimmert_brute(d: i64) -> Vec<u64> {
    let abs = d.unsigned_abs();
    let evens_allowed = d.rem_euclid(8) == 5;
    let mut out = Vec::new();
    let mut n = 1u64;
    while 4 * n * n + 3 <= abs {
        let mut ok = n != 2 && (n % 2 == 1 || evens_allowed);
        if ok {
            for p in odd_prime_factors_naive(n) {
                if legendre_euler(d, p) != -1 {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// chi(n) straight from the definition, via Euler's criterion on the odd
/// prime factorization of n (multiplicativity assembled by hand).
pub fn chi_naive(d: i64, n: u64) -> i8 {
    if n.is_multiple_of(2) {
        return 0;
    }
    let mut value = 1i8;
    let mut m = n;
    let mut p = 3u64;
    while p * p <= m {
        while m.is_multiple_of(p) {
            value *= legendre_euler(d, p);
            m /= p;
        }
        p += 2;
    }
    if m > 1 {
        value *= legendre_euler(d, m);
    }
    value
}
