//! Integer-arithmetic kernel: smallest-prime-factor sieve, factorization with
//! the derived multiplicative functions (mu, omega, tau), the binary Jacobi
//! symbol, prime counting, and the "cubefree up to a factor 8" modulus
//! classifier that drives the admissible-shift rule for Burgess-type bounds.
//!
//! Everything here is exact integer arithmetic. All operations are pure and a
//! [`FactorTable`] is immutable after construction, so tables can be shared
//! freely across threads; the crate keeps one lazily built process-wide table
//! (see [`default_table`]).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default limit of the process-wide factor table.
pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;

/// Environment variable overriding the default sieve limit.
pub const SIEVE_LIMIT_ENV: &str = "ZLAB_SIEVE_LIMIT";

static DEFAULT_TABLE: OnceLock<FactorTable> = OnceLock::new();

/// Process-wide factor table, built on first use.
///
/// The limit is taken from `ZLAB_SIEVE_LIMIT` when set (and at least 2),
/// otherwise [`DEFAULT_SIEVE_LIMIT`]. Call [`init_default_table`] first to
/// pick a limit programmatically.
pub fn default_table() -> &'static FactorTable {
    DEFAULT_TABLE.get_or_init(|| {
        let limit = std::env::var(SIEVE_LIMIT_ENV)
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
            .filter(|&l| (2..=u32::MAX as u64).contains(&l))
            .unwrap_or(DEFAULT_SIEVE_LIMIT);
        FactorTable::build(limit).expect("limit validated above")
    })
}

/// Initialize the process-wide table with an explicit limit.
///
/// The first initializer wins; later calls return the existing table
/// regardless of `limit`.
pub fn init_default_table(limit: u64) -> Result<&'static FactorTable> {
    if !(2..=u32::MAX as u64).contains(&limit) {
        return Err(Error::SieveLimit(limit));
    }
    Ok(DEFAULT_TABLE.get_or_init(|| FactorTable::build(limit).expect("limit validated above")))
}

/// Smallest-prime-factor table for 2..=limit, plus the sorted prime list.
///
/// Invariant: `spf[n]` is the least prime dividing n, so `spf[p] == p`
/// exactly when p is prime.
pub struct FactorTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl fmt::Debug for FactorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FactorTable")
            .field("limit", &self.limit)
            .field("primes", &self.primes.len())
            .finish()
    }
}

impl FactorTable {
    /// Sieve smallest prime factors up to `limit`.
    pub fn build(limit: u64) -> Result<Self> {
        if !(2..=u32::MAX as u64).contains(&limit) {
            return Err(Error::SieveLimit(limit));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                primes.push(i as u64);
                for j in (i..=n).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        Ok(FactorTable { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Least prime factor of n, or None when n < 2 or n exceeds the limit.
    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        if (2..=self.limit).contains(&n) {
            Some(self.spf[n as usize] as u64)
        } else {
            None
        }
    }

    /// Primality test; falls back to trial division past the table limit.
    pub fn is_prime(&self, n: u64) -> bool {
        if n < 2 {
            return false;
        }
        if n <= self.limit {
            return self.spf[n as usize] as u64 == n;
        }
        for &p in &self.primes {
            if (p as u128) * (p as u128) > n as u128 {
                return true;
            }
            if n.is_multiple_of(p) {
                return false;
            }
        }
        // sieve exhausted below sqrt(n): continue with odd candidates
        let mut c = (self.limit + 1) | 1;
        while (c as u128) * (c as u128) <= n as u128 {
            if n.is_multiple_of(c) {
                return false;
            }
            c += 2;
        }
        true
    }

    /// Number of primes <= n.
    pub fn prime_count_upto(&self, n: u64) -> u64 {
        if n <= self.limit {
            return self.primes.partition_point(|&p| p <= n) as u64;
        }
        // Slow path for arguments past the table; desk-scale callers stay below.
        let mut count = self.primes.len() as u64;
        let mut c = (self.limit + 1) | 1;
        while c <= n {
            if self.is_prime(c) {
                count += 1;
            }
            c += 2;
        }
        count
    }

    /// Number of primes <= floor(x). Accepts a real argument because callers
    /// pass bounds like x = sqrt(|d|-3)/2.
    pub fn prime_pi(&self, x: f64) -> u64 {
        self.prime_count_upto(floor_to_u64(x))
    }

    /// Factor n, reading smallest prime factors off the table and falling
    /// back to trial division (sieved primes first, then odd candidates)
    /// while n exceeds the limit.
    pub fn factorize(&self, n: u64) -> Result<PrimeFactorization> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        'reduce: {
            if m <= self.limit {
                break 'reduce;
            }
            for &p in &self.primes {
                if (p as u128) * (p as u128) > m as u128 {
                    factors.push((m, 1));
                    m = 1;
                    break 'reduce;
                }
                if m.is_multiple_of(p) {
                    let mut e = 0u32;
                    while m.is_multiple_of(p) {
                        m /= p;
                        e += 1;
                    }
                    factors.push((p, e));
                    if m <= self.limit {
                        break 'reduce;
                    }
                }
            }
            // all sieved primes are below sqrt(m); continue past the table
            let mut c = (self.limit + 1) | 1;
            loop {
                if (c as u128) * (c as u128) > m as u128 {
                    factors.push((m, 1));
                    m = 1;
                    break 'reduce;
                }
                if m.is_multiple_of(c) {
                    let mut e = 0u32;
                    while m.is_multiple_of(c) {
                        m /= c;
                        e += 1;
                    }
                    factors.push((c, e));
                    if m <= self.limit {
                        break 'reduce;
                    }
                }
                c += 2;
            }
        }
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(PrimeFactorization { n, factors })
    }

    /// Squarefreeness via the spf walk; no allocation for n within the table.
    pub fn is_squarefree(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        if n > self.limit {
            return self
                .factorize(n)
                .map(|f| f.is_squarefree())
                .unwrap_or(false);
        }
        let mut m = n;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        true
    }
}

/// Factorization of a positive integer into sorted (prime, exponent) pairs.
///
/// n = 1 carries an empty factor list (mu = 1, omega = 0, tau = 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Moebius function: 0 if any square divides n, else (-1)^omega.
    pub fn mu(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e >= 2) {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of divisors: product of (exponent + 1).
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn distinct_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

/// Build a smallest-prime-factor table up to `limit`.
pub fn build_sieve(limit: u64) -> Result<FactorTable> {
    FactorTable::build(limit)
}

/// Factor n. With a table, smallest-prime-factor lookups are used up to the
/// table limit; without one, plain trial division.
pub fn factorize(n: u64, table: Option<&FactorTable>) -> Result<PrimeFactorization> {
    match table {
        Some(t) => t.factorize(n),
        None => factorize_trial(n),
    }
}

fn factorize_trial(n: u64) -> Result<PrimeFactorization> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut e = 0u32;
    while m.is_multiple_of(2) {
        m /= 2;
        e += 1;
    }
    if e > 0 {
        factors.push((2, e));
    }
    let mut c = 3u64;
    while (c as u128) * (c as u128) <= m as u128 {
        if m.is_multiple_of(c) {
            let mut e = 0u32;
            while m.is_multiple_of(c) {
                m /= c;
                e += 1;
            }
            factors.push((c, e));
        }
        c += 2;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(PrimeFactorization { n, factors })
}

/// Moebius function mu(n), using the process-wide table.
pub fn mobius(n: u64) -> Result<i8> {
    Ok(factorize(n, Some(default_table()))?.mu())
}

/// True when no square > 1 divides n. By convention 0 is not squarefree.
pub fn is_squarefree(n: u64) -> bool {
    default_table().is_squarefree(n)
}

/// Number of primes <= floor(x), using the process-wide table.
pub fn prime_pi(x: f64) -> u64 {
    default_table().prime_pi(x)
}

/// Jacobi symbol (a/n) for odd positive n, computed by binary reciprocity.
///
/// The numerator is reduced mod n first, which also handles negative a.
/// Fully multiplicative in n; zero exactly when gcd(a, n) > 1. Even or zero
/// n is rejected: the symbol is undefined there, and callers evaluating the
/// quadratic character must route even arguments through its chi(2) = 0 rule.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::JacobiDenominator(n));
    }
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        Ok(sign)
    } else {
        Ok(0)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// floor(x) clamped into u64; NaN and negatives map to 0.
pub(crate) fn floor_to_u64(x: f64) -> u64 {
    if x.is_nan() || x <= 0.0 {
        0
    } else if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x.floor() as u64
    }
}

/// Admissible-shift tag of a modulus.
///
/// `AnyR` covers q = 2^e * m with e <= 3 and odd m cubefree (cubefree up to
/// a factor 8); every shift r >= 1 is admissible there. Everything else is
/// `RestrictedR`, limiting the shift to r in {1, 2, 3}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusTag {
    AnyR,
    RestrictedR,
}

/// A modulus together with its admissible-shift class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModulusClass {
    pub q: u64,
    pub tag: ModulusTag,
}

impl ModulusClass {
    pub fn admits(&self, r: u32) -> bool {
        r >= 1 && (self.tag == ModulusTag::AnyR || r <= 3)
    }

    /// Largest admissible shift not exceeding `r_max`.
    pub fn shift_cap(&self, r_max: u32) -> u32 {
        let r_max = r_max.max(1);
        match self.tag {
            ModulusTag::AnyR => r_max,
            ModulusTag::RestrictedR => r_max.min(3),
        }
    }
}

/// Classify q as cubefree-up-to-a-factor-8 (AnyR) or not (RestrictedR).
///
/// For q = 4|d| with |d| squarefree the 2-exponent is at most 3 and the odd
/// part is squarefree, so such moduli always classify as AnyR.
pub fn classify_modulus(q: u64) -> ModulusClass {
    assert!(q >= 1, "modulus must be positive");
    let e = q.trailing_zeros();
    let m = q >> e;
    let cubefree = factorize(m, Some(default_table()))
        .expect("m >= 1")
        .factors()
        .iter()
        .all(|&(_, e)| e <= 2);
    let tag = if e <= 3 && cubefree {
        ModulusTag::AnyR
    } else {
        ModulusTag::RestrictedR
    };
    ModulusClass { q, tag }
}

/// Exact rational parameter, reduced, with positive denominator.
///
/// Exists so parameter schedules that need exact ceilings (the shift
/// r = ceil(1/(1 - 4c'))) are immune to decimal-literal rounding: "0.24"
/// parses to 6/25 rather than the nearest f64.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: i64,
    den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::BadRational(format!("{num}/0")));
        }
        let sign = if (num < 0) != (den < 0) { -1 } else { 1 };
        let (n, d) = (num.unsigned_abs(), den.unsigned_abs());
        let g = gcd(n, d).max(1);
        Ok(Ratio {
            num: sign * (n / g) as i64,
            den: (d / g) as i64,
        })
    }

    pub const fn zero() -> Self {
        Ratio { num: 0, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        // denominators are positive, so cross-multiplication preserves order
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Ratio {
    type Err = Error;

    /// Accepts "a/b", decimal ("0.24"), and integer ("3") literals, exactly.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadRational(s.to_string());
        let t = s.trim();
        if let Some((a, b)) = t.split_once('/') {
            let num: i64 = a.trim().parse().map_err(|_| bad())?;
            let den: i64 = b.trim().parse().map_err(|_| bad())?;
            return Ratio::new(num, den);
        }
        let (neg, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (int_part, frac_part) = match t.split_once('.') {
            Some((i, f)) => (i, f),
            None => (t, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if int_part.len() + frac_part.len() > 18 {
            return Err(bad());
        }
        let int_val: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac_val: i64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        if int_val < 0 || frac_val < 0 {
            return Err(bad()); // inner signs like "1.-2"
        }
        let scale = 10i64.pow(frac_part.len() as u32);
        let num = int_val
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Ratio::new(if neg { -num } else { num }, scale)
    }
}
