//! The real quadratic character attached to a negative squarefree radicand d:
//! chi(n) = 0 for even n and chi(n) = (d/n) (Jacobi symbol) for odd n. It is
//! totally multiplicative, non-principal, and periodic with period q = 4|d|.
//!
//! Also provides value-table characters and the exact splitting identity
//! sum chi(n) = sum_{(a,q1)=1} psi1(a) sum_{n = a mod q1} psi2(n) used to
//! reduce sums of an imprimitive character chi = psi1 psi2 to sums over
//! arithmetic progressions.

use crate::arith::{self, floor_to_u64, gcd, jacobi};
use crate::error::{Error, Result};

/// Largest modulus for which [`QuadraticCharacter::with_table`] memoizes one
/// full period. Above this the character always evaluates on the fly.
pub const MEMO_MODULUS_LIMIT: u64 = 1_000_000;

/// The character chi mod 4|d| for a negative squarefree radicand d.
#[derive(Debug, Clone)]
pub struct QuadraticCharacter {
    d: i64,
    q: u64,
    memo: Option<Memo>,
}

#[derive(Debug, Clone)]
struct Memo {
    /// values[r] = chi(n) for any n = r (mod q)
    values: Vec<i8>,
    /// prefix[k] = chi(1) + ... + chi(k), k <= q; prefix[q] is the period sum
    prefix: Vec<i64>,
}

impl QuadraticCharacter {
    /// Build the character for d < 0 with |d| squarefree.
    ///
    /// Rejects non-squarefree radicands: the caller must first replace d by
    /// its squarefree kernel, since Q(sqrt(m^2 d)) = Q(sqrt(d)).
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::NonNegativeDiscriminant(d));
        }
        if !arith::is_squarefree(d.unsigned_abs()) {
            return Err(Error::NotSquarefree(d));
        }
        Ok(QuadraticCharacter {
            d,
            q: 4 * d.unsigned_abs(),
            memo: None,
        })
    }

    /// Like [`new`](Self::new), but memoizes one period (values and prefix
    /// sums) when q <= [`MEMO_MODULUS_LIMIT`]. Worth it when many evaluations
    /// or long partial sums are requested; partial sums become O(1).
    pub fn with_table(d: i64) -> Result<Self> {
        let mut chi = Self::new(d)?;
        if chi.q <= MEMO_MODULUS_LIMIT {
            let q = chi.q as usize;
            let mut values = vec![0i8; q];
            for r in (1..q).step_by(2) {
                values[r] = jacobi(chi.d, r as u64).expect("odd positive denominator");
            }
            let mut prefix = vec![0i64; q + 1];
            for k in 1..=q {
                prefix[k] = prefix[k - 1] + values[k % q] as i64;
            }
            chi.memo = Some(Memo { values, prefix });
        }
        Ok(chi)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// The modulus q = 4|d|.
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// chi(n): 0 for even n, (d/n) for odd n.
    pub fn eval(&self, n: u64) -> i8 {
        if let Some(memo) = &self.memo {
            return memo.values[(n % self.q) as usize];
        }
        if n.is_multiple_of(2) {
            0
        } else {
            jacobi(self.d, n).expect("odd positive denominator")
        }
    }

    /// Exact partial sum of chi over 1..=floor(x).
    pub fn partial_sum(&self, x: f64) -> i64 {
        self.partial_sum_upto(floor_to_u64(x))
    }

    /// Exact partial sum of chi over 1..=n.
    pub fn partial_sum_upto(&self, n: u64) -> i64 {
        if let Some(memo) = &self.memo {
            let q = self.q;
            (n / q) as i64 * memo.prefix[q as usize] + memo.prefix[(n % q) as usize]
        } else {
            (1..=n).map(|k| self.eval(k) as i64).sum()
        }
    }
}

/// A character given by an explicit value table over residues 0..q.
///
/// No multiplicativity is required; the splitting identity only needs the
/// pointwise factorization and that the outer table vanishes off the units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabulatedCharacter {
    values: Vec<i8>,
}

impl TabulatedCharacter {
    /// Wrap a value table; entries must lie in {-1, 0, 1}.
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::CharacterTable("value table must be nonempty"));
        }
        if values.iter().any(|v| !(-1..=1).contains(v)) {
            return Err(Error::CharacterTable("entries must lie in {-1, 0, 1}"));
        }
        Ok(TabulatedCharacter { values })
    }

    /// The principal character mod q: 1 on residues coprime to q, else 0.
    pub fn principal(q: u64) -> Self {
        let values = (0..q.max(1)).map(|a| i8::from(gcd(a, q) == 1)).collect();
        TabulatedCharacter { values }
    }

    /// Tabulate one period of a quadratic character.
    pub fn from_quadratic(chi: &QuadraticCharacter) -> Self {
        let q = chi.modulus();
        TabulatedCharacter {
            values: (0..q).map(|r| chi.eval(r + q)).collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn eval(&self, n: u64) -> i8 {
        self.values[(n % self.modulus()) as usize]
    }
}

/// Evaluate both sides of the splitting identity for chi = psi1 psi2 with
/// coprime moduli: lhs is the plain sum of psi1(n) psi2(n) over n <= x, rhs
/// regroups it over residue classes a mod q1 with gcd(a, q1) = 1.
///
/// Both sides are returned so that callers can assert their equality; for
/// tables where psi1 is nonzero off the units the two sides may differ.
pub fn split_sum_check(
    psi1: &TabulatedCharacter,
    psi2: &TabulatedCharacter,
    x: f64,
) -> Result<(i64, i64)> {
    let q1 = psi1.modulus();
    let q2 = psi2.modulus();
    if gcd(q1, q2) != 1 {
        return Err(Error::NonCoprimeModuli(q1, q2));
    }
    let n_max = floor_to_u64(x);
    let lhs = (1..=n_max)
        .map(|n| psi1.eval(n) as i64 * psi2.eval(n) as i64)
        .sum();
    let mut rhs = 0i64;
    for a in 1..=q1 {
        if gcd(a, q1) != 1 {
            continue;
        }
        let outer = psi1.eval(a) as i64;
        if outer == 0 {
            continue;
        }
        let inner: i64 = (a..=n_max)
            .step_by(q1 as usize)
            .map(|n| psi2.eval(n) as i64)
            .sum();
        rhs += outer * inner;
    }
    Ok((lhs, rhs))
}
