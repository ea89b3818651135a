//! Zimmert sets, the free-quotient rank lower bound they witness, and the
//! exact end-to-end inequality check.
//!
//! For a negative squarefree radicand d, the Zimmert set Z_d consists of the
//! integers n with
//!
//! 1. 4n^2 + 3 <= |d| and n != 2,
//! 2. (d/p) = -1 for every odd prime p dividing n,
//! 3. n odd, unless d = 5 (mod 8).
//!
//! |Z_d| is a lower bound for the rank of the largest free quotient of the
//! Bianchi group PSL_2(O_d); that group-theoretic fact is used here strictly
//! as a reporting rule, nothing in this crate computes inside the group.
//!
//! The rank inequality check verifies, exactly and per discriminant, that
//! pi(x) - |Z_d| - omega(|d|) <= S, where x = sqrt(|d|-3)/2, P is the
//! product of the primes in Z_d, and S is the sifted sum of the quadratic
//! character over n <= x coprime to P. This holds because every prime p <= x
//! with chi(p) = -1 lands in Z_d, forcing chi(n) in {0, 1} on the sifted
//! range (the nonnegativity report field), and it is the strongest
//! whole-pipeline consistency check the library has.

use crate::arith::{self, jacobi, Ratio};
use crate::character::QuadraticCharacter;
use crate::error::{Error, Result};
use crate::sift::{sifted_sum_upto, SiftPrimeSet};

/// The Zimmert set of a negative squarefree radicand.
#[derive(Debug, Clone)]
pub struct ZimmertSet {
    d: i64,
    nmax: u64,
    elements: Vec<u64>,
    prime_support: SiftPrimeSet,
}

impl ZimmertSet {
    pub fn d(&self) -> i64 {
        self.d
    }

    /// Largest admissible candidate, floor(sqrt((|d|-3)/4)).
    pub fn nmax(&self) -> u64 {
        self.nmax
    }

    /// Members, ascending. Contains 1 whenever nmax >= 1.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// The primes among the members: exactly the odd primes p <= nmax with
    /// (d/p) = -1.
    pub fn prime_support(&self) -> &SiftPrimeSet {
        &self.prime_support
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Largest n with 4n^2 + 3 <= |d|; zero when |d| < 7.
pub fn candidate_bound(d: i64) -> u64 {
    let abs = d.unsigned_abs();
    if abs < 3 {
        return 0;
    }
    // floor(sqrt((|d|-3)/4)) = floor(isqrt(|d|-3)/2), exactly
    (abs - 3).isqrt() / 2
}

/// Enumerate the Zimmert set of d (d < 0, |d| squarefree).
pub fn zimmert_set(d: i64) -> Result<ZimmertSet> {
    if d >= 0 {
        return Err(Error::NonNegativeDiscriminant(d));
    }
    if !arith::is_squarefree(d.unsigned_abs()) {
        return Err(Error::NotSquarefree(d));
    }
    let nmax = candidate_bound(d);
    // "quadratic non-residue mod p" uses the representative of d itself:
    // d = -163 is 5 mod 8, which is what admits the even members of Z_{-163}
    let evens_allowed = d.rem_euclid(8) == 5;
    let table = arith::default_table();
    let mut elements = Vec::new();
    'candidates: for n in 1..=nmax {
        if n == 2 || (n % 2 == 0 && !evens_allowed) {
            continue;
        }
        let factors = table.factorize(n).expect("n >= 1");
        for p in factors.distinct_primes().filter(|&p| p % 2 == 1) {
            // p | d gives symbol 0, which correctly fails the condition
            if jacobi(d, p).expect("odd prime denominator") != -1 {
                continue 'candidates;
            }
        }
        elements.push(n);
    }
    let prime_support = SiftPrimeSet::new(
        elements.iter().copied().filter(|&n| table.is_prime(n)),
    )
    .expect("members filtered to primes");
    Ok(ZimmertSet {
        d,
        nmax,
        elements,
        prime_support,
    })
}

/// |Z_d|, reported strictly as a lower bound on the rank of the largest
/// free quotient of the associated Bianchi group.
pub fn rank_lower_bound(d: i64) -> Result<u64> {
    Ok(zimmert_set(d)?.len() as u64)
}

/// Exact per-discriminant data for the rank inequality
/// pi(x) - |Z_d| - omega(|d|) <= S.
#[derive(Debug, Clone)]
pub struct RankInequalityReport {
    pub d: i64,
    /// x = sqrt(|d|-3)/2; note floor(x) = nmax.
    pub x: f64,
    pub pi_x: u64,
    pub omega_d: u32,
    pub zimmert_size: u64,
    /// S: the sifted character sum over n <= x coprime to the prime support.
    pub sifted: i64,
    /// pi_x - zimmert_size - omega_d.
    pub lhs: i64,
    /// lhs <= sifted. A false value would be a counterexample.
    pub holds: bool,
    /// chi(n) in {0, 1} for every n <= x coprime to the prime support.
    pub nonneg_ok: bool,
}

/// Verify the rank inequality for d (requires |d| >= 7 so that x >= 1).
pub fn verify_rank_inequality(d: i64) -> Result<RankInequalityReport> {
    let zs = zimmert_set(d)?;
    if d.unsigned_abs() < 7 {
        return Err(Error::DiscriminantTooSmall(d));
    }
    Ok(report_for(&zs))
}

/// The report for an already-enumerated set. Total: for |d| < 7 the sums are
/// empty and the inequality holds vacuously (lhs < 0 = S).
pub(crate) fn report_for(zs: &ZimmertSet) -> RankInequalityReport {
    let abs = zs.d().unsigned_abs();
    let x = if abs >= 3 {
        0.5 * ((abs - 3) as f64).sqrt()
    } else {
        0.0
    };
    let n_max = zs.nmax(); // = floor(x)
    let chi = QuadraticCharacter::new(zs.d()).expect("validated by the set");
    let table = arith::default_table();
    let pi_x = table.prime_count_upto(n_max);
    let omega_d = table.factorize(abs).expect("abs >= 1").omega();
    let support = zs.prime_support();
    let sifted = sifted_sum_upto(&chi, n_max, support);
    let nonneg_ok = (1..=n_max)
        .filter(|&n| !support.shares_factor(n))
        .all(|n| chi.eval(n) >= 0);
    let lhs = pi_x as i64 - zs.len() as i64 - omega_d as i64;
    RankInequalityReport {
        d: zs.d(),
        x,
        pi_x,
        omega_d,
        zimmert_size: zs.len() as u64,
        sifted,
        lhs,
        holds: lhs <= sifted,
        nonneg_ok,
    }
}

/// The standard parameter schedule for bounding |Z_d| from below: truncation
/// level R = |d|^c, sum length x = sqrt(|d|-3)/2, and shift
/// r = ceil(1/(1 - 4c')) for exponents 0 < c < c' < 1/4.
#[derive(Debug, Clone, Copy)]
pub struct ParamSchedule {
    pub c: Ratio,
    pub c_prime: Ratio,
    /// R = |d|^c.
    pub level: f64,
    pub x: f64,
    /// ceil(1/(1 - 4c')), computed exactly from the rational c'.
    pub shift: u64,
}

/// Build the parameter schedule for d. The ceiling defining the shift is
/// evaluated in exact integer arithmetic, so decimal inputs like c' = 0.24
/// give exactly 1/(1 - 0.96) = 25 rather than a float artifact.
pub fn param_schedule(d: i64, c: Ratio, c_prime: Ratio) -> Result<ParamSchedule> {
    if d >= 0 {
        return Err(Error::NonNegativeDiscriminant(d));
    }
    let abs = d.unsigned_abs();
    if abs < 7 {
        return Err(Error::DiscriminantTooSmall(d));
    }
    let quarter = Ratio::new(1, 4).expect("nonzero denominator");
    if !(Ratio::zero() < c && c < c_prime && c_prime < quarter) {
        return Err(Error::ExponentOrder { c, c_prime });
    }
    // 1/(1 - 4 c') = den / (den - 4 num), and c' < 1/4 makes it positive
    let num = c_prime.num() as i128;
    let den = c_prime.den() as i128;
    let gap = den - 4 * num;
    let shift = ((den + gap - 1) / gap) as u64;
    Ok(ParamSchedule {
        c,
        c_prime,
        level: (abs as f64).powf(c.to_f64()),
        x: 0.5 * ((abs - 3) as f64).sqrt(),
        shift,
    })
}
