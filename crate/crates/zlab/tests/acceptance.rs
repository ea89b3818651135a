//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its elapsed time (run with `cargo test --test acceptance -- --nocapture`
//! to see them). Identities are asserted with zero tolerance; stated runtime
//! budgets are asserted too.

mod support;

use std::process::Command;
use std::sync::LazyLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zlab::arith::{self, jacobi};
use zlab::character::{split_sum_check, QuadraticCharacter, TabulatedCharacter};
use zlab::sift::{
    burgess_term, decompose, inner_sieve_weight, optimal_r, sifted_sum, BurgessParams,
    SiftPrimeSet,
};
use zlab::survey::{fit_growth, run_survey, SurveyOptions, CSV_HEADER};
use zlab::zimmert::{verify_rank_inequality, zimmert_set, RankInequalityReport};

const PRIMES_TO_50: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Criterion 1: the exact decomposition identity on 1000 randomized tuples.
#[test]
fn criterion_1_exact_decomposition_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut done = 0u32;
    while done < 1000 {
        let m = rng.random_range(1..=10_000u64);
        if !support::squarefree_naive(m) {
            continue;
        }
        done += 1;
        let chi = QuadraticCharacter::new(-(m as i64)).unwrap();
        let x: f64 = rng.random_range(1.0..=500.0);
        let level: f64 = rng.random_range(1.0..=x);
        let primes: Vec<u64> = PRIMES_TO_50
            .iter()
            .copied()
            .filter(|_| rng.random_bool(1.0 / 3.0))
            .collect();
        let set = SiftPrimeSet::new(primes).unwrap();
        let rep = decompose(&chi, x, &set, level);
        let direct = sifted_sum(&chi, x, &set);
        assert_eq!(
            direct,
            rep.sigma1_direct - rep.sigma2,
            "sifted != sigma1 - sigma2 at d=-{m}, x={x}, R={level}, P={:?}",
            set.primes()
        );
        assert_eq!(
            rep.sigma1_direct, rep.sigma1_interchanged,
            "interchange mismatch at d=-{m}, x={x}, R={level}, P={:?}",
            set.primes()
        );
        assert_eq!(direct, rep.sifted);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("criterion 1: PASS - exact decomposition identity, 1000 tuples ({elapsed:?})");
}

/// Criterion 2: the inner weight vanishes on 1 < gcd(n, P) <= R and is
/// bounded by tau(n), exhaustively for n <= 10^4 over 20 prime sets.
#[test]
fn criterion_2_vanishing_lemma_and_weight_bound() {
    let start = Instant::now();
    const N: u64 = 10_000;
    // independent tau table by divisor-count sieve
    let mut tau = vec![0i64; (N + 1) as usize];
    for d in 1..=N as usize {
        for m in (d..=N as usize).step_by(d) {
            tau[m] += 1;
        }
    }
    let primes_to_30: Vec<u64> = vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
    let mut rng = ChaCha8Rng::seed_from_u64(7_040_320);
    let levels = [2.0f64, 10.0, 31.0, 100.0, 1000.0];
    for set_idx in 0..20 {
        let chosen: Vec<u64> = primes_to_30
            .iter()
            .copied()
            .filter(|_| rng.random_bool(0.5))
            .collect();
        let set = SiftPrimeSet::new(chosen).unwrap();
        let level = levels[set_idx % levels.len()];
        for n in 1..=N {
            let w = inner_sieve_weight(n, &set, level);
            let g = set.gcd_with(n);
            if g > 1 && g as f64 <= level {
                assert_eq!(w, 0, "weight nonzero at n={n}, P={:?}, R={level}", set.primes());
            }
            assert!(
                w.abs() <= tau[n as usize],
                "|w|={} > tau({n})={} for P={:?}",
                w.abs(),
                tau[n as usize],
                set.primes()
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("criterion 2: PASS - vanishing lemma and tau bound, n <= 10^4 x 20 sets ({elapsed:?})");
}

/// Shared single-threaded sweep of every squarefree 7 <= |d| <= 10^5,
/// used by criteria 3 and 4.
static FULL_SWEEP: LazyLock<(Vec<RankInequalityReport>, Duration)> = LazyLock::new(|| {
    let start = Instant::now();
    let table = arith::default_table();
    let mut reports = Vec::with_capacity(61_000);
    for m in 7..=100_000u64 {
        if !table.is_squarefree(m) {
            continue;
        }
        reports.push(verify_rank_inequality(-(m as i64)).unwrap());
    }
    (reports, start.elapsed())
});

/// Criterion 3: the rank inequality holds for every squarefree
/// 7 <= |d| <= 10^5 (a failure would be a counterexample).
#[test]
fn criterion_3_rank_inequality_exhaustive() {
    let (reports, sweep_time) = &*FULL_SWEEP;
    assert_eq!(reports.len(), 60_789); // squarefree count in [7, 10^5]
    for r in reports {
        assert!(
            r.holds,
            "counterexample: d={} pi={} |Z|={} omega={} S={}",
            r.d, r.pi_x, r.zimmert_size, r.omega_d, r.sifted
        );
    }
    assert!(
        *sweep_time < Duration::from_secs(300),
        "sweep took {sweep_time:?}"
    );
    println!(
        "criterion 3: PASS - pi(x) - |Z_d| - omega(|d|) <= S for all squarefree 7 <= |d| <= 10^5 (sweep {sweep_time:?}, shared with criterion 4)"
    );
}

/// Criterion 4: on the same range, chi takes only values 0 and 1 on the
/// sifted range (every n <= x coprime to the prime support).
#[test]
fn criterion_4_nonnegativity_lemma() {
    let (reports, sweep_time) = &*FULL_SWEEP;
    for r in reports {
        assert!(r.nonneg_ok, "negative chi value on sifted range at d={}", r.d);
    }
    println!(
        "criterion 4: PASS - chi in {{0,1}} on the sifted range for all squarefree 7 <= |d| <= 10^5 (sweep {sweep_time:?}, shared with criterion 3)"
    );
}

/// Criterion 5: jacobi agrees with the Euler-criterion oracle on every
/// residue of every odd prime below 10^4; the character is periodic mod
/// 4|d| with full-period sum zero for all squarefree 3 <= |d| <= 2000.
#[test]
fn criterion_5_character_correctness() {
    let start = Instant::now();
    for p in (3..10_000u64).filter(|&p| support::is_prime_naive(p)) {
        for a in 0..p {
            assert_eq!(
                jacobi(a as i64, p).unwrap(),
                support::legendre_euler(a as i64, p),
                "a={a}, p={p}"
            );
        }
    }
    for m in 3..=2000u64 {
        if !support::squarefree_naive(m) {
            continue;
        }
        let chi = QuadraticCharacter::new(-(m as i64)).unwrap();
        let q = chi.modulus();
        for n in 1..=q {
            assert_eq!(chi.eval(n), chi.eval(n + q), "period broke at d=-{m}, n={n}");
        }
        assert_eq!(chi.partial_sum(q as f64), 0, "period sum nonzero at d=-{m}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("criterion 5: PASS - jacobi vs Euler oracle, periodicity, zero period sums ({elapsed:?})");
}

/// Criterion 6: the splitting identity, exactly, on 200 random instances
/// with coprime moduli <= 500 and x <= 2000.
#[test]
fn criterion_6_splitting_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(652);
    let mut done = 0u32;
    while done < 200 {
        let q1 = rng.random_range(1..=500u64);
        let q2 = rng.random_range(1..=500u64);
        if arith::gcd(q1, q2) != 1 {
            continue;
        }
        done += 1;
        // psi1: random signs on the units mod q1, zero off the units
        let psi1 = TabulatedCharacter::new(
            (0..q1)
                .map(|a| {
                    if arith::gcd(a, q1) == 1 {
                        if rng.random_bool(0.5) {
                            1
                        } else {
                            -1
                        }
                    } else {
                        0
                    }
                })
                .collect(),
        )
        .unwrap();
        // psi2: alternately a genuine Jacobi-symbol character mod q2 (odd
        // q2) or an arbitrary {-1,0,1} table
        let psi2 = if q2 % 2 == 1 && done.is_multiple_of(2) {
            TabulatedCharacter::new(
                (0..q2).map(|a| jacobi(a as i64, q2).unwrap()).collect(),
            )
            .unwrap()
        } else {
            TabulatedCharacter::new((0..q2).map(|_| rng.random_range(-1i8..=1)).collect())
                .unwrap()
        };
        let x: f64 = rng.random_range(0.0..=2000.0);
        let (lhs, rhs) = split_sum_check(&psi1, &psi2, x).unwrap();
        assert_eq!(lhs, rhs, "instance {done}: q1={q1}, q2={q2}, x={x}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!("criterion 6: PASS - splitting identity on 200 coprime-moduli instances ({elapsed:?})");
}

/// Criterion 7: Zimmert sets match the brute-force enumerator (conditions
/// translated directly, Legendre symbols by Euler's criterion) for every
/// squarefree |d| <= 10^4, plus the three anchors.
#[test]
fn criterion_7_zimmert_oracle_equivalence() {
    let start = Instant::now();
    assert_eq!(zimmert_set(-7).unwrap().elements(), &[1]);
    assert_eq!(zimmert_set(-163).unwrap().elements(), &[1, 3, 4, 5, 6]);
    assert_eq!(zimmert_set(-71).unwrap().elements(), &[1]);
    for m in 1..=10_000u64 {
        if !support::squarefree_naive(m) {
            continue;
        }
        let d = -(m as i64);
        let set = zimmert_set(d).unwrap();
        let brute = support::zimmert_brute(d);
        assert_eq!(set.elements(), brute.as_slice(), "mismatch at d={d}");
        let brute_primes: Vec<u64> = brute
            .iter()
            .copied()
            .filter(|&n| support::is_prime_naive(n))
            .collect();
        assert_eq!(set.prime_support().primes(), brute_primes.as_slice());
        // independent characterization: odd primes p <= nmax with (d/p) = -1
        let characterized: Vec<u64> = (3..=set.nmax())
            .filter(|&p| support::is_prime_naive(p) && support::legendre_euler(d, p) == -1)
            .collect();
        assert_eq!(set.prime_support().primes(), characterized.as_slice());
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("criterion 7: PASS - zimmert_set matches brute force for all squarefree |d| <= 10^4 ({elapsed:?})");
}

/// Criterion 8: the fitted growth exponent of |Z_d| over sampled
/// squarefree |d| in [10^3, 10^6] is at least 0.25 (one-sided check; the
/// measured exponent and residual are reported, not pinned).
#[test]
fn criterion_8_growth_exponent() {
    let start = Instant::now();
    let opts = SurveyOptions {
        sample_per_decade: Some(200),
        ..SurveyOptions::default()
    };
    let records = run_survey(1000, 1_000_000, &opts).unwrap();
    assert!(records.len() >= 400, "only {} sample points", records.len());
    let fit = fit_growth(&records).unwrap();
    println!(
        "criterion 8: alpha={:.4} logc={:.4} residual_rms={:.4} n={} excluded={}",
        fit.alpha, fit.log_c, fit.residual_rms, fit.count, fit.excluded
    );
    assert!(
        fit.alpha >= 0.25,
        "fitted exponent {} below 0.25",
        fit.alpha
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    println!("criterion 8: PASS - growth exponent alpha >= 0.25 on sampled |d| in [10^3, 10^6] ({elapsed:?})");
}

/// Criterion 9: Burgess reference values, the admissibility rule, and the
/// logged max-ratio diagnostic over |d| <= 10^5.
#[test]
fn criterion_9_burgess_reference_values() {
    let start = Instant::now();
    let b = burgess_term(&BurgessParams::new(652, 6.0, 1)).unwrap();
    assert!((b - 25.5343).abs() < 1e-3, "got {b}");

    let class = arith::classify_modulus(1_000_000);
    let (r, bound) = optimal_r(1_000_000, 1000.0, class, 10);
    assert_eq!(r, 2);
    assert!((bound - 421.70).abs() < 0.01, "got {bound}");

    assert!(matches!(
        burgess_term(&BurgessParams::new(27, 100.0, 4)),
        Err(zlab::Error::InadmissibleShift { r: 4, q: 27 })
    ));

    // diagnostic only: how far actual partial sums sit below the reference
    let table = arith::default_table();
    let mut max_ratio = 0.0f64;
    let mut arg_max = 0i64;
    for m in 7..=100_000u64 {
        if !table.is_squarefree(m) {
            continue;
        }
        let chi = QuadraticCharacter::new(-(m as i64)).unwrap();
        let x = 0.5 * ((m - 3) as f64).sqrt();
        let sum = chi.partial_sum(x).unsigned_abs() as f64;
        let reference = burgess_term(&BurgessParams::new(chi.modulus(), x, 2)).unwrap();
        let ratio = sum / reference;
        if ratio > max_ratio {
            max_ratio = ratio;
            arg_max = -(m as i64);
        }
    }
    println!(
        "criterion 9: max |sum chi(n)| / reference(r=2) = {max_ratio:.6} at d={arg_max} over squarefree |d| <= 10^5 (diagnostic, not asserted)"
    );
    let elapsed = start.elapsed();
    println!("criterion 9: PASS - Burgess reference values and admissibility rule ({elapsed:?})");
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_zlab"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

/// Criterion 10: the CLI contract - byte-exact outputs and exit codes for
/// the documented examples, and the exact CSV schema.
#[test]
fn criterion_10_cli_contract() {
    let start = Instant::now();

    // zset
    let (code, stdout, _) = run_cli(&["zset", "-d", "-163"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "1 3 4 5 6\nsize=5 primes=3 5\n");

    let (code, stdout, _) = run_cli(&["zset", "-d", "-3"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "\nsize=0 primes=\n");

    let (code, stdout, stderr) = run_cli(&["zset", "-d", "-12"]);
    assert_eq!(code, 2);
    assert_eq!(stdout, "");
    assert_eq!(stderr, "error: d must be squarefree (got -12)\n");

    // verify
    let (code, stdout, _) = run_cli(&["verify", "-d", "-163"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "d=-163 x=6.32456 pi=3 omega=1 zimmert=5 lhs=-3 S=1 holds=true\n"
    );
    assert!(stdout.contains("lhs=-3 S=1 holds=true"));

    let (code, stdout, _) = run_cli(&["verify", "--range", "7:1000"]);
    assert_eq!(code, 0);
    let expected_rows = (7..=1000u64).filter(|&m| support::squarefree_naive(m)).count();
    assert_eq!(stdout.lines().count(), expected_rows);
    assert!(stdout.lines().all(|l| l.ends_with("holds=true")));

    let (code, _, stderr) = run_cli(&["verify", "-d", "-5"]);
    assert_eq!(code, 2);
    assert_eq!(stderr, "error: |d| must be at least 7 (got -5)\n");

    // survey
    let (code, stdout, _) = run_cli(&["survey", "--range", "7:100", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    let rows: Vec<&str> = lines.collect();
    let expected_rows = (7..=100u64).filter(|&m| support::squarefree_naive(m)).count();
    assert_eq!(rows.len(), expected_rows);
    assert!(rows.iter().all(|r| r.split(',').count() == 13));

    let (code, stdout, _) = run_cli(&[
        "survey",
        "--range",
        "1000:100000",
        "--sample",
        "50",
        "--fit",
    ]);
    assert_eq!(code, 0);
    let fit_line = stdout.lines().last().unwrap();
    assert!(fit_line.starts_with("alpha="), "got '{fit_line}'");
    assert!(fit_line.contains(" logc=") && fit_line.contains(" n="));

    let (code, stdout, _) = run_cli(&["survey", "--range", "9:9", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, format!("{CSV_HEADER}\n"));

    let elapsed = start.elapsed();
    println!("criterion 10: PASS - CLI contract, byte-exact examples and CSV schema ({elapsed:?})");
}
