//! Range sweeps over negative squarefree radicands: per-discriminant records
//! combining Zimmert data, the exact rank-inequality check, the sifted-sum
//! decomposition, and a Burgess reference magnitude; plus power-law fitting
//! of |Z_d| against |d| and CSV/JSON export.
//!
//! Sweeps are deterministic: records come back ascending in |d| regardless
//! of the worker count, and the CSV bytes do not depend on parallelism.

use std::io::{self, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, Ratio};
use crate::character::QuadraticCharacter;
use crate::error::{Error, Result};
use crate::sift::{burgess_term, decompose, BurgessParams};
use crate::zimmert::zimmert_set;

/// Exact CSV column order for survey exports.
pub const CSV_HEADER: &str = "d,abs_d,nmax,zimmert_size,prime_support_size,rank_lower_bound,\
pi_x,omega_d,sifted,sigma1,sigma2,burgess_reference,holds";

/// One row of a survey sweep. Field names mirror the CSV columns; `elapsed`
/// is measurement-only and never exported.
#[derive(Debug, Clone, Serialize)]
pub struct SurveyRecord {
    pub d: i64,
    pub abs_d: u64,
    pub nmax: u64,
    pub zimmert_size: u64,
    pub prime_support_size: u64,
    pub rank_lower_bound: u64,
    pub pi_x: u64,
    pub omega_d: u32,
    pub sifted: i64,
    pub sigma1: i64,
    pub sigma2: i64,
    pub burgess_reference: f64,
    pub holds: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Sweep configuration.
#[derive(Debug, Clone)]
pub struct SurveyOptions {
    /// Compute the character sums (they dominate the per-d cost). When off,
    /// the sum columns are zero and `holds` reports the sum-free sufficient
    /// condition lhs <= 0 instead of lhs <= S.
    pub compute_sums: bool,
    /// Exponent c of the per-discriminant truncation level R = |d|^c.
    pub level_exponent: Ratio,
    /// Fixed truncation level overriding the exponent rule (clamped to >= 1).
    pub level_override: Option<f64>,
    /// Geometric sampling density (points per decade); None sweeps every
    /// squarefree |d| in range.
    pub sample_per_decade: Option<u32>,
    /// Keep only m with -m itself a fundamental discriminant (m = 3 mod 4).
    pub fundamental_only: bool,
    /// Keep only records with zimmert_size <= this.
    pub max_zimmert: Option<u64>,
    /// Worker threads: 0 = rayon default, 1 = sequential.
    pub workers: usize,
    /// Emit a line-per-block progress counter on stderr.
    pub progress: bool,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            compute_sums: true,
            level_exponent: Ratio::new(1, 5).expect("static"),
            level_override: None,
            sample_per_decade: None,
            fundamental_only: false,
            max_zimmert: None,
            workers: 0,
            progress: false,
        }
    }
}

/// All d = -m with lo <= m <= hi and m squarefree, ascending in |d|.
/// With `fundamental_only`, keeps only m = 3 (mod 4), i.e. radicands whose
/// -m is itself a fundamental discriminant.
pub fn squarefree_discriminants(lo: u64, hi: u64, fundamental_only: bool) -> Result<Vec<i64>> {
    if lo < 1 || lo > hi {
        return Err(Error::BadRange { lo, hi });
    }
    let table = arith::default_table();
    Ok((lo..=hi)
        .filter(|&m| table.is_squarefree(m) && (!fundamental_only || m % 4 == 3))
        .map(|m| -(m as i64))
        .collect())
}

/// Geometric grid over [lo, hi]: for each target lo * 10^(k/per_decade),
/// the nearest squarefree m at or above it. Deterministic and ascending.
fn sampled_discriminants(
    lo: u64,
    hi: u64,
    per_decade: u32,
    fundamental_only: bool,
) -> Result<Vec<i64>> {
    if lo < 1 || lo > hi {
        return Err(Error::BadRange { lo, hi });
    }
    let per_decade = per_decade.max(1);
    let table = arith::default_table();
    let admit = |m: u64| table.is_squarefree(m) && (!fundamental_only || m % 4 == 3);
    let mut out: Vec<i64> = Vec::new();
    let mut k = 0u32;
    loop {
        let target = lo as f64 * 10f64.powf(k as f64 / per_decade as f64);
        if target > hi as f64 {
            break;
        }
        let mut m = target.ceil() as u64;
        while m <= hi && !admit(m) {
            m += 1;
        }
        if m <= hi {
            let d = -(m as i64);
            if out.last() != Some(&d) {
                out.push(d);
            }
        }
        k += 1;
    }
    Ok(out)
}

fn record_for(d: i64, opts: &SurveyOptions) -> SurveyRecord {
    let start = Instant::now();
    let zs = zimmert_set(d).expect("enumeration yields valid radicands");
    let abs_d = d.unsigned_abs();
    let nmax = zs.nmax();
    let x = if abs_d >= 3 {
        0.5 * ((abs_d - 3) as f64).sqrt()
    } else {
        0.0
    };
    let table = arith::default_table();
    let pi_x = table.prime_count_upto(nmax);
    let omega_d = table.factorize(abs_d).expect("abs_d >= 1").omega();
    let zimmert_size = zs.len() as u64;
    let lhs = pi_x as i64 - zimmert_size as i64 - omega_d as i64;

    let (sifted, sigma1, sigma2, burgess_reference, holds) = if opts.compute_sums {
        let chi = QuadraticCharacter::new(d).expect("validated by the set");
        let level = opts
            .level_override
            .unwrap_or_else(|| (abs_d as f64).powf(opts.level_exponent.to_f64()))
            .max(1.0);
        let dec = decompose(&chi, x, zs.prime_support(), level);
        // q = 4|d| with |d| squarefree is always in the any-shift class
        let reference = burgess_term(&BurgessParams::new(chi.modulus(), x, 2))
            .expect("shift 2 admissible for 4|d|");
        (
            dec.sifted,
            dec.sigma1_direct,
            dec.sigma2,
            reference,
            lhs <= dec.sifted,
        )
    } else {
        (0, 0, 0, 0.0, lhs <= 0)
    };

    SurveyRecord {
        d,
        abs_d,
        nmax,
        zimmert_size,
        prime_support_size: zs.prime_support().len() as u64,
        rank_lower_bound: zimmert_size,
        pi_x,
        omega_d,
        sifted,
        sigma1,
        sigma2,
        burgess_reference,
        holds,
        elapsed: start.elapsed(),
    }
}

/// Sweep [lo, hi] (absolute values of d) and produce one record per
/// discriminant, ascending in |d|. Work items run on a bounded pool; the
/// output order never depends on scheduling.
pub fn run_survey(lo: u64, hi: u64, opts: &SurveyOptions) -> Result<Vec<SurveyRecord>> {
    let ds = match opts.sample_per_decade {
        Some(per_decade) => sampled_discriminants(lo, hi, per_decade, opts.fundamental_only)?,
        None => squarefree_discriminants(lo, hi, opts.fundamental_only)?,
    };
    let total = ds.len();
    let done = AtomicUsize::new(0);
    let compute = |d: &i64| {
        let rec = record_for(*d, opts);
        if opts.progress {
            let k = done.fetch_add(1, Ordering::Relaxed) + 1;
            if k.is_multiple_of(10_000) || k == total {
                eprintln!("zlab: {k}/{total} discriminants processed");
            }
        }
        rec
    };
    let mut records: Vec<SurveyRecord> = if opts.workers == 1 {
        ds.iter().map(compute).collect()
    } else if opts.workers == 0 {
        ds.par_iter().map(compute).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::WorkerPool(e.to_string()))?
            .install(|| ds.par_iter().map(compute).collect())
    };
    if let Some(k) = opts.max_zimmert {
        records.retain(|r| r.zimmert_size <= k);
    }
    Ok(records)
}

/// Squarefree d in [lo, hi] (absolute values) with |Z_d| <= threshold,
/// ascending in |d|.
pub fn find_small_zimmert(lo: u64, hi: u64, threshold: u64) -> Result<Vec<i64>> {
    Ok(squarefree_discriminants(lo, hi, false)?
        .into_iter()
        .filter(|&d| {
            zimmert_set(d).expect("enumeration yields valid radicands").len() as u64 <= threshold
        })
        .collect())
}

/// Least-squares fit of ln|Z_d| = log_c + alpha * ln|d|.
#[derive(Debug, Clone)]
pub struct GrowthFit {
    /// Points used (records with zimmert_size >= 1).
    pub count: usize,
    /// Records excluded because their Zimmert set was empty.
    pub excluded: usize,
    pub log_c: f64,
    pub alpha: f64,
    pub residual_rms: f64,
}

/// Ordinary least squares on (ln|d|, ln|Z_d|). Records with an empty
/// Zimmert set are excluded (their count is reported); at least two usable
/// records with distinct |d| are required.
pub fn fit_growth(records: &[SurveyRecord]) -> Result<GrowthFit> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.zimmert_size >= 1)
        .map(|r| ((r.abs_d as f64).ln(), (r.zimmert_size as f64).ln()))
        .collect();
    let excluded = records.len() - pts.len();
    let mut distinct: Vec<u64> = records
        .iter()
        .filter(|r| r.zimmert_size >= 1)
        .map(|r| r.abs_d)
        .collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::TooFewPoints(distinct.len()));
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let var_x: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let cov: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let alpha = cov / var_x;
    let log_c = mean_y - alpha * mean_x;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - (log_c + alpha * p.0)).powi(2))
        .sum();
    Ok(GrowthFit {
        count: pts.len(),
        excluded,
        log_c,
        alpha,
        residual_rms: (ss_res / n).sqrt(),
    })
}

/// Render a real with the given number of significant digits (CSV uses 6).
/// Values at or above 10^6 in magnitude switch to scientific notation.
pub fn format_significant(x: f64, digits: u32) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() >= 1e6 {
        return format!("{:.*e}", digits.saturating_sub(1) as usize, x);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Write records in the exact CSV schema (header mandatory, integers
/// unquoted, booleans true/false, reals with 6 significant digits).
pub fn write_csv(records: &[SurveyRecord], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.d,
            r.abs_d,
            r.nmax,
            r.zimmert_size,
            r.prime_support_size,
            r.rank_lower_bound,
            r.pi_x,
            r.omega_d,
            r.sifted,
            r.sigma1,
            r.sigma2,
            format_significant(r.burgess_reference, 6),
            r.holds,
        )?;
    }
    Ok(())
}

/// JSON export mirroring the CSV field names.
pub fn to_json(records: &[SurveyRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}
