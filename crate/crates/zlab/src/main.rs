//! Command-line surface for the zlab library.
//!
//! Exit codes: 0 = success and every verification passed, 1 = a mathematical
//! verification failed (which would be a genuine counterexample), 2 = usage
//! or domain error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zlab::arith::{self, classify_modulus, ModulusTag, Ratio};
use zlab::character::QuadraticCharacter;
use zlab::sift::{burgess_term, decompose, optimal_r, BurgessParams, SiftPrimeSet};
use zlab::survey::{
    fit_growth, format_significant, run_survey, to_json, write_csv, SurveyOptions, SurveyRecord,
    CSV_HEADER,
};
use zlab::zimmert::{param_schedule, verify_rank_inequality, zimmert_set};

const ZIMMERT_CONDITIONS: &str = "Zimmert set membership (d < 0 squarefree):
  (1) 4n^2 + 3 <= |d|, and n != 2;
  (2) d is a quadratic non-residue modulo every odd prime p dividing n;
  (3) n is odd, unless d = 5 (mod 8).";

#[derive(Parser)]
#[command(
    name = "zlab",
    version,
    about = "Zimmert sets, sifted character sums, and exact rank-inequality checks",
    after_help = ZIMMERT_CONDITIONS
)]
struct Cli {
    /// Sieve limit for the shared factor table (env: ZLAB_SIEVE_LIMIT)
    #[arg(long, global = true)]
    sieve_limit: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Target {
    /// Negative discriminant, e.g. -d -163
    #[arg(short = 'd', long = "d", allow_hyphen_values = true)]
    d: Option<i64>,

    /// Absolute value of the discriminant, e.g. --abs-d 163
    #[arg(long, conflicts_with = "d")]
    abs_d: Option<u64>,
}

impl Target {
    fn resolve(&self) -> Result<i64, String> {
        match (self.d, self.abs_d) {
            (Some(d), None) => Ok(d),
            (None, Some(m)) => Ok(-(m as i64)),
            _ => Err("exactly one of -d or --abs-d is required".to_string()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the Zimmert set of a discriminant
    Zset {
        #[command(flatten)]
        target: Target,
    },
    /// Verify pi(x) - |Z_d| - omega(|d|) <= S for a discriminant or range
    Verify {
        #[command(flatten)]
        target: TargetOrRange,
        /// Exponent c for the parameter schedule (printed per d when given)
        #[arg(long, requires = "c_prime")]
        c: Option<Ratio>,
        /// Exponent c' with c < c' < 1/4
        #[arg(long, requires = "c")]
        c_prime: Option<Ratio>,
    },
    /// Partial and sifted character sums, with the exact decomposition
    Charsum {
        #[command(flatten)]
        target: Target,
        /// Sum over n <= x
        #[arg(long)]
        x: f64,
        /// Truncation level R of the Moebius weight (>= 1); prints the
        /// decomposition when given
        #[arg(long = "level", visible_alias = "R")]
        level: Option<f64>,
        /// Sieve primes, comma separated (e.g. --primes 3,5); defaults to
        /// the prime support of the Zimmert set when --zimmert is set
        #[arg(long, visible_alias = "P", value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Use the Zimmert prime support of d as the sieve
        #[arg(long, conflicts_with = "primes")]
        zimmert: bool,
    },
    /// Burgess-type reference bound, or the optimal shift when -r is absent
    Burgess {
        /// Modulus
        #[arg(long)]
        q: u64,
        /// Sum length
        #[arg(long)]
        x: f64,
        /// Shift r; must be admissible for the modulus class
        #[arg(short, long)]
        r: Option<u32>,
        /// Search cap when minimizing over shifts
        #[arg(long, default_value_t = 8)]
        r_max: u32,
        /// Epsilon added to the q-exponent
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
    },
    /// Sweep a range of discriminants and export records
    Survey {
        /// Range of |d| as lo:hi, e.g. --range 7:1000
        #[arg(long, value_parser = parse_range)]
        range: (u64, u64),
        /// Output format
        #[arg(long, default_value = "table", value_parser = ["table", "csv", "json"])]
        format: String,
        /// Output path (stdout when absent)
        #[arg(long)]
        output: Option<String>,
        /// Geometric sampling density in points per decade (default 200
        /// when the flag is given without a value; exhaustive otherwise)
        #[arg(long, num_args = 0..=1, default_missing_value = "200")]
        sample: Option<u32>,
        /// Append a growth-fit summary line (alpha, logc, n, excluded)
        #[arg(long)]
        fit: bool,
        /// Worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Skip the character sums (sum columns become 0; holds then
        /// reports the sum-free check lhs <= 0)
        #[arg(long)]
        no_sums: bool,
        /// Keep only m = 3 (mod 4), i.e. -m itself a fundamental discriminant
        #[arg(long)]
        fundamental: bool,
        /// Exponent c of the per-d truncation level R = |d|^c
        #[arg(long, default_value = "1/5")]
        level_exponent: Ratio,
        /// Fixed truncation level overriding the exponent rule
        #[arg(long)]
        level: Option<f64>,
        /// Keep only records with zimmert_size <= K
        #[arg(long, value_name = "K")]
        max_zimmert: Option<u64>,
    },
}

#[derive(Args)]
struct TargetOrRange {
    #[command(flatten)]
    target: Target,

    /// Range of |d| as lo:hi (each |d| must be >= 7)
    #[arg(long, value_parser = parse_range, conflicts_with_all = ["d", "abs_d"])]
    range: Option<(u64, u64)>,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: u64 = lo.trim().parse().map_err(|_| format!("bad lower bound '{lo}'"))?;
    let hi: u64 = hi.trim().parse().map_err(|_| format!("bad upper bound '{hi}'"))?;
    if lo < 1 || lo > hi {
        return Err(format!("invalid range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(limit) = cli.sieve_limit {
        if let Err(e) = arith::init_default_table(limit) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match command {
        Command::Zset { target } => {
            let d = target.resolve()?;
            let zs = zimmert_set(d)?;
            let elements: Vec<String> = zs.elements().iter().map(u64::to_string).collect();
            println!("{}", elements.join(" "));
            let primes: Vec<String> =
                zs.prime_support().primes().iter().map(u64::to_string).collect();
            println!("size={} primes={}", zs.len(), primes.join(" "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { target, c, c_prime } => {
            let ds: Vec<i64> = match target.range {
                Some((lo, hi)) => {
                    if lo < 7 {
                        return Err("verify requires |d| >= 7".into());
                    }
                    zlab::survey::squarefree_discriminants(lo, hi, false)?
                }
                None => vec![target.target.resolve()?],
            };
            let schedule = c.zip(c_prime);
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            let mut all_hold = true;
            for d in ds {
                let report = verify_rank_inequality(d)?;
                all_hold &= report.holds && report.nonneg_ok;
                write!(
                    out,
                    "d={} x={} pi={} omega={} zimmert={} lhs={} S={} holds={}",
                    report.d,
                    format_significant(report.x, 6),
                    report.pi_x,
                    report.omega_d,
                    report.zimmert_size,
                    report.lhs,
                    report.sifted,
                    report.holds && report.nonneg_ok,
                )?;
                if let Some((c, cp)) = schedule {
                    let p = param_schedule(d, c, cp)?;
                    write!(
                        out,
                        " R={} r={}",
                        format_significant(p.level, 6),
                        p.shift
                    )?;
                }
                writeln!(out)?;
            }
            out.flush()?;
            Ok(if all_hold {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Charsum {
            target,
            x,
            level,
            primes,
            zimmert,
        } => {
            let d = target.resolve()?;
            let chi = QuadraticCharacter::with_table(d)?;
            let set = if zimmert {
                zimmert_set(d)?.prime_support().clone()
            } else {
                SiftPrimeSet::new(primes.unwrap_or_default())?
            };
            print!("d={} q={} x={}", d, chi.modulus(), format_significant(x, 6));
            if set.is_empty() && level.is_none() {
                println!(" partial={}", chi.partial_sum(x));
            } else if let Some(level) = level {
                if level < 1.0 {
                    return Err("--level must be at least 1".into());
                }
                let rep = decompose(&chi, x, &set, level);
                println!(
                    " sifted={} sigma1={} sigma1_interchanged={} sigma2={} r_used={} main={} tail={} level_in_range={}",
                    rep.sifted,
                    rep.sigma1_direct,
                    rep.sigma1_interchanged,
                    rep.sigma2,
                    rep.r_used,
                    format_significant(rep.burgess_reference, 6),
                    format_significant(rep.tail_reference, 6),
                    rep.level_in_range,
                );
            } else {
                println!(
                    " sifted={}",
                    zlab::sift::sifted_sum(&chi, x, &set)
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Burgess {
            q,
            x,
            r,
            r_max,
            epsilon,
        } => {
            let class = classify_modulus(q);
            let tag = match class.tag {
                ModulusTag::AnyR => "any",
                ModulusTag::RestrictedR => "restricted",
            };
            match r {
                Some(r) => {
                    let bound =
                        burgess_term(&BurgessParams::new(q, x, r).with_epsilon(epsilon))?;
                    println!(
                        "q={} x={} class={} r={} bound={}",
                        q,
                        format_significant(x, 6),
                        tag,
                        r,
                        format_significant(bound, 6)
                    );
                }
                None => {
                    let (r, bound) = optimal_r(q, x, class, r_max);
                    println!(
                        "q={} x={} class={} r={} bound={}",
                        q,
                        format_significant(x, 6),
                        tag,
                        r,
                        format_significant(bound, 6)
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Survey {
            range: (lo, hi),
            format,
            output,
            sample,
            fit,
            workers,
            no_sums,
            fundamental,
            level_exponent,
            level,
            max_zimmert,
        } => {
            let opts = SurveyOptions {
                compute_sums: !no_sums,
                level_exponent,
                level_override: level,
                sample_per_decade: sample,
                fundamental_only: fundamental,
                max_zimmert,
                workers,
                progress: hi.saturating_sub(lo) > 20_000,
            };
            let records = run_survey(lo, hi, &opts)?;
            let rendered = render_records(&records, &format)?;
            match output {
                Some(path) => {
                    let mut f = BufWriter::new(File::create(path)?);
                    f.write_all(rendered.as_bytes())?;
                    f.flush()?;
                }
                None => {
                    io::stdout().write_all(rendered.as_bytes())?;
                }
            }
            if fit {
                let g = fit_growth(&records)?;
                println!(
                    "alpha={} logc={} n={} excluded={}",
                    format_significant(g.alpha, 6),
                    format_significant(g.log_c, 6),
                    g.count,
                    g.excluded
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn render_records(
    records: &[SurveyRecord],
    format: &str,
) -> Result<String, Box<dyn std::error::Error>> {
    match format {
        "csv" => {
            let mut buf = Vec::new();
            write_csv(records, &mut buf)?;
            Ok(String::from_utf8(buf)?)
        }
        "json" => Ok(format!("{}\n", to_json(records))),
        _ => {
            let mut s = String::new();
            let header: Vec<&str> = CSV_HEADER.split(',').collect();
            s.push_str(&format!(
                "{:>8} {:>8} {:>6} {:>12} {:>18} {:>16} {:>6} {:>8} {:>7} {:>7} {:>7} {:>17} {:>6}\n",
                header[0], header[1], header[2], header[3], header[4], header[5], header[6],
                header[7], header[8], header[9], header[10], header[11], header[12]
            ));
            for r in records {
                s.push_str(&format!(
                    "{:>8} {:>8} {:>6} {:>12} {:>18} {:>16} {:>6} {:>8} {:>7} {:>7} {:>7} {:>17} {:>6}\n",
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
                    r.holds
                ));
            }
            Ok(s)
        }
    }
}
