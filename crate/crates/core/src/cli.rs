// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end behind the `sqf` binary.
//!
//! Every subcommand renders one JSON document or one CSV table. Precision
//! failures exit with status 2 and other errors with status 1.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::averages::{self, ProgressionQuery};
use crate::correlations::{self, LagTuple};
use crate::density::{self, PrimeSet};
use crate::error::{Error, Result};
use crate::euler::{TruncationPolicy, DEFAULT_CUTOFF, SQUAREFREE_DENSITY, TOLERANCE_ENV};
use crate::kronecker::{self, CharacterSpec, GroupElement};
use crate::lambda::LambdaPoint;
use crate::sieve::{self, SquarefreeInt};
use crate::spectral;
use crate::verify::{self, Profile};

#[derive(Parser, Debug)]
#[command(name = "sqf", version, about = "Square-free integer correlations, spectra and density checks")]
pub struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format (default: csv for tabular commands, json otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Relative tolerance for Euler-product truncation.
    #[arg(long, global = true, env = TOLERANCE_ENV)]
    pub tol: Option<f64>,
    /// Fixed prime cutoff for Euler products; with --tol, fail if the bound exceeds it.
    #[arg(long, global = true)]
    pub cutoff: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Möbius and square-free indicator over a range.
    Sieve(SieveArgs),
    /// Correlation functions.
    #[command(subcommand)]
    Corr(CorrCommand),
    /// Cesàro averages and exponential sums.
    #[command(subcommand)]
    Avg(AvgCommand),
    /// Spectral measure and eigenfunctions.
    #[command(subcommand)]
    Spectral(SpectralCommand),
    /// Translation on the product of the groups Z/p²Z.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Square-free density away from a finite prime set.
    Density(DensityArgs),
    /// Run the built-in verification suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SieveArgs {
    #[arg(long, default_value_t = 1)]
    pub start: u64,
    #[arg(long)]
    pub length: u64,
    /// Emit the packed square-free bitset instead of a table.
    #[arg(long)]
    pub bytes: bool,
}

#[derive(Subcommand, Debug)]
pub enum CorrCommand {
    /// Frequency of n + lags all square-free for n ≤ limit.
    Empirical {
        #[arg(long)]
        lags: LagTuple,
        #[arg(long)]
        limit: u64,
    },
    /// Limit correlation as an Euler product.
    Exact {
        #[arg(long)]
        lags: LagTuple,
    },
    /// Weight of the square-free numbers divisible by d².
    Sigma {
        #[arg(long)]
        d: u64,
    },
    /// Densities of the level sets of the pair correlation.
    Levelset {
        #[arg(long)]
        dmax: u64,
    },
    /// Partial sum of Hall's series.
    Hall {
        #[arg(long)]
        lags: LagTuple,
        #[arg(long)]
        smax: u64,
    },
    /// Table of (k, c2(k), d-class) for plotting.
    LevelsetFigure {
        #[arg(long)]
        kmax: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum AvgCommand {
    /// Average of c2 over the progression l·d² + t.
    Progression {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 100_000)]
        limit: u64,
    },
    /// Cesàro mean of λ^k c2(k).
    Y2 {
        #[arg(long)]
        phase: LambdaPoint,
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
    /// Two-fold Cesàro mean of λ1^n1 λ2^n2 c3(n1, n2).
    Y3 {
        #[arg(long)]
        phase1: LambdaPoint,
        #[arg(long)]
        phase2: LambdaPoint,
        #[arg(long, default_value_t = 500)]
        n1: u64,
        #[arg(long, default_value_t = 500)]
        n2: u64,
    },
    /// Number of spectral phases with radical d.
    Count {
        #[arg(long)]
        d: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum SpectralCommand {
    /// Atoms of the spectral measure with radical ≤ dmax.
    Atoms {
        #[arg(long)]
        dmax: u64,
    },
    /// Cesàro inner product of a shifted indicator with an eigenfunction.
    Inner {
        #[arg(long, allow_negative_numbers = true)]
        s: i64,
        #[arg(long)]
        phase: LambdaPoint,
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
    /// Partial Parseval sum over radicals ≤ dmax.
    Parseval {
        #[arg(long)]
        dmax: u64,
    },
    /// Mass beyond radical D, partial plus analytic bound.
    Tail {
        #[arg(long = "D")]
        d: u64,
    },
    /// Sign relating the product of two eigenfunctions to the product eigenfunction.
    Sign {
        #[arg(long)]
        phase1: LambdaPoint,
        #[arg(long)]
        phase2: LambdaPoint,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupCommand {
    /// Orbit of the identity over the first `primes` factors.
    Orbit {
        #[arg(long)]
        primes: usize,
        #[arg(long)]
        steps: u64,
    },
    /// Check χ(g + u) = λ χ(g) along an orbit.
    Verify {
        #[arg(long)]
        phase: LambdaPoint,
        #[arg(long, default_value_t = 1000)]
        steps: u64,
    },
    /// Compare spectral phases with character eigenvalues.
    Match {
        #[arg(long)]
        dmax: u64,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct DensityArgs {
    #[command(subcommand)]
    pub command: Option<DensityCommand>,
    #[command(flatten)]
    pub count: DensityCountArgs,
}

#[derive(Args, Debug)]
pub struct DensityCountArgs {
    /// Excluded primes, comma separated.
    #[arg(long, default_value = "")]
    pub exclude: PrimeSet,
    #[arg(long, default_value_t = 1_000_000)]
    pub limit: u64,
    /// Fail unless the explicit error bound holds.
    #[arg(long)]
    pub check_bound: bool,
}

#[derive(Subcommand, Debug)]
pub enum DensityCommand {
    /// Partial Dirichlet series against their closed forms.
    Series {
        /// Excluded primes, comma separated.
        #[arg(long, alias = "exclude", default_value = "")]
        p: PrimeSet,
        #[arg(long, default_value_t = 100_000)]
        limit: u64,
    },
    /// Dirichlet convolution identities up to limit.
    ConvolveCheck {
        #[arg(long, default_value = "")]
        exclude: PrimeSet,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
    pub profile: ProfileArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Quick,
    Full,
}

/// What a command produced.
enum Rendered {
    Doc(Value),
    Bytes(Vec<u8>),
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

impl Cli {
    fn policy(&self) -> TruncationPolicy {
        match (self.cutoff, self.tol) {
            (Some(cutoff), tol) => TruncationPolicy::FixedCutoff { cutoff, tolerance: tol },
            (None, Some(tol)) => TruncationPolicy::TargetTolerance { tolerance: tol, cutoff: DEFAULT_CUTOFF },
            (None, None) => TruncationPolicy::default(),
        }
    }

    fn default_format(&self) -> Format {
        match &self.command {
            Command::Sieve(_)
            | Command::Corr(CorrCommand::LevelsetFigure { .. })
            | Command::Group(GroupCommand::Orbit { .. }) => Format::Csv,
            _ => Format::Json,
        }
    }
}

fn squarefree_arg(d: u64) -> Result<SquarefreeInt> {
    SquarefreeInt::new(d)
}

fn run_sieve(args: &SieveArgs) -> Result<Rendered> {
    let block = sieve::sieve_squarefree(args.start, args.length)?;
    if args.bytes {
        return Ok(Rendered::Bytes(block.to_bytes()));
    }
    let mu = sieve::mobius_range(args.start, args.length)?;
    let rows = mu
        .iter()
        .enumerate()
        .map(|(i, &m)| json!({ "n": args.start + i as u64, "mu": m, "mu2": m.unsigned_abs() }))
        .collect();
    Ok(Rendered::Doc(Value::Array(rows)))
}

fn run_corr(cmd: &CorrCommand, policy: &TruncationPolicy) -> Result<Value> {
    Ok(match cmd {
        CorrCommand::Empirical { lags, limit } => to_value(&correlations::empirical_correlation(lags, *limit)?),
        CorrCommand::Exact { lags } => to_value(&correlations::euler_correlation(lags, policy)?),
        CorrCommand::Sigma { d } => {
            let d = squarefree_arg(*d)?;
            let s = correlations::sigma_d(&d, policy)?;
            json!({ "d": d.get(), "value": s.value, "rel_bound": s.rel_bound })
        }
        CorrCommand::Levelset { dmax } => to_value(&correlations::level_set_table(*dmax)),
        CorrCommand::Hall { lags, smax } => to_value(&correlations::hall_series_partial(lags, *smax)?),
        CorrCommand::LevelsetFigure { kmax } => to_value(&correlations::level_set_figure(*kmax, policy)?),
    })
}

fn run_avg(cmd: &AvgCommand, policy: &TruncationPolicy) -> Result<Value> {
    Ok(match cmd {
        AvgCommand::Progression { d, t, limit } => {
            let q = ProgressionQuery::new(*d, *t)?;
            json!({
                "d": d, "t": t, "limit": limit,
                "closed_form": averages::progression_average_limit(&q),
                "cesaro": averages::cesaro_progression_average(&q, *limit, policy)?,
            })
        }
        AvgCommand::Y2 { phase, limit } => {
            let z = averages::cesaro_y2(phase, *limit, policy)?;
            json!({
                "phase": phase.to_string(), "limit": limit,
                "closed_form": averages::y2(phase), "cesaro_re": z.re, "cesaro_im": z.im,
            })
        }
        AvgCommand::Y3 { phase1, phase2, n1, n2 } => {
            let z = averages::cesaro_y3(phase1, phase2, *n1, *n2, policy)?;
            json!({
                "phase1": phase1.to_string(), "phase2": phase2.to_string(), "n1": n1, "n2": n2,
                "closed_form": averages::y3(phase1, phase2), "cesaro_re": z.re, "cesaro_im": z.im,
            })
        }
        AvgCommand::Count { d } => {
            let d = squarefree_arg(*d)?;
            json!({
                "d": d.get(),
                "count": averages::lambda_count(&d),
                "brute_force": averages::lambda_count_brute(&d),
            })
        }
    })
}

fn run_spectral(cmd: &SpectralCommand, policy: &TruncationPolicy) -> Result<Value> {
    Ok(match cmd {
        SpectralCommand::Atoms { dmax } => to_value(&spectral::spectral_atoms(*dmax, policy)?),
        SpectralCommand::Inner { s, phase, limit } => {
            let z = spectral::inner_product_x_theta(*s, phase, *limit, policy)?;
            let w = spectral::inner_product_limit(*s, phase);
            json!({
                "s": s, "phase": phase.to_string(), "limit": limit,
                "closed_form_re": w.re, "closed_form_im": w.im,
                "cesaro_re": z.re, "cesaro_im": z.im,
            })
        }
        SpectralCommand::Parseval { dmax } => {
            let p = spectral::parseval_partial(*dmax)?;
            json!({ "dmax": dmax, "partial": p, "total": SQUAREFREE_DENSITY, "gap": SQUAREFREE_DENSITY - p })
        }
        SpectralCommand::Tail { d } => {
            let t = spectral::approx_error_tail(*d)?;
            let mut v = to_value(&t);
            v["total"] = json!(t.total());
            v
        }
        SpectralCommand::Sign { phase1, phase2 } => json!({
            "epsilon": spectral::product_sign(phase1, phase2),
            "product": phase1.mul(phase2).to_string(),
            "consistent": spectral::product_sign_consistent(phase1, phase2),
        }),
    })
}

fn run_group(cmd: &GroupCommand) -> Result<Value> {
    Ok(match cmd {
        GroupCommand::Orbit { primes, steps } => {
            let rows = kronecker::orbit(*primes, *steps)?
                .iter()
                .enumerate()
                .map(|(k, g)| {
                    let mut row = Map::new();
                    row.insert("step".into(), json!(k));
                    for (&p, &c) in g.basis().iter().zip(g.coords()) {
                        row.insert(format!("mod_{}", p * p), json!(c));
                    }
                    Value::Object(row)
                })
                .collect();
            Value::Array(rows)
        }
        GroupCommand::Verify { phase, steps } => {
            let largest = phase.d().primes().last().copied().unwrap_or(2);
            let basis = sieve::primes_up_to(largest.max(97));
            let chi = CharacterSpec::new(phase.clone());
            let residual = kronecker::verify_eigen_relation(&chi, &GroupElement::zero_over(basis), *steps)?;
            json!({
                "phase": phase.to_string(),
                "steps": steps,
                "exponents": chi.exponents(),
                "max_residual": residual.to_string(),
                "exact": residual.is_zero(),
            })
        }
        GroupCommand::Match { dmax } => to_value(&kronecker::spectrum_match_report(*dmax)?),
    })
}

fn run_density(args: &DensityArgs) -> Result<Value> {
    Ok(match &args.command {
        None => {
            let c = &args.count;
            let mut report = density::restricted_count(&c.exclude, c.limit)?;
            if c.check_bound {
                if report.bound_holds == Some(false) {
                    return Err(Error::Domain(format!(
                        "explicit bound violated for S={} N={}: margin {:e}",
                        c.exclude, c.limit, report.margin
                    )));
                }
            } else {
                report.bound_holds = None;
            }
            to_value(&report)
        }
        Some(DensityCommand::Series { p, limit }) => to_value(&density::partial_series_checks(p, *limit)?),
        Some(DensityCommand::ConvolveCheck { exclude, limit }) => {
            let conv = density::convolution_identity_holds(exclude, *limit)?;
            let nth = density::nth_term_identity_holds(exclude, *limit)?;
            if !(conv && nth) {
                return Err(Error::Domain(format!("convolution identity fails for S={exclude} up to {limit}")));
            }
            json!({ "primes": exclude.primes(), "limit": limit, "convolution": conv, "nth_term": nth })
        }
    })
}

fn csv_cell(v: &Value) -> String {
    let s = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

/// Flatten a JSON document into a CSV table: arrays of objects become rows,
/// a single object becomes one row.
pub fn to_csv(doc: &Value) -> String {
    let rows: Vec<&Map<String, Value>> = match doc {
        Value::Array(items) => items.iter().filter_map(Value::as_object).collect(),
        Value::Object(m) => vec![m],
        _ => Vec::new(),
    };
    let Some(first) = rows.first() else {
        return String::new();
    };
    let header: Vec<&String> = first.keys().collect();
    let mut out = header.iter().map(|h| h.as_str()).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = header.iter().map(|h| csv_cell(row.get(*h).unwrap_or(&Value::Null))).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn dispatch(cli: &Cli) -> Result<(Rendered, bool)> {
    let policy = cli.policy();
    let mut ok = true;
    let doc = match &cli.command {
        Command::Sieve(args) => return run_sieve(args).map(|r| (r, true)),
        Command::Corr(cmd) => run_corr(cmd, &policy)?,
        Command::Avg(cmd) => run_avg(cmd, &policy)?,
        Command::Spectral(cmd) => run_spectral(cmd, &policy)?,
        Command::Group(cmd) => run_group(cmd)?,
        Command::Density(args) => run_density(args)?,
        Command::Verify(args) => {
            let profile = match args.profile {
                ProfileArg::Quick => Profile::Quick,
                ProfileArg::Full => Profile::Full,
            };
            let report = verify::verify_all(profile);
            ok = report.passed;
            to_value(&report)
        }
    };
    Ok((Rendered::Doc(doc), ok))
}

fn render(cli: &Cli, rendered: Rendered) -> Vec<u8> {
    match rendered {
        Rendered::Bytes(b) => b,
        Rendered::Doc(doc) => match cli.format.unwrap_or_else(|| cli.default_format()) {
            Format::Csv => to_csv(&doc).into_bytes(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
                s.push('\n');
                s.into_bytes()
            }
        },
    }
}

fn write_output(cli: &Cli, bytes: &[u8]) -> Result<()> {
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(bytes)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            w.write_all(bytes)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<bool> {
    let (rendered, ok) = dispatch(cli)?;
    write_output(cli, &render(cli, rendered))?;
    Ok(ok)
}

/// Parse `args` (including the program name) and run; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let outcome = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::Policy(format!("cannot build thread pool: {e}"))),
        },
        None => execute(&cli),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("error: verification failed");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
