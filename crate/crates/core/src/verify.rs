// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Self-check suites run by `sqf verify`.

use serde::Serialize;

use crate::averages::{self, ProgressionQuery};
use crate::correlations::{self, LagTuple};
use crate::density::{self, PrimeSet};
use crate::error::Result;
use crate::euler::{Certified, TruncationPolicy, SQUAREFREE_DENSITY};
use crate::kronecker::{self, CharacterSpec, GroupElement};
use crate::lambda::{LambdaPoint, Phase};
use crate::sieve::{self, SquarefreeInt};
use crate::spectral;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

/// Replaceable building blocks, so that a deliberately broken one can be
/// shown to make the suites fail.
#[derive(Clone, Copy)]
pub struct Hooks {
    pub sigma_d: fn(&SquarefreeInt, &TruncationPolicy) -> Result<Certified>,
}

impl Default for Hooks {
    fn default() -> Self {
        Hooks { sigma_d: correlations::sigma_d }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub profile: Profile,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

/// Prime sets of the density bound suite.
pub const BOUND_SETS: [&[u64]; 5] = [&[], &[2], &[3], &[2, 3], &[2, 3, 5]];

/// Pairs of phases used for the two-fold exponential sums.
pub const TRIPLE_PAIRS: [(&str, &str); 5] =
    [("0/1", "0/1"), ("1/4", "1/9"), ("1/4", "3/4"), ("1/9", "8/9"), ("5/36", "1/4")];

/// Phases used for the one-fold exponential sums.
pub const PAIR_PHASES: [&str; 4] = ["0/1", "1/4", "1/9", "5/36"];

type Check = Result<(bool, String)>;

/// Explicit density bound for every set in [`BOUND_SETS`] and every `N` in `limits`.
pub fn density_bound_suite(limits: &[u64]) -> Check {
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    for primes in BOUND_SETS {
        let s = PrimeSet::new(primes.to_vec())?;
        for &n in limits {
            let r = density::restricted_count(&s, n)?;
            worst = worst.min(r.margin);
            if r.bound_holds != Some(true) {
                failures.push(format!("S={s} N={n} margin={:.3e}", r.margin));
            }
        }
    }
    Ok((failures.is_empty(), format!("min margin {worst:.3e}; failures: {failures:?}")))
}

/// Largest relative difference between the Euler product and the divisor
/// sum over `0 ≤ k ≤ k_max`.
pub fn cross_method_gap(k_max: u64, hooks: &Hooks) -> Result<f64> {
    let policy = TruncationPolicy::default();
    let mut worst = 0.0f64;
    for k in 0..=k_max {
        let a = correlations::euler_correlation(&LagTuple::single(k), &policy)?.value;
        let b = correlations::c2_sum_form_with(k as i64, &policy, hooks.sigma_d)?.value;
        worst = worst.max(((a - b) / a).abs());
    }
    Ok(worst)
}

fn cross_method_suite(hooks: &Hooks) -> Check {
    let gap = cross_method_gap(10_000, hooks)?;
    Ok((gap <= 1e-9, format!("max relative gap {gap:.3e} over 0 ≤ k ≤ 10⁴")))
}

/// Identity, inverses and associativity over every point with `d ≤ d_max`.
pub fn group_law_violations(d_max: u64) -> usize {
    let pts = LambdaPoint::enumerate(d_max);
    let id = LambdaPoint::identity();
    let mut bad = pts
        .iter()
        .filter(|a| a.mul(&id) != **a || id.mul(a) != **a || !a.mul(&a.inverse()).is_identity())
        .count();
    for a in &pts {
        for b in &pts {
            let ab = a.mul(b);
            if ab != b.mul(a) {
                bad += 1;
            }
            for c in &pts {
                if ab.mul(c) != a.mul(&b.mul(c)) {
                    bad += 1;
                }
            }
        }
    }
    bad
}

fn group_law_suite() -> Check {
    let n = LambdaPoint::enumerate(6).len();
    let bad = group_law_violations(6);
    Ok((bad == 0, format!("{n} points, {} triples, {bad} violations", n * n * n)))
}

fn empirical_suite() -> Check {
    let policy = TruncationPolicy::default();
    let mut worst = 0.0f64;
    for k in 0..=20u64 {
        let e = correlations::empirical_correlation(&LagTuple::single(k), 10_000_000)?.value;
        let m = correlations::euler_correlation(&LagTuple::single(k), &policy)?.value;
        worst = worst.max((e - m).abs());
    }
    let mut level = 0.0f64;
    for d in [1u64, 2, 3] {
        let d = SquarefreeInt::new(d)?;
        let f = correlations::empirical_level_set(&d, 1_000_000)?;
        level = level.max((f - correlations::level_set_density(&d)).abs());
    }
    Ok((
        worst <= 1e-2 && level <= 5e-3,
        format!("pair gap {worst:.3e} at N = 10⁷; level-set gap {level:.3e} at 10⁶"),
    ))
}

fn progression_suite() -> Check {
    let policy = TruncationPolicy::default();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for d in sieve::squarefree_up_to(10) {
        for t in 0..d * d {
            let q = ProgressionQuery::new(d, t)?;
            let c = averages::cesaro_progression_average(&q, 100_000, &policy)?;
            worst = worst.max((c - averages::progression_average_limit(&q)).abs());
            cases += 1;
        }
    }
    Ok((worst <= 1e-2, format!("{cases} classes, max gap {worst:.3e} at L = 10⁵")))
}

fn exponential_sum_suite() -> Check {
    let policy = TruncationPolicy::default();
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for p in LambdaPoint::enumerate(6) {
        let z = averages::cesaro_y2(&p, 1_000_000, &policy)?;
        re = re.max((z.re - averages::y2(&p)).abs());
        im = im.max(z.im.abs());
    }
    let mut tri = 0.0f64;
    for (a, b) in TRIPLE_PAIRS {
        let (a, b): (LambdaPoint, LambdaPoint) = (a.parse()?, b.parse()?);
        let z = averages::cesaro_y3(&a, &b, 2000, 2000, &policy)?;
        tri = tri.max((z - averages::y3(&a, &b)).norm());
    }
    Ok((
        re <= 5e-3 && im <= 5e-3 && tri <= 1e-2,
        format!("one-fold gap {re:.3e}, |Im| {im:.3e}; two-fold gap {tri:.3e}"),
    ))
}

fn spectral_suite() -> Check {
    let mut last = 0.0;
    let mut monotone = true;
    for d in [1u64, 10, 100, 1000, 10_000] {
        let p = spectral::parseval_partial(d)?;
        monotone &= p > last && p <= SQUAREFREE_DENSITY + 1e-12;
        last = p;
    }
    let gap = SQUAREFREE_DENSITY - last;
    let counts_ok = sieve::squarefree_up_to(30).into_iter().all(|d| {
        let d = SquarefreeInt::new(d).expect("square-free");
        averages::lambda_count(&d) == averages::lambda_count_brute(&d)
    });
    let pts = LambdaPoint::enumerate(10);
    let step = pts.len() / 50;
    let sample: Vec<&LambdaPoint> = pts.iter().step_by(step.max(1)).take(50).collect();
    let cocycle_ok = sample
        .iter()
        .zip(sample.iter().rev())
        .zip(sample.iter().skip(7).chain(sample.iter().take(7)))
        .all(|((a, b), c)| spectral::cocycle_holds(a, b, c));
    Ok((
        monotone && gap <= 1e-3 && counts_ok && cocycle_ok,
        format!("parseval gap {gap:.3e} at D = 10⁴, monotone {monotone}; counts {counts_ok}; cocycle {cocycle_ok}"),
    ))
}

/// Twenty characters spread over the points with `d ≤ 30`.
pub fn sample_characters() -> Vec<LambdaPoint> {
    let pts = LambdaPoint::enumerate(30);
    let step = pts.len() / 20;
    pts.into_iter().step_by(step).take(20).collect()
}

fn kronecker_suite() -> Check {
    let report = kronecker::spectrum_match_report(30)?;
    let g = GroupElement::zero(kronecker::DEFAULT_BASIS_LEN)?.translate(31_415);
    let mut residual_ok = true;
    for p in sample_characters() {
        residual_ok &= kronecker::verify_eigen_relation(&CharacterSpec::new(p), &g, 1000)? == Phase::ZERO;
    }
    Ok((
        report.equal && residual_ok,
        format!(
            "{} phases vs {} eigenvalues, equal {}; residuals zero {residual_ok}",
            report.lambda_points, report.character_eigenvalues, report.equal
        ),
    ))
}

fn density_identity_suite() -> Check {
    let mut ok = true;
    for primes in BOUND_SETS {
        let s = PrimeSet::new(primes.to_vec())?;
        ok &= density::convolution_identity_holds(&s, 10_000)?;
        ok &= density::nth_term_identity_holds(&s, 10_000)?;
    }
    let r = density::partial_series_checks(&PrimeSet::new(vec![2])?, 1_000_000)?;
    let series_ok = (r.avoidance_sum - r.avoidance_limit).abs() <= 1e-5;
    Ok((ok && series_ok, format!("convolution identities {ok}; series {series_ok}")))
}

fn run_suite(name: &str, f: impl FnOnce() -> Check) -> SuiteResult {
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    SuiteResult { name: name.to_string(), passed, detail }
}

pub fn verify_all(profile: Profile) -> VerifyReport {
    verify_with_hooks(profile, &Hooks::default())
}

pub fn verify_with_hooks(profile: Profile, hooks: &Hooks) -> VerifyReport {
    let bound_limits: &[u64] = match profile {
        Profile::Quick => &[100, 1000, 10_000],
        Profile::Full => &[100, 1000, 10_000, 100_000, 1_000_000],
    };
    let mut suites = vec![
        run_suite("density-bound", || density_bound_suite(bound_limits)),
        run_suite("cross-method-c2", || cross_method_suite(hooks)),
        run_suite("group-laws", group_law_suite),
    ];
    if profile == Profile::Full {
        suites.push(run_suite("empirical-convergence", empirical_suite));
        suites.push(run_suite("progression-averages", progression_suite));
        suites.push(run_suite("exponential-sums", exponential_sum_suite));
        suites.push(run_suite("spectral-structure", spectral_suite));
        suites.push(run_suite("spectrum-match", kronecker_suite));
        suites.push(run_suite("density-identities", density_identity_suite));
    }
    let passed = suites.iter().all(|s| s.passed);
    VerifyReport { profile, passed, suites }
}
