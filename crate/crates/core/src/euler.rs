// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Euler products `∏_p (1 − m/p²)` with certified truncation.
//!
//! A product is split at a prime cutoff `P`. Primes up to `P` are multiplied
//! explicitly in the log domain. The part beyond `P` is handled according to a
//! [`TruncationPolicy`]:
//!
//! * [`TruncationPolicy::FixedCutoff`] drops it and reports the a priori bound
//!   `m / ((P − 1)(1 − m/P²))` on the relative error.
//! * [`TruncationPolicy::TargetTolerance`] replaces it by `exp(−m·Σ_{p>P} p⁻²)`,
//!   where the prime sum comes from the prime zeta function, and reports the
//!   remainder `m² / (6P³(1 − m/P²))` plus a rounding allowance.
//!
//! Tables of suffix products are cached per `(m, cutoff, mode)` so repeated
//! queries with the same order cost one lookup.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::sieve::{mobius, primes_up_to};

/// `6/π²`, the density of the square-free integers.
pub const SQUAREFREE_DENSITY: f64 = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);

/// `ζ(2) = π²/6`.
pub const ZETA_2: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

/// Default relative tolerance for Euler-product tails.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Default prime cutoff.
pub const DEFAULT_CUTOFF: u64 = 100_000;

/// Largest cutoff the adaptive policy escalates to.
pub const MAX_CUTOFF: u64 = 100_000_000;

/// Environment variable that overrides [`DEFAULT_TOLERANCE`] in the CLI.
pub const TOLERANCE_ENV: &str = "SQF_TRUNC_TOL";

const EPS: f64 = f64::EPSILON;

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}

/// Compensated sum of an iterator.
pub fn sum_compensated<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

// B_2 … B_20
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// `ζ(s) − 1` for real `s ≥ 2`, by Euler–Maclaurin summation.
pub fn zeta_minus_one(s: f64) -> f64 {
    assert!(s >= 2.0, "zeta_minus_one requires s >= 2");
    const N: f64 = 16.0;
    let mut acc = CompensatedSum::new();
    for n in (2..16).rev() {
        acc.add((n as f64).powf(-s));
    }
    let ns = N.powf(-s);
    acc.add(N * ns / (s - 1.0));
    acc.add(0.5 * ns);
    // term k: B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = ns / N;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k = k as f64 + 1.0;
        acc.add(b / fact * rising * npow);
        rising *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
        npow /= N * N;
    }
    acc.value()
}

/// `ζ(s)` for real `s ≥ 2`.
pub fn zeta(s: f64) -> f64 {
    1.0 + zeta_minus_one(s)
}

/// Prime zeta function `Σ_p p^{−s}` for real `s ≥ 2`.
pub fn prime_zeta(s: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut n = 1u64;
    loop {
        let arg = n as f64 * s;
        if arg > 70.0 {
            break;
        }
        let mu = mobius(n);
        if mu != 0 {
            acc.add(mu as f64 / n as f64 * zeta_minus_one(arg).ln_1p());
        }
        n += 1;
    }
    acc.value()
}

/// `Σ_{p > cutoff} p^{−s}`.
pub fn prime_zeta_tail(s: f64, cutoff: u64) -> f64 {
    let head = sum_compensated(cached_primes(cutoff).iter().rev().map(|&p| (p as f64).powf(-s)));
    prime_zeta(s) - head
}

fn cached_primes(cutoff: u64) -> Arc<Vec<u64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<u64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&cutoff) {
        return Arc::clone(v);
    }
    let primes = Arc::new(primes_up_to(cutoff));
    cache.lock().unwrap().entry(cutoff).or_insert(primes).clone()
}

/// How infinite Euler products are cut off.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TruncationPolicy {
    /// Multiply primes up to `cutoff`, drop the rest. Fails if the a priori
    /// bound exceeds `tolerance` when one is given.
    FixedCutoff { cutoff: u64, tolerance: Option<f64> },
    /// Correct the tail analytically, starting at `cutoff` and escalating the
    /// cutoff tenfold until the certified bound is at most `tolerance`.
    TargetTolerance { tolerance: f64, cutoff: u64 },
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::TargetTolerance { tolerance: DEFAULT_TOLERANCE, cutoff: DEFAULT_CUTOFF }
    }
}

impl TruncationPolicy {
    pub fn fixed(cutoff: u64) -> Self {
        TruncationPolicy::FixedCutoff { cutoff, tolerance: None }
    }

    pub fn target(tolerance: f64) -> Self {
        TruncationPolicy::TargetTolerance { tolerance, cutoff: DEFAULT_CUTOFF }
    }

    pub fn cutoff(&self) -> u64 {
        match *self {
            TruncationPolicy::FixedCutoff { cutoff, .. } => cutoff,
            TruncationPolicy::TargetTolerance { cutoff, .. } => cutoff,
        }
    }

    /// Same policy with the cutoff raised to at least `min_cutoff`.
    pub fn with_min_cutoff(self, min_cutoff: u64) -> Self {
        match self {
            TruncationPolicy::FixedCutoff { cutoff, tolerance } => {
                TruncationPolicy::FixedCutoff { cutoff: cutoff.max(min_cutoff), tolerance }
            }
            TruncationPolicy::TargetTolerance { tolerance, cutoff } => {
                TruncationPolicy::TargetTolerance { tolerance, cutoff: cutoff.max(min_cutoff) }
            }
        }
    }
}

/// A floating value with a certified bound on its relative error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certified {
    pub value: f64,
    pub rel_bound: f64,
}

impl Certified {
    pub fn exact(value: f64) -> Self {
        Certified { value, rel_bound: 0.0 }
    }

    /// Interval `[value(1 − b), value(1 + b)]`.
    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.rel_bound * self.value.abs()
    }
}

/// Suffix products of `∏_{p}(1 − m/p²)` over the primes up to a cutoff, with
/// the tail beyond the cutoff folded in.
#[derive(Debug)]
pub struct EulerTable {
    order: u64,
    primes: Arc<Vec<u64>>,
    // primes with p² ≤ order come first and are multiplied directly
    direct: usize,
    // log_suffix[i] = Σ_{j ≥ max(i, direct)} ln(1 − order/p_j²), length primes.len()+1
    log_suffix: Vec<f64>,
    log_tail: f64,
    tail_bound: f64,
}

impl EulerTable {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn cutoff_primes(&self) -> &[u64] {
        &self.primes
    }

    /// Certified bound on the relative error of the tail beyond the cutoff.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `∏_{p ≥ first}(1 − order/p²)` including the tail.
    pub fn from_prime(&self, first: u64) -> Certified {
        let i = self.primes.partition_point(|&p| p < first);
        let direct: f64 = self.primes[i.min(self.direct)..self.direct]
            .iter()
            .map(|&p| 1.0 - self.order as f64 / (p * p) as f64)
            .product();
        let log = self.log_suffix[i.max(self.direct)] + self.log_tail;
        let rounding = 4.0 * EPS * (log.abs() + 1.0) + 2.0 * EPS * self.direct as f64;
        Certified { value: direct * log.exp(), rel_bound: self.tail_bound + rounding }
    }

    /// The full product over all primes.
    pub fn total(&self) -> Certified {
        self.from_prime(2)
    }
}

fn policy_error(order: u64, cutoff: u64) -> Option<Error> {
    if cutoff < 2 {
        return Some(Error::Policy(format!("cutoff {cutoff} must be at least 2")));
    }
    if (order as u128) >= (cutoff as u128) * (cutoff as u128) {
        return Some(Error::Policy(format!(
            "order {order} must be below cutoff² = {}",
            (cutoff as u128) * (cutoff as u128)
        )));
    }
    None
}

fn fixed_bound(order: u64, cutoff: u64) -> f64 {
    let a = order as f64;
    let p = cutoff as f64;
    a / ((p - 1.0) * (1.0 - a / (p * p)))
}

fn corrected_bound(order: u64, cutoff: u64) -> f64 {
    let a = order as f64;
    let p = cutoff as f64;
    let remainder = a * a / (6.0 * p * p * p * (1.0 - a / (p * p)));
    remainder + 8.0 * EPS * a
}

fn build_table(order: u64, cutoff: u64, corrected: bool) -> EulerTable {
    let primes = cached_primes(cutoff);
    let a = order as f64;
    let direct = primes.partition_point(|&p| p * p <= order);
    let mut log_suffix = vec![0.0; primes.len() + 1];
    let mut acc = CompensatedSum::new();
    for j in (direct..primes.len()).rev() {
        let p = primes[j] as f64;
        acc.add((-a / (p * p)).ln_1p());
        log_suffix[j] = acc.value();
    }
    for j in 0..direct {
        log_suffix[j] = log_suffix[direct];
    }
    let (log_tail, tail_bound) = if corrected {
        (-a * prime_zeta_tail(2.0, cutoff), corrected_bound(order, cutoff))
    } else {
        (0.0, fixed_bound(order, cutoff))
    };
    EulerTable { order, primes, direct, log_suffix, log_tail, tail_bound }
}

fn cached_table(order: u64, cutoff: u64, corrected: bool) -> Arc<EulerTable> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64, bool), Arc<EulerTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (order, cutoff, corrected);
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return Arc::clone(t);
    }
    let table = Arc::new(build_table(order, cutoff, corrected));
    cache.lock().unwrap().entry(key).or_insert(table).clone()
}

/// Suffix-product table for `∏_p (1 − order/p²)` under `policy`.
pub fn euler_table(order: u64, policy: &TruncationPolicy) -> Result<Arc<EulerTable>> {
    match *policy {
        TruncationPolicy::FixedCutoff { cutoff, tolerance } => {
            if let Some(e) = policy_error(order, cutoff) {
                return Err(e);
            }
            let bound = fixed_bound(order, cutoff);
            if let Some(tol) = tolerance {
                if bound > tol {
                    return Err(Error::Precision(format!(
                        "tail bound {bound:.3e} at cutoff {cutoff} exceeds tolerance {tol:.3e}"
                    )));
                }
            }
            Ok(cached_table(order, cutoff, false))
        }
        TruncationPolicy::TargetTolerance { tolerance, cutoff } => {
            if !(tolerance > 0.0) {
                return Err(Error::Policy(format!("tolerance {tolerance} must be positive")));
            }
            if let Some(e) = policy_error(order, cutoff) {
                return Err(e);
            }
            let mut p = cutoff;
            loop {
                if (order as u128) < (p as u128) * (p as u128)
                    && corrected_bound(order, p) <= tolerance
                {
                    return Ok(cached_table(order, p, true));
                }
                if p >= MAX_CUTOFF {
                    return Err(Error::Precision(format!(
                        "tolerance {tolerance:.3e} unreachable for order {order} below cutoff {MAX_CUTOFF}"
                    )));
                }
                p = (p.saturating_mul(10)).min(MAX_CUTOFF);
            }
        }
    }
}

/// `K_m = ∏_p (1 − m/p²)`.
pub fn product_constant(order: u64, policy: &TruncationPolicy) -> Result<Certified> {
    Ok(euler_table(order, policy)?.total())
}

/// `σ₁ = ∏_p (1 − 2/p²)`.
pub fn sigma_one(policy: &TruncationPolicy) -> Result<Certified> {
    product_constant(2, policy)
}
