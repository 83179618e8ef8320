// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Correlation functions of the square-free integers.
//!
//! `c(k₁,…,k_r)` is the limiting frequency of `n` such that `n, n+k₁, …, n+k_r`
//! are all square-free. It is computed here four ways:
//!
//! * [`empirical_correlation`] counts over `n ≤ N` with shifted bitsets.
//! * [`euler_correlation`] evaluates `∏_p (1 − A_p/p²)`, where `A_p` is the
//!   number of residues of `{0, k₁, …, k_r}` modulo `p²`.
//! * [`c2_sum_form`] writes the pair correlation as `Σ_{d² | k} σ_d`.
//! * [`hall_series_partial`] truncates an absolutely convergent expansion
//!   over the phase group.
//!
//! The level sets of the pair correlation (integers with the same square
//! support) have densities given by [`level_set_density`].

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{self, sum_compensated, Certified, TruncationPolicy, SQUAREFREE_DENSITY};
use crate::lambda::{LambdaPoint, Phase};
use crate::sieve::{self, isqrt, SquarefreeInt};

/// Non-negative, strictly increasing lags `k₁ < … < k_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct LagTuple(Vec<u64>);

impl LagTuple {
    pub fn new(lags: Vec<u64>) -> Result<Self> {
        if lags.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!("lags {lags:?} must be strictly increasing")));
        }
        Ok(LagTuple(lags))
    }

    pub fn empty() -> Self {
        LagTuple(Vec::new())
    }

    pub fn single(k: u64) -> Self {
        LagTuple(vec![k])
    }

    pub fn lags(&self) -> &[u64] {
        &self.0
    }

    /// `r`, the number of lags.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Correlation order `r + 1`.
    pub fn order(&self) -> usize {
        self.0.len() + 1
    }

    pub fn max_lag(&self) -> u64 {
        self.0.last().copied().unwrap_or(0)
    }

    /// `{0} ∪ lags` without repetition.
    pub fn offsets(&self) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(0);
        v.extend(self.0.iter().copied().filter(|&k| k != 0));
        v
    }

    /// Number of distinct residues of `{0} ∪ lags` modulo `m`.
    pub fn residues_mod(&self, m: u64) -> u64 {
        let mut r: Vec<u64> = self.offsets().iter().map(|k| k % m).collect();
        r.sort_unstable();
        r.dedup();
        r.len() as u64
    }
}

impl TryFrom<Vec<u64>> for LagTuple {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        LagTuple::new(v)
    }
}

impl From<LagTuple> for Vec<u64> {
    fn from(l: LagTuple) -> Self {
        l.0
    }
}

impl FromStr for LagTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(LagTuple::empty());
        }
        let lags = s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Domain(format!("lag {x:?} is not a non-negative integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        LagTuple::new(lags)
    }
}

impl fmt::Display for LagTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Empirical,
    Mirsky,
    SigmaSum,
    Hall,
}

/// A correlation value and a bound on its relative error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationValue {
    pub lags: LagTuple,
    pub method: Method,
    pub value: f64,
    pub tail_bound: f64,
    /// Size parameter of the route that produced the value.
    pub n: Option<u64>,
}

/// Frequency of `n ≤ limit` with every `n + k`, `k ∈ {0} ∪ lags`, square-free.
pub fn empirical_count(lags: &LagTuple, limit: u64) -> Result<u64> {
    if limit == 0 {
        return Err(Error::Range("limit must be >= 1".into()));
    }
    let span = limit
        .checked_add(lags.max_lag())
        .ok_or_else(|| Error::Range("limit + lag overflows u64".into()))?;
    let block = sieve::sieve_squarefree(1, span)?;
    let offsets = lags.offsets();
    let words = limit.div_ceil(64);
    let tail_mask = if limit % 64 == 0 { u64::MAX } else { (1u64 << (limit % 64)) - 1 };
    const CHUNK: u64 = 1 << 14;
    let chunks: Vec<u64> = (0..words.div_ceil(CHUNK)).collect();
    Ok(chunks
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(words);
            (lo..hi)
                .map(|w| {
                    let mut acc = offsets.iter().fold(u64::MAX, |acc, &k| acc & block.word_at(64 * w + k));
                    if w == words - 1 {
                        acc &= tail_mask;
                    }
                    acc.count_ones() as u64
                })
                .sum::<u64>()
        })
        .sum())
}

pub fn empirical_correlation(lags: &LagTuple, limit: u64) -> Result<CorrelationValue> {
    let count = empirical_count(lags, limit)?;
    Ok(CorrelationValue {
        lags: lags.clone(),
        method: Method::Empirical,
        value: count as f64 / limit as f64,
        tail_bound: 0.0,
        n: Some(limit),
    })
}

/// `∏_p (1 − A_p/p²)` with a certified tail.
pub fn euler_correlation(lags: &LagTuple, policy: &TruncationPolicy) -> Result<CorrelationValue> {
    let order = lags.offsets().len() as u64;
    let root = isqrt(lags.max_lag());
    let mut head = 1.0;
    let small = sieve::primes_up_to(root);
    for &p in &small {
        let sq = p * p;
        let a = lags.residues_mod(sq);
        if a == sq {
            return Ok(CorrelationValue {
                lags: lags.clone(),
                method: Method::Mirsky,
                value: 0.0,
                tail_bound: 0.0,
                n: Some(p),
            });
        }
        head *= 1.0 - a as f64 / sq as f64;
    }
    let table = euler::euler_table(order, &policy.with_min_cutoff(root + 1))?;
    let tail = table.from_prime(root + 1);
    let value = head * tail.value;
    if value == 0.0 {
        return Ok(CorrelationValue {
            lags: lags.clone(),
            method: Method::Mirsky,
            value,
            tail_bound: 0.0,
            n: table.cutoff_primes().last().copied(),
        });
    }
    Ok(CorrelationValue {
        lags: lags.clone(),
        method: Method::Mirsky,
        value,
        tail_bound: tail.rel_bound + 2.0 * f64::EPSILON * small.len() as f64,
        n: table.cutoff_primes().last().copied(),
    })
}

/// `σ_d = d⁻² ∏_{p ∤ d}(1 − 2/p²) = σ₁ ∏_{p | d} 1/(p² − 2)`.
pub fn sigma_d(d: &SquarefreeInt, policy: &TruncationPolicy) -> Result<Certified> {
    let s1 = euler::sigma_one(policy)?;
    let scale: f64 = d.primes().iter().map(|&p| 1.0 / (p * p - 2) as f64).product();
    Ok(Certified {
        value: s1.value * scale,
        rel_bound: s1.rel_bound + 2.0 * f64::EPSILON * d.omega() as f64,
    })
}

/// Pair correlation as the divisor sum `Σ_{μ²(d)=1, d² | k} σ_d`; `c₂(−k) = c₂(k)`.
pub fn c2_sum_form(k: i64, policy: &TruncationPolicy) -> Result<CorrelationValue> {
    c2_sum_form_with(k, policy, sigma_d)
}

/// [`c2_sum_form`] with a caller-supplied `σ_d`.
pub fn c2_sum_form_with<F>(k: i64, policy: &TruncationPolicy, sigma: F) -> Result<CorrelationValue>
where
    F: Fn(&SquarefreeInt, &TruncationPolicy) -> Result<Certified>,
{
    let lags = LagTuple::single(k.unsigned_abs());
    let s1 = sigma(&SquarefreeInt::one(), policy)?;
    if k == 0 {
        // Σ_d σ_d = σ₁ ∏_p (1 + 1/(p² − 2)), with the tail from the order-1 and order-2 tables
        let t1 = euler::euler_table(1, policy)?;
        let t2 = euler::euler_table(2, policy)?;
        let cut = t1.cutoff_primes().len().min(t2.cutoff_primes().len());
        let primes = &t1.cutoff_primes()[..cut];
        let log_head = sum_compensated(primes.iter().rev().map(|&p| (1.0 / (p * p - 2) as f64).ln_1p()));
        let beyond = primes.last().map_or(2, |&p| p + 1);
        let ratio = t1.from_prime(beyond).value / t2.from_prime(beyond).value;
        let value = s1.value * log_head.exp() * ratio;
        let bound = s1.rel_bound + t1.tail_bound() + t2.tail_bound() + 8.0 * f64::EPSILON * (log_head + 1.0);
        return Ok(CorrelationValue {
            lags,
            method: Method::SigmaSum,
            value,
            tail_bound: bound,
            n: primes.last().copied(),
        });
    }
    let square_primes = sieve::factor_summary(k.unsigned_abs())?.square_primes;
    let terms: Vec<f64> = (0u64..1 << square_primes.len())
        .map(|mask| {
            let d: u64 = square_primes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .product();
            sigma(&SquarefreeInt::new(d).expect("product of distinct primes"), policy)
                .map(|c| c.value)
        })
        .collect::<Result<_>>()?;
    Ok(CorrelationValue {
        lags,
        method: Method::SigmaSum,
        value: sum_compensated(terms),
        tail_bound: s1.rel_bound + 4.0 * f64::EPSILON * (square_primes.len() as f64 + 1.0),
        n: None,
    })
}

/// `c₂(k)` from the closed form `σ₁ ∏_{p² | k} (p² − 1)/(p² − 2)`, `c₂(0) = 6/π²`.
pub fn c2_closed(k: i64, sigma_one: f64) -> f64 {
    if k == 0 {
        return SQUAREFREE_DENSITY;
    }
    let square_primes = sieve::factor_summary(k.unsigned_abs()).expect("k != 0").square_primes;
    square_primes.iter().fold(sigma_one, |acc, &p| acc * level_factor(p))
}

fn level_factor(p: u64) -> f64 {
    let sq = (p * p) as f64;
    (sq - 1.0) / (sq - 2.0)
}

/// Inverse of `a` modulo `m` for coprime `a, m`.
pub(crate) fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "{a} is not invertible modulo {m}");
    s0.rem_euclid(m as i128) as u64
}

/// `c₂(offset + step·i)` for `0 ≤ i < count`, by sieving the progression
/// against each `p²`.
pub fn c2_progression(step: u64, offset: u64, count: u64, policy: &TruncationPolicy) -> Result<Vec<f64>> {
    if step == 0 || count == 0 {
        return Err(Error::Range("step and count must be >= 1".into()));
    }
    let top = (count - 1)
        .checked_mul(step)
        .and_then(|x| x.checked_add(offset))
        .ok_or_else(|| Error::Range("progression exceeds u64".into()))?;
    let s1 = euler::sigma_one(policy)?.value;
    let mut vals = vec![s1; count as usize];
    for p in sieve::primes_up_to(isqrt(top)) {
        let sq = p * p;
        let g = sieve::gcd(step % sq, sq);
        let t = offset % sq;
        let need = (sq - t) % sq;
        if need % g != 0 {
            continue;
        }
        let modulus = sq / g;
        let first = (need / g) % modulus * mod_inverse((step / g) % modulus, modulus) % modulus;
        let f = level_factor(p);
        let mut i = first;
        while i < count {
            vals[i as usize] *= f;
            i += modulus;
        }
    }
    if offset == 0 {
        vals[0] = SQUAREFREE_DENSITY;
    }
    Ok(vals)
}

/// `6/∏_{p | d}(p² − 1)`, so that the level-set density is this over `π²`.
pub fn level_set_coefficient(d: &SquarefreeInt) -> Ratio<u64> {
    let den: u64 = d.primes().iter().map(|&p| p * p - 1).product();
    Ratio::new(6, den)
}

/// Density of `{k : p² | k ⇔ p | d}`, equal to `(6/π²) ∏_{p | d} 1/(p² − 1)`.
pub fn level_set_density(d: &SquarefreeInt) -> f64 {
    d.primes().iter().fold(SQUAREFREE_DENSITY, |acc, &p| acc / (p * p - 1) as f64)
}

/// Frequency of `k ≤ limit` whose square support is exactly the primes of `d`.
pub fn empirical_level_set(d: &SquarefreeInt, limit: u64) -> Result<f64> {
    let radicals = sieve::square_radical_range(1, limit)?;
    let hits = radicals.par_iter().filter(|&&r| r == d.get()).count();
    Ok(hits as f64 / limit as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSetRow {
    pub d: u64,
    /// Density as a rational multiple of `1/π²`.
    pub coefficient: String,
    pub density: f64,
}

/// Level-set densities for square-free `d ≤ d_max`.
pub fn level_set_table(d_max: u64) -> Vec<LevelSetRow> {
    sieve::squarefree_up_to(d_max)
        .into_iter()
        .map(|d| {
            let d = SquarefreeInt::new(d).expect("square-free");
            LevelSetRow {
                d: d.get(),
                coefficient: level_set_coefficient(&d).to_string(),
                density: level_set_density(&d),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSetPoint {
    pub k: u64,
    pub c2: f64,
    /// Product of the primes whose square divides `k`.
    pub d_class: u64,
}

/// `(k, c₂(k), d)` for `1 ≤ k ≤ k_max`.
pub fn level_set_figure(k_max: u64, policy: &TruncationPolicy) -> Result<Vec<LevelSetPoint>> {
    let c2 = c2_progression(1, 1, k_max, policy)?;
    let radicals = sieve::square_radical_range(1, k_max)?;
    Ok((1..=k_max)
        .zip(c2)
        .zip(radicals)
        .map(|((k, c2), d_class)| LevelSetPoint { k, c2, d_class })
        .collect())
}

/// Hall's coefficient `g(s) = (6/π²) μ(s) ∏_{p | s} 1/(p² − 1)`.
pub fn hall_coefficient(s: &SquarefreeInt) -> f64 {
    s.mobius() as f64 * level_set_density(s)
}

/// Partial sum of Hall's series over `s₀, …, s_r ≤ s_max`.
///
/// Terms are added by increasing `max s_j`, then lexicographically in
/// `(s₀, …, s_r)` and the numerators.
pub fn hall_series_partial(lags: &LagTuple, s_max: u64) -> Result<CorrelationValue> {
    if s_max == 0 {
        return Err(Error::Range("s_max must be >= 1".into()));
    }
    let points: Vec<(LambdaPoint, f64)> = LambdaPoint::enumerate(s_max)
        .into_iter()
        .map(|p| {
            let g = hall_coefficient(p.d());
            (p, g)
        })
        .collect();
    let r = lags.len();
    let mut terms: Vec<(Vec<u64>, Vec<u64>, f64)> = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(r);
    collect_hall_terms(lags.lags(), &points, s_max, &mut chosen, &mut terms);
    terms.sort_by(|a, b| (a.0.iter().max(), &a.0, &a.1).cmp(&(b.0.iter().max(), &b.0, &b.1)));
    let value = sum_compensated(terms.iter().map(|t| t.2));
    Ok(CorrelationValue {
        lags: lags.clone(),
        method: Method::Hall,
        value,
        tail_bound: f64::NAN,
        n: Some(s_max),
    })
}

fn collect_hall_terms(
    lags: &[u64],
    points: &[(LambdaPoint, f64)],
    s_max: u64,
    chosen: &mut Vec<usize>,
    out: &mut Vec<(Vec<u64>, Vec<u64>, f64)>,
) {
    if chosen.len() == lags.len() {
        let total = chosen.iter().fold(Phase::ZERO, |acc, &i| acc.add(points[i].0.phase()));
        let first = LambdaPoint::from_phase(total.neg()).expect("Λ is closed");
        if first.d().get() > s_max {
            return;
        }
        let phase = chosen
            .iter()
            .zip(lags)
            .fold(Phase::ZERO, |acc, (&i, &k)| acc.add(points[i].0.phase().scale(k as i128)));
        let weight = chosen.iter().fold(hall_coefficient(first.d()), |acc, &i| acc * points[i].1);
        let mut s = vec![first.d().get()];
        let mut t = vec![first.l()];
        for &i in chosen.iter() {
            s.push(points[i].0.d().get());
            t.push(points[i].0.l());
        }
        out.push((s, t, weight * (std::f64::consts::TAU * phase.to_f64()).cos()));
        return;
    }
    for i in 0..points.len() {
        chosen.push(i);
        collect_hall_terms(lags, points, s_max, chosen, out);
        chosen.pop();
    }
}
