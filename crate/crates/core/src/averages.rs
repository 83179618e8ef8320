// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Averages of correlation functions along progressions and against
//! characters `n ↦ λⁿ`, with finite Cesàro verifiers for each limit.
//!
//! All exponential factors are taken from exact residues `l·n mod d²` and a
//! precomputed table of `e(j/d²)`, so no phase error accumulates with `n`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlations::{c2_progression, hall_coefficient};
use crate::error::{Error, Result};
use crate::euler::{self, CompensatedSum, TruncationPolicy, SQUAREFREE_DENSITY};
use crate::lambda::LambdaPoint;
use crate::sieve::{self, SquarefreeInt};

const ROW_CHUNK: usize = 1 << 14;

/// Hall's coefficient `g(d)` together with its argument.
#[derive(Clone, Debug, PartialEq)]
pub struct HallCoefficient {
    pub d: SquarefreeInt,
    pub value: f64,
}

impl HallCoefficient {
    pub fn new(d: SquarefreeInt) -> Self {
        let value = hall_coefficient(&d);
        HallCoefficient { d, value }
    }

    /// `(6/π²)(4/3)^ω(d)/d²`.
    pub fn upper_bound(&self) -> f64 {
        SQUAREFREE_DENSITY * (4.0f64 / 3.0).powi(self.d.omega() as i32) / self.d.square() as f64
    }
}

/// A residue class `t mod d²` with `d` square-free.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProgressionQuery {
    #[serde(serialize_with = "ser_sqf")]
    pub d: SquarefreeInt,
    pub t: u64,
    /// `gcd(t, d²)`
    pub g: u64,
    /// Primes whose square divides `g`.
    pub square_part: Vec<u64>,
}

fn ser_sqf<S: serde::Serializer>(d: &SquarefreeInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.get())
}

impl ProgressionQuery {
    pub fn new(d: u64, t: u64) -> Result<Self> {
        let d = SquarefreeInt::new(d)?;
        let dsq = d.square();
        if t >= dsq {
            return Err(Error::Domain(format!("residue t = {t} must be below d² = {dsq}")));
        }
        let g = sieve::gcd(t, dsq);
        let square_part = d.primes().iter().copied().filter(|&p| g % (p * p) == 0).collect();
        Ok(ProgressionQuery { d, t, g, square_part })
    }
}

/// `lim (1/L) Σ_{l ≤ L} c₂(d²l + t)`.
pub fn progression_average_limit(q: &ProgressionQuery) -> f64 {
    let base = SQUAREFREE_DENSITY * SQUAREFREE_DENSITY;
    let generic = q.d.primes().iter().fold(base, |acc, &p| {
        let sq = (p * p) as f64;
        acc * sq * (sq - 2.0) / ((sq - 1.0) * (sq - 1.0))
    });
    q.square_part.iter().fold(generic, |acc, &p| {
        let sq = (p * p) as f64;
        acc * (sq - 1.0) / (sq - 2.0)
    })
}

fn ordered_sum<I>(parts: I) -> f64
where
    I: IntoIterator<Item = f64>,
{
    parts.into_iter().collect::<CompensatedSum>().value()
}

/// `(1/L) Σ_{l=1}^{L} c₂(d²l + t)`.
pub fn cesaro_progression_average(q: &ProgressionQuery, limit: u64, policy: &TruncationPolicy) -> Result<f64> {
    if limit == 0 {
        return Err(Error::Range("limit must be >= 1".into()));
    }
    let dsq = q.d.square();
    let vals = c2_progression(dsq, dsq + q.t, limit, policy)?;
    let partial: Vec<f64> = vals.par_chunks(ROW_CHUNK).map(|c| ordered_sum(c.iter().copied())).collect();
    Ok(ordered_sum(partial) / limit as f64)
}

/// `lim (1/N) Σ λⁿ c₂(n) = g(d)²`.
pub fn y2(lambda: &LambdaPoint) -> f64 {
    let g = hall_coefficient(lambda.d());
    g * g
}

/// `e(j/m)` for `0 ≤ j < m`.
pub fn unit_table(m: u64) -> Vec<Complex64> {
    (0..m)
        .map(|j| {
            let a = std::f64::consts::TAU * j as f64 / m as f64;
            Complex64::new(a.cos(), a.sin())
        })
        .collect()
}

/// `λⁿ` for `1 ≤ n ≤ count`.
fn powers(lambda: &LambdaPoint, count: u64) -> Vec<Complex64> {
    let m = lambda.dsq();
    let table = unit_table(m);
    let l = lambda.l() as u128;
    (1..=count).map(|n| table[(l * n as u128 % m as u128) as usize]).collect()
}

fn complex_sum<I: IntoIterator<Item = Complex64>>(iter: I) -> Complex64 {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for z in iter {
        re.add(z.re);
        im.add(z.im);
    }
    Complex64::new(re.value(), im.value())
}

/// `(1/N) Σ_{n=1}^{N} λⁿ c₂(n)`.
pub fn cesaro_y2(lambda: &LambdaPoint, limit: u64, policy: &TruncationPolicy) -> Result<Complex64> {
    if limit == 0 {
        return Err(Error::Range("limit must be >= 1".into()));
    }
    let c2 = c2_progression(1, 1, limit, policy)?;
    let units = powers(lambda, limit);
    let partial: Vec<Complex64> = c2
        .par_chunks(ROW_CHUNK)
        .zip(units.par_chunks(ROW_CHUNK))
        .map(|(c, u)| complex_sum(c.iter().zip(u).map(|(&c, &u)| u * c)))
        .collect();
    Ok(complex_sum(partial) / limit as f64)
}

/// `lim (1/N₁N₂) ΣΣ λ₁^{n₁} λ₂^{n₂} c₃(n₁, n₂) = g(d₁) g(d₂) g(d)` with `λ₁λ₂ = e(l/d²)`.
pub fn y3(a: &LambdaPoint, b: &LambdaPoint) -> f64 {
    let c = a.mul(b);
    hall_coefficient(a.d()) * hall_coefficient(b.d()) * hall_coefficient(c.d())
}

/// Three-point correlation of `{0, n₁, n₂}` for `n₁, n₂ ≤ limit`, from the
/// order-3 constant and per-prime corrections.
struct TripleCorrelation {
    k3: f64,
    // ∏_{p² | n} (p² − 2)/(p² − 3)
    single: Vec<f64>,
    // ∏_{p | r} (p² − 1)(p² − 3)²/(p² − 2)³, indexed by square-free r
    shared: Vec<f64>,
    radical: Vec<u64>,
    c2: Vec<f64>,
}

impl TripleCorrelation {
    fn new(limit: u64, policy: &TruncationPolicy) -> Result<Self> {
        let k3 = euler::product_constant(3, policy)?.value;
        let radical = sieve::square_radical_range(1, limit)?;
        let ratio = |p: u64, f: &dyn Fn(f64) -> f64| f((p * p) as f64);
        let single = std::iter::once(1.0)
            .chain(radical.iter().map(|&r| {
                let primes = sieve::factor_summary(r).expect("r >= 1").distinct_primes;
                primes.iter().map(|&p| ratio(p, &|s| (s - 2.0) / (s - 3.0))).product()
            }))
            .collect();
        let shared = (0..=limit)
            .map(|r| {
                if r == 0 || !sieve::is_squarefree(r) {
                    return f64::NAN;
                }
                let primes = sieve::factor_summary(r).expect("r >= 1").distinct_primes;
                primes
                    .iter()
                    .map(|&p| ratio(p, &|s| (s - 1.0) * (s - 3.0) * (s - 3.0) / ((s - 2.0) * (s - 2.0) * (s - 2.0))))
                    .product()
            })
            .collect();
        let c2 = std::iter::once(SQUAREFREE_DENSITY).chain(c2_progression(1, 1, limit, policy)?).collect();
        let radical = std::iter::once(0).chain(radical).collect();
        Ok(TripleCorrelation { k3, single, shared, radical, c2 })
    }

    fn value(&self, n1: u64, n2: u64) -> f64 {
        if n1 == n2 {
            return self.c2[n1 as usize];
        }
        let diff = n1.abs_diff(n2) as usize;
        let (i, j) = (n1 as usize, n2 as usize);
        let both = sieve::gcd(self.radical[i], self.radical[j]);
        self.k3 * self.single[i] * self.single[j] * self.single[diff] * self.shared[both as usize]
    }
}

/// `c₃(n₁, n₂)`: frequency of `n, n+n₁, n+n₂` all square-free.
pub fn triple_correlation(n1: u64, n2: u64, policy: &TruncationPolicy) -> Result<f64> {
    let t = TripleCorrelation::new(n1.max(n2).max(1), policy)?;
    Ok(t.value(n1, n2))
}

/// `(1/N₁N₂) Σ_{n₁ ≤ N₁} Σ_{n₂ ≤ N₂} λ₁^{n₁} λ₂^{n₂} c₃(n₁, n₂)`.
pub fn cesaro_y3(
    a: &LambdaPoint,
    b: &LambdaPoint,
    n1: u64,
    n2: u64,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Range("n1 and n2 must be >= 1".into()));
    }
    let table = TripleCorrelation::new(n1.max(n2), policy)?;
    let u1 = powers(a, n1);
    let u2 = powers(b, n2);
    let rows: Vec<Complex64> = (1..=n1)
        .into_par_iter()
        .map(|i| {
            let inner = complex_sum((1..=n2).map(|j| u2[(j - 1) as usize] * table.value(i, j)));
            u1[(i - 1) as usize] * inner
        })
        .collect();
    Ok(complex_sum(rows) / (n1 as f64 * n2 as f64))
}

/// `∏_{p | d}(p² − 1)`: the number of `l mod d²` with `gcd(l, d²)` square-free.
pub fn lambda_count(d: &SquarefreeInt) -> u64 {
    d.primes().iter().map(|&p| p * p - 1).product()
}

/// Brute-force twin of [`lambda_count`].
pub fn lambda_count_brute(d: &SquarefreeInt) -> u64 {
    let dsq = d.square();
    (0..dsq).filter(|&l| sieve::is_squarefree(sieve::gcd(l, dsq))).count() as u64
}
