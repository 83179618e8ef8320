// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Square-free integers avoiding a finite set of primes `S`.
//!
//! Their density is `α(S)/ζ(2)` with `α(S) = ∏_{p∈S} p/(p+1)`, and the count up
//! to `N` deviates from `N·α(S)/ζ(2)` by at most `C(S)·√N`. Counts are exact
//! integers and the constants are exact rationals; floating point enters only
//! when comparing against `1/ζ(2)`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::{sum_compensated, SQUAREFREE_DENSITY, ZETA_2};
use crate::sieve;

/// A finite set of primes, sorted and distinct.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PrimeSet(Vec<u64>);

impl PrimeSet {
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        primes.sort_unstable();
        primes.dedup();
        if let Some(&q) = primes.iter().find(|&&q| !sieve::is_prime(q)) {
            return Err(Error::Domain(format!("{q} is not a prime")));
        }
        Ok(PrimeSet(primes))
    }

    pub fn empty() -> Self {
        PrimeSet(Vec::new())
    }

    pub fn primes(&self) -> &[u64] {
        &self.0
    }

    /// `[S] = ∏_{p∈S} p`, with `[∅] = 1`.
    pub fn product(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn contains_divisor_of(&self, n: u64) -> bool {
        self.0.iter().any(|&p| n % p == 0)
    }
}

impl FromStr for PrimeSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(PrimeSet::empty());
        }
        let primes = s
            .split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| Error::Domain(format!("{x:?} is not a prime"))))
            .collect::<Result<Vec<_>>>()?;
        PrimeSet::new(primes)
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `α(S) = ∏ p/(p+1)`.
pub fn alpha_exact(s: &PrimeSet) -> Ratio<i128> {
    s.primes().iter().fold(Ratio::from_integer(1), |acc, &p| acc * Ratio::new(p as i128, p as i128 + 1))
}

pub fn alpha(s: &PrimeSet) -> f64 {
    ratio_to_f64(&alpha_exact(s))
}

/// `a(S) = ∏ (p² − 1)/p²`.
pub fn avoidance_factor(s: &PrimeSet) -> Ratio<i128> {
    s.primes().iter().fold(Ratio::from_integer(1), |acc, &p| {
        let sq = (p * p) as i128;
        acc * Ratio::new(sq - 1, sq)
    })
}

/// `C(S) = 4∏(p−1)/p + ([S] − 1) − ∏(p−1)`.
pub fn error_constant(s: &PrimeSet) -> Ratio<i128> {
    let phi_ratio = s
        .primes()
        .iter()
        .fold(Ratio::from_integer(1), |acc, &p| acc * Ratio::new(p as i128 - 1, p as i128));
    let phi: i128 = s.primes().iter().map(|&p| p as i128 - 1).product();
    phi_ratio * 4 + Ratio::from_integer(s.product() as i128 - 1) - Ratio::from_integer(phi)
}

pub fn ratio_to_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub primes: Vec<u64>,
    pub n: u64,
    pub count: u64,
    /// `count/n` as a reduced fraction.
    pub empirical_exact: String,
    pub empirical: f64,
    /// `α(S)/ζ(2)`
    pub limit: f64,
    pub constant_exact: String,
    pub constant: f64,
    /// `C(S)/√N − |empirical − limit|`
    pub margin: f64,
    /// `None` for `N < 4`, where the bound is not claimed.
    pub bound_holds: Option<bool>,
}

/// Number of square-free `n ≤ limit` with no prime factor in `S`.
pub fn restricted_squarefree_count(s: &PrimeSet, limit: u64) -> Result<u64> {
    if limit == 0 {
        return Ok(0);
    }
    let block = sieve::sieve_squarefree(1, limit)?;
    let modulus = s.product();
    let coprime: Vec<bool> = (0..modulus).map(|r| sieve::gcd(r, modulus) == 1).collect();
    let words = block.words();
    Ok(words
        .par_iter()
        .enumerate()
        .map(|(w, &bits)| {
            let mut bits = bits;
            let mut c = 0u64;
            while bits != 0 {
                let i = bits.trailing_zeros() as u64;
                bits &= bits - 1;
                let n = 1 + 64 * w as u64 + i;
                c += coprime[(n % modulus) as usize] as u64;
            }
            c
        })
        .sum())
}

pub fn restricted_count(s: &PrimeSet, limit: u64) -> Result<DensityReport> {
    if limit == 0 {
        return Err(Error::Range("N must be >= 1".into()));
    }
    let count = restricted_squarefree_count(s, limit)?;
    let empirical = count as f64 / limit as f64;
    let limit_density = alpha(s) * SQUAREFREE_DENSITY;
    let c = error_constant(s);
    let constant = ratio_to_f64(&c);
    let margin = constant / (limit as f64).sqrt() - (empirical - limit_density).abs();
    Ok(DensityReport {
        primes: s.primes().to_vec(),
        n: limit,
        count,
        empirical_exact: Ratio::new(count, limit).to_string(),
        empirical,
        limit: limit_density,
        constant_exact: c.to_string(),
        constant,
        margin,
        bound_holds: (limit >= 4).then_some(margin >= 0.0),
    })
}

/// `(a∗b)(n) = Σ_{d|n} a(d) b(n/d)` for `1 ≤ n ≤ limit`; index `i` holds `n = i + 1`.
pub fn dirichlet_convolve(a: &[i64], b: &[i64], limit: usize) -> Result<Vec<i64>> {
    if a.len() < limit || b.len() < limit {
        return Err(Error::Range(format!("sequences must cover 1..={limit}")));
    }
    let mut out = vec![0i64; limit];
    for d in 1..=limit {
        let ad = a[d - 1];
        if ad == 0 {
            continue;
        }
        for (m, bm) in b.iter().take(limit / d).enumerate() {
            out[d * (m + 1) - 1] += ad * bm;
        }
    }
    Ok(out)
}

/// `δ₁` on `1..=limit`.
pub fn delta_one(limit: usize) -> Vec<i64> {
    let mut v = vec![0; limit];
    if limit > 0 {
        v[0] = 1;
    }
    v
}

/// Indicator of integers with no prime factor in `S`.
pub fn avoidance_indicator(s: &PrimeSet, limit: usize) -> Vec<i64> {
    (1..=limit as u64).map(|n| (!s.contains_divisor_of(n)) as i64).collect()
}

pub fn mobius_sequence(limit: usize) -> Result<Vec<i64>> {
    Ok(sieve::mobius_range(1, limit as u64)?.into_iter().map(i64::from).collect())
}

/// Whether `(μ w_S) ∗ w_S = δ₁` on `1..=limit`.
pub fn convolution_identity_holds(s: &PrimeSet, limit: usize) -> Result<bool> {
    let w = avoidance_indicator(s, limit);
    let mu_w: Vec<i64> = mobius_sequence(limit)?.iter().zip(&w).map(|(m, w)| m * w).collect();
    Ok(dirichlet_convolve(&mu_w, &w, limit)? == delta_one(limit))
}

/// Whether `μ²(n) w_S(n) = Σ_{d² | n} μ(d) w_S(d) w_S(n/d)` for `n ≤ limit`.
pub fn nth_term_identity_holds(s: &PrimeSet, limit: usize) -> Result<bool> {
    let w = avoidance_indicator(s, limit);
    let mu = mobius_sequence(limit)?;
    let mut rhs = vec![0i64; limit];
    let mut d = 1usize;
    while d * d <= limit {
        let coeff = mu[d - 1] * w[d - 1];
        if coeff != 0 {
            for n in (d * d..=limit).step_by(d * d) {
                rhs[n - 1] += coeff * w[n / d - 1];
            }
        }
        d += 1;
    }
    Ok((0..limit).all(|i| mu[i] * mu[i] * w[i] == rhs[i]))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesReport {
    pub primes: Vec<u64>,
    pub limit: u64,
    /// `Σ_{n ≤ limit} w_S(n)/n²`
    pub avoidance_sum: f64,
    /// `a(S) ζ(2)`
    pub avoidance_limit: f64,
    /// `Σ_{n ≤ limit} μ(n) w_S(n)/n²`
    pub mobius_sum: f64,
    /// `1/(a(S) ζ(2))`
    pub mobius_limit: f64,
    /// `1/(limit − 1)`, bounding both tails in absolute value.
    pub tail_bound: f64,
}

pub fn partial_series_checks(s: &PrimeSet, limit: u64) -> Result<SeriesReport> {
    if limit < 2 {
        return Err(Error::Range("limit must be >= 2".into()));
    }
    let w = avoidance_indicator(s, limit as usize);
    let mu = mobius_sequence(limit as usize)?;
    let inv_sq = |i: usize| 1.0 / ((i + 1) as f64 * (i + 1) as f64);
    let avoidance_sum = sum_compensated((0..w.len()).rev().map(|i| w[i] as f64 * inv_sq(i)));
    let mobius_sum = sum_compensated((0..w.len()).rev().map(|i| (mu[i] * w[i]) as f64 * inv_sq(i)));
    let a = ratio_to_f64(&avoidance_factor(s));
    Ok(SeriesReport {
        primes: s.primes().to_vec(),
        limit,
        avoidance_sum,
        avoidance_limit: a * ZETA_2,
        mobius_sum,
        mobius_limit: 1.0 / (a * ZETA_2),
        tail_bound: 1.0 / (limit - 1) as f64,
    })
}

/// `n = n₁ n₂²` with `n₁` the product of primes to odd powers.
pub fn squarefree_decomposition(n: u64) -> Result<(u64, u64)> {
    if n == 0 {
        return Err(Error::Range("n must be >= 1".into()));
    }
    Ok(sieve::factorize(n).into_iter().fold((1, 1), |(a, b), (p, e)| {
        (if e % 2 == 1 { a * p } else { a }, b * p.pow(e / 2))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> PrimeSet {
        s.parse().unwrap()
    }

    #[test]
    fn prime_sets() {
        assert_eq!(set("3,2,3").primes(), &[2, 3]);
        assert_eq!(set("").product(), 1);
        assert!("4".parse::<PrimeSet>().is_err());
        assert!("1".parse::<PrimeSet>().is_err());
        assert_eq!(set("2,3").to_string(), "{2,3}");
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha_exact(&PrimeSet::empty()), Ratio::from_integer(1));
        assert_eq!(alpha_exact(&set("2,3")), Ratio::new(1, 2));
        assert_eq!(alpha_exact(&set("2")), Ratio::new(2, 3));
        let odd = alpha(&set("2")) * SQUAREFREE_DENSITY;
        assert!((odd - 4.0 / (std::f64::consts::PI * std::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn constants() {
        assert_eq!(error_constant(&PrimeSet::empty()), Ratio::from_integer(3));
        assert_eq!(error_constant(&set("2")), Ratio::from_integer(2));
        assert_eq!(error_constant(&set("2,3")), Ratio::new(13, 3));
    }

    #[test]
    fn counts_and_bounds() {
        let r = restricted_count(&PrimeSet::empty(), 100).unwrap();
        assert_eq!(r.count, 61);
        assert_eq!(r.empirical_exact, "61/100");
        assert!((r.empirical - SQUAREFREE_DENSITY).abs() <= 0.3);
        assert_eq!(r.bound_holds, Some(true));
        let r = restricted_count(&set("2"), 1_000_000).unwrap();
        assert!((r.empirical - r.limit).abs() < 2e-3);
        let r = restricted_count(&set("2,3"), 1_000_000).unwrap();
        assert!((r.empirical - 0.5 * SQUAREFREE_DENSITY).abs() < 1e-3);
        assert_eq!(restricted_count(&set("2"), 3).unwrap().bound_holds, None);
    }

    #[test]
    fn count_matches_brute_force() {
        let s = set("2,5");
        let brute = (1..=5000u64).filter(|&n| sieve::is_squarefree(n) && n % 2 != 0 && n % 5 != 0).count() as u64;
        assert_eq!(restricted_squarefree_count(&s, 5000).unwrap(), brute);
    }

    #[test]
    fn convolutions() {
        let n = 10_000;
        let ones = vec![1i64; n];
        assert_eq!(dirichlet_convolve(&mobius_sequence(n).unwrap(), &ones, n).unwrap(), delta_one(n));
        for s in ["2", "2,3", "", "3", "2,3,5"] {
            assert!(convolution_identity_holds(&set(s), n).unwrap());
            assert!(nth_term_identity_holds(&set(s), n).unwrap());
        }
        let tau = dirichlet_convolve(&ones, &ones, 12).unwrap();
        assert_eq!(tau, vec![1, 2, 2, 3, 2, 4, 2, 4, 3, 4, 2, 6]);
    }

    #[test]
    fn series() {
        let r = partial_series_checks(&set("2"), 1_000_000).unwrap();
        assert!((r.avoidance_sum - 0.75 * ZETA_2).abs() < 1e-5);
        assert!((r.mobius_sum - 4.0 / (3.0 * ZETA_2)).abs() < 1e-3);
        let r = partial_series_checks(&set("2,3"), 1_000_000).unwrap();
        assert!((r.avoidance_sum - 0.75 * 8.0 / 9.0 * ZETA_2).abs() < 1e-5);
        assert!((r.avoidance_sum - r.avoidance_limit).abs() <= r.tail_bound);
        assert!((r.mobius_sum - r.mobius_limit).abs() <= r.tail_bound);
    }

    #[test]
    fn decompositions() {
        assert_eq!(squarefree_decomposition(12).unwrap(), (3, 2));
        assert_eq!(squarefree_decomposition(1).unwrap(), (1, 1));
        assert_eq!(squarefree_decomposition(360).unwrap(), (10, 6));
        for n in 1..2000u64 {
            let (a, b) = squarefree_decomposition(n).unwrap();
            assert!(sieve::is_squarefree(a) && a * b * b == n);
        }
    }
}
