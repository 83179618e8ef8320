// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact arithmetic primitives over integer ranges.
//!
//! Bulk queries (square-free indicators, Möbius values, square radicals,
//! multiplicative products) run a segmented sieve in fixed blocks of
//! [`BLOCK_LEN`] integers. Blocks are independent, so they are evaluated in
//! parallel and concatenated in block order; the output never depends on the
//! number of worker threads.
//!
//! Single-value queries ([`factor_summary`]) use trial division by a cached
//! table of small primes.

use std::io::Write;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integers per sieve block (2^20, sized for a typical L2 cache).
pub const BLOCK_LEN: u64 = 1 << 20;

/// Largest `n` whose small prime factors are covered by the cached table.
const SMALL_PRIME_LIMIT: u64 = 1 << 16;

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// All primes `p <= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = isqrt(limit);
    let base = simple_sieve(root.max(2));
    let mut out = Vec::new();
    let seg = BLOCK_LEN;
    let mut lo = 2u64;
    let mut composite = vec![false; seg as usize];
    while lo <= limit {
        let hi = lo.saturating_add(seg - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        composite[..len].iter_mut().for_each(|c| *c = false);
        for &p in &base {
            let sq = p * p;
            if sq > hi {
                break;
            }
            let first = if sq >= lo { sq } else { lo.div_ceil(p) * p };
            let mut m = first;
            while m <= hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        out.extend(
            composite[..len]
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| lo + i as u64),
        );
        if hi == limit {
            break;
        }
        lo = hi + 1;
    }
    out
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut is_p = vec![true; n + 1];
    is_p[0] = false;
    if n >= 1 {
        is_p[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if is_p[i] {
            let mut j = i * i;
            while j <= n {
                is_p[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is_p
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

fn small_primes() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| simple_sieve(SMALL_PRIME_LIMIT))
}

/// Primes needed to sieve a range ending at `end` (inclusive): all `p` with `p^2 <= end`.
fn sieving_primes(end: u64) -> Vec<u64> {
    let root = isqrt(end);
    if root <= SMALL_PRIME_LIMIT {
        let table = small_primes();
        let k = table.partition_point(|&p| p <= root);
        table[..k].to_vec()
    } else {
        primes_up_to(root)
    }
}

fn range_end(start: u64, length: u64) -> Result<u64> {
    if start == 0 {
        return Err(Error::Range("start must be >= 1".into()));
    }
    if length == 0 {
        return Err(Error::Range("length must be >= 1".into()));
    }
    start
        .checked_add(length - 1)
        .ok_or_else(|| Error::Range(format!("start {start} + length {length} overflows u64")))
}

/// Block decomposition of `[start, start+length)`; offsets are multiples of `BLOCK_LEN`.
fn blocks(length: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut off = 0;
    while off < length {
        let len = BLOCK_LEN.min(length - off);
        out.push((off, len));
        off += len;
    }
    out
}

/// Bit-packed square-free indicator over `[start, start+length)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveBlock {
    start: u64,
    length: u64,
    words: Vec<u64>,
}

impl SieveBlock {
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn len(&self) -> u64 {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// μ²(start + i).
    pub fn get(&self, i: u64) -> bool {
        assert!(i < self.length, "index {i} outside block of length {}", self.length);
        (self.words[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    /// Whether `n` (absolute) is square-free; `n` must lie inside the block.
    pub fn contains_squarefree(&self, n: u64) -> bool {
        self.get(n - self.start)
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// 64 bits starting at bit offset `bit`, zero-filled past the end.
    pub fn word_at(&self, bit: u64) -> u64 {
        let w = (bit / 64) as usize;
        let s = bit % 64;
        let lo = self.words.get(w).copied().unwrap_or(0);
        if s == 0 {
            lo
        } else {
            let hi = self.words.get(w + 1).copied().unwrap_or(0);
            (lo >> s) | (hi << (64 - s))
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.length).map(move |i| self.get(i))
    }

    /// Appends a block that starts exactly where this one ends.
    pub fn concat(&self, next: &SieveBlock) -> Result<SieveBlock> {
        if self.start + self.length != next.start {
            return Err(Error::Range(format!(
                "blocks are not adjacent: {}+{} != {}",
                self.start, self.length, next.start
            )));
        }
        let mut words = self.words.clone();
        words.resize(((self.length + next.length).div_ceil(64)) as usize, 0);
        for i in 0..next.length {
            if next.get(i) {
                let j = self.length + i;
                words[(j / 64) as usize] |= 1 << (j % 64);
            }
        }
        Ok(SieveBlock { start: self.start, length: self.length + next.length, words })
    }

    /// 8-byte LE start, 8-byte LE length, then ⌈length/8⌉ bytes, LSB-first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = self.length.div_ceil(8) as usize;
        let mut out = Vec::with_capacity(16 + nbytes);
        out.extend_from_slice(&self.start.to_le_bytes());
        out.extend_from_slice(&self.length.to_le_bytes());
        out.extend(self.words.iter().flat_map(|w| w.to_le_bytes()).take(nbytes));
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<SieveBlock> {
        if bytes.len() < 16 {
            return Err(Error::Domain("sieve block header truncated".into()));
        }
        let start = u64::from_le_bytes(bytes[0..8].try_into().unwrap());
        let length = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let nbytes = length.div_ceil(8) as usize;
        let body = &bytes[16..];
        if body.len() != nbytes {
            return Err(Error::Domain(format!(
                "sieve block body has {} bytes, expected {nbytes}",
                body.len()
            )));
        }
        range_end(start, length)?;
        let mut words = vec![0u64; length.div_ceil(64) as usize];
        for (i, b) in body.iter().enumerate() {
            words[i / 8] |= (*b as u64) << (8 * (i % 8));
        }
        if length % 64 != 0 {
            let last = words.len() - 1;
            words[last] &= (1u64 << (length % 64)) - 1;
        }
        Ok(SieveBlock { start, length, words })
    }
}

fn sieve_words(start: u64, len: u64, primes: &[u64]) -> Vec<u64> {
    let nwords = len.div_ceil(64) as usize;
    let mut words = vec![u64::MAX; nwords];
    if len % 64 != 0 {
        words[nwords - 1] = (1u64 << (len % 64)) - 1;
    }
    let end = start + (len - 1);
    for &p in primes {
        let sq = p * p;
        if sq > end {
            break;
        }
        let first = start.div_ceil(sq) * sq;
        let mut m = first;
        while m <= end {
            let i = m - start;
            words[(i / 64) as usize] &= !(1u64 << (i % 64));
            m = match m.checked_add(sq) {
                Some(v) => v,
                None => break,
            };
        }
    }
    words
}

/// Square-free indicator of `[start, start+length)`.
pub fn sieve_squarefree(start: u64, length: u64) -> Result<SieveBlock> {
    let end = range_end(start, length)?;
    let primes = sieving_primes(end);
    let parts: Vec<Vec<u64>> = blocks(length)
        .into_par_iter()
        .map(|(off, len)| sieve_words(start + off, len, &primes))
        .collect();
    let words = parts.concat();
    Ok(SieveBlock { start, length, words })
}

/// Number of square-free `n` in `[1, limit]`.
pub fn count_squarefree(limit: u64) -> Result<u64> {
    if limit == 0 {
        return Ok(0);
    }
    let primes = sieving_primes(limit);
    Ok(blocks(limit)
        .into_par_iter()
        .map(|(off, len)| {
            sieve_words(1 + off, len, &primes)
                .iter()
                .map(|w| w.count_ones() as u64)
                .sum::<u64>()
        })
        .sum())
}

fn mobius_block(start: u64, len: u64, primes: &[u64]) -> Vec<i8> {
    let n = len as usize;
    let mut mu = vec![1i8; n];
    let mut prod = vec![1u64; n];
    let end = start + (len - 1);
    for &p in primes {
        if p * p > end {
            break;
        }
        let mut m = start.div_ceil(p) * p;
        while m <= end {
            let i = (m - start) as usize;
            mu[i] = -mu[i];
            prod[i] *= p;
            m += p;
        }
        let sq = p * p;
        let mut m = start.div_ceil(sq) * sq;
        while m <= end {
            mu[(m - start) as usize] = 0;
            m += sq;
        }
    }
    for i in 0..n {
        if mu[i] != 0 && prod[i] < start + i as u64 {
            mu[i] = -mu[i];
        }
    }
    mu
}

/// Möbius values μ(start), …, μ(start+length-1) by segmented sieving.
pub fn mobius_range(start: u64, length: u64) -> Result<Vec<i8>> {
    let end = range_end(start, length)?;
    let primes = sieving_primes(end);
    let parts: Vec<Vec<i8>> = blocks(length)
        .into_par_iter()
        .map(|(off, len)| mobius_block(start + off, len, &primes))
        .collect();
    Ok(parts.concat())
}

/// For each `n` in the range, `∏_{p² | n} p` (the radical of the square part).
///
/// `square_radical(n) == d` exactly when 𝒫₂(n) = 𝒫(d).
pub fn square_radical_range(start: u64, length: u64) -> Result<Vec<u64>> {
    let end = range_end(start, length)?;
    let primes = sieving_primes(end);
    let parts: Vec<Vec<u64>> = blocks(length)
        .into_par_iter()
        .map(|(off, len)| {
            let s = start + off;
            let e = s + (len - 1);
            let mut r = vec![1u64; len as usize];
            for &p in &primes {
                let sq = p * p;
                if sq > e {
                    break;
                }
                let mut m = s.div_ceil(sq) * sq;
                while m <= e {
                    r[(m - s) as usize] *= p;
                    m += sq;
                }
            }
            r
        })
        .collect();
    Ok(parts.concat())
}

/// For each `n` in the range: `∏_{p | n} f(p)` when `n` is square-free, else `0.0`.
pub fn squarefree_multiplicative_range<F>(start: u64, length: u64, f: F) -> Result<Vec<f64>>
where
    F: Fn(u64) -> f64 + Sync,
{
    let end = range_end(start, length)?;
    let primes = sieving_primes(end);
    let parts: Vec<Vec<f64>> = blocks(length)
        .into_par_iter()
        .map(|(off, len)| {
            let s = start + off;
            let e = s + (len - 1);
            let n = len as usize;
            let mut val = vec![1.0f64; n];
            let mut prod = vec![1u64; n];
            for &p in &primes {
                let sq = p * p;
                if sq > e {
                    break;
                }
                let fp = f(p);
                let mut m = s.div_ceil(p) * p;
                while m <= e {
                    let i = (m - s) as usize;
                    val[i] *= fp;
                    prod[i] *= p;
                    m += p;
                }
                let mut m = s.div_ceil(sq) * sq;
                while m <= e {
                    val[(m - s) as usize] = 0.0;
                    m += sq;
                }
            }
            for i in 0..n {
                let v = s + i as u64;
                if val[i] != 0.0 && prod[i] < v {
                    val[i] *= f(v / prod[i]);
                }
            }
            val
        })
        .collect();
    Ok(parts.concat())
}

/// Square-free integers `1 <= d <= limit`, ascending.
pub fn squarefree_up_to(limit: u64) -> Vec<u64> {
    if limit == 0 {
        return Vec::new();
    }
    let block = sieve_squarefree(1, limit).expect("limit >= 1");
    (1..=limit).filter(|&n| block.contains_squarefree(n)).collect()
}

/// Writes `n,mu,mu2` lines for the range.
pub fn write_csv<W: Write>(start: u64, length: u64, mut out: W) -> Result<()> {
    let mu = mobius_range(start, length)?;
    writeln!(out, "n,mu,mu2")?;
    for (i, m) in mu.iter().enumerate() {
        writeln!(out, "{},{},{}", start + i as u64, m, (*m != 0) as u8)?;
    }
    Ok(())
}

/// Prime data of a single integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSummary {
    pub n: u64,
    /// 𝒫(n)
    pub distinct_primes: Vec<u64>,
    /// 𝒫₂(n)
    pub square_primes: Vec<u64>,
    pub omega: u32,
    pub mobius: i8,
}

/// Full factorization as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    let mut push = |n: &mut u64, p: u64| {
        if *n % p == 0 {
            let mut e = 0;
            while *n % p == 0 {
                *n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    };
    for &p in small_primes() {
        if p * p > n {
            break;
        }
        push(&mut n, p);
    }
    if n > 1 && SMALL_PRIME_LIMIT * SMALL_PRIME_LIMIT < n {
        // 6k±1 wheel beyond the table
        let mut q = SMALL_PRIME_LIMIT + 1;
        q += (6 - q % 6) % 6;
        while q.checked_mul(q).is_some_and(|sq| sq <= n) {
            push(&mut n, q - 1);
            push(&mut n, q + 1);
            q += 6;
        }
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn factor_summary(n: u64) -> Result<FactorSummary> {
    if n == 0 {
        return Err(Error::Range("factor_summary requires n >= 1".into()));
    }
    let f = factorize(n);
    let distinct_primes: Vec<u64> = f.iter().map(|&(p, _)| p).collect();
    let square_primes: Vec<u64> = f.iter().filter(|&&(_, e)| e >= 2).map(|&(p, _)| p).collect();
    let omega = distinct_primes.len() as u32;
    let mobius = if !square_primes.is_empty() {
        0
    } else if omega % 2 == 0 {
        1
    } else {
        -1
    };
    Ok(FactorSummary { n, distinct_primes, square_primes, omega, mobius })
}

pub fn mobius(n: u64) -> i8 {
    factor_summary(n).map(|f| f.mobius).unwrap_or(0)
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && mobius(n) != 0
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// A square-free positive integer with its prime factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquarefreeInt {
    value: u64,
    primes: Vec<u64>,
}

impl SquarefreeInt {
    pub fn new(value: u64) -> Result<Self> {
        let f = factor_summary(value)
            .map_err(|_| Error::Domain("square-free integer must be >= 1".into()))?;
        if f.mobius == 0 {
            return Err(Error::Domain(format!("{value} is not square-free")));
        }
        Ok(SquarefreeInt { value, primes: f.distinct_primes })
    }

    pub fn one() -> Self {
        SquarefreeInt { value: 1, primes: Vec::new() }
    }

    pub fn get(&self) -> u64 {
        self.value
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn omega(&self) -> u32 {
        self.primes.len() as u32
    }

    pub fn mobius(&self) -> i8 {
        if self.primes.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn square(&self) -> u64 {
        self.value * self.value
    }
}

impl std::fmt::Display for SquarefreeInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_mu2(n: u64) -> bool {
        let mut p = 2;
        while p * p <= n {
            if n % (p * p) == 0 {
                return false;
            }
            p += 1;
        }
        true
    }

    #[test]
    fn first_ten() {
        let b = sieve_squarefree(1, 10).unwrap();
        let bits: Vec<u8> = b.iter().map(|x| x as u8).collect();
        assert_eq!(bits, vec![1, 1, 1, 0, 1, 1, 1, 0, 0, 1]);
    }

    #[test]
    fn popcount_to_100() {
        let oracle = (1..=100).filter(|&n| brute_mu2(n)).count() as u64;
        assert_eq!(oracle, 61);
        assert_eq!(sieve_squarefree(1, 100).unwrap().count_ones(), 61);
    }

    #[test]
    fn single_square() {
        assert!(!sieve_squarefree(49, 1).unwrap().get(0));
    }

    #[test]
    fn count_matches_brute_force_to_1e5() {
        let block = sieve_squarefree(1, 100_000).unwrap();
        let mut running = 0u64;
        for n in 1..=100_000u64 {
            let b = brute_mu2(n);
            assert_eq!(block.contains_squarefree(n), b, "n = {n}");
            running += b as u64;
        }
        assert_eq!(block.count_ones(), running);
        assert_eq!(count_squarefree(100_000).unwrap(), running);
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius_range(1, 6).unwrap(), vec![1, -1, -1, 0, -1, 1]);
        assert_eq!(mobius_range(30, 1).unwrap(), vec![-1]);
        assert_eq!(mobius_range(12, 1).unwrap(), vec![0]);
    }

    #[test]
    fn mobius_and_indicator_agree() {
        let mu = mobius_range(1, 100_000).unwrap();
        let b = sieve_squarefree(1, 100_000).unwrap();
        for (i, m) in mu.iter().enumerate() {
            assert_eq!(*m != 0, b.get(i as u64));
            assert_eq!(*m, factor_summary(i as u64 + 1).unwrap().mobius);
        }
    }

    #[test]
    fn multi_block_ranges() {
        let start = 3 * BLOCK_LEN - 1000;
        let b = sieve_squarefree(start, BLOCK_LEN + 5000).unwrap();
        for i in (0..b.len()).step_by(997) {
            assert_eq!(b.get(i), brute_mu2(start + i));
        }
        let mu = mobius_range(start, BLOCK_LEN + 5000).unwrap();
        for i in (0..mu.len()).step_by(1009) {
            assert_eq!(mu[i], mobius(start + i as u64));
        }
    }

    #[test]
    fn factor_summary_examples() {
        let one = factor_summary(1).unwrap();
        assert_eq!((one.distinct_primes.len(), one.square_primes.len(), one.omega, one.mobius), (0, 0, 0, 1));
        let big = factor_summary(1024 * 2187).unwrap();
        assert_eq!(big.distinct_primes, vec![2, 3]);
        assert_eq!(big.omega, 2);
        let twelve = factor_summary(12).unwrap();
        assert_eq!(twelve.distinct_primes, vec![2, 3]);
        assert_eq!(twelve.square_primes, vec![2]);
        assert_eq!(twelve.mobius, 0);
        assert!(factor_summary(0).is_err());
    }

    #[test]
    fn large_factorization() {
        let n = 1_000_000_007u64 * 998_244_353;
        let f = factor_summary(n).unwrap();
        assert_eq!(f.distinct_primes, vec![998_244_353, 1_000_000_007]);
        assert_eq!(f.mobius, 1);
    }

    #[test]
    fn overflow_is_range_error() {
        assert!(matches!(sieve_squarefree(u64::MAX, 2), Err(Error::Range(_))));
        assert!(matches!(sieve_squarefree(0, 2), Err(Error::Range(_))));
        assert!(matches!(mobius_range(5, 0), Err(Error::Range(_))));
    }

    #[test]
    fn squarefree_of_square() {
        let d = SquarefreeInt::new(30).unwrap();
        let f = factor_summary(d.square()).unwrap();
        assert!(factor_summary(30).unwrap().square_primes.is_empty());
        assert_eq!(f.square_primes, d.primes());
        assert!(SquarefreeInt::new(18).is_err());
    }

    #[test]
    fn square_radicals() {
        let r = square_radical_range(1, 100).unwrap();
        assert_eq!(r[3], 2); // 4
        assert_eq!(r[35], 6); // 36
        assert_eq!(r[71], 6); // 72 = 2^3 3^2
        assert_eq!(r[29], 1); // 30
    }

    #[test]
    fn multiplicative_products() {
        let v = squarefree_multiplicative_range(1, 50, |p| p as f64).unwrap();
        for n in 1..=50u64 {
            let expect = if brute_mu2(n) { n as f64 } else { 0.0 };
            assert_eq!(v[(n - 1) as usize], expect);
        }
    }

    #[test]
    fn primes_segmented() {
        let p = primes_up_to(3 * BLOCK_LEN);
        assert_eq!(p.len(), simple_sieve(3 * BLOCK_LEN).len());
        assert_eq!(&primes_up_to(30), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn csv_lines() {
        let mut buf = Vec::new();
        write_csv(3, 3, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,mu,mu2\n3,-1,1\n4,0,0\n5,-1,1\n");
    }

    proptest! {
        #[test]
        fn blocks_concatenate(start in 1u64..5_000_000, a in 1u64..3000, b in 1u64..3000) {
            let whole = sieve_squarefree(start, a + b).unwrap();
            let left = sieve_squarefree(start, a).unwrap();
            let right = sieve_squarefree(start + a, b).unwrap();
            prop_assert_eq!(left.concat(&right).unwrap(), whole);
        }

        #[test]
        fn bytes_roundtrip(start in 1u64..1_000_000_000, len in 1u64..2000) {
            let b = sieve_squarefree(start, len).unwrap();
            let bytes = b.to_bytes();
            prop_assert_eq!(bytes.len() as u64, 16 + len.div_ceil(8));
            prop_assert_eq!(SieveBlock::from_bytes(&bytes).unwrap(), b);
        }
    }
}
