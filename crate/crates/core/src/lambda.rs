// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact rational phases and the group `Λ` of roots of unity `e(l/d²)` with
//! `d` square-free and `gcd(l, d²)` square-free.
//!
//! A reduced fraction `a/b` lies in `Λ` exactly when `b` is cube-free. Its
//! canonical form uses `d = rad(b)` and keeps the denominator `d²`, so the
//! point `e(1/2)` is stored as `l = 2, d = 2`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sieve::{factorize, gcd_u128, SquarefreeInt};

/// A rational number modulo 1, kept in lowest terms with `0 ≤ num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    /// `num/den mod 1`. Panics if `den == 0`.
    pub fn new(num: i128, den: u128) -> Phase {
        assert!(den > 0, "phase denominator must be positive");
        let r = num.rem_euclid(den as i128) as u128;
        let g = gcd_u128(r, den);
        let (n, d) = (r / g, den / g);
        Phase {
            num: u64::try_from(n).expect("phase numerator exceeds u64"),
            den: u64::try_from(d).expect("phase denominator exceeds u64"),
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(self, other: Phase) -> Phase {
        let g = gcd_u128(self.den as u128, other.den as u128);
        let den = self.den as u128 / g * other.den as u128;
        let num = self.num as u128 * (den / self.den as u128) + other.num as u128 * (den / other.den as u128);
        Phase::new((num % den) as i128, den)
    }

    pub fn neg(self) -> Phase {
        Phase::new(-(self.num as i128), self.den as u128)
    }

    pub fn sub(self, other: Phase) -> Phase {
        self.add(other.neg())
    }

    /// `k · self mod 1`.
    pub fn scale(self, k: i128) -> Phase {
        let den = self.den as i128;
        let k = k.rem_euclid(den);
        Phase::new((k as u128 * self.num as u128 % self.den as u128) as i128, self.den as u128)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `e(self) = exp(2πi·self)`.
    pub fn unit(self) -> Complex64 {
        let angle = std::f64::consts::TAU * self.to_f64();
        Complex64::new(angle.cos(), angle.sin())
    }
}

impl Ord for Phase {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Phase {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A point `e(l/d²)` of `Λ` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LambdaPoint {
    l: u64,
    d: SquarefreeInt,
}

impl LambdaPoint {
    pub fn identity() -> Self {
        LambdaPoint { l: 0, d: SquarefreeInt::one() }
    }

    /// Canonical point of `e(numer/denom)`; errors if the reduced denominator
    /// is not cube-free.
    pub fn canonicalize(numer: i64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Domain("denominator must be >= 1".into()));
        }
        Self::from_phase(Phase::new(numer as i128, denom as u128))
    }

    pub fn from_phase(phase: Phase) -> Result<Self> {
        let b = phase.den;
        let factors = factorize(b);
        if let Some(&(p, e)) = factors.iter().find(|&&(_, e)| e >= 3) {
            return Err(Error::NotInLambda(format!(
                "{phase}: denominator divisible by {p}^{e}, not of the form d² with square-free d"
            )));
        }
        let d: u64 = factors.iter().map(|&(p, _)| p).product();
        let d = SquarefreeInt::new(d).expect("radical is square-free");
        let dsq = d.square();
        let l = (phase.num as u128 * (dsq / b) as u128) as u64;
        Ok(LambdaPoint { l, d })
    }

    /// Parses `L/DSQ` literally: `DSQ` must equal `d²` for square-free `d`
    /// and `gcd(L, DSQ)` must be square-free.
    pub fn parse_strict(s: &str) -> Result<Self> {
        let (ls, ds) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| Error::Domain(format!("phase {s:?} must have the form L/DSQ")))?;
        let l: i64 = ls
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("phase numerator {ls:?} is not an integer")))?;
        let dsq: u64 = ds
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("phase denominator {ds:?} is not a positive integer")))?;
        if dsq == 0 {
            return Err(Error::Domain("phase denominator must be >= 1".into()));
        }
        let d = crate::sieve::isqrt(dsq);
        if d * d != dsq {
            return Err(Error::NotInLambda(format!("{s}: {dsq} is not a perfect square")));
        }
        let d = SquarefreeInt::new(d)
            .map_err(|_| Error::NotInLambda(format!("{s}: {d} is not square-free")))?;
        let l = (l as i128).rem_euclid(dsq as i128) as u64;
        let g = crate::sieve::gcd(l, dsq);
        if !crate::sieve::is_squarefree(g) {
            return Err(Error::NotInLambda(format!("{s}: gcd({l}, {dsq}) = {g} is not square-free")));
        }
        Ok(LambdaPoint { l, d })
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn d(&self) -> &SquarefreeInt {
        &self.d
    }

    pub fn dsq(&self) -> u64 {
        self.d.square()
    }

    pub fn phase(&self) -> Phase {
        Phase::new(self.l as i128, self.dsq() as u128)
    }

    pub fn is_identity(&self) -> bool {
        self.l == 0
    }

    /// `μ(d)`.
    pub fn mobius(&self) -> i8 {
        self.d.mobius()
    }

    pub fn mul(&self, other: &LambdaPoint) -> LambdaPoint {
        Self::from_phase(self.phase().add(other.phase()))
            .unwrap_or_else(|e| panic!("Λ closure violated for {self} · {other}: {e}"))
    }

    pub fn inverse(&self) -> LambdaPoint {
        Self::from_phase(self.phase().neg())
            .unwrap_or_else(|e| panic!("Λ closure violated for {self}⁻¹: {e}"))
    }

    pub fn pow(&self, k: i64) -> LambdaPoint {
        Self::from_phase(self.phase().scale(k as i128))
            .unwrap_or_else(|e| panic!("Λ closure violated for {self}^{k}: {e}"))
    }

    /// `λ^n` as a phase.
    pub fn phase_at(&self, n: i128) -> Phase {
        self.phase().scale(n)
    }

    pub fn unit(&self) -> Complex64 {
        self.phase().unit()
    }

    /// All points with the given square-free `d`, ordered by `l`.
    pub fn with_radical(d: &SquarefreeInt) -> Vec<LambdaPoint> {
        let dsq = d.square();
        (0..dsq)
            .filter(|&l| d.primes().iter().all(|&p| l % (p * p) != 0))
            .map(|l| LambdaPoint { l, d: d.clone() })
            .collect()
    }

    /// All points with `d ≤ d_max`, ordered by `(d, l)`.
    pub fn enumerate(d_max: u64) -> Vec<LambdaPoint> {
        crate::sieve::squarefree_up_to(d_max)
            .into_iter()
            .flat_map(|d| Self::with_radical(&SquarefreeInt::new(d).expect("square-free")))
            .collect()
    }
}

impl Ord for LambdaPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.d.get(), self.l).cmp(&(other.d.get(), other.l))
    }
}

impl PartialOrd for LambdaPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LambdaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.l, self.dsq())
    }
}

impl FromStr for LambdaPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_strict(s)
    }
}
