// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! The compact group `∏_p ℤ/p²ℤ`, truncated to its first `m` coordinates,
//! with the translation by `(1, 1, 1, …)` and its characters.
//!
//! Everything here is exact: coordinates are residues and character values
//! are [`Phase`]s.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::correlations::mod_inverse;
use crate::error::{Error, Result};
use crate::lambda::{LambdaPoint, Phase};
use crate::sieve::{self, SquarefreeInt};

/// Number of prime coordinates used when none is specified.
pub const DEFAULT_BASIS_LEN: usize = 25;

/// A point of the truncated group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    basis: Arc<[u64]>,
    coords: Vec<u64>,
}

impl GroupElement {
    /// The zero element over the first `m` primes.
    pub fn zero(m: usize) -> Result<Self> {
        Ok(Self::zero_over(first_primes(m)?))
    }

    /// The zero element over the given primes.
    pub fn zero_over(basis: Vec<u64>) -> Self {
        let coords = vec![0; basis.len()];
        GroupElement { basis: basis.into(), coords }
    }

    pub fn from_coords(basis: Vec<u64>, coords: Vec<u64>) -> Result<Self> {
        if basis.len() != coords.len() {
            return Err(Error::Domain(format!("{} coordinates for {} primes", coords.len(), basis.len())));
        }
        if let Some((p, c)) = basis.iter().zip(&coords).find(|(&p, &c)| c >= p * p) {
            return Err(Error::Domain(format!("coordinate {c} out of range for modulus {}", p * p)));
        }
        Ok(GroupElement { basis: basis.into(), coords })
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Coordinate in `ℤ/p²ℤ`, if `p` is in the basis.
    pub fn coord(&self, p: u64) -> Option<u64> {
        self.basis.iter().position(|&q| q == p).map(|i| self.coords[i])
    }

    /// `g + steps·(1, 1, …)`.
    pub fn translate(&self, steps: i64) -> GroupElement {
        let coords = self
            .basis
            .iter()
            .zip(&self.coords)
            .map(|(&p, &c)| {
                let m = (p * p) as i128;
                (c as i128 + steps as i128).rem_euclid(m) as u64
            })
            .collect();
        GroupElement { basis: Arc::clone(&self.basis), coords }
    }

    /// `∏ p²` over the basis, if it fits in `u128`.
    pub fn period(&self) -> Option<u128> {
        self.basis.iter().try_fold(1u128, |acc, &p| acc.checked_mul((p * p) as u128))
    }
}

/// The first `m` primes.
pub fn first_primes(m: usize) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::Domain("the group needs at least one prime".into()));
    }
    let mut limit = 32u64;
    loop {
        let p = sieve::primes_up_to(limit);
        if p.len() >= m {
            return Ok(p[..m].to_vec());
        }
        limit *= 2;
    }
}

/// The character of the group with eigenvalue `λ` under the translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterSpec {
    lambda: LambdaPoint,
    /// `(p, t_p)` with `l/d² ≡ Σ t_p/p² (mod 1)`, `0 < t_p < p²`.
    exponents: Vec<(u64, u64)>,
}

impl CharacterSpec {
    pub fn new(lambda: LambdaPoint) -> Self {
        let dsq = lambda.dsq() as u128;
        let exponents = lambda
            .d()
            .primes()
            .iter()
            .map(|&p| {
                let sq = p * p;
                let cofactor = (dsq / sq as u128 % sq as u128) as u64;
                let t = (lambda.l() as u128 % sq as u128 * mod_inverse(cofactor, sq) as u128 % sq as u128) as u64;
                (p, t)
            })
            .collect();
        CharacterSpec { lambda, exponents }
    }

    pub fn lambda(&self) -> &LambdaPoint {
        &self.lambda
    }

    pub fn exponents(&self) -> &[(u64, u64)] {
        &self.exponents
    }

    pub fn mul(&self, other: &CharacterSpec) -> CharacterSpec {
        CharacterSpec::new(self.lambda.mul(&other.lambda))
    }
}

/// `χ(g) = Σ_p t_p g_p / p² mod 1`.
pub fn character_eval(chi: &CharacterSpec, g: &GroupElement) -> Result<Phase> {
    chi.exponents.iter().try_fold(Phase::ZERO, |acc, &(p, t)| {
        let c = g.coord(p).ok_or(Error::MissingPrime(p))?;
        let sq = (p * p) as u128;
        Ok(acc.add(Phase::new((t as u128 * c as u128 % sq) as i128, sq)))
    })
}

/// Largest `χ(g + k·u) − χ(g) − k·λ` over `1 ≤ k ≤ n_steps`; zero when the
/// character is an eigenfunction with eigenvalue `λ`.
pub fn verify_eigen_relation(chi: &CharacterSpec, g: &GroupElement, n_steps: u64) -> Result<Phase> {
    if n_steps == 0 {
        return Err(Error::Range("n_steps must be >= 1".into()));
    }
    let base = character_eval(chi, g)?;
    let step = chi.lambda.phase();
    let mut current = g.clone();
    let mut worst = Phase::ZERO;
    for k in 1..=n_steps {
        current = current.translate(1);
        let residual = character_eval(chi, &current)?.sub(base).sub(step.scale(k as i128));
        worst = worst.max(residual);
    }
    Ok(worst)
}

/// Coordinates of `k·u` for `0 ≤ k ≤ steps`.
pub fn orbit(m: usize, steps: u64) -> Result<Vec<GroupElement>> {
    let zero = GroupElement::zero(m)?;
    let mut out = Vec::with_capacity(steps as usize + 1);
    let mut g = zero;
    for _ in 0..=steps {
        let next = g.translate(1);
        out.push(g);
        g = next;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadicalCount {
    pub d: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumMatchReport {
    pub d_max: u64,
    pub lambda_points: usize,
    pub character_eigenvalues: usize,
    pub equal: bool,
    pub counts: Vec<RadicalCount>,
}

/// Compares the enumerated phase group with the eigenvalues `χ(u)` of all
/// characters that depend only on the primes of some square-free `d ≤ d_max`.
pub fn spectrum_match_report(d_max: u64) -> Result<SpectrumMatchReport> {
    if d_max == 0 {
        return Err(Error::Range("d_max must be >= 1".into()));
    }
    let from_lambda: BTreeSet<(u64, u64)> = LambdaPoint::enumerate(d_max).iter().map(|p| (p.l(), p.dsq())).collect();
    let basis = sieve::primes_up_to(d_max.max(2));
    let unit = GroupElement::zero_over(basis.clone()).translate(1);
    let mut from_characters = BTreeSet::new();
    let mut counts = Vec::new();
    for d in sieve::squarefree_up_to(d_max) {
        let d = SquarefreeInt::new(d)?;
        let before = from_characters.len();
        for tuple in exponent_tuples(d.primes()) {
            let mut coords = vec![0u64; basis.len()];
            for (&p, &t) in d.primes().iter().zip(&tuple) {
                let i = basis.iter().position(|&q| q == p).ok_or(Error::MissingPrime(p))?;
                coords[i] = t;
            }
            let eigen = basis
                .iter()
                .zip(&coords)
                .zip(unit.coords())
                .fold(Phase::ZERO, |acc, ((&p, &t), &u)| acc.add(Phase::new((t * u) as i128, (p * p) as u128)));
            let point = LambdaPoint::from_phase(eigen)?;
            from_characters.insert((point.l(), point.dsq()));
        }
        counts.push(RadicalCount { d: d.get(), count: (from_characters.len() - before) as u64 });
    }
    Ok(SpectrumMatchReport {
        d_max,
        lambda_points: from_lambda.len(),
        character_eigenvalues: from_characters.len(),
        equal: from_lambda == from_characters,
        counts,
    })
}

/// All `(t_p)` with `1 ≤ t_p ≤ p² − 1`; one empty tuple for no primes.
fn exponent_tuples(primes: &[u64]) -> Vec<Vec<u64>> {
    primes.iter().fold(vec![Vec::new()], |acc, &p| {
        acc.into_iter()
            .flat_map(|prefix| {
                (1..p * p).map(move |t| {
                    let mut v = prefix.clone();
                    v.push(t);
                    v
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> LambdaPoint {
        s.parse().unwrap()
    }

    #[test]
    fn translations() {
        let z = GroupElement::zero(4).unwrap();
        assert_eq!(z.translate(1).coords(), &[1, 1, 1, 1]);
        assert_eq!(z.translate(-1).translate(1), z);
        let period = z.period().unwrap();
        assert_eq!(period, 4 * 9 * 25 * 49);
        assert_eq!(z.translate(period as i64), z);
        let g = GroupElement::from_coords(vec![2, 3], vec![3, 8]).unwrap();
        assert_eq!(g.translate(period as i64), g);
        assert!(GroupElement::from_coords(vec![2], vec![4]).is_err());
        assert_eq!(first_primes(DEFAULT_BASIS_LEN).unwrap().last(), Some(&97));
    }

    #[test]
    fn character_values() {
        let g = GroupElement::from_coords(vec![2, 3, 5], vec![1, 1, 7]).unwrap();
        assert_eq!(character_eval(&CharacterSpec::new(LambdaPoint::identity()), &g).unwrap(), Phase::ZERO);
        assert_eq!(character_eval(&CharacterSpec::new(pt("1/4")), &g).unwrap(), Phase::new(1, 4));
        assert_eq!(character_eval(&CharacterSpec::new(pt("13/36")), &g).unwrap(), Phase::new(13, 36));
        let chi = CharacterSpec::new(pt("1/49"));
        assert_eq!(character_eval(&chi, &g), Err(Error::MissingPrime(7)));
    }

    #[test]
    fn decomposition_is_exact() {
        for p in LambdaPoint::enumerate(30) {
            let chi = CharacterSpec::new(p.clone());
            let sum = chi
                .exponents()
                .iter()
                .fold(Phase::ZERO, |acc, &(q, t)| acc.add(Phase::new(t as i128, (q * q) as u128)));
            assert_eq!(sum, p.phase());
            assert!(chi.exponents().iter().all(|&(q, t)| t > 0 && t < q * q));
        }
    }

    #[test]
    fn eigen_relation() {
        let g = GroupElement::zero(DEFAULT_BASIS_LEN).unwrap().translate(12345);
        for s in ["0/1", "1/4", "13/36", "5/36", "7/900"] {
            let chi = CharacterSpec::new(pt(s));
            assert_eq!(verify_eigen_relation(&chi, &g, 1000).unwrap(), Phase::ZERO, "{s}");
        }
    }

    #[test]
    fn characters_multiply() {
        let g = GroupElement::zero(5).unwrap().translate(777).translate(-5);
        let pts = LambdaPoint::enumerate(6);
        for a in pts.iter().step_by(3) {
            for b in pts.iter().step_by(4) {
                let (ca, cb) = (CharacterSpec::new(a.clone()), CharacterSpec::new(b.clone()));
                let lhs = character_eval(&ca.mul(&cb), &g).unwrap();
                let rhs = character_eval(&ca, &g).unwrap().add(character_eval(&cb, &g).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn orbit_marginals_are_uniform() {
        let orbit = orbit(3, 4 * 9 * 25 - 1).unwrap();
        for (i, &p) in [2u64, 3, 5].iter().enumerate() {
            let m = (p * p) as usize;
            let mut hits = vec![0usize; m];
            for (k, g) in orbit.iter().enumerate() {
                assert_eq!(g.coords()[i] as usize, k % m);
                hits[g.coords()[i] as usize] += 1;
            }
            assert!(hits.iter().all(|&h| h == orbit.len() / m));
        }
    }

    #[test]
    fn spectrum_matches() {
        let r = spectrum_match_report(1).unwrap();
        assert!(r.equal && r.lambda_points == 1);
        let r = spectrum_match_report(2).unwrap();
        assert!(r.equal && r.lambda_points == 4);
        let r = spectrum_match_report(6).unwrap();
        assert!(r.equal);
        let counts: Vec<u64> = r.counts.iter().map(|c| c.count).collect();
        assert_eq!(counts, vec![1, 3, 8, 24, 24]);
    }
}
