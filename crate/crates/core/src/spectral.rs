// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! The spectral measure of the square-free flow and statistics of its
//! eigenfunctions, all reduced to correlation-function identities.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::averages::{cesaro_y2, y3};
use crate::correlations::{hall_coefficient, sigma_d};
use crate::error::{Error, Result};
use crate::euler::{sum_compensated, TruncationPolicy, SQUAREFREE_DENSITY};
use crate::lambda::LambdaPoint;
use crate::sieve::{self, SquarefreeInt};

/// A point mass `weight · δ_{e(l/dsq)}` of the spectral measure.
///
/// Atoms are listed for every `0 ≤ l < d²`, so the same circle point can
/// appear under several `d`; [`SpectralAtom::point`] gives its canonical form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralAtom {
    pub l: u64,
    pub dsq: u64,
    pub weight: f64,
}

impl SpectralAtom {
    pub fn point(&self) -> LambdaPoint {
        LambdaPoint::canonicalize(self.l as i64, self.dsq).expect("atom denominators are squares of square-free integers")
    }
}

pub fn lambda_canonicalize(numer: i64, denom: u64) -> Result<LambdaPoint> {
    LambdaPoint::canonicalize(numer, denom)
}

pub fn lambda_mul(a: &LambdaPoint, b: &LambdaPoint) -> LambdaPoint {
    a.mul(b)
}

/// Atoms `σ_d/d² · δ_{e(l/d²)}` for square-free `d ≤ d_max`, ordered by `(d, l)`.
pub fn spectral_atoms(d_max: u64, policy: &TruncationPolicy) -> Result<Vec<SpectralAtom>> {
    if d_max == 0 {
        return Err(Error::Range("d_max must be >= 1".into()));
    }
    let ds = sieve::squarefree_up_to(d_max);
    let weights: Vec<f64> = ds
        .iter()
        .map(|&d| sigma_d(&SquarefreeInt::new(d).expect("square-free"), policy).map(|s| s.value / (d * d) as f64))
        .collect::<Result<_>>()?;
    let per_d: Vec<Vec<SpectralAtom>> = ds
        .par_iter()
        .zip(weights.par_iter())
        .map(|(&d, &weight)| (0..d * d).map(|l| SpectralAtom { l, dsq: d * d, weight }).collect())
        .collect();
    Ok(per_d.concat())
}

pub fn total_mass(atoms: &[SpectralAtom]) -> f64 {
    sum_compensated(atoms.iter().map(|a| a.weight))
}

/// `ν̂(k) = Σ weight · e(k·l/dsq)` (real part; the measure is symmetric).
pub fn fourier_coefficient(atoms: &[SpectralAtom], k: i64) -> f64 {
    sum_compensated(atoms.iter().map(|a| {
        let r = (k as i128 * a.l as i128).rem_euclid(a.dsq as i128) as f64 / a.dsq as f64;
        a.weight * (std::f64::consts::TAU * r).cos()
    }))
}

/// `λ^s · (1/N) Σ_{n ≤ N} λⁿ c₂(n)`, tending to `λ^s g(d)²`.
pub fn inner_product_x_theta(s: i64, lambda: &LambdaPoint, limit: u64, policy: &TruncationPolicy) -> Result<Complex64> {
    Ok(lambda.phase_at(s as i128).unit() * cesaro_y2(lambda, limit, policy)?)
}

/// `λ^s g(d)²`.
pub fn inner_product_limit(s: i64, lambda: &LambdaPoint) -> Complex64 {
    lambda.phase_at(s as i128).unit() * eigen_norm_sq(lambda)
}

/// `‖θ_λ‖² = g(d)²`.
pub fn eigen_norm_sq(lambda: &LambdaPoint) -> f64 {
    let g = hall_coefficient(lambda.d());
    g * g
}

/// `Σ_{d ≤ D} g(d)² ∏_{p | d}(p² − 1)`, increasing to `6/π²`.
pub fn parseval_partial(d_max: u64) -> Result<f64> {
    if d_max == 0 {
        return Err(Error::Range("D must be >= 1".into()));
    }
    let vals = sieve::squarefree_multiplicative_range(1, d_max, |p| 1.0 / (p * p - 1) as f64)?;
    Ok(SQUAREFREE_DENSITY * SQUAREFREE_DENSITY * sum_compensated(vals.into_iter().rev()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailEstimate {
    pub d: u64,
    pub d_big: u64,
    /// `(6/π²) Σ_{D < d ≤ D_big} |g(d)|`
    pub partial: f64,
    /// Bound on the remaining `(6/π²) Σ_{d > D_big} |g(d)|`.
    pub analytic_bound: f64,
}

impl TailEstimate {
    pub fn total(&self) -> f64 {
        self.partial + self.analytic_bound
    }
}

/// `‖x(s) − x_D(s)‖² = (6/π²) Σ_{d > D} |g(d)|`, summed to `max(10⁶, 100D)`
/// and bounded beyond by `|g(d)| ≤ 1/d²`.
pub fn approx_error_tail(d: u64) -> Result<TailEstimate> {
    if d == 0 {
        return Err(Error::Range("D must be >= 1".into()));
    }
    let d_big = d.saturating_mul(100).max(1_000_000);
    let vals = sieve::squarefree_multiplicative_range(d + 1, d_big - d, |p| 1.0 / (p * p - 1) as f64)?;
    let partial = SQUAREFREE_DENSITY * SQUAREFREE_DENSITY * sum_compensated(vals.into_iter().rev());
    Ok(TailEstimate { d, d_big, partial, analytic_bound: SQUAREFREE_DENSITY / d_big as f64 })
}

/// `ε = μ(d₁) μ(d₂) μ(d)` in `θ̃_a θ̃_b = ε θ̃_{ab}`.
pub fn product_sign(a: &LambdaPoint, b: &LambdaPoint) -> i8 {
    a.mobius() * b.mobius() * a.mul(b).mobius()
}

/// Checks that the sign of the triple average `g(d₁)g(d₂)g(d)` is `ε`.
pub fn product_sign_consistent(a: &LambdaPoint, b: &LambdaPoint) -> bool {
    let v = y3(a, b);
    v != 0.0 && v.signum() as i8 == product_sign(a, b)
}

/// `ε(a,b) ε(ab,c) = ε(b,c) ε(a,bc)`.
pub fn cocycle_holds(a: &LambdaPoint, b: &LambdaPoint, c: &LambdaPoint) -> bool {
    product_sign(a, b) * product_sign(&a.mul(b), c) == product_sign(b, c) * product_sign(a, &b.mul(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::c2_sum_form;

    const ORACLE_NORM_QUARTER: f64 = 0.202_642_367_284_676;

    fn pt(s: &str) -> LambdaPoint {
        s.parse().unwrap()
    }

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn atoms_small() {
        let a = spectral_atoms(1, &policy()).unwrap();
        assert_eq!(a.len(), 1);
        assert!(a[0].point().is_identity());
        let a = spectral_atoms(2, &policy()).unwrap();
        assert_eq!(a.len(), 5);
        let s1 = sigma_d(&SquarefreeInt::one(), &policy()).unwrap().value;
        let s2 = sigma_d(&SquarefreeInt::new(2).unwrap(), &policy()).unwrap().value;
        assert!((total_mass(&a) - (s1 + s2)).abs() < 1e-15);
        assert!(spectral_atoms(0, &policy()).is_err());
    }

    #[test]
    fn atom_mass_converges() {
        let mut last = 0.0;
        for d_max in [1u64, 5, 20, 60] {
            let m = total_mass(&spectral_atoms(d_max, &policy()).unwrap());
            assert!(m > last && m < SQUAREFREE_DENSITY);
            // Σ_{d > D} σ_d < Σ_{d > D} 1/d² < 1/D
            assert!(SQUAREFREE_DENSITY - m < 1.0 / d_max as f64);
            last = m;
        }
    }

    #[test]
    fn fourier_coefficients_are_pair_correlations() {
        let atoms = spectral_atoms(60, &policy()).unwrap();
        for k in [1i64, 4, 9, 12, 36, -4] {
            let c2 = c2_sum_form(k, &policy()).unwrap().value;
            assert!((fourier_coefficient(&atoms, k) - c2).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn norms_and_inner_products() {
        assert!((eigen_norm_sq(&pt("1/4")).sqrt() - ORACLE_NORM_QUARTER).abs() < 1e-14);
        let z = inner_product_x_theta(1, &pt("1/4"), 200_000, &policy()).unwrap();
        let expect = inner_product_limit(1, &pt("1/4"));
        assert!(expect.re.abs() < 1e-15 && expect.im > 0.0);
        assert!((z - expect).norm() < 5e-3);
        let z4 = inner_product_x_theta(4, &pt("1/4"), 1000, &policy()).unwrap();
        let z0 = inner_product_x_theta(0, &pt("1/4"), 1000, &policy()).unwrap();
        assert_eq!(z4, z0);
    }

    #[test]
    fn parseval() {
        assert_eq!(parseval_partial(1).unwrap(), SQUAREFREE_DENSITY * SQUAREFREE_DENSITY);
        let mut last = 0.0;
        for d in [1u64, 2, 3, 10, 100, 1000, 10_000] {
            let p = parseval_partial(d).unwrap();
            assert!(p >= last && p <= SQUAREFREE_DENSITY + 1e-12);
            last = p;
        }
        assert!(SQUAREFREE_DENSITY - last < 1e-3);
    }

    #[test]
    fn tail_estimates() {
        let mut prev = f64::INFINITY;
        for d in [10u64, 20, 100, 200, 1000, 2000] {
            let t = approx_error_tail(d).unwrap();
            assert!(t.total() < prev);
            prev = t.total();
            // full sum Σ|g| = (6/π²)ζ(2) = 1
            let closed = SQUAREFREE_DENSITY - parseval_partial(d).unwrap();
            assert!(t.partial <= closed && closed <= t.total(), "D = {d}");
        }
        let scaled: Vec<f64> = [100u64, 1000, 10_000].iter().map(|&d| approx_error_tail(d).unwrap().total() * d as f64).collect();
        let (lo, hi) = scaled.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
        assert!(hi / lo < 10.0);
    }

    #[test]
    fn signs() {
        let id = LambdaPoint::identity();
        assert_eq!(product_sign(&id, &id), 1);
        assert_eq!(product_sign(&pt("1/4"), &pt("1/9")), 1);
        assert_eq!(product_sign(&pt("1/4"), &pt("3/4")), 1);
        assert_eq!(product_sign(&pt("1/4"), &pt("1/4")), -1);
        assert_eq!(product_sign(&pt("1/4"), &id), 1);
        assert_eq!(product_sign(&pt("1/4"), &pt("1/25")), 1);
        for a in LambdaPoint::enumerate(6).iter().step_by(5) {
            for b in LambdaPoint::enumerate(6).iter().step_by(7) {
                assert!(product_sign_consistent(a, b));
            }
        }
    }
}
