// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact and certified numerics for the square-free integers.
//!
//! | module | contents |
//! |---|---|
//! | [`sieve`] | segmented square-free and Möbius sieves, factorizations |
//! | [`euler`] | zeta values, Euler-product tails, truncation policies |
//! | [`correlations`] | correlation functions computed along four independent routes |
//! | [`lambda`] | the group of admissible phases `e(l/d²)` |
//! | [`averages`] | progression averages and exponential sums of correlation functions |
//! | [`spectral`] | spectral atoms, eigenfunction statistics, Parseval checks |
//! | [`kronecker`] | the translation on `∏ ℤ/p²ℤ` and its characters |
//! | [`density`] | square-free numbers coprime to a finite prime set |
//! | [`verify`] | self-check suites |
//! | [`cli`] | the `sqf` command line |

pub mod averages;
pub mod cli;
pub mod correlations;
pub mod density;
pub mod error;
pub mod euler;
pub mod kronecker;
pub mod lambda;
pub mod sieve;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use lambda::{LambdaPoint, Phase};
pub use sieve::{SieveBlock, SquarefreeInt};
