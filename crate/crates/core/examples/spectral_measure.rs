// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Atoms of the spectral measure, its Fourier coefficients and the mass
//! left beyond a radical cutoff.

use sqfree::correlations::{self, LagTuple};
use sqfree::euler::{TruncationPolicy, SQUAREFREE_DENSITY};
use sqfree::spectral;

fn main() -> sqfree::Result<()> {
    let policy = TruncationPolicy::default();
    let atoms = spectral::spectral_atoms(15, &policy)?;
    println!("{} atoms, mass {:.8} of {:.8}", atoms.len(), spectral::total_mass(&atoms), SQUAREFREE_DENSITY);

    for k in [0i64, 1, 4, 8, 9] {
        let f = spectral::fourier_coefficient(&atoms, k);
        let c = correlations::euler_correlation(&LagTuple::single(k as u64), &policy)?.value;
        println!("k={k}: coefficient {f:.6} vs correlation {c:.6}");
    }

    for d in [10, 100, 1000] {
        let t = spectral::approx_error_tail(d)?;
        println!("tail beyond {d}: {:.3e}", t.total());
    }
    Ok(())
}
