// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Density of square-free numbers coprime to a finite prime set, with the
//! explicit error constant.

use sqfree::density::{self, PrimeSet};

fn main() -> sqfree::Result<()> {
    for s in ["", "2", "3", "2,3", "2,3,5"] {
        let s: PrimeSet = s.parse()?;
        println!("S={s}: alpha {} C {}", density::alpha_exact(&s), density::error_constant(&s));
        for n in [1_000u64, 1_000_000] {
            let r = density::restricted_count(&s, n)?;
            println!("  N={n:>7} count {:>7} gap {:.2e} margin {:.2e}", r.count, (r.empirical - r.limit).abs(), r.margin);
        }
    }

    let s: PrimeSet = "2".parse()?;
    println!("convolution identity: {}", density::convolution_identity_holds(&s, 10_000)?);
    let series = density::partial_series_checks(&s, 100_000)?;
    println!("{}", serde_json::to_string_pretty(&series).unwrap());
    println!("72 = {:?} (square-free part, square root)", density::squarefree_decomposition(72)?);
    Ok(())
}
