// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Partial sums of the series indexed by square-free moduli, compared with
//! the Euler product as the cutoff grows.

use sqfree::correlations::{self, LagTuple};
use sqfree::euler::TruncationPolicy;

fn main() -> sqfree::Result<()> {
    let policy = TruncationPolicy::default();
    for lags in ["4", "9", "1", "1,2"] {
        let lags: LagTuple = lags.parse()?;
        let exact = correlations::euler_correlation(&lags, &policy)?.value;
        print!("{:<6} exact {exact:.8}", lags.to_string());
        for s_max in [2, 6, 10, 15] {
            let h = correlations::hall_series_partial(&lags, s_max)?.value;
            print!("  s≤{s_max}: {h:.6}");
        }
        println!();
    }
    Ok(())
}
