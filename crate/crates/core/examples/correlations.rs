// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

use sqfree::correlations::{self, LagTuple};
use sqfree::euler::TruncationPolicy;

fn main() -> sqfree::Result<()> {
    let policy = TruncationPolicy::default();
    let limit = 10_000_000;
    println!("{:<10} {:>12} {:>12} {:>10}", "lags", "empirical", "product", "gap");
    for lags in ["0", "1", "4", "0,1", "0,1,3", "0,2,6,8", "1,2,3"] {
        let lags: LagTuple = lags.parse()?;
        let e = correlations::empirical_correlation(&lags, limit)?;
        let m = correlations::euler_correlation(&lags, &policy)?;
        println!("{:<10} {:>12.8} {:>12.8} {:>10.2e}", lags.to_string(), e.value, m.value, (e.value - m.value).abs());
    }

    // Pair correlation through the divisor sum over square divisors.
    for k in [1i64, 4, 12, 36, 900] {
        let s = correlations::c2_sum_form(k, &policy)?;
        println!("c2({k}) = {:.12} (bound {:.1e})", s.value, s.tail_bound);
    }

    let fixed = TruncationPolicy::FixedCutoff { cutoff: 100, tolerance: Some(1e-10) };
    match correlations::euler_correlation(&LagTuple::single(0), &fixed) {
        Ok(v) => println!("unexpected: {}", v.value),
        Err(e) => println!("fixed cutoff 100 rejected: {e}"),
    }
    Ok(())
}
