// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

use sqfree::euler::{self, TruncationPolicy};

fn main() -> sqfree::Result<()> {
    for order in 1..=4 {
        let c = euler::product_constant(order, &TruncationPolicy::default())?;
        println!("prod (1 - {order}/p²) = {:.15} ± {:.1e} rel", c.value, c.rel_bound);
    }
    for cutoff in [1_000, 100_000] {
        let c = euler::product_constant(1, &TruncationPolicy::FixedCutoff { cutoff, tolerance: None })?;
        println!("cutoff {cutoff}: {:.12} (bound {:.1e})", c.value, c.rel_bound);
    }
    println!("P(2) = {:.18}", euler::prime_zeta(2.0));
    println!("sigma_1 = {:.15}", euler::sigma_one(&TruncationPolicy::target(1e-12))?.value);
    Ok(())
}
