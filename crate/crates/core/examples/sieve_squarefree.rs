// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Segmented sieve: Möbius values, packed indicator blocks and counts.

use sqfree::sieve;

fn main() -> sqfree::Result<()> {
    let start = 1_000_000_000_000;
    let mu = sieve::mobius_range(start, 12)?;
    for (i, m) in mu.iter().enumerate() {
        println!("mu({}) = {m:>2}", start + i as u64);
    }

    let block = sieve::sieve_squarefree(start, 1 << 20)?;
    println!("square-free in [{start}, +2^20): {}", block.count_ones());

    for n in [10u64, 1_000, 100_000, 10_000_000] {
        let q = sieve::count_squarefree(n)?;
        println!("Q({n}) = {q}  Q/N = {:.6}", q as f64 / n as f64);
    }

    let f = sieve::factor_summary(2 * 2 * 3 * 7 * 7 * 11)?;
    println!("{}", serde_json::to_string(&f).unwrap());
    Ok(())
}
