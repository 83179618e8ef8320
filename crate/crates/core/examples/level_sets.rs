// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

use sqfree::correlations;
use sqfree::euler::TruncationPolicy;
use sqfree::SquarefreeInt;

fn main() -> sqfree::Result<()> {
    println!("{:>3} {:>8} {:>12} {:>12}", "d", "coef/π²", "density", "at 10^6");
    for row in correlations::level_set_table(30) {
        let d = SquarefreeInt::new(row.d)?;
        let emp = correlations::empirical_level_set(&d, 1_000_000)?;
        println!("{:>3} {:>8} {:>12.8} {:>12.8}", row.d, row.coefficient, row.density, emp);
    }

    // Plot data: c2 is constant on each class.
    let figure = correlations::level_set_figure(50, &TruncationPolicy::default())?;
    for p in figure.iter().filter(|p| p.d_class > 1) {
        println!("k={:>2} class {:>2} c2={:.10}", p.k, p.d_class, p.c2);
    }
    Ok(())
}
