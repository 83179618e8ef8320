// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

use sqfree::averages;
use sqfree::euler::TruncationPolicy;
use sqfree::LambdaPoint;

fn main() -> sqfree::Result<()> {
    let policy = TruncationPolicy::default();
    for s in ["0/1", "1/4", "3/4", "1/9", "5/36", "6/900"] {
        let p: LambdaPoint = s.parse()?;
        let z = averages::cesaro_y2(&p, 1_000_000, &policy)?;
        println!("{s:>6}: limit {:.3e}  mean {:.3e} {:+.1e}i", averages::y2(&p), z.re, z.im);
    }

    let (a, b): (LambdaPoint, LambdaPoint) = ("1/4".parse()?, "1/9".parse()?);
    let z = averages::cesaro_y3(&a, &b, 1000, 1000, &policy)?;
    println!("two-fold: limit {:.6e}  mean {:.6e}", averages::y3(&a, &b), z.re);

    for (d, t) in [(2, 0), (2, 1), (6, 4), (6, 5)] {
        let q = averages::ProgressionQuery::new(d, t)?;
        let c = averages::cesaro_progression_average(&q, 100_000, &policy)?;
        println!("progression {d}²l+{t}: limit {:.8} mean {c:.8}", averages::progression_average_limit(&q));
    }
    Ok(())
}
