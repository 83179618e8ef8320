// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

use sqfree::euler::TruncationPolicy;
use sqfree::{spectral, LambdaPoint};

fn main() -> sqfree::Result<()> {
    let policy = TruncationPolicy::default();
    let p: LambdaPoint = "5/36".parse()?;
    for s in [0i64, 1, 2, 3] {
        let z = spectral::inner_product_x_theta(s, &p, 500_000, &policy)?;
        let w = spectral::inner_product_limit(s, &p);
        println!("s={s}: {:+.6} {:+.6}i  limit {:+.6} {:+.6}i", z.re, z.im, w.re, w.im);
    }
    println!("|theta|^2 = {:.6e}", spectral::eigen_norm_sq(&p));

    for (a, b) in [("1/4", "1/4"), ("1/4", "1/9"), ("1/4", "1/25"), ("5/36", "1/4")] {
        let (a, b): (LambdaPoint, LambdaPoint) = (a.parse()?, b.parse()?);
        println!("{a} * {b} = {}  sign {:+}", a.mul(&b), spectral::product_sign(&a, &b));
    }
    for d in [1, 10, 100, 1000] {
        println!("parseval up to {d}: {:.10}", spectral::parseval_partial(d)?);
    }
    Ok(())
}
