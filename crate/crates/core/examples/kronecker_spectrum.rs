// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

use sqfree::kronecker::{self, CharacterSpec, GroupElement};
use sqfree::LambdaPoint;

fn main() -> sqfree::Result<()> {
    for g in kronecker::orbit(3, 5)? {
        println!("{:?}", g.coords());
    }

    let p: LambdaPoint = "6/900".parse()?;
    let chi = CharacterSpec::new(p.clone());
    println!("{p}: exponents {:?}", chi.exponents());
    let g = GroupElement::zero(kronecker::DEFAULT_BASIS_LEN)?.translate(123_456_789);
    println!("chi(g) = {}", kronecker::character_eval(&chi, &g)?);
    println!("residual over 10^4 steps: {}", kronecker::verify_eigen_relation(&chi, &g, 10_000)?);

    let report = kronecker::spectrum_match_report(30)?;
    println!("d ≤ 30: {} phases, {} eigenvalues, equal: {}", report.lambda_points, report.character_eigenvalues, report.equal);
    Ok(())
}
