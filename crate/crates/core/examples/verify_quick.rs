// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

use sqfree::verify::{self, Profile};

fn main() {
    let report = verify::verify_all(Profile::Quick);
    for s in &report.suites {
        println!("{:<18} {} {}", s.name, if s.passed { "ok  " } else { "FAIL" }, s.detail);
    }
    std::process::exit(if report.passed { 0 } else { 1 });
}
