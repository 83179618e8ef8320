// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(sqfree::cli::run(std::env::args_os()));
}
