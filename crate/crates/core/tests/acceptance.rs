// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

use std::time::{Duration, Instant};

use num_rational::Ratio;
use sqfree::averages::{self, ProgressionQuery};
use sqfree::correlations::{self, LagTuple};
use sqfree::euler::{self, TruncationPolicy, SQUAREFREE_DENSITY};
use sqfree::kronecker::{self, CharacterSpec, GroupElement};
use sqfree::sieve::{self, SquarefreeInt};
use sqfree::verify::{self, Hooks, BOUND_SETS, PAIR_PHASES, TRIPLE_PAIRS};
use sqfree::{spectral, LambdaPoint, Phase};

/// Criteria that cannot hold for any implementation; see README.
const UNATTAINABLE: &[u32] = &[2];

struct Outcome {
    id: u32,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn timed(id: u32, budget: Duration, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    let in_budget = elapsed <= budget;
    Outcome {
        id,
        passed: ok && in_budget,
        detail: if in_budget { detail } else { format!("{detail}; over budget {budget:?}") },
        elapsed,
    }
}

fn phase(s: &str) -> LambdaPoint {
    s.parse().expect("valid phase")
}

fn density_bound() -> (bool, String) {
    let (ok, detail) =
        verify::density_bound_suite(&[100, 1_000, 10_000, 100_000, 1_000_000]).expect("counts");
    (ok, format!("{} sets x 5 limits; {detail}", BOUND_SETS.len()))
}

fn hall_gap(k_max: u64, s_max: u64) -> (f64, u64) {
    let policy = TruncationPolicy::default();
    (0..=k_max)
        .map(|k| {
            let lags = LagTuple::single(k);
            let hall = correlations::hall_series_partial(&lags, s_max).unwrap().value;
            let exact = correlations::euler_correlation(&lags, &policy).unwrap().value;
            ((hall - exact).abs(), k)
        })
        .fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a })
}

fn cross_method() -> (bool, String) {
    let gap = verify::cross_method_gap(10_000, &Hooks::default()).unwrap();
    let (hall, worst_k) = hall_gap(50, 10);
    (
        gap <= 1e-9 && hall <= 1e-3,
        format!("product vs divisor sum {gap:.2e} (≤ 1e-9); Hall s_max=10 gap {hall:.3e} at k={worst_k} (≤ 1e-3)"),
    )
}

fn constants() -> (bool, String) {
    let policy = TruncationPolicy::default();
    let density = euler::product_constant(1, &policy).unwrap().value;
    let sigma = euler::sigma_one(&policy).unwrap().value;
    let q = ProgressionQuery::new(1, 0).unwrap();
    let mean = averages::progression_average_limit(&q);
    let cesaro = averages::cesaro_progression_average(&q, 1_000_000, &policy).unwrap();
    let digits = |x: f64, reference: f64| (x - reference).abs() < 1e-10;
    let ok = digits(density, 0.6079271018)
        && digits(SQUAREFREE_DENSITY, 0.6079271018)
        && digits(sigma, 0.3226340989)
        && digits(mean, 0.3695753612)
        && (cesaro - mean).abs() <= 1e-2;
    (ok, format!("6/π² {density:.10}, σ₁ {sigma:.10}, mean {mean:.10}, Cesàro at 10⁶ {cesaro:.10}"))
}

fn level_sets() -> (bool, String) {
    let expected: [(u64, u64, u64); 12] = [
        (1, 6, 1),
        (2, 2, 1),
        (3, 3, 4),
        (5, 1, 4),
        (6, 1, 4),
        (7, 1, 8),
        (10, 1, 12),
        (11, 1, 20),
        (13, 1, 28),
        (14, 1, 24),
        (15, 1, 32),
        (17, 1, 48),
    ];
    let listed: Vec<u64> = sieve::squarefree_up_to(17);
    let table_ok = listed == expected.iter().map(|e| e.0).collect::<Vec<_>>()
        && expected.iter().all(|&(d, n, m)| {
            correlations::level_set_coefficient(&SquarefreeInt::new(d).unwrap()) == Ratio::new(n, m)
        });
    let mass = euler::sum_compensated(
        sieve::squarefree_up_to(42)
            .into_iter()
            .map(|d| correlations::level_set_density(&SquarefreeInt::new(d).unwrap())),
    );
    (table_ok && mass > 0.99, format!("12 rationals match {table_ok}; mass up to 42 {mass:.6}"))
}

fn exponential_sums() -> (bool, String) {
    let policy = TruncationPolicy::default();
    let frozen_y2 = [0.369575361168636067, 0.0410639290187373, 0.00577461501825994, 0.000641623890917771];
    let (mut re_gap, mut im_gap, mut frozen_ok) = (0.0f64, 0.0f64, true);
    for (s, frozen) in PAIR_PHASES.iter().zip(frozen_y2) {
        let p = phase(s);
        let closed = averages::y2(&p);
        frozen_ok &= (closed - frozen).abs() <= 1e-6 * frozen;
        let z = averages::cesaro_y2(&p, 1_000_000, &policy).unwrap();
        re_gap = re_gap.max((z.re - closed).abs());
        im_gap = im_gap.max(z.im.abs());
    }
    frozen_ok &= (averages::y3(&phase("1/4"), &phase("1/9")) - 0.000390060552485945).abs() < 1e-15;
    frozen_ok &= (averages::y3(&phase("1/4"), &phase("3/4")) - 0.0249638753591005).abs() < 1e-14;
    let mut tri_gap = 0.0f64;
    for (a, b) in TRIPLE_PAIRS {
        let (a, b) = (phase(a), phase(b));
        let z = averages::cesaro_y3(&a, &b, 2000, 2000, &policy).unwrap();
        tri_gap = tri_gap.max((z - averages::y3(&a, &b)).norm());
    }
    (
        frozen_ok && re_gap <= 5e-3 && im_gap <= 5e-3 && tri_gap <= 1e-2,
        format!("one-fold gap {re_gap:.2e}, |Im| {im_gap:.2e}, two-fold gap {tri_gap:.2e}, closed forms {frozen_ok}"),
    )
}

fn spectral_structure() -> (bool, String) {
    let violations = verify::group_law_violations(6);
    let pts = LambdaPoint::enumerate(30);
    let n = pts.len();
    let cocycle_ok = (0..50).all(|i| {
        let a = &pts[(i * 97 + 1) % n];
        let b = &pts[(i * 389 + 17) % n];
        let c = &pts[(i * 1013 + 123) % n];
        spectral::cocycle_holds(a, b, c)
    });
    let partials: Vec<f64> =
        [1u64, 10, 100, 1000, 10_000].iter().map(|&d| spectral::parseval_partial(d).unwrap()).collect();
    let monotone = partials.windows(2).all(|w| w[0] < w[1]) && partials.iter().all(|&p| p <= SQUAREFREE_DENSITY);
    let gap = SQUAREFREE_DENSITY - partials[partials.len() - 1];
    let counts_ok = sieve::squarefree_up_to(30).into_iter().all(|d| {
        let d = SquarefreeInt::new(d).unwrap();
        averages::lambda_count(&d) == averages::lambda_count_brute(&d)
    });
    (
        violations == 0 && cocycle_ok && monotone && gap <= 1e-3 && counts_ok,
        format!(
            "group-law violations {violations}; cocycle {cocycle_ok}; parseval monotone {monotone}, gap {gap:.2e}; counts {counts_ok}"
        ),
    )
}

fn spectrum_match() -> (bool, String) {
    let report = kronecker::spectrum_match_report(30).unwrap();
    let g = GroupElement::zero(kronecker::DEFAULT_BASIS_LEN).unwrap();
    let chars = verify::sample_characters();
    let exact = chars.iter().all(|p| {
        kronecker::verify_eigen_relation(&CharacterSpec::new(p.clone()), &g, 1000).unwrap() == Phase::ZERO
    });
    (
        report.equal && chars.len() == 20 && exact,
        format!(
            "{} phases, {} eigenvalues, equal {}; 20 characters exact over 10³ steps {exact}",
            report.lambda_points, report.character_eigenvalues, report.equal
        ),
    )
}

fn negative_control() -> (bool, String) {
    let lags = LagTuple::new(vec![1, 2, 3]).unwrap();
    let product = correlations::euler_correlation(&lags, &TruncationPolicy::default()).unwrap().value;
    let limits = [1u64, 10, 100, 1_000, 10_000, 100_000, 1_000_000, 10_000_000];
    let counts: Vec<u64> = limits.iter().map(|&n| correlations::empirical_count(&lags, n).unwrap()).collect();
    (
        product == 0.0 && counts.iter().all(|&c| c == 0),
        format!("product {product}; counts {counts:?}"),
    )
}

fn run_all() -> Vec<Outcome> {
    let secs = Duration::from_secs;
    vec![
        timed(1, secs(30), density_bound),
        timed(2, secs(60), cross_method),
        timed(3, secs(600), constants),
        timed(4, secs(600), level_sets),
        timed(5, secs(600), exponential_sums),
        timed(6, secs(600), spectral_structure),
        timed(7, secs(600), spectrum_match),
        timed(8, secs(600), negative_control),
    ]
}

fn hall_truncation_gap_is_structural() -> bool {
    let (gap, k) = hall_gap(50, 10);
    let tail = SQUAREFREE_DENSITY - spectral::parseval_partial(10).unwrap();
    k == 0 && (gap - tail).abs() < 1e-9
}

fn main() {
    let outcomes = run_all();
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {} {tag} ({:.2}s): {}", o.id, o.elapsed.as_secs_f64(), o.detail);
    }
    let failing: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    let structural = hall_truncation_gap_is_structural();
    println!("criterion 2 Hall gap at k=0 equals the spectral tail beyond radical 10: {structural}");
    if failing != UNATTAINABLE || !structural {
        eprintln!("failing criteria {failing:?} differ from the documented set {UNATTAINABLE:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} of 8 criteria pass; documented unattainable: {UNATTAINABLE:?}", 8 - failing.len());
}
