//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion does. Run with `--nocapture` to see the
//! scoreboard.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num::rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dtsconv_core::analysis::{self, FreeDistanceStatus};
use dtsconv_core::bounds;
use dtsconv_core::construction::{BaseMatrix, CodeDescriptor, SupportAssignment, Variant};
use dtsconv_core::cycles;
use dtsconv_core::dts::{DifferenceTriangleSet, DtsMode};
use dtsconv_core::field::FiniteField;
use dtsconv_core::Budget;

fn gf(p: u64, n: u32) -> FiniteField {
    FiniteField::new(p, n).unwrap()
}

fn build(
    n: usize,
    k: usize,
    f: FiniteField,
    variant: Variant,
    sets: &[&[u64]],
    mode: DtsMode,
) -> BaseMatrix {
    let dts = DifferenceTriangleSet::new(sets.iter().map(|s| s.to_vec()).collect(), mode).unwrap();
    CodeDescriptor::new(n, k, f, variant, dts)
        .unwrap()
        .build()
        .unwrap()
}

fn reference_two_thirds() -> BaseMatrix {
    build(
        3,
        2,
        gf(13, 1),
        Variant::AlphaPowers,
        &[&[1, 2, 6], &[1, 2, 4]],
        DtsMode::Weak,
    )
}

fn relaxed_two_sevenths(q: u64) -> BaseMatrix {
    build(
        7,
        2,
        gf(q, 1),
        Variant::AlphaPowers,
        &[&[1, 2, 5, 9], &[1, 2, 4, 10]],
        DtsMode::Relaxed { d: 5 },
    )
}

fn criterion_golden_matrix_reproduction() {
    let base = reference_two_thirds();
    let expected_base = "\
a^1 a^2 a^0
a^2 a^4 0
0 0 0
0 a^8 0
0 0 0
a^6 0 0
";
    assert_eq!(base.matrix().text_dump(), expected_base);
    let window = base.sliding_window();
    let expected_window = "\
a^1 a^2 a^0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
a^2 a^4 0 a^1 a^2 a^0 0 0 0 0 0 0 0 0 0 0 0 0
0 0 0 a^2 a^4 0 a^1 a^2 a^0 0 0 0 0 0 0 0 0 0
0 a^8 0 0 0 0 a^2 a^4 0 a^1 a^2 a^0 0 0 0 0 0 0
0 0 0 0 a^8 0 0 0 0 a^2 a^4 0 a^1 a^2 a^0 0 0 0
a^6 0 0 0 0 0 0 a^8 0 0 0 0 a^2 a^4 0 a^1 a^2 a^0
";
    assert_eq!(window.matrix().text_dump(), expected_window);
}

fn criterion_distance_profile() {
    let base = reference_two_thirds();
    let mut meter = Budget::new(200_000_000).meter();
    let profile = analysis::column_distances(&base, 5, &mut meter).unwrap();
    assert_eq!(profile, [2, 3, 3, 3, 3, 4]);
    let report = analysis::free_distance(&base, &mut meter).unwrap();
    assert_eq!(report.status, FreeDistanceStatus::Exact);
    assert_eq!(report.lower, 4);
    assert_eq!(report.upper, 4);
}

fn criterion_strict_dts_free_distance() {
    let sets: &[&[u64]] = &[&[1, 4, 16, 20], &[1, 7, 12, 14], &[1, 9, 18, 19]];
    for (n, p) in [(4usize, 7u64), (5, 11)] {
        for seed in 0..10u64 {
            let base = build(
                n,
                3,
                gf(p, 1),
                Variant::Support(SupportAssignment::Seeded(seed)),
                sets,
                DtsMode::Strict,
            );
            let mut meter = Budget::new(2_000_000_000).meter();
            let report = analysis::free_distance(&base, &mut meter).unwrap();
            assert_eq!(
                report.status,
                FreeDistanceStatus::Exact,
                "n={n} seed={seed} did not resolve"
            );
            assert_eq!(report.lower, 5, "n={n} seed={seed}");
        }
    }
}

fn criterion_density_formula() {
    let base = reference_two_thirds();
    let (n, k, mu) = (3u64, 2u64, 5u64);
    let expected = [(15u64, (7u64, 30u64)), (30, (7, 45)), (60, (7, 75))];
    for (big_n, (num, den)) in expected {
        let formula = analysis::density(n, k, 3, mu, big_n).unwrap();
        assert_eq!(formula, Ratio::new(num, den));
        // Direct count over the sliding matrix for codeword length big_n:
        // each of the big_n / n column blocks is a copy of the base matrix
        // shifted down by n - k rows, so every block contributes the full
        // base weight and the zero-padding carries no nonzeros.
        let blocks = big_n / n;
        let rows = (blocks + mu) * (n - k);
        let nonzeros = blocks * base.matrix().weight() as u64;
        let total = rows * big_n;
        assert_eq!(formula, Ratio::new(nonzeros, total));
    }
}

fn criterion_cyclefree_girth() {
    let sets: &[&[u64]] = &[&[1, 2, 5], &[1, 3, 9]];
    let cases = [
        (gf(2, 1), Variant::Support(SupportAssignment::Ones)),
        (gf(7, 1), Variant::AlphaPowers),
    ];
    for (f, variant) in cases {
        let base = build(7, 2, f, variant, sets, DtsMode::Strict);
        let window = base.sliding_window();
        // Longest possible half-length: min((mu+1)(n-k), (mu+1)k) = 4.
        let mut meter = Budget::new(200_000_000).meter();
        let girth = cycles::girth(window.matrix(), 4, &mut meter).unwrap();
        assert_eq!(girth, None);
    }
}

fn criterion_bound_enumeration_cross_validation() {
    assert_eq!(bounds::q_bound_2x2(7, 2, 1), 11);
    assert_eq!(bounds::n_bound_3x3(7, 2, 1).1, 19);
    assert_eq!(bounds::q_bound_even_cycle(7, 2, 1, 4).unwrap(), 19);

    let base = relaxed_two_sevenths(23);
    let window = base.sliding_window();
    let mut meter = Budget::new(200_000_000).meter();
    let frc = cycles::frc_report(window.matrix(), 4, &mut meter).unwrap();
    assert!(frc.total_cycles > 0);
    assert!(frc.violations.is_empty());

    let dts = DifferenceTriangleSet::new(
        vec![vec![1, 2, 5, 9], vec![1, 2, 4, 10]],
        DtsMode::Relaxed { d: 5 },
    )
    .unwrap();
    let descriptor = CodeDescriptor::new(7, 2, gf(23, 1), Variant::AlphaPowers, dts).unwrap();
    let report = bounds::certify(&descriptor, &mut meter).unwrap();
    for id in ["minors-2x2", "six-cycle-frc", "even-cycle-frc-l4"] {
        assert!(report.satisfied(id), "{id} must be certified at q = 23");
    }
}

fn criterion_p_construction_thresholds() {
    let (p5, t5) = bounds::p_construction_bound(6, 2, 1, 5).unwrap();
    assert_eq!(p5, 11);
    assert_eq!(t5, 471_589_539u64.into());
    let (p3, t3) = bounds::p_construction_bound(6, 2, 1, 3).unwrap();
    assert_eq!(p3, 7);
    assert_eq!(t3, 13_451_089u64.into());
    // The published rounded figures 4.716e8 and 1.35e7 match within rounding.
    assert!((471_589_539f64 - 4.716e8).abs() < 5e4);
    assert!((13_451_089f64 - 1.35e7).abs() < 5e4);
}

fn criterion_degree_bounds_random() {
    let fields: &[(u64, u32)] = &[
        (2, 1),
        (3, 1),
        (2, 2),
        (5, 1),
        (7, 1),
        (3, 2),
        (2, 4),
        (13, 1),
        (5, 2),
        (2, 5),
        (61, 1),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE97);
    let mut done = 0usize;
    while done < 200 {
        let n = rng.gen_range(2..=6usize);
        let k = rng.gen_range(1..=(n - 1).min(4));
        let w = rng.gen_range(1..=4usize);
        let mut sets = Vec::new();
        for _ in 0..k {
            let mut set = Vec::new();
            while set.len() < w {
                let x = rng.gen_range(1..=12u64);
                if !set.contains(&x) {
                    set.push(x);
                }
            }
            set.sort_unstable();
            sets.push(set);
        }
        let (p, ext) = fields[rng.gen_range(0..fields.len())];
        let variant = if rng.gen_bool(0.5) {
            Variant::AlphaPowers
        } else {
            Variant::Support(SupportAssignment::Seeded(rng.gen()))
        };
        let dts = DifferenceTriangleSet::new(sets, DtsMode::Weak).unwrap();
        let descriptor = CodeDescriptor::new(n, k, gf(p, ext), variant, dts).unwrap();
        let mu = descriptor.mu();
        let base = descriptor.build().unwrap();
        let delta = analysis::degree(&base.polynomial()).unwrap();
        assert!(mu <= delta, "mu={mu} delta={delta} n={n} k={k}");
        assert!(delta <= mu * (n - k), "delta={delta} over cap n={n} k={k}");
        let top_full_rank = base.coefficient(mu).rank().unwrap() == n - k;
        assert_eq!(
            delta == mu * (n - k),
            top_full_rank,
            "degree cap must coincide with full top coefficient rank"
        );
        done += 1;
    }
}

fn criterion_minor_audit_and_six_cycles() {
    let base = reference_two_thirds();
    let window = base.sliding_window();
    let mut meter = Budget::new(200_000_000).meter();
    let audit = cycles::audit_minors(window.matrix(), 2, &mut meter).unwrap();
    assert!(audit.examined > 0);
    assert!(audit.clean(), "vanishing 2x2 minors: {:?}", audit.vanishing);
    let frc = cycles::frc_report(window.matrix(), 3, &mut meter).unwrap();
    assert!(
        frc.violations.iter().all(|c| c.half_length() != 3),
        "an FRC-violating 6-cycle exists at q = 13"
    );
}

fn criterion_support_golden() {
    let base = build(
        3,
        1,
        gf(2, 1),
        Variant::Support(SupportAssignment::Ones),
        &[&[1, 2, 3]],
        DtsMode::Relaxed { d: 2 },
    );
    let expected = "\
1 1 0 0 0 0
1 0 1 0 0 0
1 0 0 1 1 0
0 0 0 1 0 1
";
    assert_eq!(base.sliding_window().matrix().support_dump(), expected);
}

#[test]
fn acceptance() {
    let criteria: &[(&str, fn(), Duration)] = &[
        (
            "golden-matrix-reproduction",
            criterion_golden_matrix_reproduction,
            Duration::from_secs(1),
        ),
        (
            "distance-profile",
            criterion_distance_profile,
            Duration::from_secs(60),
        ),
        (
            "strict-dts-free-distance",
            criterion_strict_dts_free_distance,
            Duration::from_secs(300),
        ),
        (
            "density-formula",
            criterion_density_formula,
            Duration::from_secs(60),
        ),
        (
            "cycle-free-girth",
            criterion_cyclefree_girth,
            Duration::from_secs(10),
        ),
        (
            "bound-enumeration-cross-validation",
            criterion_bound_enumeration_cross_validation,
            Duration::from_secs(120),
        ),
        (
            "p-construction-thresholds",
            criterion_p_construction_thresholds,
            Duration::from_secs(10),
        ),
        (
            "degree-bounds-random",
            criterion_degree_bounds_random,
            Duration::from_secs(300),
        ),
        (
            "minor-audit-and-six-cycles",
            criterion_minor_audit_and_six_cycles,
            Duration::from_secs(120),
        ),
        (
            "support-golden",
            criterion_support_golden,
            Duration::from_secs(1),
        ),
    ];

    let mut failures = Vec::new();
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let on_time = elapsed <= *limit;
        match (&outcome, on_time) {
            (Ok(()), true) => println!("PASS {name} ({elapsed:.2?})"),
            (Ok(()), false) => {
                println!("FAIL {name} (over time limit: {elapsed:.2?} > {limit:.2?})");
                failures.push(name.to_string());
            }
            (Err(_), _) => {
                println!("FAIL {name} ({elapsed:.2?})");
                failures.push(name.to_string());
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
