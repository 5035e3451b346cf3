//! Benchmarks for the main pipeline stages: construction, distance
//! profiles, cycle enumeration, bound certification, and the underlying
//! field/matrix arithmetic.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use dtsconv_core::analysis;
use dtsconv_core::bounds;
use dtsconv_core::construction::{CodeDescriptor, Variant};
use dtsconv_core::cycles;
use dtsconv_core::dts::{DifferenceTriangleSet, DtsMode};
use dtsconv_core::field::FiniteField;
use dtsconv_core::matrix::FieldMatrix;
use dtsconv_core::{Budget, BudgetMeter};

fn meter() -> BudgetMeter {
    Budget::new(1_000_000_000).meter()
}

/// (3, 2) code over GF(13), memory 5.
fn reference_descriptor() -> CodeDescriptor {
    let dts =
        DifferenceTriangleSet::new(vec![vec![1, 2, 6], vec![1, 2, 4]], DtsMode::Weak).unwrap();
    CodeDescriptor::new(
        3,
        2,
        FiniteField::new(13, 1).unwrap(),
        Variant::AlphaPowers,
        dts,
    )
    .unwrap()
}

/// (7, 2) code over GF(23), memory 1.
fn relaxed_descriptor() -> CodeDescriptor {
    let dts = DifferenceTriangleSet::new(
        vec![vec![1, 2, 5, 9], vec![1, 2, 4, 10]],
        DtsMode::Relaxed { d: 5 },
    )
    .unwrap();
    CodeDescriptor::new(
        7,
        2,
        FiniteField::new(23, 1).unwrap(),
        Variant::AlphaPowers,
        dts,
    )
    .unwrap()
}

fn bench_construction(c: &mut Criterion) {
    let narrow = reference_descriptor();
    let wide = relaxed_descriptor();
    c.bench_function("construct/narrow-memory-5", |b| {
        b.iter(|| narrow.build().unwrap())
    });
    c.bench_function("construct/wide-memory-1", |b| {
        b.iter(|| wide.build().unwrap())
    });
}

fn bench_distances(c: &mut Criterion) {
    let base = reference_descriptor().build().unwrap();
    c.bench_function("distances/column-profile", |b| {
        b.iter(|| analysis::column_distances(&base, 5, &mut meter()).unwrap())
    });
    c.bench_function("distances/free-distance", |b| {
        b.iter(|| analysis::free_distance(&base, &mut meter()).unwrap())
    });
}

fn bench_cycles(c: &mut Criterion) {
    let narrow = reference_descriptor().build().unwrap();
    let narrow_window = narrow.sliding_window();
    let wide = relaxed_descriptor().build().unwrap();
    let wide_window = wide.sliding_window();
    c.bench_function("cycles/enumerate-narrow-l6", |b| {
        b.iter(|| cycles::enumerate_cycles(narrow_window.matrix(), 6, &mut meter()).unwrap())
    });
    c.bench_function("cycles/frc-wide-l4", |b| {
        b.iter(|| cycles::frc_report(wide_window.matrix(), 4, &mut meter()).unwrap())
    });
    c.bench_function("cycles/minor-audit-2x2", |b| {
        b.iter(|| cycles::audit_minors(narrow_window.matrix(), 2, &mut meter()).unwrap())
    });
}

fn bench_bounds(c: &mut Criterion) {
    let narrow = reference_descriptor();
    let wide = relaxed_descriptor();
    c.bench_function("bounds/certify-narrow", |b| {
        b.iter(|| bounds::certify(&narrow, &mut meter()).unwrap())
    });
    c.bench_function("bounds/certify-wide", |b| {
        b.iter(|| bounds::certify(&wide, &mut meter()).unwrap())
    });
}

fn bench_field_arithmetic(c: &mut Criterion) {
    // Deterministic dense matrices over a prime field and an extension
    // field, exercised through determinant and rank.
    let build = |p: u64, ext: u32, size: usize| -> FieldMatrix {
        let field = FiniteField::new(p, ext).unwrap();
        let q = field.order();
        let rows: Vec<Vec<_>> = (0..size)
            .map(|r| {
                (0..size)
                    .map(|cidx| {
                        let value = ((r * size + cidx) as u64 * 7 + 3) % q;
                        field.from_value(value).unwrap()
                    })
                    .collect()
            })
            .collect();
        FieldMatrix::from_rows(&field, rows).unwrap()
    };
    let prime = build(13, 1, 8);
    let extension = build(2, 3, 8);
    c.bench_function("matrix/det-gf13-8x8", |b| {
        b.iter_batched(
            || prime.clone(),
            |m| m.det().unwrap(),
            BatchSize::SmallInput,
        )
    });
    c.bench_function("matrix/rank-gf8-8x8", |b| {
        b.iter_batched(
            || extension.clone(),
            |m| m.rank().unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(
    benches,
    bench_construction,
    bench_distances,
    bench_cycles,
    bench_bounds,
    bench_field_arithmetic
);
criterion_main!(benches);
