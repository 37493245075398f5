//! Harness behavior at toy scale: row counts, parameter pinning, errors.

use rcae_bench::*;
use rcae_core::{ModelDims, SolverConfig, StatsMode};
use rcae_data::{synth_dataset, SynthKind, SynthSpec};

fn toy_pipeline() -> PipelineParams {
    PipelineParams {
        dims: ModelDims::new(16, 4, 1, 4).unwrap(),
        encoder_seed: 11,
        sigma_a: 0.1,
        sigma_b: 0.01,
        solver: SolverConfig::naive_literal(1.0),
    }
}

fn toy_spec(variable: SweepVariable, grid: Vec<usize>) -> SweepSpec {
    SweepSpec {
        variable,
        grid,
        fixed: TimingFixed {
            pipeline: toy_pipeline(),
            batch: 2,
            synth: SynthKind::BandlimitedNoise,
            data_seed: 5,
        },
        repeats: 3,
        warmup: 0,
    }
}

#[test]
fn timing_sweep_rows_and_medians() {
    let spec = toy_spec(SweepVariable::NumFilters, vec![2, 4]);
    let report = run_timing_sweep(&spec).unwrap();
    assert_eq!(report.points.len(), 2);
    let (columns, rows) = report.csv();
    assert_eq!(columns.len(), 6);
    // repeats × grid points plus one median row per point.
    assert_eq!(rows.len(), 3 * 2 + 2);
    assert!(report.fit.is_some());
}

#[test]
fn timing_sweep_single_point_fit_is_degenerate() {
    let spec = toy_spec(SweepVariable::NumFilters, vec![4]);
    let report = run_timing_sweep(&spec).unwrap();
    assert!(report.fit.is_none());
    assert_eq!(report.points.len(), 1);
    assert_eq!(report.points[0].repeats.len(), 3);
}

#[test]
fn timing_sweep_pins_everything_but_the_variable() {
    let spec = toy_spec(SweepVariable::FilterSize, vec![2, 4, 8]);
    let report = run_timing_sweep(&spec).unwrap();
    assert!(report.fit_secondary.is_some(), "w² fit for filter size");
    let base = &report.configs[0];
    for config in &report.configs[1..] {
        for ((key_a, val_a), (key_b, val_b)) in base.iter().zip(config) {
            assert_eq!(key_a, key_b);
            if key_a == "w" {
                assert_ne!(val_a, val_b, "swept key must vary");
            } else {
                assert_eq!(val_a, val_b, "fixed key '{key_a}' drifted across points");
            }
        }
    }
}

#[test]
fn timing_sweep_validation() {
    assert!(matches!(
        run_timing_sweep(&toy_spec(SweepVariable::Lambda, vec![1, 2])),
        Err(BenchError::InvalidSpec(_))
    ));
    assert!(matches!(
        run_timing_sweep(&toy_spec(SweepVariable::NumFilters, vec![4, 2])),
        Err(BenchError::InvalidSpec(_))
    ));
    let mut spec = toy_spec(SweepVariable::NumFilters, vec![2, 4]);
    spec.repeats = 2;
    assert!(matches!(
        run_timing_sweep(&spec),
        Err(BenchError::InvalidSpec(_))
    ));
}

#[test]
fn lambda_sweep_row_counts_and_guard_behavior() {
    let train = synth_dataset(&SynthSpec {
        kind: SynthKind::BandlimitedNoise,
        n: 8,
        d: 16,
        c: 1,
        seed: 31,
    })
    .unwrap();
    let eval = synth_dataset(&SynthSpec {
        kind: SynthKind::BandlimitedNoise,
        n: 4,
        d: 16,
        c: 1,
        seed: 32,
    })
    .unwrap();
    let pipeline = toy_pipeline();

    // λ = 0 stays finite thanks to the eps_div denominator guard.
    let grid = [0.0, 1.0, 10.0];
    let report = run_lambda_sweep(&train, &eval, &grid, &pipeline).unwrap();
    assert_eq!(report.rows.len(), 3);
    assert!(report.rows.iter().all(|&(_, e)| e.is_finite()));

    let (columns, rows) = report.csv();
    assert_eq!(columns, vec!["lambda", "recon_error"]);
    assert_eq!(rows.len(), 3);

    let default_grid = default_lambda_grid();
    assert_eq!(default_grid.len(), 25);
}

#[test]
fn lambda_sweep_rejects_identical_sources() {
    let ds = synth_dataset(&SynthSpec {
        kind: SynthKind::BandlimitedNoise,
        n: 4,
        d: 16,
        c: 1,
        seed: 31,
    })
    .unwrap();
    assert!(matches!(
        run_lambda_sweep(&ds, &ds, &[1.0], &toy_pipeline()),
        Err(BenchError::OverlappingSplits(_))
    ));
}

#[test]
fn convergence_rows_and_short_stream_error() {
    let stream = synth_dataset(&SynthSpec {
        kind: SynthKind::BandlimitedNoise,
        n: 20,
        d: 16,
        c: 1,
        seed: 77,
    })
    .unwrap();
    let report = run_convergence_curve(&stream, 5, &toy_pipeline(), 3).unwrap();
    assert_eq!(report.points.len(), 4);
    assert_eq!(report.points[0].n_seen, 5);
    assert_eq!(report.points[3].n_seen, 20);
    assert!(report.points.iter().all(|p| p.avg_sq_diff >= 0.0));

    assert!(matches!(
        run_convergence_curve(&stream, 15, &toy_pipeline(), 3),
        Err(BenchError::StreamTooShort { .. })
    ));
}

#[test]
fn repeated_identical_images_collapse_differences() {
    // Statistics from n copies of one image scale numerator and denominator
    // alike, so every re-solve lands on the same filters.
    let one = synth_dataset(&SynthSpec {
        kind: SynthKind::GaussianBlobs,
        n: 1,
        d: 16,
        c: 1,
        seed: 3,
    })
    .unwrap();
    let copies: Vec<rcae_core::Image<f64>> =
        (0..12).map(|_| one.images()[0].clone()).collect();
    let stream = rcae_data::Dataset::from_images(copies, "repeat").unwrap();
    let report = run_convergence_curve(&stream, 3, &toy_pipeline(), 1).unwrap();
    assert_eq!(report.points.len(), 4);
    let first = report.points[0].avg_sq_diff;
    assert!(first > 0.0);
    for p in &report.points[1..] {
        assert!(
            p.avg_sq_diff <= 1e-12 * first.max(1.0),
            "n_seen {}: {:e}",
            p.n_seen,
            p.avg_sq_diff
        );
    }
}

#[test]
fn exact_mode_pipeline_also_sweeps() {
    let train = synth_dataset(&SynthSpec {
        kind: SynthKind::BandlimitedNoise,
        n: 6,
        d: 16,
        c: 1,
        seed: 41,
    })
    .unwrap();
    let eval = synth_dataset(&SynthSpec {
        kind: SynthKind::BandlimitedNoise,
        n: 3,
        d: 16,
        c: 1,
        seed: 42,
    })
    .unwrap();
    let pipeline = PipelineParams {
        solver: SolverConfig {
            lambda: 1.0,
            cycles: 3,
            mode: StatsMode::Exact,
            ..SolverConfig::default()
        },
        ..toy_pipeline()
    };
    let report = run_lambda_sweep(&train, &eval, &[0.5, 2.0], &pipeline).unwrap();
    assert_eq!(report.rows.len(), 2);
}
