//! Property and oracle tests for the spectral layer.

mod common;

use common::*;
use proptest::prelude::*;
use rcae_core::{conv_full, conv_valid, dft2, hadamard, idft2, pad_to, RealPlane};

#[test]
fn dft_matches_direct_summation_oracle() {
    for (i, &d) in [2usize, 3, 4, 8].iter().enumerate() {
        for trial in 0..5 {
            let p = random_plane(d, d, (i * 10 + trial) as u64);
            let err = rel_err_complex(&dft2(&p), &naive_dft2(&p));
            assert!(err <= 1e-10, "d = {d}, trial {trial}: err {err:e}");
        }
    }
}

#[test]
fn dft_matches_oracle_on_rectangles() {
    for (rows, cols, seed) in [(2, 5, 1u64), (3, 4, 2), (7, 2, 3), (6, 6, 4)] {
        let p = random_plane(rows, cols, seed);
        let err = rel_err_complex(&dft2(&p), &naive_dft2(&p));
        assert!(err <= 1e-10, "{rows}x{cols}: err {err:e}");
    }
}

#[test]
fn inverse_matches_direct_summation_oracle() {
    for seed in 0..5u64 {
        let p = random_plane(6, 6, 100 + seed);
        let spec = dft2(&p);
        let inv = idft2(&spec).unwrap();
        let oracle = naive_idft2(&spec);
        let scale = inv.max_abs().max(1.0);
        for (got, want) in inv.as_slice().iter().zip(oracle.as_slice()) {
            assert!((got - want.re).abs() / scale <= 1e-10);
        }
    }
}

proptest! {
    #[test]
    fn round_trip_recovers_plane(
        rows in 1usize..10,
        cols in 1usize..10,
        seed in any::<u64>(),
    ) {
        let p = random_plane(rows, cols, seed);
        let back = idft2(&dft2(&p)).unwrap();
        for (a, b) in p.as_slice().iter().zip(back.as_slice()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn parseval_identity(
        rows in 1usize..12,
        cols in 1usize..12,
        seed in any::<u64>(),
    ) {
        let p = random_plane(rows, cols, seed);
        let spatial = p.sq_norm();
        let spectral = dft2(&p).sq_norm() / (rows * cols) as f64;
        prop_assert!((spatial - spectral).abs() <= 1e-10 * spatial.max(1.0));
    }

    #[test]
    fn hadamard_commutes_and_associates(
        rows in 1usize..8,
        cols in 1usize..8,
        seed in any::<u64>(),
    ) {
        let a = dft2(&random_plane(rows, cols, seed));
        let b = dft2(&random_plane(rows, cols, seed ^ 0x9e3779b9));
        let c = dft2(&random_plane(rows, cols, seed.rotate_left(17)));

        let ab = hadamard(&a, &b).unwrap();
        let ba = hadamard(&b, &a).unwrap();
        prop_assert!(rel_err_complex(&ab, &ba) <= 1e-12);

        let ab_c = hadamard(&ab, &c).unwrap();
        let a_bc = hadamard(&a, &hadamard(&b, &c).unwrap()).unwrap();
        prop_assert!(rel_err_complex(&ab_c, &a_bc) <= 1e-12);
    }

    #[test]
    fn convolution_theorem_on_matched_sizes(
        d in 2usize..16,
        w_frac in 1usize..100,
        seed in any::<u64>(),
    ) {
        let w = 1 + w_frac % d;
        let h = d - w + 1;
        let map = random_plane(h, h, seed);
        let kernel = random_plane(w, w, seed ^ 0xabcdef);

        let spatial = conv_full(&map, &kernel);
        let spectral = idft2(
            &hadamard(
                &dft2(&pad_to(&map, (d, d)).unwrap()),
                &dft2(&pad_to(&kernel, (d, d)).unwrap()),
            )
            .unwrap(),
        )
        .unwrap();
        prop_assert!(rel_err_real(&spatial, &spectral) <= 1e-10);
    }

    #[test]
    fn conv_valid_matches_loop_oracle(
        d in 2usize..12,
        w_frac in 1usize..100,
        seed in any::<u64>(),
    ) {
        let w = 1 + w_frac % d;
        let image = random_plane(d, d, seed);
        let kernel = random_plane(w, w, seed ^ 0x5555);
        let got = conv_valid(&image, &kernel).unwrap();
        let want = naive_conv_valid(&image, &kernel);
        prop_assert!(rel_err_real(&got, &want) <= 1e-12);
    }

    #[test]
    fn conv_full_matches_loop_oracle(
        h in 1usize..10,
        w in 1usize..10,
        seed in any::<u64>(),
    ) {
        let map = random_plane(h, h, seed);
        let kernel = random_plane(w, w, seed ^ 0xaaaa);
        let got = conv_full(&map, &kernel);
        let want = naive_conv_full(&map, &kernel);
        prop_assert!(rel_err_real(&got, &want) <= 1e-12);
    }

    #[test]
    fn conv_valid_is_central_region_of_spectral_full_conv(
        d in 3usize..14,
        w_frac in 1usize..100,
        seed in any::<u64>(),
    ) {
        let w = 1 + w_frac % d;
        let image = random_plane(d, d, seed);
        let kernel = random_plane(w, w, seed ^ 0x777);
        let h = d - w + 1;

        // Full convolution of the image (not the map) computed spectrally on
        // the padded (d + w - 1)² grid; its central h×h block with offset
        // (w-1, w-1) is the valid convolution.
        let full_side = d + w - 1;
        let spectral_full = idft2(
            &hadamard(
                &dft2(&pad_to(&image, (full_side, full_side)).unwrap()),
                &dft2(&pad_to(&kernel, (full_side, full_side)).unwrap()),
            )
            .unwrap(),
        )
        .unwrap();
        let valid = conv_valid(&image, &kernel).unwrap();
        let scale = valid.max_abs().max(1.0);
        for r in 0..h {
            for c in 0..h {
                let diff = (valid[(r, c)] - spectral_full[(r + w - 1, c + w - 1)]).abs();
                prop_assert!(diff / scale <= 1e-10);
            }
        }
    }
}

#[test]
fn direct_oracle_agrees_with_spec_constant_example() {
    // Frozen 2×2 case: the oracle itself must reproduce the hand-computed
    // spectrum, anchoring the oracle before it anchors anything else.
    let p = RealPlane::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let spec = naive_dft2(&p);
    let expect = [(10.0, 0.0), (-2.0, 0.0), (-4.0, 0.0), (0.0, 0.0)];
    for (z, (re, im)) in spec.as_slice().iter().zip(expect) {
        assert!((z.re - re).abs() < 1e-12 && (z.im - im).abs() < 1e-12);
    }
}
