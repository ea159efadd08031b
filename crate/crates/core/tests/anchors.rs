//! Quoted numbers and qualitative curve shapes for the amplitude-damped
//! Bell-diagonal family and the two needle examples.

use approx::assert_abs_diff_eq;
use qse_core::correlations::{concurrence, discord_b, discord_b_numeric, discord_x_state, DiscordOptions};
use qse_core::families::{damped_bell_diagonal, noisy_needle_example, tilted_needle_example};
use qse_core::steering::{contains_origin, ellipsoid_size, needle_length, steering_ellipsoid};
use qse_core::sweep::{analyze_curve, linear_grid, observe, RISE_TOL};
use qse_core::Side;

#[test]
fn concurrence_near_the_discord_valley() {
    let c = [0.9, -0.1, 0.09];
    let at_zero = concurrence(&damped_bell_diagonal(c, 0.0).unwrap());
    assert_abs_diff_eq!(at_zero, 0.045, epsilon = 1e-6);
    let early = concurrence(&damped_bell_diagonal(c, 0.01).unwrap());
    assert!((early - 0.04).abs() <= 0.005, "C = {early}");
}

#[test]
fn needle_lengths_of_the_length_example() {
    let delta = 0.1;
    let l1 = needle_length(&steering_ellipsoid(&noisy_needle_example(delta).unwrap(), Side::A)).unwrap();
    let l2 = needle_length(&steering_ellipsoid(&tilted_needle_example(delta).unwrap(), Side::A)).unwrap();
    assert_abs_diff_eq!(l1, 2f64.sqrt() * (1.0 - delta), epsilon = 1e-9);
    assert_abs_diff_eq!(l1, 1.272_792_206_135_785_6, epsilon = 1e-9);
    assert_abs_diff_eq!(l2, 2f64.sqrt(), epsilon = 1e-9);
    assert!(l1 < l2);
}

#[test]
fn origin_leaves_e_b_at_the_threshold() {
    for c3 in [0.1, 0.5, 0.9] {
        let threshold = c3 / (1.0 + c3);
        let grid = linear_grid(0.0, 1.0, 1001);
        let flip = grid
            .iter()
            .copied()
            .find(|&p| {
                let s = damped_bell_diagonal([0.3, -0.2, c3], p).unwrap();
                !contains_origin(&steering_ellipsoid(&s, Side::B), 1e-12)
            })
            .unwrap();
        assert!(flip > threshold && flip - threshold <= 1e-3, "c3={c3} flip={flip}");
    }
}

#[test]
fn discord_created_by_damping_a_classical_state() {
    let opts = DiscordOptions::default();
    let c = [0.7, 0.0, 0.0];
    assert!(discord_b_numeric(&damped_bell_diagonal(c, 0.0).unwrap(), &opts).discord < 1e-6);
    for p in linear_grid(0.0, 1.0, 201).into_iter().filter(|&p| p > 0.0 && p < 1.0) {
        let s = damped_bell_diagonal(c, p).unwrap();
        assert!(discord_b(&s, &opts).discord > 1e-7, "p={p}");
    }
    // growth is quadratic near p = 0; values from an independent brute-force
    // scan over measurement angles
    for (p, expected) in [(0.05, 4.001_624_435e-4), (0.1, 1.489_223_465e-3), (0.5, 2.114_954_548e-2)] {
        let s = damped_bell_diagonal(c, p).unwrap();
        let d = discord_b_numeric(&s, &opts).discord;
        assert_abs_diff_eq!(d, expected, epsilon = 1e-8);
        assert_abs_diff_eq!(d, discord_x_state(&s).unwrap().discord, epsilon = 1e-8);
    }
}

#[test]
fn damping_never_raises_discord_of_a_unital_free_state() {
    let opts = DiscordOptions::default();
    let c = [0.7, -0.3, 0.0];
    let ds: Vec<f64> = linear_grid(0.0, 1.0, 201)
        .into_iter()
        .map(|p| observe(|q| damped_bell_diagonal(c, q), p, &opts).unwrap().discord)
        .collect();
    for w in ds.windows(2) {
        assert!(w[1] <= w[0] + 1e-6, "{} -> {}", w[0], w[1]);
    }
}

#[test]
fn volume_of_e_a_vanishes_only_at_full_damping() {
    let c = [0.5, -0.5, 1.0];
    let before = steering_ellipsoid(&damped_bell_diagonal(c, 1.0 - 1e-6).unwrap(), Side::A);
    let after = steering_ellipsoid(&damped_bell_diagonal(c, 1.0).unwrap(), Side::A);
    assert!(ellipsoid_size(&before).volume > 0.0);
    assert_eq!(ellipsoid_size(&after).volume, 0.0);
    for p in linear_grid(0.0, 1.0, 101).into_iter().filter(|&p| p < 1.0) {
        assert!(concurrence(&damped_bell_diagonal(c, p).unwrap()) > 0.0, "p={p}");
    }
}

#[test]
fn valley_to_peak_is_largest_near_c3_0_09() {
    let opts = DiscordOptions::default();
    let ps = linear_grid(0.0, 1.0, 201);
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for c3 in linear_grid(0.0, 0.2, 21) {
        let c = [0.9, -0.1, c3];
        let ds: Vec<f64> = ps
            .iter()
            .map(|&p| observe(|q| damped_bell_diagonal(c, q), p, &opts).unwrap().discord)
            .collect();
        let summary = analyze_curve(&ps, &ds, RISE_TOL);
        if summary.delta_d > best.0 {
            best = (summary.delta_d, c3);
        }
    }
    assert!((best.1 - 0.09).abs() <= 0.02, "argmax c3 = {}", best.1);
}
