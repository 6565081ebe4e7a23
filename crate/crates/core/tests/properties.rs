//! Property tests for the mechanical invariants of patterns and codebooks.

use irsbeam::{
    afm_1d, afm_1d_norm, afm_2d, narrow_profile, CascadedDirection, Codebook, PhaseProfile,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

fn profile_strategy(max_len: usize) -> impl Strategy<Value = PhaseProfile> {
    prop::collection::vec(-4.0..4.0f64, 1..=max_len)
        .prop_map(|v| PhaseProfile::new(v).expect("finite values"))
}

proptest! {
    /// The summed response of n unit phasors can never exceed n.
    #[test]
    fn afm_is_bounded_by_the_element_count(
        profile in profile_strategy(8),
        kd in 0.1..PI,
        beta in -2.0..2.0f64,
    ) {
        let n = profile.len() as f64;
        prop_assert!(afm_1d(&profile, kd, beta) <= n * (1.0 + 1e-12));
        prop_assert!(afm_1d_norm(&profile, kd, beta) <= 1.0 + 1e-12);
    }

    /// The planar product form agrees with the brute-force double sum.
    #[test]
    fn planar_product_matches_the_double_sum(
        hor in profile_strategy(5),
        ver in profile_strategy(5),
        beta_hor in -2.0..2.0f64,
        beta_ver in -2.0..2.0f64,
    ) {
        let dir = CascadedDirection::new(beta_hor, beta_ver).unwrap();
        let product = afm_2d(&hor, &ver, FRAC_PI_2, &dir);
        let mut total = Complex64::ZERO;
        for (m, gh) in hor.values().iter().enumerate() {
            for (l, gv) in ver.values().iter().enumerate() {
                let phase = FRAC_PI_2 * (beta_hor * m as f64 + beta_ver * l as f64 + gh + gv);
                total += Complex64::from_polar(1.0, phase);
            }
        }
        let scale = product.max(total.norm()).max(1e-3);
        prop_assert!((product - total.norm()).abs() <= 1e-10 * scale);
    }

    /// At half-wave spacing the pattern repeats with period 2 in direction.
    #[test]
    fn half_wave_spacing_aliases_directions_two_apart(
        profile in profile_strategy(32),
        beta in 0.0001..1.9999f64,
    ) {
        let a = afm_1d(&profile, PI, beta);
        let b = afm_1d(&profile, PI, beta - 2.0);
        let scale = a.max(b).max(1e-3 * profile.len() as f64);
        prop_assert!((a - b).abs() <= 1e-9 * scale, "{a} vs {b}");
    }

    /// Shifting every element phase by a constant leaves the pattern
    /// unchanged (the constructor canonicalizes the shift away).
    #[test]
    fn constant_phase_shifts_do_not_change_the_pattern(
        values in prop::collection::vec(-4.0..4.0f64, 1..=8),
        shift in -50.0..50.0f64,
        beta in -2.0..2.0f64,
    ) {
        let base = PhaseProfile::new(values.clone()).unwrap();
        let shifted =
            PhaseProfile::new(values.iter().map(|v| v + shift).collect()).unwrap();
        let a = afm_1d(&base, FRAC_PI_2, beta);
        let b = afm_1d(&shifted, FRAC_PI_2, beta);
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.max(b)));
    }

    /// A steered beam attains the exact element count at its steering
    /// direction and never exceeds it elsewhere.
    #[test]
    fn steered_beams_peak_exactly_at_their_steering_direction(
        psi0 in -2.0..2.0f64,
        n in 1usize..=64,
        beta in -2.0..2.0f64,
    ) {
        let profile = narrow_profile(psi0, n).unwrap();
        prop_assert_eq!(afm_1d(&profile, FRAC_PI_2, psi0), n as f64);
        prop_assert!(afm_1d(&profile, FRAC_PI_2, beta) <= n as f64 * (1.0 + 1e-12));
    }

    /// Each codebook layer partitions the direction range: consecutive
    /// ranges abut, the layer spans the whole range, and range lookup is
    /// consistent with membership.
    #[test]
    fn codebook_layers_partition_the_range(
        s in 1usize..=5,
        beta in -2.0..2.0f64,
    ) {
        let cb = Codebook::build(16).unwrap();
        let layer = cb.layer(s).unwrap();
        prop_assert_eq!(layer.len(), 1usize << s);
        prop_assert_eq!(layer[0].band_start(), -2.0);
        prop_assert_eq!(layer[layer.len() - 1].band_end(), 2.0);
        for pair in layer.windows(2) {
            prop_assert_eq!(pair[0].band_end(), pair[1].band_start());
        }

        let i = cb.containing_index(s, beta).unwrap();
        prop_assert!(cb.codeword(s, i).unwrap().contains(beta));
        for (k, cw) in layer.iter().enumerate() {
            prop_assert_eq!(cw.contains(beta), k + 1 == i);
        }
    }

    /// Parent/child navigation is a bijection between consecutive layers.
    #[test]
    fn codebook_navigation_roundtrips(i in 1usize..=16) {
        let (lo, hi) = Codebook::child_indices(i);
        prop_assert_eq!(hi, lo + 1);
        prop_assert_eq!(Codebook::parent_index(lo), i);
        prop_assert_eq!(Codebook::parent_index(hi), i);
    }

    /// The nearest-steering lookup minimizes distance to the bottom-layer
    /// steering directions.
    #[test]
    fn nearest_steering_minimizes_the_distance(beta in -2.0..2.0f64) {
        let cb = Codebook::build(16).unwrap();
        let chosen = cb.nearest_steering_index(beta);
        let bottom = cb.bottom_layer();
        let chosen_dist = (bottom[chosen - 1].steering().unwrap() - beta).abs();
        let best = bottom
            .iter()
            .map(|cw| (cw.steering().unwrap() - beta).abs())
            .fold(f64::INFINITY, f64::min);
        prop_assert!((chosen_dist - best).abs() <= 1e-12);
    }
}
