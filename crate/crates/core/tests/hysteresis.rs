//! Properties of the pico sleep controller.

use hetnet_core::activity_control::{step_state, PicoControlState, PicoMode, ThresholdPolicy};
use proptest::prelude::*;

fn policy() -> impl Strategy<Value = (u32, u32)> {
    (1u32..40).prop_flat_map(|a| (Just(a), 0..a))
}

/// Policies with at least one count strictly between the thresholds.
fn banded_policy() -> impl Strategy<Value = (u32, u32)> {
    (2u32..40).prop_flat_map(|a| (Just(a), 0..a - 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn mode_frozen_inside_band((a, d) in banded_policy(), start_active in any::<bool>(), seq in prop::collection::vec(any::<u32>(), 1..60)) {
        let p = ThresholdPolicy::two_threshold(a, d).unwrap();
        let mut s = if start_active { PicoControlState::active() } else { PicoControlState::sleeping() };
        for raw in seq {
            let count = (d + 1 + raw % (a - d - 1)) as usize;
            let next = step_state(s, count, &p, 1);
            prop_assert_eq!(next.mode, s.mode);
            s = next;
        }
    }

    #[test]
    fn wake_always_passes_through_boot((a, d) in policy(), boot in 1u32..5, seq in prop::collection::vec(0usize..50, 1..200)) {
        let p = ThresholdPolicy::two_threshold(a, d).unwrap();
        let mut s = PicoControlState::sleeping();
        for count in seq {
            let next = step_state(s, count, &p, boot);
            prop_assert!(!(s.mode == PicoMode::Sleep && next.mode == PicoMode::Active));
            prop_assert_eq!(next.boot_remaining > 0, next.mode == PicoMode::Boot);
            s = next;
        }
    }

    #[test]
    fn boot_lasts_exactly_its_duration(t in 1u32..30, boot in 1u32..6, seq in prop::collection::vec(0usize..50, 10..80)) {
        let p = ThresholdPolicy::one_threshold(t);
        let mut s = PicoControlState::sleeping();
        let mut in_boot = 0;
        for count in seq {
            s = step_state(s, count, &p, boot);
            match s.mode {
                PicoMode::Boot => in_boot += 1,
                PicoMode::Active if in_boot > 0 => {
                    prop_assert_eq!(in_boot, boot);
                    in_boot = 0;
                }
                _ => prop_assert_eq!(in_boot, 0),
            }
        }
    }
}

#[test]
fn one_threshold_oscillates_on_alternating_counts() {
    // Counts alternating around a single threshold keep the pico cycling
    // through Sleep, Boot and Active; a hysteresis band absorbs the same input.
    let counts: Vec<usize> = (0..60).map(|i| if i % 3 == 2 { 8 } else { 9 }).collect();
    let run = |p: ThresholdPolicy| {
        let mut s = PicoControlState::sleeping();
        let mut switches = 0;
        for &c in &counts {
            let next = step_state(s, c, &p, 1);
            if next.mode != s.mode {
                switches += 1;
            }
            s = next;
        }
        switches
    };
    let one = run(ThresholdPolicy::one_threshold(9));
    let two = run(ThresholdPolicy::two_threshold(9, 4).unwrap());
    assert!(one >= 30, "one-threshold switched {one} times");
    assert_eq!(two, 2);
}
