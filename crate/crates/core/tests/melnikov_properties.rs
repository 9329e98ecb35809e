use proptest::prelude::*;

use subharmonic::melnikov::{melnikov_config, melnikov_profile, melnikov_value};
use subharmonic::strobo::flow;
use subharmonic::{ForcingSpec, ForcingTerm, IntegratorConfig, PlanarState, ResonanceSpec, SystemSpec};

fn two_harmonic(spec: &ResonanceSpec) -> ForcingSpec {
    spec.forcing(vec![ForcingTerm::sine(1.0, 1), ForcingTerm::cosine(4.0, 2)]).unwrap()
}

fn unforced() -> SystemSpec {
    SystemSpec::new(ForcingSpec::sine(1.0).unwrap(), 0.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // Moving the base point along the unforced orbit by tau shifts M by tau.
    #[test]
    fn base_point_shift_moves_the_profile(tau in 0.0f64..8.0, t0 in 0.0f64..6.0) {
        let spec = ResonanceSpec::from_axis_velocity(1.7, 3, 2).unwrap();
        let forcing = two_harmonic(&spec);
        let cfg = melnikov_config();
        let x0 = spec.axis_point();
        let moved = flow(x0, 0.0, tau, &unforced(), &IntegratorConfig::default().with_tol(1e-13)).unwrap();
        let a = melnikov_value(t0, moved, &spec, &forcing, &cfg).unwrap();
        let b = melnikov_value(t0 - tau, x0, &spec, &forcing, &cfg).unwrap();
        prop_assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn profile_is_periodic_in_the_phase(t0 in 0.0f64..3.0, v0 in 0.5f64..1.9) {
        let spec = ResonanceSpec::from_axis_velocity(v0, 3, 1).unwrap();
        let forcing = two_harmonic(&spec);
        let cfg = melnikov_config();
        let x0 = spec.axis_point();
        let a = melnikov_value(t0, x0, &spec, &forcing, &cfg).unwrap();
        let b = melnikov_value(t0 + spec.cycle_duration(), x0, &spec, &forcing, &cfg).unwrap();
        let c = melnikov_value(t0 + spec.period, x0, &spec, &forcing, &cfg).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!((a - c).abs() < 1e-9, "M is T-periodic too: {a} vs {c}");
    }

    #[test]
    fn simple_zeros_come_in_pairs(v0 in 0.6f64..1.9, amp in -5.0f64..5.0) {
        let spec = ResonanceSpec::from_axis_velocity(v0, 3, 1).unwrap();
        let forcing = spec.forcing(vec![ForcingTerm::sine(1.0, 1), ForcingTerm::cosine(amp, 3)]).unwrap();
        let p = melnikov_profile(spec.axis_point(), &spec, &forcing, 96, &melnikov_config()).unwrap();
        prop_assert!(!p.identically_zero);
        prop_assert_eq!(p.zeros.len() % 2, 0);
        // signs of the slopes alternate around the cycle
        for w in p.zeros.windows(2) {
            prop_assert!(w[0].slope * w[1].slope < 0.0);
        }
    }
}

#[test]
fn off_level_base_point_is_rejected() {
    let spec = ResonanceSpec::from_axis_velocity(1.6, 3, 1).unwrap();
    let forcing = two_harmonic(&spec);
    let err = melnikov_value(0.0, PlanarState::new(0.0, 1.61), &spec, &forcing, &melnikov_config()).unwrap_err();
    assert!(matches!(err, subharmonic::Error::SpecMismatch { .. }), "{err}");
}

#[test]
fn slopes_match_finite_differences() {
    let spec = ResonanceSpec::from_axis_velocity(1.7, 3, 2).unwrap();
    let forcing = two_harmonic(&spec);
    let cfg = melnikov_config();
    let p = melnikov_profile(spec.axis_point(), &spec, &forcing, 64, &cfg).unwrap();
    for z in p.zeros.iter().take(3) {
        let h = 1e-5;
        let fd = (melnikov_value(z.t0 + h, spec.axis_point(), &spec, &forcing, &cfg).unwrap()
            - melnikov_value(z.t0 - h, spec.axis_point(), &spec, &forcing, &cfg).unwrap())
            / (2.0 * h);
        assert!((fd - z.slope).abs() < 1e-5 * z.slope.abs().max(1.0), "{fd} vs {}", z.slope);
        assert!(melnikov_value(z.t0, spec.axis_point(), &spec, &forcing, &cfg).unwrap().abs() < 1e-9);
    }
}
