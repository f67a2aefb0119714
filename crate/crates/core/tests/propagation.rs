//! Two-body propagation invariants.

use proptest::prelude::*;
use streakbench_core::propagation::{solve_kepler, Propagator, TwoBody, MU_EARTH_KM3_S2};
use streakbench_core::synthetic::{synthetic_tle, OrbitElements};
use streakbench_core::Epoch;

fn elements() -> impl Strategy<Value = OrbitElements> {
    (
        0.0..180.0f64,
        0.0..360.0f64,
        0.0..0.7f64,
        0.0..360.0f64,
        0.0..360.0f64,
        1.0..16.0f64,
    )
        .prop_map(|(i, raan, e, argp, ma, n)| OrbitElements {
            inclination_deg: i,
            raan_deg: raan,
            eccentricity: e,
            arg_perigee_deg: argp,
            mean_anomaly_deg: ma,
            mean_motion_rev_day: n,
        })
}

fn epoch() -> Epoch {
    "2021-03-04T05:06:07Z".parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_and_momentum_conserved(el in elements()) {
        let tle = synthetic_tle(1, "T", epoch(), &el).unwrap();
        let prop = TwoBody::new(&tle).unwrap();
        let s0 = prop.state_at(epoch()).unwrap();
        let (e0, h0) = (s0.specific_energy(), s0.angular_momentum());
        for k in 1..=20 {
            let s = prop.state_at(epoch() + 613.0 * k as f64).unwrap();
            prop_assert!(((s.specific_energy() - e0) / e0).abs() < 1e-9);
            prop_assert!((s.angular_momentum() - h0).norm() / h0.norm() < 1e-9);
        }
        // Vis-viva fixes the energy from the mean motion alone.
        let a = prop.semi_major_axis_km();
        prop_assert!(((e0 + MU_EARTH_KM3_S2 / (2.0 * a)) / e0).abs() < 1e-9);
    }

    #[test]
    fn returns_after_one_period(el in elements()) {
        let tle = synthetic_tle(1, "T", epoch(), &el).unwrap();
        let prop = TwoBody::new(&tle).unwrap();
        let a = prop.state_at(epoch()).unwrap();
        let b = prop.state_at(epoch() + prop.period_s()).unwrap();
        prop_assert!((a.position - b.position).norm() < 1e-6);
    }

    #[test]
    fn kepler_residual(m in -20.0..20.0f64, e in 0.0..0.99f64) {
        let ea = solve_kepler(m, e).unwrap();
        let r = (ea - e * ea.sin() - m).rem_euclid(std::f64::consts::TAU);
        prop_assert!(r.min(std::f64::consts::TAU - r) < 1e-11);
    }
}

#[test]
fn hyperbolic_is_unsupported() {
    assert!(solve_kepler(1.0, 1.0).is_err());
}
