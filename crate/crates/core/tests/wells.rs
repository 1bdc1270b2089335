mod common;

use common::{rel, seeded};
use proptest::prelude::*;
use trap_core::electrostatics::{axial_energy, quartic_coefficients, transition_voltage, TrapGeometry, VoltageSet};
use trap_core::units::{ev_to_joule, joule_to_ev, ELECTRON_MASS};
use trap_core::wells::{
    axial_frequency, classical_axial_frequency, coefficients_from_shape, shape_from_coefficients, solve_v3_for_shape,
    DoubleWellShape, ShapeTarget,
};

proptest! {
    #![proptest_config(seeded(256, 0x5eed_0005))]

    #[test]
    fn shape_round_trip(l in 1e-7..1e-3f64, eb_ev in 1e-12..1e-2f64, r1 in 1e-6..1e-3f64) {
        let eb = ev_to_joule(eb_ev);
        let c = coefficients_from_shape(l, eb, r1).unwrap();
        let s = shape_from_coefficients(&c, r1).unwrap();
        prop_assert!(rel(s.well_distance, l) < 1e-12);
        prop_assert!(rel(s.barrier_height, eb) < 1e-12);
        // Minima sit at ±L/2 with depth E_b below the center.
        let d = l / (2.0 * r1);
        prop_assert!(rel(c.energy(0.0) - c.energy(d), eb) < 1e-9);
    }

    #[test]
    fn frequency_scales_as_sqrt_barrier(l in 1e-7..1e-3f64, eb_ev in 1e-12..1e-2f64, k in 1.1..100.0f64) {
        let eb = ev_to_joule(eb_ev);
        let ratio = axial_frequency(l, k * eb) / axial_frequency(l, eb);
        prop_assert!(rel(ratio, k.sqrt()) < 1e-12);
    }
}

#[test]
fn curvature_at_minimum_gives_axial_frequency() {
    let (l, eb, r1) = (10e-6, ev_to_joule(6e-8), 100e-6);
    let c = coefficients_from_shape(l, eb, r1).unwrap();
    // U''(δ) in the physical coordinate, central differences.
    let x0 = l / 2.0;
    let h = 1e-3 * l;
    let u = |x: f64| c.energy(x / r1);
    let curvature = (u(x0 + h) - 2.0 * u(x0) + u(x0 - h)) / (h * h);
    let omega = (curvature / ELECTRON_MASS).sqrt();
    let shape = DoubleWellShape::new(l, eb, r1).unwrap();
    assert!(rel(omega / (2.0 * std::f64::consts::PI), classical_axial_frequency(&shape)) < 1e-6);
}

#[test]
fn barrier_matches_full_potential_near_transition() {
    let geom = TrapGeometry::reference();
    let vstar = transition_voltage(&geom, -12.8, -11.4).unwrap();
    let mut previous = f64::INFINITY;
    // Sixth-order terms make the quartic barrier an approximation whose
    // error falls as the wells close in.
    for dv in [0.05, 0.0129, 1.3e-3] {
        let volt = VoltageSet::new(-12.8, -11.4, vstar - dv).unwrap();
        let c = quartic_coefficients(&geom, &volt).unwrap();
        let shape = shape_from_coefficients(&c, geom.r1).unwrap();
        let d = shape.well_distance / (2.0 * geom.r1);
        let center = axial_energy(geom.center(), &geom, &volt).unwrap();
        for side in [-1.0, 1.0] {
            let at_min = axial_energy(geom.center() + side * d, &geom, &volt).unwrap();
            let err = rel(center - at_min, shape.barrier_height);
            assert!(err < 2e-2 && err < previous, "dV={dv}: {err}");
        }
        previous = rel(
            center - axial_energy(geom.center() + d, &geom, &volt).unwrap(),
            shape.barrier_height,
        );
    }
}

#[test]
fn solver_finds_requested_geometry() {
    let geom = TrapGeometry::reference();
    let v3 = solve_v3_for_shape(&geom, -12.8, -11.4, ShapeTarget::WellDistance(10e-6), None).unwrap();
    let c = quartic_coefficients(&geom, &VoltageSet::new(-12.8, -11.4, v3).unwrap()).unwrap();
    let s = shape_from_coefficients(&c, geom.r1).unwrap();
    assert!(rel(s.well_distance, 10e-6) < 1e-6);

    let target = ev_to_joule(6e-8);
    let v3 = solve_v3_for_shape(&geom, -12.8, -11.4, ShapeTarget::BarrierHeight(target), None).unwrap();
    let c = quartic_coefficients(&geom, &VoltageSet::new(-12.8, -11.4, v3).unwrap()).unwrap();
    let s = shape_from_coefficients(&c, geom.r1).unwrap();
    assert!(rel(s.barrier_height, target) < 1e-6);
}

/// The flagship 10 µm / 6e-8 eV well appears about 1.3 mV on the
/// double-well side of the transition voltage.
#[test]
fn flagship_well_sits_just_below_transition() {
    let geom = TrapGeometry::reference();
    let vstar = transition_voltage(&geom, -12.8, -11.4).unwrap();
    let volt = VoltageSet::new(-12.8, -11.4, vstar - 1.3e-3).unwrap();
    let s = shape_from_coefficients(&quartic_coefficients(&geom, &volt).unwrap(), geom.r1).unwrap();
    assert!(rel(s.well_distance, 10e-6) < 0.05, "{}", s.well_distance);
    assert!(
        rel(joule_to_ev(s.barrier_height), 6e-8) < 0.15,
        "{}",
        joule_to_ev(s.barrier_height)
    );
}
