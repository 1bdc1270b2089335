mod common;

use common::{rel, seeded, simpson};
use proptest::prelude::*;
use trap_core::bessel::bessel_j1;
use trap_core::electrostatics::{
    axial_potential, expansion_integrals, phi_kernel, quartic_coefficients, quartic_fit, transition_voltage, Electrode,
    TrapGeometry, VoltageSet,
};
use trap_core::units::ELEMENTARY_CHARGE;

fn reference() -> (TrapGeometry, VoltageSet) {
    (
        TrapGeometry::reference(),
        VoltageSet::new(-12.8, -11.4, -12.8013).unwrap(),
    )
}

fn voltages() -> impl Strategy<Value = VoltageSet> {
    (-20.0..20.0f64, -20.0..20.0f64, -20.0..20.0f64).prop_map(|(a, b, c)| VoltageSet::new(a, b, c).unwrap())
}

fn geometries() -> impl Strategy<Value = TrapGeometry> {
    (1e-6..1e-3f64, 1.5..8.0f64, 1.0..10.0f64).prop_map(|(r1, r2, zc)| TrapGeometry::new(r1, r2, zc).unwrap())
}

proptest! {
    #![proptest_config(seeded(1000, 0x5eed_0001))]

    #[test]
    fn mirror_symmetry(geom in geometries(), volt in voltages(), t in 0.0..1.0f64) {
        let z = t * geom.zc_tilde;
        let a = axial_potential(z, &geom, &volt).unwrap();
        let b = axial_potential(geom.zc_tilde - z, &geom, &volt).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "{a} vs {b}");
    }
}

proptest! {
    #![proptest_config(seeded(64, 0x5eed_0002))]

    #[test]
    fn boundary_value_near_planes(geom in geometries(), volt in voltages()) {
        // Near the planes V - V1 grows linearly with the voltage differences,
        // so the tolerance is taken relative to the largest electrode voltage.
        let vmax = volt.v1.abs().max(volt.v2.abs()).max(volt.v3.abs()).max(1.0);
        for z in [1e-4, geom.zc_tilde - 1e-4] {
            let v = axial_potential(z, &geom, &volt).unwrap();
            prop_assert!((v - volt.v1).abs() < 1e-3 * vmax, "V({z}) = {v}, V1 = {}", volt.v1);
        }
        let at_plane = axial_potential(0.0, &geom, &volt).unwrap();
        let scale = volt.v1.abs() + volt.v2.abs() + volt.v3.abs();
        prop_assert!((at_plane - volt.v1).abs() <= 1e-14 * scale, "{at_plane} vs {}", volt.v1);
    }

    #[test]
    fn affine_in_voltages(geom in geometries(), v in voltages(), w in voltages(), lambda in -2.0..2.0f64, t in 0.01..0.99f64) {
        let z = t * geom.zc_tilde;
        let mix = VoltageSet::new(
            lambda * v.v1 + (1.0 - lambda) * w.v1,
            lambda * v.v2 + (1.0 - lambda) * w.v2,
            lambda * v.v3 + (1.0 - lambda) * w.v3,
        ).unwrap();
        let lhs = axial_potential(z, &geom, &mix).unwrap();
        let rhs = lambda * axial_potential(z, &geom, &v).unwrap() + (1.0 - lambda) * axial_potential(z, &geom, &w).unwrap();
        let scale = [v.v1, v.v2, v.v3, w.v1, w.v2, w.v3].iter().fold(1.0f64, |m, x| m.max(x.abs())) * (1.0 + 2.0 * lambda.abs());
        prop_assert!((lhs - rhs).abs() < 1e-12 * scale, "{lhs} vs {rhs}");
    }

    #[test]
    fn uniform_voltages_are_flat(geom in geometries(), c in -20.0..20.0f64, t in 0.0..1.0f64) {
        let volt = VoltageSet::new(c, c, c).unwrap();
        prop_assert_eq!(axial_potential(t * geom.zc_tilde, &geom, &volt).unwrap(), c);
    }
}

#[test]
fn fit_agrees_with_expansion_on_a_grid() {
    let v1 = -12.8;
    let v2 = -11.4;
    for zc in [5.4, 5.5, 5.6, 5.7, 5.8] {
        let geom = TrapGeometry::new(100e-6, 4.45, zc).unwrap();
        let vstar = transition_voltage(&geom, v1, v2).unwrap();
        for dv in [0.01, 0.02, 0.05, 0.1, 0.2] {
            let volt = VoltageSet::new(v1, v2, vstar - dv).unwrap();
            let q = quartic_coefficients(&geom, &volt).unwrap();
            let f = quartic_fit(&geom, &volt).unwrap();
            assert!(
                rel(f.a.abs(), q.a.abs()) < 1e-4,
                "a at zc={zc}, dV={dv}: {} vs {}",
                f.a,
                q.a
            );
            assert!(
                rel(f.b.abs(), q.b.abs()) < 1e-4,
                "b at zc={zc}, dV={dv}: {} vs {}",
                f.b,
                q.b
            );
            assert!(q.b > 0.0 && f.b > 0.0);
        }
    }
}

#[test]
fn zero_of_fitted_b_matches_transition_voltage() {
    let (geom, volt) = reference();
    let vstar = transition_voltage(&geom, volt.v1, volt.v2).unwrap();
    let b = |v3: f64| quartic_fit(&geom, &volt.with_v3(v3)).unwrap().b;
    let (mut lo, mut hi) = (vstar - 0.01, vstar + 0.01);
    assert!(b(lo) > 0.0 && b(hi) < 0.0);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if b(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((0.5 * (lo + hi) - vstar).abs() < 1e-5, "{lo} vs {vstar}");
}

#[test]
fn expansion_integrals_against_simpson() {
    let geom = TrapGeometry::reference();
    let ints = expansion_integrals(&geom).unwrap();
    let half = geom.zc_tilde / 2.0;
    let n = 1_000_000;
    for (r, a_ref, b_ref) in [(1.0, ints.a1, ints.b1), (geom.r2_tilde, ints.a2, ints.b2)] {
        let a = r / 24.0 * simpson(|k| k.powi(4) * bessel_j1(k * r) / (k * half).cosh(), 0.0, 200.0, n);
        let b = r / 2.0 * simpson(|k| k * k * bessel_j1(k * r) / (k * half).cosh(), 0.0, 200.0, n);
        assert!(rel(a_ref, a) < 1e-8, "a: {a_ref} vs {a}");
        assert!(rel(b_ref, b) < 1e-8, "b: {b_ref} vs {b}");
    }
    assert!(rel(ints.b1, ints.b2) < 0.05);
}

#[test]
fn kernel_at_midplane_against_simpson() {
    let geom = TrapGeometry::reference();
    let zc = geom.zc_tilde;
    let z = zc / 2.0;
    for (e, r) in [(Electrode::Disk, 1.0), (Electrode::Ring, geom.r2_tilde)] {
        let got = phi_kernel(e, z, &geom).unwrap();
        // sinh ratio written with decaying exponentials to avoid overflow.
        let ratio = |k: f64| -> f64 {
            if k == 0.0 {
                return -z / zc;
            }
            let num = (-k * (zc - z)).exp() - (-k * (zc + z)).exp();
            -num / (1.0 - (-2.0 * k * zc).exp())
        };
        let want = r * simpson(|k| ratio(k) * bessel_j1(k * r), 0.0, 40.0, 400_000);
        assert!(got > -1.0 && got < 0.0);
        assert!((got - want).abs() < 1e-10, "{e:?}: {got} vs {want}");
    }
}

#[test]
fn uniform_voltages_give_flat_expansion() {
    let geom = TrapGeometry::reference();
    let volt = VoltageSet::new(-3.0, -3.0, -3.0).unwrap();
    let q = quartic_coefficients(&geom, &volt).unwrap();
    assert_eq!((q.a, q.b), (0.0, 0.0));
    let f = quartic_fit(&geom, &volt).unwrap();
    assert_eq!((f.a, f.b), (0.0, 0.0));
    assert!(rel(f.u0, 3.0 * ELEMENTARY_CHARGE) < 1e-15);
}

#[test]
fn b_vanishes_at_transition() {
    let (geom, volt) = reference();
    let ints = expansion_integrals(&geom).unwrap();
    let vstar = transition_voltage(&geom, volt.v1, volt.v2).unwrap();
    let q = quartic_coefficients(&geom, &volt.with_v3(vstar)).unwrap();
    let scale = ELEMENTARY_CHARGE * (volt.v2 - volt.v1).abs() * ints.b1.abs();
    assert!(q.b.abs() < 1e-8 * scale);
}
