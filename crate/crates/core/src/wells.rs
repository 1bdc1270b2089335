//! Double-well geometry of `U = a δ⁴ − b δ²`: minima separation, barrier
//! height, the small-oscillation frequency in each well, and the inverse
//! problem of choosing `V3` for a requested well.

use std::f64::consts::PI;

use crate::electrostatics::{
    expansion_integrals, quartic_coefficients_with, transition_voltage_with, QuarticCoefficients, TrapGeometry,
    VoltageSet,
};
use crate::error::{Result, TrapError};
use crate::units::{energy_scale, ELECTRON_MASS};

/// Barriers below this fraction of `ħ²/(2 m L²)` are flagged.
pub const SUB_QUANTUM_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleWellShape {
    /// Distance between the minima, m.
    pub well_distance: f64,
    /// Barrier height above the minima, J.
    pub barrier_height: f64,
    /// Length scale used to convert from dimensionless coordinates, m.
    pub r1_scale: f64,
    /// Barrier is shallower than `SUB_QUANTUM_FRACTION · ħ²/(2 m L²)`.
    pub sub_quantum: bool,
}

impl DoubleWellShape {
    pub fn new(well_distance: f64, barrier_height: f64, r1_scale: f64) -> Result<Self> {
        if !(well_distance > 0.0 && barrier_height > 0.0 && r1_scale > 0.0) {
            return Err(TrapError::Domain(format!(
                "well distance, barrier height and r1 must be positive \
                 (got {well_distance}, {barrier_height}, {r1_scale})"
            )));
        }
        let sub_quantum = barrier_height < SUB_QUANTUM_FRACTION * energy_scale(well_distance)?;
        Ok(Self {
            well_distance,
            barrier_height,
            r1_scale,
            sub_quantum,
        })
    }
}

pub fn shape_from_coefficients(c: &QuarticCoefficients, r1: f64) -> Result<DoubleWellShape> {
    if !(c.a > 0.0) {
        return Err(TrapError::Unconfined { a: c.a });
    }
    if !(c.b > 0.0) {
        return Err(TrapError::SingleWell { b: c.b });
    }
    let distance = r1 * 2.0 * (c.b / (2.0 * c.a)).sqrt();
    let barrier = c.b * c.b / (4.0 * c.a);
    DoubleWellShape::new(distance, barrier, r1)
}

/// Coefficients in the dimensionless offset `δ/r1` for a well of the given
/// size: `U = E_b [16 (δ/L)⁴ − 8 (δ/L)²]`.
pub fn coefficients_from_shape(well_distance: f64, barrier_height: f64, r1: f64) -> Result<QuarticCoefficients> {
    if !(well_distance > 0.0 && barrier_height > 0.0 && r1 > 0.0) {
        return Err(TrapError::Domain(
            "well distance, barrier height and r1 must be positive".into(),
        ));
    }
    let ratio = r1 / well_distance;
    let r2 = ratio * ratio;
    Ok(QuarticCoefficients::new(
        16.0 * barrier_height * r2 * r2,
        8.0 * barrier_height * r2,
        0.0,
    ))
}

/// `ω_z / 2π` in Hz, with `ω_z = (4/L) √(2 E_b / m)`.
pub fn classical_axial_frequency(shape: &DoubleWellShape) -> f64 {
    axial_frequency(shape.well_distance, shape.barrier_height)
}

pub fn axial_frequency(well_distance: f64, barrier_height: f64) -> f64 {
    4.0 / well_distance * (2.0 * barrier_height / ELECTRON_MASS).sqrt() / (2.0 * PI)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShapeTarget {
    /// Well distance in meters.
    WellDistance(f64),
    /// Barrier height in joules.
    BarrierHeight(f64),
}

impl ShapeTarget {
    fn value(self) -> f64 {
        match self {
            ShapeTarget::WellDistance(v) | ShapeTarget::BarrierHeight(v) => v,
        }
    }

    /// Target quantity for a coefficient set, zero in the single-well regime.
    fn measure(self, c: &QuarticCoefficients, r1: f64) -> Result<f64> {
        if c.b <= 0.0 {
            return Ok(0.0);
        }
        let shape = shape_from_coefficients(c, r1)?;
        Ok(match self {
            ShapeTarget::WellDistance(_) => shape.well_distance,
            ShapeTarget::BarrierHeight(_) => shape.barrier_height,
        })
    }
}

pub const V3_RESOLUTION: f64 = 1e-10;
pub const DEFAULT_BRACKET_WIDTH: f64 = 0.1;
const MONOTONICITY_SAMPLES: usize = 16;

/// Bisects on `V3` for a well with the requested distance or barrier.
///
/// `bracket` defaults to `[V3* − 0.1 V, V3*]`, the double-well side of the
/// transition voltage `V3*`, where both quantities grow as `V3` decreases.
pub fn solve_v3_for_shape(
    geom: &TrapGeometry,
    v1: f64,
    v2: f64,
    target: ShapeTarget,
    bracket: Option<(f64, f64)>,
) -> Result<f64> {
    let want = target.value();
    if !(want >= 0.0) || !want.is_finite() {
        return Err(TrapError::Domain(format!("target must be non-negative, got {want}")));
    }
    let integrals = expansion_integrals(geom)?;
    let transition = transition_voltage_with(&integrals, v1, v2)?;
    if want == 0.0 {
        return Ok(transition);
    }
    let (lo, hi) = bracket.unwrap_or((transition - DEFAULT_BRACKET_WIDTH, transition));
    if !(lo < hi) {
        return Err(TrapError::Domain(format!("empty bracket [{lo}, {hi}]")));
    }
    let eval = |v3: f64| -> Result<f64> {
        let c = quartic_coefficients_with(&integrals, &VoltageSet::new(v1, v2, v3)?, 0.0);
        target.measure(&c, geom.r1)
    };

    bisect_decreasing(eval, lo, hi, want)
}

/// Root of `f(v) = want` on `[lo, hi]` for `f` non-increasing in `v`.
fn bisect_decreasing<F>(f: F, lo: f64, hi: f64, want: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut previous = f64::INFINITY;
    for i in 0..=MONOTONICITY_SAMPLES {
        let v = lo + (hi - lo) * i as f64 / MONOTONICITY_SAMPLES as f64;
        let value = f(v)?;
        if value > previous {
            return Err(TrapError::Ambiguous(format!(
                "target quantity is not monotone on [{lo}, {hi}] V near {v} V"
            )));
        }
        previous = value;
    }

    let (mut big, mut small) = (lo, hi);
    let (f_big, f_small) = (f(big)?, f(small)?);
    if !(f_small <= want && want <= f_big) {
        return Err(TrapError::NoSolution(format!(
            "target {want:e} not bracketed by [{f_small:e}, {f_big:e}] on V3 in [{lo}, {hi}]"
        )));
    }
    while (small - big).abs() > V3_RESOLUTION {
        let mid = 0.5 * (big + small);
        if mid == big || mid == small {
            break;
        }
        if f(mid)? > want {
            big = mid;
        } else {
            small = mid;
        }
    }
    Ok(0.5 * (big + small))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::ev_to_joule;

    #[test]
    fn algebra_check() {
        let s = shape_from_coefficients(&QuarticCoefficients::new(16.0, 8.0, 0.0), 1.0).unwrap();
        assert!((s.well_distance - 1.0).abs() < 1e-15);
        assert!((s.barrier_height - 1.0).abs() < 1e-15);
    }

    #[test]
    fn regime_errors() {
        let single = QuarticCoefficients::new(1.0, -1.0, 0.0);
        assert!(matches!(
            shape_from_coefficients(&single, 1.0),
            Err(TrapError::SingleWell { .. })
        ));
        let loose = QuarticCoefficients::new(-1.0, 1.0, 0.0);
        assert!(matches!(
            shape_from_coefficients(&loose, 1.0),
            Err(TrapError::Unconfined { .. })
        ));
    }

    #[test]
    fn scale_law_in_r1() {
        let c = QuarticCoefficients::new(3.0e-21, 2.0e-23, 0.0);
        let s1 = shape_from_coefficients(&c, 1e-4).unwrap();
        let s2 = shape_from_coefficients(&c, 2e-4).unwrap();
        assert_eq!(s1.barrier_height, s2.barrier_height);
        assert!((s2.well_distance / s1.well_distance - 2.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_reproduces_minima() {
        let (l, eb, r1) = (10e-6, ev_to_joule(6e-8), 100e-6);
        let c = coefficients_from_shape(l, eb, r1).unwrap();
        let d_min = 0.5 * l / r1;
        let depth = c.energy(d_min) - c.energy(0.0);
        assert!((depth / -eb - 1.0).abs() < 1e-12);
        // U'(δ) = 4aδ³ − 2bδ
        let slope = 4.0 * c.a * d_min.powi(3) - 2.0 * c.b * d_min;
        assert!(slope.abs() < 1e-10 * c.b * d_min);
        let back = shape_from_coefficients(&c, r1).unwrap();
        assert!((back.well_distance / l - 1.0).abs() < 1e-12);
        assert!((back.barrier_height / eb - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flagship_axial_frequency() {
        let s = DoubleWellShape::new(10e-6, ev_to_joule(6e-8), 100e-6).unwrap();
        let f = classical_axial_frequency(&s);
        assert!((f / 9.2487e6 - 1.0).abs() < 1e-4, "{f}");
        assert!((f / 10e6 - 1.0).abs() < 0.1);
        let deeper = DoubleWellShape::new(10e-6, 4.0 * ev_to_joule(6e-8), 100e-6).unwrap();
        assert!((classical_axial_frequency(&deeper) / f - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sub_quantum_flag() {
        let unit = energy_scale(10e-6).unwrap();
        assert!(DoubleWellShape::new(10e-6, 1e-4 * unit, 1e-4).unwrap().sub_quantum);
        assert!(!DoubleWellShape::new(10e-6, 10.0 * unit, 1e-4).unwrap().sub_quantum);
    }

    #[test]
    fn solve_round_trip_and_limits() {
        let g = TrapGeometry::reference();
        let integrals = expansion_integrals(&g).unwrap();
        let transition = transition_voltage_with(&integrals, -12.8, -11.4).unwrap();
        let zero = solve_v3_for_shape(&g, -12.8, -11.4, ShapeTarget::BarrierHeight(0.0), None).unwrap();
        assert_eq!(zero, transition);

        let target = ShapeTarget::WellDistance(10e-6);
        let v3 = solve_v3_for_shape(&g, -12.8, -11.4, target, None).unwrap();
        let c = quartic_coefficients_with(&integrals, &VoltageSet::new(-12.8, -11.4, v3).unwrap(), 0.0);
        let got = shape_from_coefficients(&c, g.r1).unwrap();
        assert!((got.well_distance / 10e-6 - 1.0).abs() < 1e-6);

        let eb = ShapeTarget::BarrierHeight(ev_to_joule(6e-8));
        let v3 = solve_v3_for_shape(&g, -12.8, -11.4, eb, None).unwrap();
        let c = quartic_coefficients_with(&integrals, &VoltageSet::new(-12.8, -11.4, v3).unwrap(), 0.0);
        let got = shape_from_coefficients(&c, g.r1).unwrap();
        assert!((got.barrier_height / ev_to_joule(6e-8) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn unbracketed_target_is_reported() {
        let g = TrapGeometry::reference();
        let r = solve_v3_for_shape(&g, -12.8, -11.4, ShapeTarget::WellDistance(1.0), None);
        assert!(matches!(r, Err(TrapError::NoSolution(_))));
    }

    #[test]
    fn non_monotone_bracket_is_ambiguous() {
        let bumpy = |v: f64| Ok((3.0 * v).cos());
        let r = bisect_decreasing(bumpy, 0.0, 3.0, 0.5);
        assert!(matches!(r, Err(TrapError::Ambiguous(_))), "{r:?}");
        let line = |v: f64| Ok(1.0 - v);
        assert!((bisect_decreasing(line, 0.0, 1.0, 0.25).unwrap() - 0.75).abs() < 1e-9);
    }
}
