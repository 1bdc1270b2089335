//! On-axis potential of a mirror-image planar trap in the limit of an
//! infinitely large outer ring, its quartic expansion about the trap center,
//! and the voltage at which the center turns from a minimum into a barrier.
//!
//! Lengths are dimensionless (in units of the central disk radius `r1`),
//! with `z̃ = 0` on the lower electrode plane and `z̃ = z̃_c` on the upper one.

use rayon::prelude::*;

use crate::bessel::bessel_j1;
use crate::error::{Result, TrapError};
use crate::quadrature::{integrate_damped, poly_exp_tail, QuadratureOptions};
use crate::units::ELEMENTARY_CHARGE;
use crate::wells::{shape_from_coefficients, DoubleWellShape};

/// Upper bound of |J1| on the real line.
const J1_MAX: f64 = 0.582;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapGeometry {
    /// Central disk radius in meters.
    pub r1: f64,
    /// Outer radius of the first ring, `r2/r1`.
    pub r2_tilde: f64,
    /// Plane separation, `z_c/r1`.
    pub zc_tilde: f64,
}

impl TrapGeometry {
    pub fn new(r1: f64, r2_tilde: f64, zc_tilde: f64) -> Result<Self> {
        let g = Self { r1, r2_tilde, zc_tilde };
        g.validate()?;
        Ok(g)
    }

    /// The optimized trap: `r̃2 = 4.45`, `z̃c = 5.6`, `r1 = 100 µm`.
    pub fn reference() -> Self {
        Self {
            r1: 100e-6,
            r2_tilde: 4.45,
            zc_tilde: 5.6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r1 > 0.0) || !self.r1.is_finite() {
            return Err(TrapError::Domain(format!("r1 must be positive, got {}", self.r1)));
        }
        if !(self.r2_tilde > 1.0) || !self.r2_tilde.is_finite() {
            return Err(TrapError::Domain(format!(
                "r2_tilde must exceed 1, got {}",
                self.r2_tilde
            )));
        }
        if !(self.zc_tilde > 0.0) || !self.zc_tilde.is_finite() {
            return Err(TrapError::Domain(format!(
                "zc_tilde must be positive, got {}",
                self.zc_tilde
            )));
        }
        Ok(())
    }

    pub fn center(&self) -> f64 {
        0.5 * self.zc_tilde
    }

    /// Dimensionless outer radius of electrode `i` (`r̃1 = 1`).
    pub fn radius(&self, electrode: Electrode) -> f64 {
        match electrode {
            Electrode::Disk => 1.0,
            Electrode::Ring => self.r2_tilde,
        }
    }
}

/// The two kernels of the potential: the central disk boundary at `r̃ = 1`
/// and the first ring boundary at `r̃ = r̃2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Electrode {
    Disk,
    Ring,
}

impl Electrode {
    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Electrode::Disk),
            2 => Ok(Electrode::Ring),
            _ => Err(TrapError::Domain(format!("electrode index must be 1 or 2, got {i}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoltageSet {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl VoltageSet {
    pub fn new(v1: f64, v2: f64, v3: f64) -> Result<Self> {
        if !(v1.is_finite() && v2.is_finite() && v3.is_finite()) {
            return Err(TrapError::Domain("voltages must be finite".into()));
        }
        Ok(Self { v1, v2, v3 })
    }

    pub fn with_v3(self, v3: f64) -> Self {
        Self { v3, ..self }
    }
}

/// Marks the expansion variable of [`QuarticCoefficients`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionVariable {
    /// `δ̃ = z̃ − z̃c/2`, dimensionless (units of `r1`).
    CenterOffsetOverR1,
}

/// `U(δ̃) ≈ u0 + a δ̃⁴ − b δ̃²` for the electron potential energy, in joules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoefficients {
    pub a: f64,
    pub b: f64,
    pub u0: f64,
    pub variable: ExpansionVariable,
}

impl QuarticCoefficients {
    pub fn new(a: f64, b: f64, u0: f64) -> Self {
        Self {
            a,
            b,
            u0,
            variable: ExpansionVariable::CenterOffsetOverR1,
        }
    }

    pub fn is_double_well(&self) -> bool {
        self.b > 0.0
    }

    pub fn energy(&self, delta: f64) -> f64 {
        let d2 = delta * delta;
        self.u0 + self.a * d2 * d2 - self.b * d2
    }
}

/// Geometry-only integrals entering the quartic and quadratic coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionIntegrals {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
}

fn kernel_options() -> QuadratureOptions {
    QuadratureOptions {
        rel_tol: 1e-12,
        abs_tol: 1e-16,
        ..QuadratureOptions::default()
    }
}

/// Dimensionless kernel `φ_i(z̃)` for `0 ≤ z̃ ≤ z̃c`.
///
/// The Laplace-transform part `r̃ ∫ e^{-kz̃} J1(kr̃) dk = 1 − z̃/√(z̃²+r̃²)` is
/// split off analytically; the remaining integrand decays at least like
/// `e^{-k z̃c}` for every `z̃`, so evaluation next to the planes costs the same
/// as at the center.
pub fn phi_kernel(electrode: Electrode, z_tilde: f64, geom: &TrapGeometry) -> Result<f64> {
    geom.validate()?;
    let zc = geom.zc_tilde;
    if !(0.0..=zc).contains(&z_tilde) {
        return Err(TrapError::Domain(format!("z_tilde = {z_tilde} lies outside [0, {zc}]")));
    }
    if z_tilde == 0.0 {
        return Ok(-1.0);
    }
    if z_tilde == zc {
        return Ok(0.0);
    }
    let r = geom.radius(electrode);
    let analytic = -(1.0 - z_tilde / z_tilde.hypot(r));
    let remainder = |k: f64| {
        // (e^{-k(2zc-z)} - e^{-k(2zc+z)}) / (1 - e^{-2k zc})
        let numerator = (-k * (2.0 * zc - z_tilde)).exp() * -(-2.0 * k * z_tilde).exp_m1();
        let denominator = -(-2.0 * k * zc).exp_m1();
        numerator / denominator * bessel_j1(k * r)
    };
    let rate = 2.0 * zc - z_tilde;
    let tail = |k: f64| {
        let shield = if k > 0.0 {
            1.0 / -(-2.0 * k * zc).exp_m1()
        } else {
            f64::INFINITY
        };
        J1_MAX * shield * (-rate * k).exp() / rate
    };
    let panel = std::f64::consts::PI / r.max(1.0);
    let integral = integrate_damped(remainder, panel, tail, &kernel_options())?;
    Ok(analytic + r * integral.value)
}

/// Symmetric kernel sums `S_i = φ_i(z̃) + φ_i(z̃c − z̃)`.
fn kernel_sums(z_tilde: f64, geom: &TrapGeometry) -> Result<(f64, f64)> {
    let mirror = geom.zc_tilde - z_tilde;
    let s1 = phi_kernel(Electrode::Disk, z_tilde, geom)? + phi_kernel(Electrode::Disk, mirror, geom)?;
    let s2 = phi_kernel(Electrode::Ring, z_tilde, geom)? + phi_kernel(Electrode::Ring, mirror, geom)?;
    Ok((s1, s2))
}

/// Voltage-dependent part of the potential, `V − V3`.
fn potential_offset(z_tilde: f64, geom: &TrapGeometry, volt: &VoltageSet) -> Result<f64> {
    let (s1, s2) = kernel_sums(z_tilde, geom)?;
    Ok((volt.v2 - volt.v1) * s1 + (volt.v3 - volt.v2) * s2)
}

/// On-axis electrostatic potential in volts.
pub fn axial_potential(z_tilde: f64, geom: &TrapGeometry, volt: &VoltageSet) -> Result<f64> {
    Ok(potential_offset(z_tilde, geom, volt)? + volt.v3)
}

/// Electron potential energy `−|e| V(z̃)` in joules.
pub fn axial_energy(z_tilde: f64, geom: &TrapGeometry, volt: &VoltageSet) -> Result<f64> {
    Ok(-ELEMENTARY_CHARGE * axial_potential(z_tilde, geom, volt)?)
}

/// `r̃ ∫ k^p J1(k r̃) / cosh(k z̃c/2) dk`.
fn cosh_moment(power: u32, r: f64, zc: f64) -> Result<f64> {
    let c = 0.5 * zc;
    let integrand = |k: f64| {
        let e = (-c * k).exp();
        let sech = 2.0 * e / (1.0 + e * e);
        k.powi(power as i32) * sech * bessel_j1(k * r)
    };
    let tail = |k: f64| poly_exp_tail(power, c, k, 2.0 * J1_MAX);
    let panel = std::f64::consts::PI / r.max(1.0);
    let opts = QuadratureOptions {
        rel_tol: 1e-12,
        abs_tol: 0.0,
        tail_tol: 1e-15,
        ..QuadratureOptions::default()
    };
    Ok(r * integrate_damped(integrand, panel, tail, &opts)?.value)
}

pub fn expansion_integrals(geom: &TrapGeometry) -> Result<ExpansionIntegrals> {
    geom.validate()?;
    let zc = geom.zc_tilde;
    let r2 = geom.r2_tilde;
    Ok(ExpansionIntegrals {
        a1: cosh_moment(4, 1.0, zc)? / 24.0,
        a2: cosh_moment(4, r2, zc)? / 24.0,
        b1: cosh_moment(2, 1.0, zc)? / 2.0,
        b2: cosh_moment(2, r2, zc)? / 2.0,
    })
}

/// Coefficients from precomputed integrals.
///
/// For the electron (`U = −|e| V`) the symmetric kernel sum expands as
/// `S_i = S_i(0) − b_i δ̃² − a_i δ̃⁴ + …`, so the quartic coefficient carries
/// `+|e|` and the quadratic one `−|e|` in the `a δ̃⁴ − b δ̃²` convention.
pub fn quartic_coefficients_with(integrals: &ExpansionIntegrals, volt: &VoltageSet, u0: f64) -> QuarticCoefficients {
    let d21 = volt.v2 - volt.v1;
    let d32 = volt.v3 - volt.v2;
    let a = ELEMENTARY_CHARGE * (d21 * integrals.a1 + d32 * integrals.a2);
    let b = -ELEMENTARY_CHARGE * (d21 * integrals.b1 + d32 * integrals.b2);
    QuarticCoefficients::new(a, b, u0)
}

pub fn quartic_coefficients(geom: &TrapGeometry, volt: &VoltageSet) -> Result<QuarticCoefficients> {
    let integrals = expansion_integrals(geom)?;
    let u0 = axial_energy(geom.center(), geom, volt)?;
    Ok(quartic_coefficients_with(&integrals, volt, u0))
}

/// Finite-difference expansion of the electron energy about the center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticFit {
    pub coefficients: QuarticCoefficients,
    /// First and third central differences at the center, in J per
    /// dimensionless length (cubed); zero by mirror symmetry.
    pub first_derivative: f64,
    pub third_derivative: f64,
    pub second_derivative: f64,
    pub fourth_derivative: f64,
    /// Estimated rounding error of the fourth derivative.
    pub rounding_estimate: f64,
}

pub const FIT_STEP: f64 = 1e-2;

/// Independent route to the expansion: central differences of the full
/// potential with step `h = 0.01` and `2h`, Richardson-extrapolated.
pub fn quartic_fit_detailed(geom: &TrapGeometry, volt: &VoltageSet) -> Result<QuarticFit> {
    geom.validate()?;
    let h = FIT_STEP;
    let center = geom.center();
    if 4.0 * h >= center {
        return Err(TrapError::Domain(format!(
            "zc_tilde = {} too small for the difference stencil",
            geom.zc_tilde
        )));
    }
    // The constant V3 cancels exactly in every difference, so only the
    // voltage-dependent part is differenced.
    let g = |m: i32| -> Result<f64> { Ok(-ELEMENTARY_CHARGE * potential_offset(center + m as f64 * h, geom, volt)?) };
    let mut v = [0.0; 9];
    for (idx, m) in (-4..=4).enumerate() {
        v[idx] = g(m)?;
    }
    let at = |m: i32| v[(m + 4) as usize];

    let d2 = |s: i32| (at(s) - 2.0 * at(0) + at(-s)) / (s as f64 * h).powi(2);
    let d4 = |s: i32| (at(2 * s) - 4.0 * at(s) + 6.0 * at(0) - 4.0 * at(-s) + at(-2 * s)) / (s as f64 * h).powi(4);
    let second = (4.0 * d2(1) - d2(2)) / 3.0;
    let fourth = (4.0 * d4(1) - d4(2)) / 3.0;
    let first = (at(1) - at(-1)) / (2.0 * h);
    let third = (at(2) - 2.0 * at(1) + 2.0 * at(-1) - at(-2)) / (2.0 * h.powi(3));

    let magnitude = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let rounding = 16.0 * f64::EPSILON * magnitude * 16.0 / h.powi(4);
    let scale = ELEMENTARY_CHARGE * ((volt.v2 - volt.v1).abs() + (volt.v3 - volt.v2).abs());
    if rounding / 24.0 > 1e-6 * scale.max(fourth.abs() / 24.0) {
        return Err(TrapError::numerical(
            "finite differences lost too many digits to cancellation",
            rounding,
        ));
    }

    let u0 = -ELEMENTARY_CHARGE * volt.v3 + at(0);
    Ok(QuarticFit {
        coefficients: QuarticCoefficients::new(fourth / 24.0, -second / 2.0, u0),
        first_derivative: first,
        third_derivative: third,
        second_derivative: second,
        fourth_derivative: fourth,
        rounding_estimate: rounding,
    })
}

pub fn quartic_fit(geom: &TrapGeometry, volt: &VoltageSet) -> Result<QuarticCoefficients> {
    Ok(quartic_fit_detailed(geom, volt)?.coefficients)
}

/// `V3` at which the quadratic coefficient vanishes.
pub fn transition_voltage_with(integrals: &ExpansionIntegrals, v1: f64, v2: f64) -> Result<f64> {
    let ExpansionIntegrals { b1, b2, .. } = *integrals;
    if b2.abs() < 1e-14 {
        return Err(TrapError::DegenerateGeometry { b2 });
    }
    Ok((v2 * (b2 - b1) + v1 * b1) / b2)
}

pub fn transition_voltage(geom: &TrapGeometry, v1: f64, v2: f64) -> Result<f64> {
    transition_voltage_with(&expansion_integrals(geom)?, v1, v2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WellRegime {
    Single,
    Double,
}

impl WellRegime {
    pub fn label(self) -> &'static str {
        match self {
            WellRegime::Single => "single",
            WellRegime::Double => "double",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub v3: f64,
    pub coefficients: QuarticCoefficients,
    pub shape: Option<DoubleWellShape>,
    pub regime: WellRegime,
}

/// Well geometry along a grid of `V3` values, in grid order.
pub fn sweep_v3(geom: &TrapGeometry, v1: f64, v2: f64, v3_grid: &[f64]) -> Result<Vec<SweepRow>> {
    if v3_grid.is_empty() {
        return Err(TrapError::Domain("V3 grid is empty".into()));
    }
    let integrals = expansion_integrals(geom)?;
    v3_grid
        .par_iter()
        .map(|&v3| {
            let volt = VoltageSet::new(v1, v2, v3)?;
            let u0 = axial_energy(geom.center(), geom, &volt)?;
            let coefficients = quartic_coefficients_with(&integrals, &volt, u0);
            let (shape, regime) = if coefficients.b > 0.0 {
                (
                    Some(shape_from_coefficients(&coefficients, geom.r1)?),
                    WellRegime::Double,
                )
            } else {
                (None, WellRegime::Single)
            };
            Ok(SweepRow {
                v3,
                coefficients,
                shape,
                regime,
            })
        })
        .collect()
}
