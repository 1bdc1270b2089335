//! Physical constants (CODATA 2018) and the dimensionless scalings used by
//! the quantum part of the model.
//!
//! Lengths in the eigenproblem are measured in units of the well distance
//! `L` and energies in units of `ħ²/(2 m L²)`. Everything crossing a module
//! boundary is SI; electron-volts only appear at I/O edges.

use crate::error::{Result, TrapError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Electron rest mass, kg.
    pub electron_mass: f64,
    /// Elementary charge magnitude |e|, C.
    pub elementary_charge: f64,
    /// eV per joule.
    pub ev_per_joule: f64,
}

pub const HBAR: f64 = 1.054_571_817e-34;
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    electron_mass: ELECTRON_MASS,
    elementary_charge: ELEMENTARY_CHARGE,
    ev_per_joule: 1.0 / ELEMENTARY_CHARGE,
};

pub fn ev_to_joule(ev: f64) -> f64 {
    ev * ELEMENTARY_CHARGE
}

pub fn joule_to_ev(joule: f64) -> f64 {
    joule / ELEMENTARY_CHARGE
}

/// `ħ²/(2 m L²)` in joules for a well distance `length` in meters.
pub fn energy_scale(length: f64) -> Result<f64> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(TrapError::Domain(format!(
            "length scale must be positive and finite, got {length}"
        )));
    }
    Ok(HBAR * HBAR / (2.0 * ELECTRON_MASS * length * length))
}

/// Barrier height in units of `ħ²/(2 m L²)`.
pub fn dimensionless_barrier(barrier: f64, length: f64) -> Result<f64> {
    if !(barrier > 0.0) || !barrier.is_finite() {
        return Err(TrapError::Domain(format!(
            "barrier height must be positive and finite, got {barrier}"
        )));
    }
    Ok(barrier / energy_scale(length)?)
}

/// Physical time (s) corresponding to one unit of dimensionless time for a
/// well distance `length`, i.e. `2 m L²/ħ`.
pub fn time_scale(length: f64) -> Result<f64> {
    Ok(HBAR / energy_scale(length)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_codata_2018() {
        let c = CODATA_2018;
        assert_eq!(c.hbar, 1.054571817e-34);
        assert_eq!(c.electron_mass, 9.1093837015e-31);
        assert_eq!(c.elementary_charge, 1.602176634e-19);
        assert!(c.hbar > 0.0 && c.electron_mass > 0.0 && c.ev_per_joule > 0.0);
    }

    #[test]
    fn energy_scale_at_ten_microns() {
        let e = energy_scale(10e-6).unwrap();
        assert!((e / 6.105e-29 - 1.0).abs() < 1e-3, "{e}");
        assert!((joule_to_ev(e) / 3.811e-10 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn energy_scale_scaling_laws() {
        let l = 10e-6;
        let e = energy_scale(l).unwrap();
        assert!((energy_scale(l / 2.0).unwrap() / (4.0 * e) - 1.0).abs() < 1e-14);
        assert!((energy_scale(1e-6).unwrap() / (100.0 * e) - 1.0).abs() < 1e-12);
        for alpha in [0.1, 0.37, 2.0, 13.0, 1e3] {
            let ratio = energy_scale(alpha * l).unwrap() * alpha * alpha / e;
            assert!((ratio - 1.0).abs() < 1e-12);
        }
        assert!(energy_scale(2e-6).unwrap() > energy_scale(3e-6).unwrap());
    }

    #[test]
    fn flagship_dimensionless_barrier() {
        let eb = dimensionless_barrier(ev_to_joule(6e-8), 10e-6).unwrap();
        assert!((eb - 157.4).abs() < 0.2, "{eb}");
        let l = 3.3e-6;
        let unit = energy_scale(l).unwrap();
        assert!((dimensionless_barrier(unit, l).unwrap() - 1.0).abs() < 1e-15);
        let x = dimensionless_barrier(2.0 * unit * 5.0, l).unwrap();
        assert!((x - 10.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive_inputs() {
        assert!(matches!(energy_scale(0.0), Err(TrapError::Domain(_))));
        assert!(energy_scale(-1e-6).is_err());
        assert!(energy_scale(f64::NAN).is_err());
        assert!(dimensionless_barrier(0.0, 1e-5).is_err());
        assert!(dimensionless_barrier(1e-30, -1e-5).is_err());
    }

    #[test]
    fn ev_conversion() {
        assert_eq!(ev_to_joule(1.0), 1.602176634e-19);
        assert_eq!(ev_to_joule(0.0), 0.0);
        for x in [1e-8, 0.3, 12.8, -4.0, 1e5] {
            assert!((joule_to_ev(ev_to_joule(x)) / x - 1.0).abs() < 1e-15);
        }
    }
}
