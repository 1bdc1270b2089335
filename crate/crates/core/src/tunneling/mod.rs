//! Tunneling between the wells: the splitting of the lowest pair and the
//! frequency law built on it, the localized left/right states, two-level
//! population dynamics, and a wave-packet propagator used to check them.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use crate::eigensolver::{quartic_spectrum, EigenSolution, Grid1D, Splitting};
use crate::error::{Result, TrapError};
use crate::units::{dimensionless_barrier, ELECTRON_MASS, HBAR};

mod propagate;

pub use propagate::{
    max_time_step, measure_rabi_period, propagate, propagate_time_dependent, CrankNicolson, RabiMeasurement, WaveState,
    STEP_GUARD,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Tunneling,
    /// The two lowest levels do not both fit below the barrier top.
    NoBoundPair,
    /// The splitting is below the eigensolver's resolution floor.
    BelowResolution,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Tunneling => "TUNNELING",
            Regime::NoBoundPair => "NO_BOUND_PAIR",
            Regime::BelowResolution => "BELOW_RESOLUTION",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelingResult {
    pub eb_tilde: f64,
    /// `ε1 − ε0` in units of `ħ²/(2 m L²)`.
    pub splitting_dimensionless: f64,
    /// The tunneling-law function; equal to the dimensionless splitting.
    pub f_value: f64,
    /// `ω_{1,0}/2π` in Hz, only in the tunneling regime and only once a
    /// physical length is attached.
    pub tunneling_frequency: Option<f64>,
    pub regime: Regime,
}

impl TunnelingResult {
    /// Attaches the physical well distance, filling in the frequency.
    pub fn with_length(mut self, well_distance: f64) -> Self {
        self.tunneling_frequency = match self.regime {
            Regime::Tunneling => Some(frequency_prefactor() * self.f_value / (well_distance * well_distance)),
            _ => None,
        };
        self
    }
}

/// `ħ/(4π m)` in Hz·m².
pub fn frequency_prefactor() -> f64 {
    HBAR / (4.0 * PI * ELECTRON_MASS)
}

fn classify(solution: &EigenSolution, eb_tilde: f64) -> TunnelingResult {
    let e1 = solution.eigenvalues[1];
    let (gap, resolved) = match solution.splitting() {
        Some(Splitting::Resolved(g)) => (g, true),
        Some(Splitting::BelowResolution(g)) => (g, false),
        None => (0.0, false),
    };
    let regime = if e1 >= 0.0 {
        Regime::NoBoundPair
    } else if !resolved {
        Regime::BelowResolution
    } else {
        Regime::Tunneling
    };
    TunnelingResult {
        eb_tilde,
        splitting_dimensionless: gap,
        f_value: gap,
        tunneling_frequency: None,
        regime,
    }
}

pub fn f_of_barrier_on(eb_tilde: f64, grid: &Grid1D) -> Result<TunnelingResult> {
    let solution = quartic_spectrum(eb_tilde, 2, grid)?;
    Ok(classify(&solution, eb_tilde))
}

/// `f(Ẽ_b)` on the default grid.
pub fn f_of_barrier(eb_tilde: f64) -> Result<TunnelingResult> {
    f_of_barrier_on(eb_tilde, &Grid1D::default())
}

/// `ω_{1,0}/2π` in Hz for a well distance in meters and a barrier in joules.
pub fn tunneling_frequency(well_distance: f64, barrier_height: f64) -> Result<f64> {
    let eb_tilde = dimensionless_barrier(barrier_height, well_distance)?;
    let result = f_of_barrier(eb_tilde)?.with_length(well_distance);
    result.tunneling_frequency.ok_or(TrapError::NoFrequency(result.regime))
}

/// One row per barrier value, in input order.
pub fn tabulate_f(eb_tilde_grid: &[f64], grid: &Grid1D) -> Result<Vec<TunnelingResult>> {
    if eb_tilde_grid.is_empty() {
        return Err(TrapError::Domain("barrier grid is empty".into()));
    }
    eb_tilde_grid.par_iter().map(|&eb| f_of_barrier_on(eb, grid)).collect()
}

#[derive(Debug, Clone)]
pub struct LocalizedStates {
    /// Right-well state `(φ0 + φ1)/√2`.
    pub plus: Vec<f64>,
    /// Left-well state `(φ0 − φ1)/√2`.
    pub minus: Vec<f64>,
    /// `φ1` with the sign convention applied.
    pub phi1: Vec<f64>,
    pub phi1_flipped: bool,
}

fn check_orthonormal(phi0: &[f64], phi1: &[f64], grid: &Grid1D) -> Result<()> {
    if phi0.len() != grid.n_points() || phi1.len() != grid.n_points() {
        return Err(TrapError::Contract("state length does not match the grid".into()));
    }
    let n00 = grid.inner(phi0, phi0);
    let n11 = grid.inner(phi1, phi1);
    let n01 = grid.inner(phi0, phi1);
    if (n00 - 1.0).abs() > 1e-6 || (n11 - 1.0).abs() > 1e-6 || n01.abs() > 1e-6 {
        return Err(TrapError::Contract(format!(
            "states are not orthonormal: <0|0>={n00}, <1|1>={n11}, <0|1>={n01}"
        )));
    }
    Ok(())
}

/// Right/left localized combinations of the lowest pair. The sign of `φ1`
/// is chosen so that `φ⁺` carries more than half its weight at `ζ > 0`.
pub fn localized_states(phi0: &[f64], phi1: &[f64], grid: &Grid1D) -> Result<LocalizedStates> {
    check_orthonormal(phi0, phi1, grid)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut plus: Vec<f64> = phi0.iter().zip(phi1).map(|(a, b)| s * (a + b)).collect();
    let right: f64 = right_weight(&plus, grid);
    let flipped = right < 0.5;
    let phi1: Vec<f64> = if flipped {
        phi1.iter().map(|v| -v).collect()
    } else {
        phi1.to_vec()
    };
    if flipped {
        plus = phi0.iter().zip(&phi1).map(|(a, b)| s * (a + b)).collect();
    }
    let minus = phi0.iter().zip(&phi1).map(|(a, b)| s * (a - b)).collect();
    Ok(LocalizedStates {
        plus,
        minus,
        phi1,
        phi1_flipped: flipped,
    })
}

fn right_weight(amplitude: &[f64], grid: &Grid1D) -> f64 {
    let density: Vec<f64> = amplitude.iter().map(|a| a * a).collect();
    split_weights(&density, grid).1
}

/// `|Ψ(ζ, τ)|²` for the equal superposition of the lowest pair, from the
/// cross-term form `½[φ0² + φ1² + 2 φ0 φ1 cos(ω τ)]`, with `ω = ε1 − ε0` in
/// dimensionless time (`ħ = 1`, `ħ²/2m = 1`).
pub fn two_level_evolution(phi0: &[f64], phi1: &[f64], e0: f64, e1: f64, t: f64) -> Vec<f64> {
    let c = ((e1 - e0) * t).cos();
    phi0.iter()
        .zip(phi1)
        .map(|(a, b)| 0.5 * (a * a + b * b + 2.0 * a * b * c))
        .collect()
}

/// The same density written in the localized basis,
/// `φ⁺² cos²(ωτ/2) + φ⁻² sin²(ωτ/2)`.
pub fn two_level_localized(plus: &[f64], minus: &[f64], e0: f64, e1: f64, t: f64) -> Vec<f64> {
    let half = 0.5 * (e1 - e0) * t;
    let (s, c) = half.sin_cos();
    plus.iter()
        .zip(minus)
        .map(|(p, m)| p * p * c * c + m * m * s * s)
        .collect()
}

fn split_weights(density: &[f64], grid: &Grid1D) -> (f64, f64) {
    let mid = (grid.n_points() - 1) / 2;
    let h = grid.spacing();
    let left: f64 = density[..mid].iter().sum::<f64>() + 0.5 * density[mid];
    let right: f64 = density[mid + 1..].iter().sum::<f64>() + 0.5 * density[mid];
    (left * h, right * h)
}

/// `(P_left, P_right)` of a probability density; the node at `ζ = 0` is
/// shared evenly.
pub fn well_populations(density: &[f64], grid: &Grid1D) -> Result<(f64, f64)> {
    if density.len() != grid.n_points() {
        return Err(TrapError::Contract("density length does not match the grid".into()));
    }
    let (left, right) = split_weights(density, grid);
    if (left + right - 1.0).abs() > 1e-6 {
        return Err(TrapError::Contract(format!(
            "density is not normalized: total probability {}",
            left + right
        )));
    }
    Ok((left, right))
}

pub fn wave_populations(state: &WaveState) -> Result<(f64, f64)> {
    well_populations(&state.density(), &state.grid)
}
