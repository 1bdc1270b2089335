use num_complex::Complex64;

use crate::eigensolver::Grid1D;
use crate::error::{Result, TrapError};

/// Largest allowed `dt · (max|U| + 4/h²)`.
pub const STEP_GUARD: f64 = 0.5;

/// Wave function on a grid at dimensionless time `time` (units of
/// `2 m L²/ħ`).
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    pub grid: Grid1D,
    pub amplitudes: Vec<Complex64>,
    pub time: f64,
}

impl WaveState {
    pub fn new(grid: Grid1D, amplitudes: Vec<Complex64>, time: f64) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(TrapError::Contract("amplitude length does not match the grid".into()));
        }
        let state = Self { grid, amplitudes, time };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(TrapError::Contract(format!("state norm is {norm}, expected 1")));
        }
        Ok(state)
    }

    pub fn from_real(grid: Grid1D, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), 0.0)
    }

    /// `Σ |ψ|² h`.
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|⟨φ|ψ⟩|` for a real grid function `φ`.
    pub fn overlap(&self, phi: &[f64]) -> f64 {
        let s: Complex64 = self.amplitudes.iter().zip(phi).map(|(a, p)| a * p).sum();
        s.norm() * self.grid.spacing()
    }

    fn right_population(&self) -> f64 {
        let mid = (self.grid.n_points() - 1) / 2;
        let h = self.grid.spacing();
        (self.amplitudes[mid + 1..].iter().map(|a| a.norm_sqr()).sum::<f64>() + 0.5 * self.amplitudes[mid].norm_sqr())
            * h
    }
}

/// Crank–Nicolson stepper `(1 + iHdt/2) ψ' = (1 − iHdt/2) ψ` for a fixed
/// potential, with hard walls at the grid ends.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    grid: Grid1D,
    dt: f64,
    /// Interior diagonal of H.
    diagonal: Vec<f64>,
    off: f64,
    /// Thomas factors of the implicit matrix.
    upper: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl CrankNicolson {
    pub fn new(grid: &Grid1D, potential: &[f64], dt: f64) -> Result<Self> {
        if potential.len() != grid.n_points() {
            return Err(TrapError::Contract("potential length does not match the grid".into()));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(TrapError::config(
                "propagate.dt",
                format!("time step must be positive, got {dt}"),
            ));
        }
        let limit = max_time_step(grid, potential);
        if !(dt < limit) {
            return Err(TrapError::config(
                "propagate.dt",
                format!("time step {dt:e} violates the guard dt·(max|U| + 4/h²) < {STEP_GUARD}; use dt < {limit:e}"),
            ));
        }
        Ok(Self::build(grid, potential, dt))
    }

    fn build(grid: &Grid1D, potential: &[f64], dt: f64) -> Self {
        let n = grid.n_points();
        let h = grid.spacing();
        let inv_h2 = 1.0 / (h * h);
        let diagonal: Vec<f64> = potential[1..n - 1].iter().map(|u| 2.0 * inv_h2 + u).collect();
        Self::from_operator(grid, diagonal, -inv_h2, dt)
    }

    fn from_operator(grid: &Grid1D, diagonal: Vec<f64>, off: f64, dt: f64) -> Self {
        let m = diagonal.len();
        let half = Complex64::new(0.0, 0.5 * dt);
        let a_off = half * off;
        let mut upper = vec![Complex64::new(0.0, 0.0); m];
        let mut inv_pivot = vec![Complex64::new(0.0, 0.0); m];
        for j in 0..m {
            let mut pivot = Complex64::new(1.0, 0.0) + half * diagonal[j];
            if j > 0 {
                pivot -= a_off * upper[j - 1];
            }
            inv_pivot[j] = pivot.inv();
            upper[j] = a_off * inv_pivot[j];
        }
        Self {
            grid: *grid,
            dt,
            diagonal,
            off,
            upper,
            inv_pivot,
            scratch: vec![Complex64::new(0.0, 0.0); m],
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Same scheme stepping backward in time.
    pub fn reversed(&self) -> Self {
        Self::from_operator(&self.grid, self.diagonal.clone(), self.off, -self.dt)
    }

    pub fn step(&mut self, state: &mut WaveState) {
        let m = self.diagonal.len();
        let psi = &mut state.amplitudes[1..m + 1];
        let half = Complex64::new(0.0, 0.5 * self.dt);
        let a_off = half * self.off;
        // explicit half: (1 − iHdt/2) ψ
        for j in 0..m {
            let mut neighbours = Complex64::new(0.0, 0.0);
            if j > 0 {
                neighbours += psi[j - 1];
            }
            if j + 1 < m {
                neighbours += psi[j + 1];
            }
            self.scratch[j] = psi[j] - half * (self.diagonal[j] * psi[j] + self.off * neighbours);
        }
        // implicit half: Thomas sweep
        let mut prev = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let y = (self.scratch[j] - a_off * prev) * self.inv_pivot[j];
            self.scratch[j] = y;
            prev = y;
        }
        psi[m - 1] = self.scratch[m - 1];
        for j in (0..m - 1).rev() {
            psi[j] = self.scratch[j] - self.upper[j] * psi[j + 1];
        }
        state.time += self.dt;
    }

    pub fn run(&mut self, state: &mut WaveState, n_steps: usize) {
        for _ in 0..n_steps {
            self.step(state);
        }
    }
}

/// Largest time step accepted by the guard for this potential.
pub fn max_time_step(grid: &Grid1D, potential: &[f64]) -> f64 {
    let h = grid.spacing();
    let umax = potential.iter().fold(0.0f64, |m, u| m.max(u.abs()));
    STEP_GUARD / (umax + 4.0 / (h * h))
}

/// Evolves `state0` for `n_steps` steps of `dt` in a static potential.
pub fn propagate(state0: &WaveState, potential: &[f64], dt: f64, n_steps: usize) -> Result<WaveState> {
    let mut stepper = CrankNicolson::new(&state0.grid, potential, dt)?;
    let mut state = state0.clone();
    stepper.run(&mut state, n_steps);
    Ok(state)
}

/// Evolves in a potential that depends on time; `potential_at(t, out)` fills
/// the samples at the midpoint of each step.
pub fn propagate_time_dependent<F>(
    state0: &WaveState,
    mut potential_at: F,
    dt: f64,
    n_steps: usize,
) -> Result<WaveState>
where
    F: FnMut(f64, &mut [f64]),
{
    let mut state = state0.clone();
    let mut potential = vec![0.0; state.grid.n_points()];
    for _ in 0..n_steps {
        potential_at(state.time + 0.5 * dt, &mut potential);
        let mut stepper = CrankNicolson::new(&state.grid, &potential, dt)?;
        stepper.step(&mut state);
    }
    Ok(state)
}

#[derive(Debug, Clone)]
pub struct RabiMeasurement {
    /// Full left–right–left period in dimensionless time.
    pub period: f64,
    /// `(τ, P_right)` samples.
    pub samples: Vec<(f64, f64)>,
    pub max_norm_drift: f64,
}

/// Propagates a right-localized state and locates the first minimum of
/// `P_right(τ)`, which falls at half the Rabi period.
pub fn measure_rabi_period(
    initial: &WaveState,
    potential: &[f64],
    dt: f64,
    n_steps: usize,
    sample_every: usize,
) -> Result<RabiMeasurement> {
    let mut stepper = CrankNicolson::new(&initial.grid, potential, dt)?;
    let mut state = initial.clone();
    let every = sample_every.max(1);
    let mut samples = vec![(state.time, state.right_population())];
    let mut drift = 0.0f64;
    for i in 1..=n_steps {
        stepper.step(&mut state);
        if i % every == 0 {
            samples.push((state.time, state.right_population()));
            drift = drift.max((state.norm() - 1.0).abs());
        }
    }
    let index = samples
        .windows(3)
        .position(|w| w[1].1 < 0.5 && w[1].1 <= w[0].1 && w[1].1 < w[2].1)
        .map(|i| i + 1)
        .ok_or_else(|| TrapError::numerical("no population minimum within the propagated interval", 0.0))?;
    let (t0, p0) = samples[index - 1];
    let (t1, p1) = samples[index];
    let (_, p2) = samples[index + 1];
    let step = t1 - t0;
    let curvature = p0 - 2.0 * p1 + p2;
    let shift = if curvature != 0.0 {
        0.5 * (p0 - p2) / curvature * step
    } else {
        0.0
    };
    Ok(RabiMeasurement {
        period: 2.0 * (t1 + shift - initial.time),
        samples,
        max_norm_drift: drift,
    })
}
