//! Scenario configuration: flat `key = value` lines with dotted section
//! names. Every key has a built-in default equal to the reference trap, so
//! an empty file is a valid scenario. Unknown keys are rejected.

use std::fmt::Write as _;
use std::path::Path;

use crate::eigensolver::Grid1D;
use crate::electrostatics::{TrapGeometry, VoltageSet};
use crate::error::{Result, TrapError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl Spacing {
    fn parse(path: &str, s: &str) -> Result<Self> {
        match s {
            "linear" | "lin" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            _ => Err(TrapError::config(
                path,
                format!("expected `linear` or `log`, got `{s}`"),
            )),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        }
    }
}

/// Axis specification; `start`/`stop` may be left unset where the command
/// derives them.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub count: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    pub fn values(&self, start: f64, stop: f64) -> Vec<f64> {
        let n = self.count;
        if n == 1 {
            return vec![start];
        }
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => start + (stop - start) * t,
                    Spacing::Log => (start.ln() + (stop.ln() - start.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: TrapGeometry,
    pub voltages: VoltageSet,
    pub solver_half_width: f64,
    pub solver_points: usize,
    pub solver_levels: usize,
    pub potential_samples: usize,
    pub sweep_v3: SweepSpec,
    pub tunneling_lengths: Vec<f64>,
    pub tunneling_barrier_ev: Option<f64>,
    pub sweep_eb: SweepSpec,
    pub evolve_length: f64,
    pub evolve_barrier_ev: f64,
    pub evolve_eb_tilde: Option<f64>,
    pub evolve_duration: Option<f64>,
    pub evolve_dt: Option<f64>,
    pub evolve_samples: usize,
    pub evolve_half_width: f64,
    pub evolve_points: usize,
    pub evolve_snapshots: usize,
    pub evolve_density_path: Option<String>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            geometry: TrapGeometry::reference(),
            voltages: VoltageSet {
                v1: -12.8,
                v2: -11.4,
                v3: -12.8013,
            },
            solver_half_width: crate::eigensolver::DEFAULT_HALF_WIDTH,
            solver_points: crate::eigensolver::DEFAULT_POINTS,
            solver_levels: 4,
            potential_samples: 501,
            sweep_v3: SweepSpec {
                start: None,
                stop: None,
                count: 121,
                spacing: Spacing::Linear,
            },
            tunneling_lengths: vec![10e-6],
            tunneling_barrier_ev: None,
            sweep_eb: SweepSpec {
                start: Some(1e-10),
                stop: Some(1e-6),
                count: 41,
                spacing: Spacing::Log,
            },
            evolve_length: 10e-6,
            evolve_barrier_ev: 6e-8,
            evolve_eb_tilde: None,
            evolve_duration: None,
            evolve_dt: None,
            evolve_samples: 201,
            evolve_half_width: 1.0,
            evolve_points: 201,
            evolve_snapshots: 5,
            evolve_density_path: None,
        }
    }
}

pub const KEYS: &[&str] = &[
    "geometry.r1_m",
    "geometry.r2_tilde",
    "geometry.zc_tilde",
    "voltages.v1_V",
    "voltages.v2_V",
    "voltages.v3_V",
    "solver.half_width",
    "solver.points",
    "solver.levels",
    "potential.samples",
    "sweep.v3.start_V",
    "sweep.v3.stop_V",
    "sweep.v3.count",
    "sweep.v3.scale",
    "tunneling.L_m",
    "tunneling.Eb_eV",
    "sweep.eb.start_eV",
    "sweep.eb.stop_eV",
    "sweep.eb.count",
    "sweep.eb.scale",
    "evolve.L_m",
    "evolve.Eb_eV",
    "evolve.eb_tilde",
    "evolve.duration_s",
    "evolve.dt_s",
    "evolve.samples",
    "evolve.half_width",
    "evolve.points",
    "evolve.snapshots",
    "evolve.density_path",
];

fn float(path: &str, s: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| TrapError::config(path, format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(TrapError::config(path, "value must be finite"));
    }
    Ok(v)
}

fn count(path: &str, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| TrapError::config(path, format!("`{s}` is not a non-negative integer")))
}

fn optional_float(path: &str, s: &str) -> Result<Option<f64>> {
    if s.is_empty() || s == "auto" {
        Ok(None)
    } else {
        float(path, s).map(Some)
    }
}

fn float_list(path: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|part| float(path, part.trim())).collect()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "auto".to_string(), |x| x.to_string())
}

impl Scenario {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "geometry.r1_m" => self.geometry.r1 = float(key, v)?,
            "geometry.r2_tilde" => self.geometry.r2_tilde = float(key, v)?,
            "geometry.zc_tilde" => self.geometry.zc_tilde = float(key, v)?,
            "voltages.v1_V" => self.voltages.v1 = float(key, v)?,
            "voltages.v2_V" => self.voltages.v2 = float(key, v)?,
            "voltages.v3_V" => self.voltages.v3 = float(key, v)?,
            "solver.half_width" => self.solver_half_width = float(key, v)?,
            "solver.points" => self.solver_points = count(key, v)?,
            "solver.levels" => self.solver_levels = count(key, v)?,
            "potential.samples" => self.potential_samples = count(key, v)?,
            "sweep.v3.start_V" => self.sweep_v3.start = optional_float(key, v)?,
            "sweep.v3.stop_V" => self.sweep_v3.stop = optional_float(key, v)?,
            "sweep.v3.count" => self.sweep_v3.count = count(key, v)?,
            "sweep.v3.scale" => self.sweep_v3.spacing = Spacing::parse(key, v)?,
            "tunneling.L_m" => self.tunneling_lengths = float_list(key, v)?,
            "tunneling.Eb_eV" => self.tunneling_barrier_ev = optional_float(key, v)?,
            "sweep.eb.start_eV" => self.sweep_eb.start = optional_float(key, v)?,
            "sweep.eb.stop_eV" => self.sweep_eb.stop = optional_float(key, v)?,
            "sweep.eb.count" => self.sweep_eb.count = count(key, v)?,
            "sweep.eb.scale" => self.sweep_eb.spacing = Spacing::parse(key, v)?,
            "evolve.L_m" => self.evolve_length = float(key, v)?,
            "evolve.Eb_eV" => self.evolve_barrier_ev = float(key, v)?,
            "evolve.eb_tilde" => self.evolve_eb_tilde = optional_float(key, v)?,
            "evolve.duration_s" => self.evolve_duration = optional_float(key, v)?,
            "evolve.dt_s" => self.evolve_dt = optional_float(key, v)?,
            "evolve.samples" => self.evolve_samples = count(key, v)?,
            "evolve.half_width" => self.evolve_half_width = float(key, v)?,
            "evolve.points" => self.evolve_points = count(key, v)?,
            "evolve.snapshots" => self.evolve_snapshots = count(key, v)?,
            "evolve.density_path" => self.evolve_density_path = if v.is_empty() { None } else { Some(v.to_string()) },
            _ => return Err(TrapError::config(key, "unknown key")),
        }
        Ok(())
    }

    /// Applies the lines of a config file on top of the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                TrapError::config(
                    format!("line {}", lineno + 1),
                    format!("expected `key = value`, got `{line}`"),
                )
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn apply_override(&mut self, arg: &str) -> Result<()> {
        let (key, value) = arg
            .split_once('=')
            .ok_or_else(|| TrapError::config(arg, "override must have the form key=value"))?;
        self.set(key.trim(), value)
    }

    pub fn load(config: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut s = Scenario::default();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| TrapError::config(path.display().to_string(), e.to_string()))?;
            s.apply_text(&text)?;
        }
        for o in overrides {
            s.apply_override(o)?;
        }
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.geometry;
        if !(g.r1 > 0.0) {
            return Err(TrapError::config("geometry.r1_m", "must be positive"));
        }
        if !(g.r2_tilde > 1.0) {
            return Err(TrapError::config("geometry.r2_tilde", "must exceed 1"));
        }
        if !(g.zc_tilde > 0.0) {
            return Err(TrapError::config("geometry.zc_tilde", "must be positive"));
        }
        Grid1D::new(self.solver_half_width, self.solver_points)
            .map_err(|e| TrapError::config("solver.points", e.to_string()))?;
        if self.solver_levels < 2 || self.solver_levels > self.solver_points - 2 {
            return Err(TrapError::config(
                "solver.levels",
                "must be at least 2 and below the grid size",
            ));
        }
        if self.potential_samples < 2 {
            return Err(TrapError::config("potential.samples", "need at least 2 samples"));
        }
        if self.sweep_v3.count == 0 {
            return Err(TrapError::config("sweep.v3.count", "must be positive"));
        }
        if self.sweep_v3.spacing == Spacing::Log {
            return Err(TrapError::config("sweep.v3.scale", "voltage sweeps are linear"));
        }
        if self.tunneling_lengths.is_empty() || self.tunneling_lengths.iter().any(|l| !(*l > 0.0)) {
            return Err(TrapError::config("tunneling.L_m", "lengths must be positive"));
        }
        if let Some(eb) = self.tunneling_barrier_ev {
            if !(eb > 0.0) {
                return Err(TrapError::config("tunneling.Eb_eV", "must be positive"));
            }
        }
        match (self.sweep_eb.start, self.sweep_eb.stop) {
            (Some(a), Some(b)) if a > 0.0 && b > 0.0 => {}
            _ => {
                return Err(TrapError::config(
                    "sweep.eb.start_eV",
                    "barrier sweep needs positive start and stop",
                ))
            }
        }
        if self.sweep_eb.count == 0 {
            return Err(TrapError::config("sweep.eb.count", "must be positive"));
        }
        if !(self.evolve_length > 0.0) {
            return Err(TrapError::config("evolve.L_m", "must be positive"));
        }
        if !(self.evolve_barrier_ev > 0.0) {
            return Err(TrapError::config("evolve.Eb_eV", "must be positive"));
        }
        if let Some(eb) = self.evolve_eb_tilde {
            if !(eb > 0.0) {
                return Err(TrapError::config("evolve.eb_tilde", "must be positive"));
            }
        }
        for (path, v) in [
            ("evolve.duration_s", self.evolve_duration),
            ("evolve.dt_s", self.evolve_dt),
        ] {
            if let Some(x) = v {
                if !(x > 0.0) {
                    return Err(TrapError::config(path, "must be positive"));
                }
            }
        }
        if self.evolve_samples < 2 {
            return Err(TrapError::config("evolve.samples", "need at least 2 samples"));
        }
        Grid1D::new(self.evolve_half_width, self.evolve_points)
            .map_err(|e| TrapError::config("evolve.points", e.to_string()))?;
        Ok(())
    }

    pub fn solver_grid(&self) -> Grid1D {
        Grid1D::new(self.solver_half_width, self.solver_points).expect("validated")
    }

    pub fn evolve_grid(&self) -> Grid1D {
        Grid1D::new(self.evolve_half_width, self.evolve_points).expect("validated")
    }

    /// All keys with their current values, one per line in a fixed order.
    pub fn to_text(&self) -> String {
        let g = &self.geometry;
        let v = &self.voltages;
        let lengths: Vec<String> = self.tunneling_lengths.iter().map(|l| l.to_string()).collect();
        let values: Vec<String> = vec![
            g.r1.to_string(),
            g.r2_tilde.to_string(),
            g.zc_tilde.to_string(),
            v.v1.to_string(),
            v.v2.to_string(),
            v.v3.to_string(),
            self.solver_half_width.to_string(),
            self.solver_points.to_string(),
            self.solver_levels.to_string(),
            self.potential_samples.to_string(),
            fmt_opt(self.sweep_v3.start),
            fmt_opt(self.sweep_v3.stop),
            self.sweep_v3.count.to_string(),
            self.sweep_v3.spacing.as_str().to_string(),
            lengths.join(","),
            fmt_opt(self.tunneling_barrier_ev),
            fmt_opt(self.sweep_eb.start),
            fmt_opt(self.sweep_eb.stop),
            self.sweep_eb.count.to_string(),
            self.sweep_eb.spacing.as_str().to_string(),
            self.evolve_length.to_string(),
            self.evolve_barrier_ev.to_string(),
            fmt_opt(self.evolve_eb_tilde),
            fmt_opt(self.evolve_duration),
            fmt_opt(self.evolve_dt),
            self.evolve_samples.to_string(),
            self.evolve_half_width.to_string(),
            self.evolve_points.to_string(),
            self.evolve_snapshots.to_string(),
            self.evolve_density_path.clone().unwrap_or_default(),
        ];
        let mut out = String::new();
        for (k, val) in KEYS.iter().zip(values) {
            let _ = writeln!(out, "{k} = {val}");
        }
        out
    }
}
