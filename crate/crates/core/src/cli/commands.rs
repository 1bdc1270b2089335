//! Subcommand implementations. Each returns its CSV table and a short
//! human-readable report; the dispatcher decides where they go.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::config::Scenario;
use super::output::{num, opt_num, Table};
use crate::eigensolver::{dimensionless_quartic, quartic_spectrum, Grid1D, Splitting};
use crate::electrostatics::{
    axial_potential, expansion_integrals, quartic_coefficients, quartic_fit, sweep_v3, transition_voltage_with,
    TrapGeometry, VoltageSet,
};
use crate::error::{Result, TrapError};
use crate::tunneling::{
    f_of_barrier_on, localized_states, max_time_step, two_level_localized, wave_populations, well_populations,
    CrankNicolson, Regime, WaveState,
};
use crate::units::{dimensionless_barrier, ev_to_joule, joule_to_ev, time_scale};
use crate::wells::{axial_frequency, shape_from_coefficients};

pub struct Rendered {
    pub table: Table,
    pub report: String,
}

/// Lower and upper fractions of the electrode spacing covered by the
/// potential profile.
pub const PROFILE_SPAN: (f64, f64) = (0.05, 0.95);

/// Offset of the bracket panels around the transition voltage.
pub const FIGURE_BRACKET: f64 = 0.05;

pub fn potential_profile(geom: &TrapGeometry, volt: &VoltageSet, samples: usize) -> Result<Table> {
    let zc = geom.zc_tilde;
    let (lo, hi) = PROFILE_SPAN;
    let rows: Vec<Vec<String>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let t = i as f64 / (samples - 1) as f64;
            let z = zc * (lo + (hi - lo) * t);
            let v = axial_potential(z, geom, volt)?;
            // Electron potential energy in eV is −V numerically.
            Ok(vec![num(z), num(z * geom.r1), num(v), num(-v)])
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["z_tilde", "z_m", "V_volts", "U_eV"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

pub fn potential(s: &Scenario) -> Result<Rendered> {
    let table = potential_profile(&s.geometry, &s.voltages, s.potential_samples)?;
    let report = format!(
        "potential: {} samples over [{}, {}] z_c at V = ({}, {}, {}) V\n",
        table.len(),
        PROFILE_SPAN.0,
        PROFILE_SPAN.1,
        s.voltages.v1,
        s.voltages.v2,
        s.voltages.v3
    );
    Ok(Rendered { table, report })
}

pub fn transition(s: &Scenario) -> Result<Rendered> {
    let g = &s.geometry;
    let v = &s.voltages;
    let ints = expansion_integrals(g)?;
    let vstar = transition_voltage_with(&ints, v.v1, v.v2)?;
    let coeff = quartic_coefficients(g, v)?;
    let fit = quartic_fit(g, v)?;

    let mut report = String::new();
    let _ = writeln!(report, "transition voltage V3* = {:.10} V", vstar);
    let _ = writeln!(report, "  (V1 = {} V, V2 = {} V)", v.v1, v.v2);
    let _ = writeln!(
        report,
        "expansion integrals: a1 = {:.12e}  a2 = {:.12e}  b1 = {:.12e}  b2 = {:.12e}",
        ints.a1, ints.a2, ints.b1, ints.b2
    );
    let _ = writeln!(report, "at V3 = {} V:", v.v3);
    let _ = writeln!(
        report,
        "  a = {:.6e} eV   b = {:.6e} eV   (finite-difference fit: a = {:.6e} eV, b = {:.6e} eV)",
        joule_to_ev(coeff.a),
        joule_to_ev(coeff.b),
        joule_to_ev(fit.a),
        joule_to_ev(fit.b)
    );
    let (l, eb) = match shape_from_coefficients(&coeff, g.r1) {
        Ok(shape) => {
            let wz = axial_frequency(shape.well_distance, shape.barrier_height);
            let _ = writeln!(
                report,
                "  double well: L = {:.6e} m   E_b = {:.6e} eV   omega_z/2pi = {:.6e} Hz{}",
                shape.well_distance,
                joule_to_ev(shape.barrier_height),
                wz,
                if shape.sub_quantum {
                    "   [barrier below the quantum scale]"
                } else {
                    ""
                }
            );
            (Some(shape.well_distance), Some(joule_to_ev(shape.barrier_height)))
        }
        Err(_) => {
            let _ = writeln!(report, "  single well (b <= 0)");
            (None, None)
        }
    };

    let mut table = Table::new(&[
        "V3_transition_volts",
        "a1",
        "a2",
        "b1",
        "b2",
        "V3_volts",
        "a_eV",
        "b_eV",
        "L_m",
        "Eb_eV",
    ]);
    table.push(vec![
        num(vstar),
        num(ints.a1),
        num(ints.a2),
        num(ints.b1),
        num(ints.b2),
        num(v.v3),
        num(joule_to_ev(coeff.a)),
        num(joule_to_ev(coeff.b)),
        opt_num(l),
        opt_num(eb),
    ]);
    Ok(Rendered { table, report })
}

/// Default V3 range: from 0.1 V below the transition to 0.02 V above it.
pub fn v3_range(s: &Scenario) -> Result<(f64, f64)> {
    let need_star = s.sweep_v3.start.is_none() || s.sweep_v3.stop.is_none();
    let vstar = if need_star {
        let ints = expansion_integrals(&s.geometry)?;
        transition_voltage_with(&ints, s.voltages.v1, s.voltages.v2)?
    } else {
        0.0
    };
    Ok((
        s.sweep_v3.start.unwrap_or(vstar - 0.1),
        s.sweep_v3.stop.unwrap_or(vstar + 0.02),
    ))
}

fn sweep_table(s: &Scenario, with_ratio: bool) -> Result<(Table, usize)> {
    let (start, stop) = v3_range(s)?;
    let grid = s.sweep_v3.values(start, stop);
    let rows = sweep_v3(&s.geometry, s.voltages.v1, s.voltages.v2, &grid)?;
    let mut table = if with_ratio {
        Table::new(&["V3_volts", "L_m", "L_over_r1", "Eb_eV", "regime"])
    } else {
        Table::new(&["V3_volts", "L_m", "Eb_eV", "regime"])
    };
    let mut doubles = 0;
    for r in &rows {
        let l = r.shape.map(|sh| sh.well_distance);
        let eb = r.shape.map(|sh| joule_to_ev(sh.barrier_height));
        doubles += usize::from(r.shape.is_some());
        let mut row = vec![num(r.v3), opt_num(l)];
        if with_ratio {
            row.push(opt_num(l.map(|l| l / s.geometry.r1)));
        }
        row.push(opt_num(eb));
        row.push(r.regime.label().to_string());
        table.push(row);
    }
    Ok((table, doubles))
}

pub fn sweep(s: &Scenario) -> Result<Rendered> {
    let (table, doubles) = sweep_table(s, false)?;
    let (start, stop) = v3_range(s)?;
    let report = format!(
        "sweep: {} points over V3 in [{start}, {stop}] V, {doubles} in the double-well regime\n",
        table.len()
    );
    Ok(Rendered { table, report })
}

struct BarrierPoint {
    length: f64,
    barrier_ev: f64,
    eb_tilde: f64,
    f: f64,
    freq: Option<f64>,
    wz: f64,
    regime: Regime,
}

fn barrier_points(lengths: &[f64], barriers_ev: &[f64], grid: &Grid1D) -> Result<Vec<BarrierPoint>> {
    let pairs: Vec<(f64, f64)> = lengths
        .iter()
        .flat_map(|&l| barriers_ev.iter().map(move |&e| (l, e)))
        .collect();
    pairs
        .par_iter()
        .map(|&(length, barrier_ev)| {
            let eb_j = ev_to_joule(barrier_ev);
            let eb_tilde = dimensionless_barrier(eb_j, length)?;
            let res = f_of_barrier_on(eb_tilde, grid)?.with_length(length);
            Ok(BarrierPoint {
                length,
                barrier_ev,
                eb_tilde,
                f: res.f_value,
                freq: res.tunneling_frequency,
                wz: axial_frequency(length, eb_j),
                regime: res.regime,
            })
        })
        .collect()
}

fn barrier_grid(s: &Scenario) -> Vec<f64> {
    match s.tunneling_barrier_ev {
        Some(eb) => vec![eb],
        None => s.sweep_eb.values(
            s.sweep_eb.start.expect("validated"),
            s.sweep_eb.stop.expect("validated"),
        ),
    }
}

pub fn tunneling(s: &Scenario) -> Result<Rendered> {
    let points = barrier_points(&s.tunneling_lengths, &barrier_grid(s), &s.solver_grid())?;
    let mut table = Table::new(&["L_m", "Eb_eV", "f", "freq_Hz", "wz_Hz", "regime"]);
    let mut report = String::new();
    for p in &points {
        table.push(vec![
            num(p.length),
            num(p.barrier_ev),
            num(p.f),
            opt_num(p.freq),
            num(p.wz),
            p.regime.label().to_string(),
        ]);
    }
    if points.len() == 1 {
        let p = &points[0];
        let _ = writeln!(
            report,
            "L = {:e} m, E_b = {:e} eV (dimensionless barrier {:.6})",
            p.length, p.barrier_ev, p.eb_tilde
        );
        let _ = writeln!(report, "  f = {:.8e}   regime = {}", p.f, p.regime);
        match p.freq {
            Some(fr) => {
                let _ = writeln!(report, "  tunneling frequency = {:.6e} Hz", fr);
            }
            None => {
                let _ = writeln!(report, "  no tunneling frequency in this regime");
            }
        }
        let _ = writeln!(report, "  classical axial frequency = {:.6e} Hz", p.wz);
    } else {
        let count = |r: Regime| points.iter().filter(|p| p.regime == r).count();
        let _ = writeln!(
            report,
            "tunneling: {} points; {} TUNNELING, {} NO_BOUND_PAIR, {} BELOW_RESOLUTION",
            points.len(),
            count(Regime::Tunneling),
            count(Regime::NoBoundPair),
            count(Regime::BelowResolution)
        );
    }
    Ok(Rendered { table, report })
}

pub struct Evolution {
    pub rendered: Rendered,
    pub density: Option<Table>,
}

pub fn evolve(s: &Scenario) -> Result<Evolution> {
    let length = s.evolve_length;
    let eb_tilde = match s.evolve_eb_tilde {
        Some(e) => e,
        None => dimensionless_barrier(ev_to_joule(s.evolve_barrier_ev), length)?,
    };
    let grid = s.evolve_grid();
    let potential = grid.sample(|z| dimensionless_quartic(z, eb_tilde));
    let spectrum = quartic_spectrum(eb_tilde, 2, &grid)?;
    let (e0, e1) = (spectrum.eigenvalues[0], spectrum.eigenvalues[1]);
    let gap = match spectrum.splitting() {
        Some(Splitting::Resolved(g)) => g,
        other => {
            let estimate = match other {
                Some(Splitting::BelowResolution(g)) => g,
                _ => e1 - e0,
            };
            return Err(TrapError::numerical(
                "splitting of the lowest pair is below the solver resolution on the propagation grid",
                estimate,
            ));
        }
    };
    let loc = localized_states(&spectrum.eigenvectors[0], &spectrum.eigenvectors[1], &grid)?;

    let t0 = time_scale(length)?;
    let duration = match s.evolve_duration {
        Some(d) => d / t0,
        None => 2.0 * std::f64::consts::PI / gap,
    };
    let guard = max_time_step(&grid, &potential);
    let dt_req = match s.evolve_dt {
        Some(d) => d / t0,
        None => 0.9 * guard,
    };
    // Validates the guard on the requested step; the actual step only
    // shrinks so that it divides the duration.
    CrankNicolson::new(&grid, &potential, dt_req)?;
    let n_steps = (duration / dt_req).ceil().max(1.0) as usize;
    let dt = duration / n_steps as f64;
    let mut cn = CrankNicolson::new(&grid, &potential, dt)?;

    let mut state = WaveState::from_real(grid, &loc.plus)?;
    let marks = |count: usize| -> Vec<usize> {
        if count < 2 {
            return if count == 1 { vec![0] } else { vec![] };
        }
        (0..count)
            .map(|i| ((i as f64) * n_steps as f64 / (count - 1) as f64).round() as usize)
            .collect()
    };
    let sample_at = marks(s.evolve_samples);
    let snap_at = if s.evolve_density_path.is_some() {
        marks(s.evolve_snapshots)
    } else {
        Vec::new()
    };

    let mut table = Table::new(&["t_s", "P_left", "P_right", "P_right_twolevel"]);
    let mut density = Table::new(&["t_s", "z_m", "density_per_m", "density_twolevel_per_m"]);
    let mut drift: f64 = 0.0;
    let (mut si, mut di) = (0, 0);
    for step in 0..=n_steps {
        if step > 0 {
            cn.step(&mut state);
        }
        let tau = step as f64 * dt;
        let want_sample = si < sample_at.len() && sample_at[si] == step;
        let want_snap = di < snap_at.len() && snap_at[di] == step;
        if !(want_sample || want_snap) {
            continue;
        }
        drift = drift.max((state.norm() - 1.0).abs());
        let model = two_level_localized(&loc.plus, &loc.minus, e0, e1, tau);
        while si < sample_at.len() && sample_at[si] == step {
            let (pl, pr) = wave_populations(&state)?;
            let (_, pr2) = well_populations(&model, &grid)?;
            table.push(vec![num(tau * t0), num(pl), num(pr), num(pr2)]);
            si += 1;
        }
        while di < snap_at.len() && snap_at[di] == step {
            let rho = state.density();
            for j in 0..grid.n_points() {
                density.push(vec![
                    num(tau * t0),
                    num(grid.point(j) * length),
                    num(rho[j] / length),
                    num(model[j] / length),
                ]);
            }
            di += 1;
        }
    }

    let mut report = String::new();
    let _ = writeln!(
        report,
        "evolve: dimensionless barrier {:.6}, L = {:e} m",
        eb_tilde, length
    );
    let _ = writeln!(
        report,
        "  grid half-width {} with {} points",
        grid.half_width(),
        grid.n_points()
    );
    let _ = writeln!(report, "  e0 = {:.10}  e1 = {:.10}  splitting = {:.10e}", e0, e1, gap);
    let _ = writeln!(
        report,
        "  two-level period = {:.6e} s; ran {:.6e} s in {} steps of {:.6e} s (guard {:.6e} s)",
        2.0 * std::f64::consts::PI / gap * t0,
        duration * t0,
        n_steps,
        dt * t0,
        guard * t0
    );
    let _ = writeln!(report, "  max norm drift = {:.3e}", drift);
    Ok(Evolution {
        rendered: Rendered { table, report },
        density: s.evolve_density_path.as_ref().map(|_| density),
    })
}

/// Figure scenarios. Each yields named CSV tables.
pub const FIGURES: [u8; 5] = [2, 3, 4, 6, 7];

pub const FIG4_LENGTHS: [f64; 5] = [1e-6, 5e-6, 10e-6, 50e-6, 100e-6];
pub const FIG7_LENGTHS: [f64; 3] = [1e-6, 10e-6, 100e-6];
pub const FIG6_RANGE: (f64, f64, usize) = (1.0, 1000.0, 61);

pub fn figure(n: u8, s: &Scenario) -> Result<Vec<(String, Table)>> {
    match n {
        2 => {
            let ints = expansion_integrals(&s.geometry)?;
            let vstar = transition_voltage_with(&ints, s.voltages.v1, s.voltages.v2)?;
            [("below", -FIGURE_BRACKET), ("at", 0.0), ("above", FIGURE_BRACKET)]
                .iter()
                .map(|(name, dv)| {
                    let volt = s.voltages.with_v3(vstar + dv);
                    Ok((
                        format!("fig2_{name}.csv"),
                        potential_profile(&s.geometry, &volt, s.potential_samples)?,
                    ))
                })
                .collect()
        }
        3 => Ok(vec![("fig3.csv".into(), sweep_table(s, true)?.0)]),
        4 => {
            let pts = barrier_points(&FIG4_LENGTHS, &barrier_grid(s), &s.solver_grid())?;
            let mut t = Table::new(&["L_m", "Eb_eV", "Eb_tilde", "wz_Hz", "regime"]);
            for p in pts {
                t.push(vec![
                    num(p.length),
                    num(p.barrier_ev),
                    num(p.eb_tilde),
                    num(p.wz),
                    p.regime.label().to_string(),
                ]);
            }
            Ok(vec![("fig4.csv".into(), t)])
        }
        6 => {
            let (lo, hi, count) = FIG6_RANGE;
            let grid = s.solver_grid();
            let ebs: Vec<f64> = (0..count)
                .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp())
                .collect();
            let results: Vec<_> = ebs
                .par_iter()
                .map(|&e| f_of_barrier_on(e, &grid))
                .collect::<Result<_>>()?;
            let mut t = Table::new(&["Eb_tilde", "f"]);
            for r in results {
                let f = (r.regime == Regime::Tunneling).then_some(r.f_value);
                t.push(vec![num(r.eb_tilde), opt_num(f)]);
            }
            Ok(vec![("fig6.csv".into(), t)])
        }
        7 => {
            let pts = barrier_points(&FIG7_LENGTHS, &barrier_grid(s), &s.solver_grid())?;
            let mut t = Table::new(&["L_m", "Eb_eV", "freq_Hz", "regime"]);
            for p in pts {
                t.push(vec![
                    num(p.length),
                    num(p.barrier_ev),
                    opt_num(p.freq),
                    p.regime.label().to_string(),
                ]);
            }
            Ok(vec![("fig7.csv".into(), t)])
        }
        _ => Err(TrapError::config(
            "figure",
            format!("unknown figure {n}; choose one of 2, 3, 4, 6, 7"),
        )),
    }
}

pub fn figure_meta(n: u8, s: &Scenario, files: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "figure = {n}");
    let _ = writeln!(out, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "files = {}", files.join(","));
    out.push_str(&s.to_text());
    out
}
