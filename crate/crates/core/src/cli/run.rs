// SPDX-License-Identifier: Apache-2.0

use super::config::{Command, OutputFormat, ParamValue, RunConfig};
use super::output::{Record, Report, Value};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gate::{diagonality_defect, echo_evolution, echo_schedule, geometric_gate, TwoSpinParams};
use crate::linalg::{frobenius_distance, global_phase_distance, ComplexMatrix};
use crate::oracle::{cyclic_phases, propagate_converged, DEFAULT_TOLERANCE};
use crate::spin::{
    analytic_propagator, cycle_phases, cyclic_state, derive_angles, geometric_phase_shift, DriveParams,
    SpinProjection,
};
use crate::synthesis::{sweep, synthesize, Axis, SweepGrid, SynthesisTarget};
use crate::verify::run_checks;

const DEFAULT_STEPS: usize = 2000;
const MAX_STEPS: usize = 1 << 22;

/// Process exit status for an error.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Contract(_)
        | Error::DegenerateDrive(_)
        | Error::InfeasibleTarget { .. }
        | Error::IndistinctSpins { .. }
        | Error::NotCyclic { .. } => 2,
        Error::IntegratorAccuracy { .. } => 3,
        _ => 1,
    }
}

fn inputs(config: &RunConfig) -> Record {
    let mut r = Record::new();
    for (key, value) in &config.parameters {
        match value {
            ParamValue::Number(x) => r.push(key, *x),
            ParamValue::Bool(b) => r.push(key, *b),
        }
    }
    r
}

fn drive(config: &RunConfig) -> Result<DriveParams> {
    DriveParams::new(config.require("omega_par")?, config.require("omega_perp")?, config.require("omegaR")?)
}

fn pair(config: &RunConfig) -> Result<TwoSpinParams> {
    let p = TwoSpinParams::new(
        config.require("omega01")?,
        config.require("omega02")?,
        config.require("J")?,
        config.require("omega1")?,
        config.require("omegaR")?,
    )?;
    match config.number("tau") {
        Some(tau) => p.with_decoherence(tau),
        None => Ok(p),
    }
}

fn push_matrix(r: &mut Record, prefix: &str, m: &ComplexMatrix) {
    for row in 0..m.dim() {
        for col in 0..m.dim() {
            let z = m.get(row, col);
            r.push(&format!("{prefix}{row}{col}_re"), z.re);
            r.push(&format!("{prefix}{row}{col}_im"), z.im);
        }
    }
}

fn derive_cmd(config: &RunConfig) -> Result<Vec<Record>> {
    let p = drive(config)?;
    let a = derive_angles(&p)?;
    Ok(vec![Record::new()
        .with("delta_omega", a.delta_omega)
        .with("omega_rabi", a.omega_rabi)
        .with("field_magnitude", a.field_magnitude)
        .with("theta", a.theta)
        .with("theta_star", a.theta_star)
        .with("rotation_ratio", a.rotation_ratio(&p))
        .with("period", p.period())
        .with("geometric_phase_shift", geometric_phase_shift(&p)?)])
}

fn propagate_cmd(config: &RunConfig) -> Result<Vec<Record>> {
    let p = drive(config)?;
    let t = config.number("t").unwrap_or_else(|| p.period());
    let steps = config.count("steps", DEFAULT_STEPS)?;
    let d = analytic_propagator(&p, t)?;
    let traj = propagate_converged(&p.schedule()?, 0.0, t, steps, MAX_STEPS, DEFAULT_TOLERANCE)?;
    let oracle = traj.final_propagator().matrix();
    let mut r = Record::new()
        .with("t", t)
        .with("xi_abs", d.xi.norm())
        .with("xi_arg", d.xi.arg())
        .with("phi", d.phi)
        .with("oracle_distance", frobenius_distance(d.propagator.matrix(), oracle)?)
        .with("oracle_certificate", traj.certificate);
    push_matrix(&mut r, "u", d.propagator.matrix());
    Ok(vec![r])
}

fn phases_cmd(config: &RunConfig) -> Result<Vec<Record>> {
    let p = drive(config)?;
    let steps = config.count("steps", DEFAULT_STEPS)?;
    let schedule = p.schedule()?;
    let traj = propagate_converged(&schedule, 0.0, p.period(), steps, MAX_STEPS, DEFAULT_TOLERANCE)?;
    SpinProjection::BOTH
        .into_iter()
        .map(|m| {
            let exact = cycle_phases(&p, m)?;
            let numeric = cyclic_phases(&traj.clone().with_initial_state(cyclic_state(&p, m)?)?, &schedule)?;
            Ok(Record::new()
                .with("m", m.m())
                .with("dynamic", exact.dynamic)
                .with("geometric", exact.geometric)
                .with("aharonov_anandan", exact.aharonov_anandan())
                .with("total", exact.total())
                .with("oracle_dynamic", numeric.dynamic)
                .with("oracle_geometric", numeric.geometric)
                .with("oracle_overlap", numeric.overlap))
        })
        .collect()
}

fn gate_record(p: &TwoSpinParams, doubled: bool) -> Result<Record> {
    let g = geometric_gate(p, doubled)?;
    let mut r = Record::new()
        .with("gamma1", g.gamma1)
        .with("gamma2", g.gamma2)
        .with("theta_star1", g.theta_star[0])
        .with("theta_star2", g.theta_star[1])
        .with("echo_doubled", g.echo_doubled)
        .with("warning", g.warning.map(|w| w.to_string()));
    for (k, z) in g.matrix.matrix().diagonal().iter().enumerate() {
        r.push(&format!("d{k}_re"), z.re);
        r.push(&format!("d{k}_im"), z.im);
    }
    Ok(r)
}

fn gate_cmd(config: &RunConfig) -> Result<Vec<Record>> {
    Ok(vec![gate_record(&pair(config)?, config.flag("doubled", true))?])
}

fn echo_cmd(config: &RunConfig) -> Result<Vec<Record>> {
    let p = pair(config)?;
    let steps = config.count("steps", DEFAULT_STEPS)?;
    let schedule = echo_schedule(&p)?;
    let u = echo_evolution(&p, steps)?;
    let g = geometric_gate(&p, true)?;
    let [a, b] = schedule.partners;
    let mut r = Record::new()
        .with("gate_distance", global_phase_distance(&u, &g.matrix)?)
        .with("off_diagonal", diagonality_defect(&u))
        .with("gamma1", g.gamma1)
        .with("gamma2", g.gamma2)
        .with("partner_omega01", a.omega0)
        .with("partner_omega02", b.omega0)
        .with("beta1", a.beta)
        .with("beta2", b.beta)
        .with("drive_duration", schedule.drive_duration())
        .with("warning", g.warning.map(|w| w.to_string()));
    push_matrix(&mut r, "u", u.matrix());
    Ok(vec![r])
}

fn synth_cmd(config: &RunConfig) -> Result<Vec<Record>> {
    let target = SynthesisTarget {
        gamma1: config.require("gamma1")?,
        gamma2: config.require("gamma2")?,
        omega_r: config.require("omegaR")?,
        omega1: config.require("omega1")?,
        doubled: config.flag("doubled", true),
        j: config.number("J").unwrap_or(0.0),
    };
    let s = synthesize(&target)?;
    Ok(vec![Record::new()
        .with("omega01", s.params.omega01)
        .with("omega02", s.params.omega02)
        .with("theta_star1", s.theta_star[0])
        .with("theta_star2", s.theta_star[1])
        .with("residual", s.residual)
        .with("bisection_residual", s.bisection_residual)
        .with("iterations", s.iterations)])
}

fn axis(config: &RunConfig, name: &str) -> Result<Axis> {
    if let Some(x) = config.number(name) {
        let ranged = ["_min", "_max", "_n"].iter().any(|s| config.parameters.contains_key(&format!("{name}{s}")));
        if ranged {
            return Err(Error::contract(format!("give either {name} or {name}_min/_max/_n, not both")));
        }
        return Ok(Axis::fixed(x));
    }
    let min = config.require(&format!("{name}_min"))?;
    let max = config.number(&format!("{name}_max")).unwrap_or(min);
    let n = config.count(&format!("{name}_n"), 1)?;
    Ok(Axis { min, max, n })
}

fn sweep_cmd(config: &RunConfig) -> Result<Vec<Record>> {
    let grid = SweepGrid {
        omega01: axis(config, "omega01")?,
        omega02: axis(config, "omega02")?,
        omega1: axis(config, "omega1")?,
        omega_r: axis(config, "omegaR")?,
        j: axis(config, "J")?,
        doubled: config.flag("doubled", true),
    };
    let oracle = config.flag("oracle", false).then(|| config.count("steps", DEFAULT_STEPS)).transpose()?;
    let rows = sweep(&grid, Execution::Parallel, oracle)?;
    Ok(rows
        .into_iter()
        .map(|row| {
            let mut r = Record::new();
            for (name, x) in SweepGrid::AXIS_NAMES.iter().zip(row.point) {
                r.push(name, x);
            }
            match row.outcome {
                Ok(v) => {
                    r.push("theta_star1", v.theta_star[0]);
                    r.push("theta_star2", v.theta_star[1]);
                    r.push("gamma1", v.gamma[0]);
                    r.push("gamma2", v.gamma[1]);
                    r.push("oracle_residual", v.oracle_residual);
                    r.push("error", Value::Null);
                }
                Err(e) => {
                    for key in ["theta_star1", "theta_star2", "gamma1", "gamma2", "oracle_residual"] {
                        r.push(key, Value::Null);
                    }
                    r.push("error", e);
                }
            }
            r
        })
        .collect())
}

fn verify_cmd(config: &RunConfig) -> Result<Vec<Record>> {
    let steps = config.count("steps", 256)?;
    Ok(run_checks(steps, Execution::Parallel)
        .into_iter()
        .map(|c| {
            Record::new()
                .with("check", c.name)
                .with("points", c.points)
                .with("max_residual", c.max_residual)
                .with("tolerance", c.tolerance)
                .with("pass", c.pass)
        })
        .collect())
}

/// Runs the configured command and builds its report.
pub fn run(config: &RunConfig) -> Result<Report> {
    let results = match config.command {
        Command::Derive => derive_cmd(config)?,
        Command::Propagate => propagate_cmd(config)?,
        Command::Phases => phases_cmd(config)?,
        Command::Gate => gate_cmd(config)?,
        Command::Echo => echo_cmd(config)?,
        Command::Synth => synth_cmd(config)?,
        Command::Sweep => sweep_cmd(config)?,
        Command::Verify => verify_cmd(config)?,
    };
    Ok(Report { command: config.command.name().to_string(), inputs: inputs(config), results })
}

/// Renders the report in the configured format.
pub fn render(config: &RunConfig, report: &Report) -> Result<String> {
    match config.output_format {
        OutputFormat::Json => Ok(report.to_json()),
        OutputFormat::Csv => report.to_csv(),
    }
}
