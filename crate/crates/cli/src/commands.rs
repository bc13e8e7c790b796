//! The four subcommands. Each validates its inputs before doing any work,
//! writes files only after the computation succeeded, and returns the text
//! meant for stdout.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use jumpbot_core::actuator::{electrical_budget, required_current};
use jumpbot_core::dynamics::{ideal_jump_height, CycleOutcome, CycleTrace, DEFAULT_STEP};
use jumpbot_core::optimize::{
    evaluate_design_with, optimize, DesignReport, DesignVariable, Objective, OptimizationResult,
    Scale,
};
use jumpbot_core::param::Param;
use jumpbot_core::Error as CoreError;

use crate::config::{self, parse_param_value, ConfigError, OptimizeSection, RunConfig};
use crate::units::{parse_quantity, Dimension};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unreadable or invalid configuration, unknown field.
    #[error("{0}")]
    Input(String),
    /// No feasible design exists within the given constraints.
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidSpec(_) | CoreError::Domain(_) | CoreError::SingularSpec(_) => {
                CliError::Input(e.to_string())
            }
            CoreError::Infeasible(_) => CliError::Infeasible(e.to_string()),
            CoreError::Integration(_) | CoreError::NotApplicable(_) => {
                CliError::Internal(e.to_string())
            }
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
}

fn out_dir(dir: Option<&Path>) -> Result<PathBuf, CliError> {
    let dir = dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)
        .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

/// Loads `path`, or the built-in baseline when no path is given.
pub fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let config = match path {
        Some(p) => config::load(p)?,
        None => RunConfig::baseline(),
    };
    let violations = config.violations();
    if !violations.is_empty() {
        return Err(ConfigError::Invalid(violations).into());
    }
    Ok(config)
}

/// Integration step from "10 us" or a bare number of seconds.
pub fn parse_step(text: &str) -> Result<f64, CliError> {
    let q = parse_quantity(text).map_err(|e| CliError::Input(format!("--step: {e}")))?;
    if q.dimension != Dimension::TIME && q.dimension != Dimension::NONE {
        return Err(CliError::Input(format!(
            "--step: expected a time, got '{text}'"
        )));
    }
    if !(q.value > 0.0 && q.value.is_finite()) {
        return Err(CliError::Input(format!(
            "--step must be positive, got '{text}'"
        )));
    }
    Ok(q.value)
}

/// Parses `field:lower:upper[:log]`. Bounds take units; bare numbers are SI.
pub fn parse_var(spec: &str) -> Result<DesignVariable, CliError> {
    let bad = |msg: String| CliError::Input(format!("--var '{spec}': {msg}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let (field, lo, hi, scale) = match parts.as_slice() {
        [f, lo, hi] => (*f, *lo, *hi, Scale::Linear),
        [f, lo, hi, "log"] => (*f, *lo, *hi, Scale::Logarithmic),
        [f, lo, hi, "linear"] => (*f, *lo, *hi, Scale::Linear),
        _ => return Err(bad("expected field:lower:upper[:log]".into())),
    };
    let param: Param = field
        .trim()
        .parse()
        .map_err(|e: CoreError| bad(e.to_string()))?;
    let lower = parse_param_value(param, lo, true).map_err(bad)?;
    let upper = parse_param_value(param, hi, true).map_err(bad)?;
    if !(lower <= upper) {
        return Err(bad(format!(
            "lower bound {lower} exceeds upper bound {upper}"
        )));
    }
    if scale == Scale::Logarithmic && lower <= 0.0 {
        return Err(bad("logarithmic scale needs positive bounds".into()));
    }
    Ok(DesignVariable {
        param,
        lower,
        upper,
        scale,
    })
}

// ---- evaluate --------------------------------------------------------------

struct Report(String);

impl Report {
    fn heading(&mut self, title: &str) {
        let _ = writeln!(self.0, "{title}");
    }

    fn value(&mut self, label: &str, v: f64, scale: f64, unit: &str) {
        let _ = writeln!(self.0, "  {label:<36}{:>12.3} {unit}", v / scale);
    }

    fn text(&mut self, label: &str, v: impl std::fmt::Display) {
        let _ = writeln!(self.0, "  {label:<36}{v:>12}");
    }
}

fn render_report(
    config: &RunConfig,
    r: &DesignReport,
    trace: &CycleTrace,
) -> Result<String, CliError> {
    const MM: f64 = 1e-3;
    const UJ: f64 = 1e-6;
    const UNM: f64 = 1e-6;
    const MA: f64 = 1e-3;
    const MW: f64 = 1e-3;
    let d = &config.design;
    let drive = &config.drive;
    let mut out = Report(String::new());

    out.heading("spring and release");
    out.value("stiffness k", r.stiffness, 1.0, "N/m");
    out.value("release force F", d.release.release_force, MM, "mN");
    out.value("release deflection F/k", r.release_deflection, MM, "mm");
    out.value("stored energy k·Δl²/2", r.stored_energy, UJ, "µJ");
    if let (Some(s), Some(y)) = (r.strain_at_release, r.yield_strain) {
        out.value("peak beam strain at release", s, 0.01, "%");
        out.value("yield strain", y, 0.01, "%");
    }

    out.heading("starting torque at release");
    out.value(
        "ring friction µ·k·Δl·r",
        r.torque.friction_torque,
        UNM,
        "µN·m",
    );
    out.value("spring k·Δl·r", r.torque.spring_torque, UNM, "µN·m");
    out.value("total estimate", r.torque.total_required, UNM, "µN·m");
    if let Some(m) = r.measured_starting_torque {
        out.value("measured", m, UNM, "µN·m");
    }

    out.heading("actuator");
    out.value("coil resistance", r.drive.resistance, 1.0, "Ω");
    out.value("current for estimate", r.required.current, MA, "mA");
    out.value("  voltage", r.required.voltage, 1.0, "V");
    out.value("  power", r.required.power, MW, "mW");
    if let Some(m) = r.measured_starting_torque {
        let e = electrical_budget(&d.actuator.coil, required_current(&d.actuator, m)?);
        out.value("current for measured", e.current, MA, "mA");
        out.value("  voltage", e.voltage, 1.0, "V");
        out.value("  power", e.power, MW, "mW");
    }
    out.text("drive", format!("{} {} Hz", drive.kind, drive.frequency));
    out.value("  amplitude", r.drive.voltage, 1.0, "V");
    out.value("  coil current", r.drive.current, MA, "mA");
    out.value("  coil power", r.drive.power, MW, "mW");
    out.value("  available torque", r.torque.available, UNM, "µN·m");
    out.value("  torque margin", r.torque_margin(), UNM, "µN·m");

    out.heading("winding");
    out.text("ratchet cycles to release", r.cycles_to_release);
    out.value(
        "winding time",
        r.cycles_to_release as f64 / drive.frequency,
        1.0,
        "s",
    );
    if let Some(p) = r.mechanical_power {
        out.value("mechanical winding power", p, 1e-6, "µW");
    }

    out.heading("flight");
    out.value("mass", r.mass, 1e-6, "mg");
    out.value(
        "ideal height E/(m·g)",
        ideal_jump_height(r.stored_energy, r.mass, d.body.gravity),
        MM,
        "mm",
    );
    out.text("launch efficiency", d.body.launch_efficiency);
    match trace.outcome {
        CycleOutcome::Released {
            launch_velocity, ..
        } => {
            out.value("launch velocity", launch_velocity, 1.0, "m/s");
            out.value("simulated apex", r.apex, MM, "mm");
            if let Some(p) = r.jump_period {
                out.value("release + rise time", p, 1.0, "s");
            }
            if let Some(rate) = r.jump_rate {
                out.value("jump rate", rate, 1.0, "/min");
            }
        }
        CycleOutcome::Stalled { time, deflection } => {
            out.text("outcome", "stall");
            out.value("  stall deflection", deflection, MM, "mm");
            out.value("  stall time", time, 1.0, "s");
        }
    }
    Ok(out.0)
}

pub fn cmd_evaluate(
    config: &RunConfig,
    out: Option<&Path>,
    step: Option<f64>,
) -> Result<String, CliError> {
    let (report, trace) =
        evaluate_design_with(&config.design, &config.drive, step.unwrap_or(DEFAULT_STEP))?;
    let text = render_report(config, &report, &trace)?;
    if let Some(dir) = out {
        write_file(&out_dir(Some(dir))?.join("report.txt"), &text)?;
    }
    Ok(text)
}

// ---- simulate --------------------------------------------------------------

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

fn csv_row<I, S>(w: &mut csv::Writer<Vec<u8>>, row: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    w.write_record(row)
        .map_err(|e| CliError::Internal(e.to_string()))
}

pub fn wind_csv(trace: &CycleTrace) -> Result<String, CliError> {
    let mut w = csv_writer();
    csv_row(&mut w, ["cycle", "time_s", "deflection_m", "tension_N"])?;
    for e in &trace.wind_events {
        csv_row(
            &mut w,
            [
                e.cycle.to_string(),
                e.time.to_string(),
                e.deflection.to_string(),
                e.tension.to_string(),
            ],
        )?;
    }
    csv_finish(w)
}

pub fn flight_csv(trace: &CycleTrace) -> Result<String, CliError> {
    let mut w = csv_writer();
    csv_row(&mut w, ["time_s", "height_m", "velocity_mps"])?;
    for s in &trace.flight {
        csv_row(
            &mut w,
            [
                s.time.to_string(),
                s.height.to_string(),
                s.velocity.to_string(),
            ],
        )?;
    }
    csv_finish(w)
}

/// Runs one load-and-jump cycle and writes `wind.csv` and `flight.csv`.
/// A stall is a valid outcome, not an error.
pub fn cmd_simulate(
    config: &RunConfig,
    out: Option<&Path>,
    step: Option<f64>,
) -> Result<String, CliError> {
    let (report, trace) =
        evaluate_design_with(&config.design, &config.drive, step.unwrap_or(DEFAULT_STEP))?;
    let wind = wind_csv(&trace)?;
    let flight = flight_csv(&trace)?;
    let dir = out_dir(out)?;
    write_file(&dir.join("wind.csv"), &wind)?;
    write_file(&dir.join("flight.csv"), &flight)?;

    let strokes = trace.wind_events.len();
    let summary = match trace.outcome {
        CycleOutcome::Released {
            time,
            energy,
            launch_velocity,
            ..
        } => format!(
            "released after {strokes} strokes at t = {time:.4} s\n\
             stored energy {:.3} µJ, launch velocity {launch_velocity:.4} m/s\n\
             apex {:.3} mm, release + rise {:.4} s, {:.2} jumps/min\n",
            energy * 1e6,
            report.apex * 1e3,
            report.jump_period.unwrap_or(f64::NAN),
            report.jump_rate.unwrap_or(f64::NAN),
        ),
        CycleOutcome::Stalled { time, deflection } => format!(
            "stall after {strokes} strokes at t = {time:.4} s, deflection {:.4} mm \
             (release needs {:.4} mm)\n",
            deflection * 1e3,
            report.release_deflection * 1e3,
        ),
    };
    Ok(summary)
}

// ---- sweep -----------------------------------------------------------------

/// Evaluates the design at `points` evenly spaced values of one field and
/// returns the CSV text; also writes `sweep.csv` when `out` is given.
pub fn cmd_sweep(
    config: &RunConfig,
    var: &DesignVariable,
    points: usize,
    out: Option<&Path>,
    step: Option<f64>,
) -> Result<String, CliError> {
    if points == 0 {
        return Err(CliError::Input("--points must be at least 1".into()));
    }
    let step = step.unwrap_or(DEFAULT_STEP);
    let mut w = csv_writer();
    csv_row(&mut w, ["value", "apex_m", "jump_rate_per_min", "feasible"])?;
    for i in 0..points {
        let u = if points == 1 {
            0.0
        } else {
            i as f64 / (points - 1) as f64
        };
        let value = var.value_at(u);
        let mut design = config.design.clone();
        let mut drive = config.drive;
        var.param.set(&mut design, &mut drive, value);
        let shown = var.param.get(&design, &drive).unwrap_or(value);
        let row = match evaluate_design_with(&design, &drive, step) {
            Ok((r, _)) => {
                let strain_ok = r.strain_margin().is_none_or(|m| m >= 0.0);
                [
                    shown.to_string(),
                    r.apex.to_string(),
                    r.jump_rate.map(|x| x.to_string()).unwrap_or_default(),
                    (r.released && strain_ok).to_string(),
                ]
            }
            Err(CoreError::InvalidSpec(_)) => [
                shown.to_string(),
                String::new(),
                String::new(),
                "false".into(),
            ],
            Err(e) => return Err(e.into()),
        };
        csv_row(&mut w, row)?;
    }
    let text = csv_finish(w)?;
    if let Some(dir) = out {
        write_file(&out_dir(Some(dir))?.join("sweep.csv"), &text)?;
    }
    Ok(text)
}

// ---- optimize --------------------------------------------------------------

pub fn history_csv(
    section: &OptimizeSection,
    result: &OptimizationResult,
) -> Result<String, CliError> {
    let mut w = csv_writer();
    let mut header: Vec<String> = section
        .variables
        .iter()
        .map(|v| v.param.to_string())
        .collect();
    header.extend(["objective", "feasible", "violation"].map(String::from));
    csv_row(&mut w, &header)?;
    for h in &result.history {
        let mut row: Vec<String> = h.point.iter().map(f64::to_string).collect();
        row.push(h.objective.map(|x| x.to_string()).unwrap_or_default());
        row.push(h.feasible.to_string());
        row.push(h.violation.to_string());
        csv_row(&mut w, &row)?;
    }
    csv_finish(w)
}

/// Searches the design space and writes `best_design.toml` and
/// `history.csv`. Exits with [`CliError::Infeasible`] when nothing feasible
/// was found (the files are still written so the search can be inspected).
pub fn cmd_optimize(
    config: &RunConfig,
    vars: &[DesignVariable],
    objective: Option<Objective>,
    seed: u64,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let mut section = config.optimize.clone().unwrap_or_default();
    if !vars.is_empty() {
        section.variables = vars.to_vec();
    }
    if let Some(o) = objective {
        section.objective = o;
    }
    if section.variables.is_empty() {
        return Err(CliError::Input(
            "no design variables: pass --var field:lower:upper or add [[optimize.variables]]"
                .into(),
        ));
    }
    let problem = config.problem(&section);
    let result = optimize(&problem, seed)?;

    let best = RunConfig {
        design: result.best_design.clone(),
        drive: result.best_drive,
        optimize: None,
    };
    let dir = out_dir(out)?;
    write_file(&dir.join("best_design.toml"), &config::to_toml(&best))?;
    write_file(&dir.join("history.csv"), &history_csv(&section, &result)?)?;

    let mut text = String::new();
    let what = match section.objective {
        Objective::ApexHeight => "apex height (m)",
        Objective::JumpRate => "jump rate (/min)",
    };
    let _ = writeln!(text, "objective: {what}");
    let _ = writeln!(text, "evaluations: {}", result.evaluations);
    for (v, x) in section.variables.iter().zip(&result.best_point) {
        let _ = writeln!(text, "  {} = {x}", v.param);
    }
    match result.best_objective {
        Some(o) => {
            let _ = writeln!(text, "best: {o}");
        }
        None => {
            let _ = writeln!(text, "best: none (no design jumps)");
        }
    }
    if !result.feasible {
        return Err(CliError::Infeasible(format!(
            "no evaluated design satisfies the constraints\n{text}"
        )));
    }
    Ok(text)
}
