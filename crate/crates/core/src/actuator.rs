//! Voice-coil actuator: force and torque from coil current, the starting
//! torque the shaft must overcome, the electrical budget, and the drive
//! waveform.
//!
//! The coil is purely resistive (no inductance, no back-EMF) and sees a
//! uniform average field over the magnet stroke.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{ActuatorSpec, CoilSpec, DriveKind, DriveSource, RobotDesign};

/// Torques about the shaft axis, N·m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueBudget {
    pub friction_torque: f64,
    pub spring_torque: f64,
    pub total_required: f64,
    pub available: f64,
    pub feasible: bool,
}

impl TorqueBudget {
    /// Fills in the actuator-side torque and re-derives feasibility.
    pub fn with_available(self, available: f64) -> Self {
        TorqueBudget {
            available,
            feasible: available >= self.total_required,
            ..self
        }
    }

    pub fn margin(&self) -> f64 {
        self.available - self.total_required
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectricalBudget {
    pub current: f64,
    pub voltage: f64,
    pub power: f64,
    pub resistance: f64,
}

/// DC resistance of the winding from wire length and cross-section.
pub fn coil_resistance_from_wire(coil: &CoilSpec, resistivity: f64) -> f64 {
    let length = f64::from(coil.turns) * 2.0 * PI * coil.mean_radius;
    let area = PI * (coil.wire_diameter / 2.0).powi(2);
    resistivity * length / area
}

/// Lorentz force per ampere: n·B·2πr.
fn force_constant(coil: &CoilSpec) -> f64 {
    f64::from(coil.turns) * coil.avg_field * 2.0 * PI * coil.mean_radius
}

/// Axial force on the coil/magnet pair; the sign follows the current.
pub fn coil_force(coil: &CoilSpec, current: f64) -> f64 {
    force_constant(coil) * current
}

/// Torque needed to keep winding at `deflection`: ring friction from the
/// string load pressing the shaft into its bearings, plus the string tension
/// acting at the shaft radius.
pub fn required_torque(design: &RobotDesign, deflection: f64) -> Result<TorqueBudget> {
    if !(deflection >= 0.0) {
        return Err(Error::Domain(format!("negative deflection {deflection} m")));
    }
    let k = design.stiffness()?;
    let tension = k * deflection;
    let r = design.ratchet.shaft_radius;
    let friction_torque = design.ratchet.friction_coefficient * tension * r;
    let spring_torque = tension * r;
    let total_required = friction_torque + spring_torque;
    Ok(TorqueBudget {
        friction_torque,
        spring_torque,
        total_required,
        available: 0.0,
        feasible: total_required <= 0.0,
    })
}

pub fn available_torque(actuator: &ActuatorSpec, current: f64) -> f64 {
    coil_force(&actuator.coil, current).abs() * actuator.moment_arm_length
}

/// Coil current that produces `torque` at the shaft.
pub fn required_current(actuator: &ActuatorSpec, torque: f64) -> Result<f64> {
    if !(torque >= 0.0) {
        return Err(Error::Domain(format!("negative torque {torque} N·m")));
    }
    let per_amp = force_constant(&actuator.coil) * actuator.moment_arm_length;
    if !(per_amp > 0.0) || !per_amp.is_finite() {
        return Err(Error::SingularSpec(
            "moment arm, turns, field or coil radius is zero".into(),
        ));
    }
    Ok(torque / per_amp)
}

pub fn electrical_budget(coil: &CoilSpec, current: f64) -> ElectricalBudget {
    let resistance = coil.effective_resistance();
    ElectricalBudget {
        current,
        voltage: current * resistance,
        power: current * current * resistance,
        resistance,
    }
}

/// Coil terminal voltage at time `t`. Both drive kinds are an alternating
/// ±amplitude square wave at 50 % duty, positive for the first half period.
/// The PV pair is an equivalent source that holds its amplitude into the
/// coil resistance.
pub fn drive_waveform(source: &DriveSource, time: f64) -> f64 {
    match source.kind {
        DriveKind::SquareWaveSupply | DriveKind::PvPair => {
            let phase = (time * source.frequency).rem_euclid(1.0);
            if phase < 0.5 {
                source.amplitude
            } else {
                -source.amplitude
            }
        }
    }
}

/// Smallest drive amplitude whose current meets the starting torque at the
/// release deflection.
pub fn stall_amplitude(design: &RobotDesign) -> Result<f64> {
    let torque = required_torque(design, design.release_deflection()?)?.total_required;
    let current = required_current(&design.actuator, torque)?;
    Ok(electrical_budget(&design.actuator.coil, current).voltage)
}
