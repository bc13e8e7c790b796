//! Named numeric fields of a design/drive pair, addressable by dotted path
//! (`actuator.moment_arm_length`, `drive.amplitude`, ...). Sweeps and the
//! optimizer use these to vary one field at a time.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::model::{DriveSource, RobotDesign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    SpringStiffness,
    SpringBeamLength,
    SpringBeamWidth,
    SpringSheetThickness,
    SpringParallelBeamCount,
    SpringMaxDeflectionRated,
    ReleaseForce,
    ShaftRadius,
    ToothPitch,
    ToothHeight,
    StrokeAngle,
    WindingEfficiency,
    FrictionCoefficient,
    CoilTurns,
    CoilMeanRadius,
    CoilResistance,
    CoilWireDiameter,
    CoilAvgField,
    MomentArmLength,
    DragCoefficient,
    ReferenceArea,
    AirDensity,
    Gravity,
    LaunchEfficiency,
    DriveAmplitude,
    DriveFrequency,
}

impl Param {
    pub const ALL: [Param; 26] = [
        Param::SpringStiffness,
        Param::SpringBeamLength,
        Param::SpringBeamWidth,
        Param::SpringSheetThickness,
        Param::SpringParallelBeamCount,
        Param::SpringMaxDeflectionRated,
        Param::ReleaseForce,
        Param::ShaftRadius,
        Param::ToothPitch,
        Param::ToothHeight,
        Param::StrokeAngle,
        Param::WindingEfficiency,
        Param::FrictionCoefficient,
        Param::CoilTurns,
        Param::CoilMeanRadius,
        Param::CoilResistance,
        Param::CoilWireDiameter,
        Param::CoilAvgField,
        Param::MomentArmLength,
        Param::DragCoefficient,
        Param::ReferenceArea,
        Param::AirDensity,
        Param::Gravity,
        Param::LaunchEfficiency,
        Param::DriveAmplitude,
        Param::DriveFrequency,
    ];

    pub fn path(self) -> &'static str {
        match self {
            Param::SpringStiffness => "spring.stiffness",
            Param::SpringBeamLength => "spring.beam_length",
            Param::SpringBeamWidth => "spring.beam_width",
            Param::SpringSheetThickness => "spring.sheet_thickness",
            Param::SpringParallelBeamCount => "spring.parallel_beam_count",
            Param::SpringMaxDeflectionRated => "spring.max_deflection_rated",
            Param::ReleaseForce => "release.release_force",
            Param::ShaftRadius => "ratchet.shaft_radius",
            Param::ToothPitch => "ratchet.tooth_pitch",
            Param::ToothHeight => "ratchet.tooth_height",
            Param::StrokeAngle => "ratchet.stroke_angle",
            Param::WindingEfficiency => "ratchet.winding_efficiency",
            Param::FrictionCoefficient => "ratchet.friction_coefficient",
            Param::CoilTurns => "actuator.coil.turns",
            Param::CoilMeanRadius => "actuator.coil.mean_radius",
            Param::CoilResistance => "actuator.coil.resistance",
            Param::CoilWireDiameter => "actuator.coil.wire_diameter",
            Param::CoilAvgField => "actuator.coil.avg_field",
            Param::MomentArmLength => "actuator.moment_arm_length",
            Param::DragCoefficient => "body.drag_coefficient",
            Param::ReferenceArea => "body.reference_area",
            Param::AirDensity => "body.air_density",
            Param::Gravity => "body.gravity",
            Param::LaunchEfficiency => "body.launch_efficiency",
            Param::DriveAmplitude => "drive.amplitude",
            Param::DriveFrequency => "drive.frequency",
        }
    }

    /// Integer-valued fields; values are rounded to the nearest integer on set.
    pub fn is_integer(self) -> bool {
        matches!(self, Param::SpringParallelBeamCount | Param::CoilTurns)
    }

    /// Current value, or `None` for an unset optional field.
    pub fn get(self, design: &RobotDesign, drive: &DriveSource) -> Option<f64> {
        let d = design;
        match self {
            Param::SpringStiffness => d.spring.stiffness,
            Param::SpringBeamLength => d.spring.beam_length,
            Param::SpringBeamWidth => d.spring.beam_width,
            Param::SpringSheetThickness => d.spring.sheet_thickness,
            Param::SpringParallelBeamCount => Some(f64::from(d.spring.parallel_beam_count)),
            Param::SpringMaxDeflectionRated => Some(d.spring.max_deflection_rated),
            Param::ReleaseForce => Some(d.release.release_force),
            Param::ShaftRadius => Some(d.ratchet.shaft_radius),
            Param::ToothPitch => Some(d.ratchet.tooth_pitch),
            Param::ToothHeight => Some(d.ratchet.tooth_height),
            Param::StrokeAngle => Some(d.ratchet.stroke_angle),
            Param::WindingEfficiency => Some(d.ratchet.winding_efficiency),
            Param::FrictionCoefficient => Some(d.ratchet.friction_coefficient),
            Param::CoilTurns => Some(f64::from(d.actuator.coil.turns)),
            Param::CoilMeanRadius => Some(d.actuator.coil.mean_radius),
            Param::CoilResistance => d.actuator.coil.resistance,
            Param::CoilWireDiameter => Some(d.actuator.coil.wire_diameter),
            Param::CoilAvgField => Some(d.actuator.coil.avg_field),
            Param::MomentArmLength => Some(d.actuator.moment_arm_length),
            Param::DragCoefficient => Some(d.body.drag_coefficient),
            Param::ReferenceArea => Some(d.body.reference_area),
            Param::AirDensity => Some(d.body.air_density),
            Param::Gravity => Some(d.body.gravity),
            Param::LaunchEfficiency => Some(d.body.launch_efficiency),
            Param::DriveAmplitude => Some(drive.amplitude),
            Param::DriveFrequency => Some(drive.frequency),
        }
    }

    pub fn set(self, design: &mut RobotDesign, drive: &mut DriveSource, value: f64) {
        let d = design;
        let count = || value.round().clamp(0.0, f64::from(u32::MAX)) as u32;
        match self {
            Param::SpringStiffness => d.spring.stiffness = Some(value),
            Param::SpringBeamLength => d.spring.beam_length = Some(value),
            Param::SpringBeamWidth => d.spring.beam_width = Some(value),
            Param::SpringSheetThickness => d.spring.sheet_thickness = Some(value),
            Param::SpringParallelBeamCount => d.spring.parallel_beam_count = count(),
            Param::SpringMaxDeflectionRated => d.spring.max_deflection_rated = value,
            Param::ReleaseForce => d.release.release_force = value,
            Param::ShaftRadius => d.ratchet.shaft_radius = value,
            Param::ToothPitch => d.ratchet.tooth_pitch = value,
            Param::ToothHeight => d.ratchet.tooth_height = value,
            Param::StrokeAngle => d.ratchet.stroke_angle = value,
            Param::WindingEfficiency => d.ratchet.winding_efficiency = value,
            Param::FrictionCoefficient => d.ratchet.friction_coefficient = value,
            Param::CoilTurns => d.actuator.coil.turns = count(),
            Param::CoilMeanRadius => d.actuator.coil.mean_radius = value,
            Param::CoilResistance => d.actuator.coil.resistance = Some(value),
            Param::CoilWireDiameter => d.actuator.coil.wire_diameter = value,
            Param::CoilAvgField => d.actuator.coil.avg_field = value,
            Param::MomentArmLength => d.actuator.moment_arm_length = value,
            Param::DragCoefficient => d.body.drag_coefficient = value,
            Param::ReferenceArea => d.body.reference_area = value,
            Param::AirDensity => d.body.air_density = value,
            Param::Gravity => d.body.gravity = value,
            Param::LaunchEfficiency => d.body.launch_efficiency = value,
            Param::DriveAmplitude => drive.amplitude = value,
            Param::DriveFrequency => drive.frequency = value,
        }
    }

    pub fn known_paths() -> Vec<&'static str> {
        Self::ALL.iter().map(|p| p.path()).collect()
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.path())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Param::ALL
            .iter()
            .copied()
            .find(|p| p.path() == s)
            .ok_or_else(|| {
                Error::InvalidSpec(format!(
                    "unknown field path '{s}'; known fields: {}",
                    Param::known_paths().join(", ")
                ))
            })
    }
}
