//! TOML run configuration: a robot design, its drive, and an optional
//! optimization section.
//!
//! Physical quantities are strings with explicit units ("7.5 mN"); pure
//! numbers (efficiencies, coefficients, counts) are plain TOML numbers.
//! [`to_toml`] writes every quantity in SI with the shortest exact decimal,
//! so `parse -> to_toml -> parse` reproduces the configuration bit for bit.

use std::fmt;
use std::marker::PhantomData;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use jumpbot_core::model::validate_design;
use jumpbot_core::optimize::{Constraints, DesignVariable, Objective, OptimizationProblem, Scale};
use jumpbot_core::param::Param;
use jumpbot_core::{
    ActuatorSpec, BodySpec, CoilSpec, DriveKind, DriveSource, MassItem, MaterialSpec, RatchetSpec,
    ReleaseSpec, RobotDesign, SpringSpec,
};

use crate::units::{format_si, parse_quantity, Dimension};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("invalid configuration:\n{}", .0.join("\n"))]
    Invalid(Vec<String>),
}

/// Optimization settings carried in a configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeSection {
    pub objective: Objective,
    pub variables: Vec<DesignVariable>,
    pub constraints: Constraints,
    pub grid_points: usize,
    pub max_evaluations: usize,
    pub allow_infeasible_start: bool,
}

impl Default for OptimizeSection {
    fn default() -> Self {
        OptimizeSection {
            objective: Objective::ApexHeight,
            variables: Vec::new(),
            constraints: Constraints::default(),
            grid_points: OptimizationProblem::DEFAULT_GRID_POINTS,
            max_evaluations: OptimizationProblem::DEFAULT_MAX_EVALUATIONS,
            allow_infeasible_start: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub design: RobotDesign,
    pub drive: DriveSource,
    pub optimize: Option<OptimizeSection>,
}

impl RunConfig {
    /// The prototype design driven at 0.8 V, 20 Hz.
    pub fn baseline() -> Self {
        RunConfig {
            design: RobotDesign::baseline(),
            drive: DriveSource::square_wave(0.8, 20.0),
            optimize: None,
        }
    }

    /// Every broken design or drive invariant, as `field: rule` lines.
    pub fn violations(&self) -> Vec<String> {
        validate_design(&self.design)
            .iter()
            .chain(self.drive.validate().iter())
            .map(|v| v.to_string())
            .collect()
    }

    pub fn problem(&self, section: &OptimizeSection) -> OptimizationProblem {
        OptimizationProblem {
            variables: section.variables.clone(),
            objective: section.objective,
            constraints: section.constraints,
            baseline: self.design.clone(),
            drive: self.drive,
            grid_points: section.grid_points,
            max_evaluations: section.max_evaluations,
            allow_infeasible_start: section.allow_infeasible_start,
        }
    }
}

/// Dimension of the quantity a parameter path refers to.
pub fn param_dimension(p: Param) -> Dimension {
    use Param::*;
    match p {
        SpringStiffness => Dimension::STIFFNESS,
        SpringBeamLength
        | SpringBeamWidth
        | SpringSheetThickness
        | SpringMaxDeflectionRated
        | ShaftRadius
        | ToothHeight
        | CoilMeanRadius
        | CoilWireDiameter
        | MomentArmLength => Dimension::LENGTH,
        ReleaseForce => Dimension::FORCE,
        ToothPitch | StrokeAngle => Dimension::ANGLE,
        CoilResistance => Dimension::RESISTANCE,
        CoilAvgField => Dimension::FLUX_DENSITY,
        ReferenceArea => Dimension::AREA,
        AirDensity => Dimension::DENSITY,
        Gravity => Dimension::ACCELERATION,
        DriveAmplitude => Dimension::VOLTAGE,
        DriveFrequency => Dimension::FREQUENCY,
        SpringParallelBeamCount
        | WindingEfficiency
        | FrictionCoefficient
        | CoilTurns
        | DragCoefficient
        | LaunchEfficiency => Dimension::NONE,
    }
}

/// Parses a value for `param`. Dimensioned fields need a unit unless
/// `bare_is_si` is set, in which case a plain number is taken as SI.
pub fn parse_param_value(param: Param, text: &str, bare_is_si: bool) -> Result<f64, String> {
    let q = parse_quantity(text).map_err(|e| e.to_string())?;
    let expected = param_dimension(param);
    if q.dimension == expected || (bare_is_si && q.dimension == Dimension::NONE) {
        Ok(q.value)
    } else if q.dimension == Dimension::NONE {
        Err(format!(
            "{param} needs a unit, e.g. \"{text} {}\"",
            expected.si_unit()
        ))
    } else {
        Err(format!(
            "{param}: expected {expected}, got '{text}' ({})",
            q.dimension
        ))
    }
}

pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_toml(&text)
}

/// Parses and validates a configuration document.
pub fn from_toml(text: &str) -> Result<RunConfig, ConfigError> {
    let de = toml::Deserializer::parse(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::Parse(format!("in field '{path}': {}", e.into_inner()))
    })?;
    let config = raw.into_config()?;
    let violations = config.violations();
    if !violations.is_empty() {
        return Err(ConfigError::Invalid(violations));
    }
    Ok(config)
}

pub fn to_toml(config: &RunConfig) -> String {
    toml::to_string(&RawConfig::from_config(config)).expect("configuration always serializes")
}

// ---- quantity fields -------------------------------------------------------

trait Dim {
    const DIM: Dimension;
}

macro_rules! dims {
    ($($name:ident => $dim:ident),* $(,)?) => {
        $(
            #[derive(Debug, Clone, Copy)]
            struct $name;
            impl Dim for $name {
                const DIM: Dimension = Dimension::$dim;
            }
        )*
    };
}

dims! {
    Length => LENGTH,
    Area => AREA,
    Mass => MASS,
    Angle => ANGLE,
    Force => FORCE,
    Stiffness => STIFFNESS,
    Pressure => PRESSURE,
    Torque => ENERGY,
    Voltage => VOLTAGE,
    Resistance => RESISTANCE,
    Field => FLUX_DENSITY,
    Frequency => FREQUENCY,
    Density => DENSITY,
    Acceleration => ACCELERATION,
    LinearDensity => LINEAR_DENSITY,
}

/// An SI value that is read from and written to a unit-bearing string.
struct Q<D>(f64, PhantomData<D>);

impl<D> Q<D> {
    fn new(v: f64) -> Self {
        Q(v, PhantomData)
    }
}

impl<D: Dim> Serialize for Q<D> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_si(self.0, D::DIM))
    }
}

impl<'de, D: Dim> Deserialize<'de> for Q<D> {
    fn deserialize<De: Deserializer<'de>>(d: De) -> Result<Self, De::Error> {
        struct V<D>(PhantomData<D>);

        impl<D: Dim> V<D> {
            fn bare<E: de::Error>(n: impl fmt::Display) -> E {
                E::custom(format!(
                    "a unit is required, e.g. \"{n} {}\" (expected {})",
                    D::DIM.si_unit(),
                    D::DIM
                ))
            }
        }

        impl<D: Dim> Visitor<'_> for V<D> {
            type Value = Q<D>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a quantity string in {}", D::DIM)
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Q<D>, E> {
                let q = parse_quantity(s).map_err(E::custom)?;
                if q.dimension != D::DIM {
                    return Err(E::custom(format!(
                        "expected {}, got '{s}' ({})",
                        D::DIM,
                        q.dimension
                    )));
                }
                Ok(Q::new(q.value))
            }

            fn visit_i64<E: de::Error>(self, n: i64) -> Result<Q<D>, E> {
                Err(Self::bare(n))
            }

            fn visit_f64<E: de::Error>(self, n: f64) -> Result<Q<D>, E> {
                Err(Self::bare(n))
            }
        }

        d.deserialize_any(V::<D>(PhantomData))
    }
}

fn opt<D>(v: Option<f64>) -> Option<Q<D>> {
    v.map(Q::new)
}

fn unq<D>(v: Option<Q<D>>) -> Option<f64> {
    v.map(|q| q.0)
}

// ---- document layout -------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    spring: RawSpring,
    release: RawRelease,
    ratchet: RawRatchet,
    actuator: RawActuator,
    body: RawBody,
    drive: RawDrive,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    optimize: Option<RawOptimize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpring {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stiffness: Option<Q<Stiffness>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beam_length: Option<Q<Length>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beam_width: Option<Q<Length>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sheet_thickness: Option<Q<Length>>,
    parallel_beam_count: u32,
    max_deflection_rated: Q<Length>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    material: Option<RawMaterial>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    name: String,
    youngs_modulus: Q<Pressure>,
    yield_strain: f64,
    density: Q<Density>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRelease {
    release_force: Q<Force>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRatchet {
    shaft_radius: Q<Length>,
    tooth_pitch: Q<Angle>,
    tooth_height: Q<Length>,
    stroke_angle: Q<Angle>,
    winding_efficiency: f64,
    friction_coefficient: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawActuator {
    moment_arm_length: Q<Length>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    measured_starting_torque: Option<Q<Torque>>,
    coil: RawCoil,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoil {
    turns: u32,
    mean_radius: Q<Length>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    resistance: Option<Q<Resistance>>,
    wire_diameter: Q<Length>,
    avg_field: Q<Field>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBody {
    drag_coefficient: f64,
    reference_area: Q<Area>,
    air_density: Q<Density>,
    gravity: Q<Acceleration>,
    launch_efficiency: f64,
    mass_items: Vec<RawMassItem>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMassItem {
    label: String,
    mass: Q<Mass>,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum RawDriveKind {
    SquareWaveSupply,
    PvPair,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDrive {
    kind: RawDriveKind,
    amplitude: Q<Voltage>,
    frequency: Q<Frequency>,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum RawObjective {
    ApexHeight,
    JumpRate,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum RawScale {
    Linear,
    Log,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptimize {
    objective: RawObjective,
    #[serde(default)]
    grid_points: Option<usize>,
    #[serde(default)]
    max_evaluations: Option<usize>,
    #[serde(default)]
    allow_infeasible_start: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    voltage_budget: Option<Q<Voltage>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mass_budget: Option<Q<Mass>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arm_mass_per_length: Option<Q<LinearDensity>>,
    #[serde(default)]
    variables: Vec<RawVariable>,
}

/// A bound whose dimension depends on the field it belongs to.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawBound {
    Int(i64),
    Float(f64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVariable {
    field: String,
    lower: RawBound,
    upper: RawBound,
    #[serde(default)]
    scale: Option<RawScale>,
}

impl RawBound {
    fn resolve(&self, param: Param, at: &str) -> Result<f64, String> {
        let value = match self {
            RawBound::Int(n) => parse_param_value(param, &n.to_string(), false),
            RawBound::Float(x) => parse_param_value(param, &x.to_string(), false),
            RawBound::Text(s) => parse_param_value(param, s, false),
        };
        value.map_err(|e| format!("{at}: {e}"))
    }

    fn from_value(param: Param, v: f64) -> Self {
        match param_dimension(param) {
            Dimension::NONE => RawBound::Float(v),
            d => RawBound::Text(format_si(v, d)),
        }
    }
}

impl RawConfig {
    fn into_config(self) -> Result<RunConfig, ConfigError> {
        let RawConfig {
            spring,
            release,
            ratchet,
            actuator,
            body,
            drive,
            optimize,
        } = self;
        let design = RobotDesign {
            spring: SpringSpec {
                stiffness: unq(spring.stiffness),
                beam_length: unq(spring.beam_length),
                beam_width: unq(spring.beam_width),
                sheet_thickness: unq(spring.sheet_thickness),
                parallel_beam_count: spring.parallel_beam_count,
                material: spring.material.map(|m| MaterialSpec {
                    name: m.name,
                    youngs_modulus: m.youngs_modulus.0,
                    yield_strain: m.yield_strain,
                    density: m.density.0,
                }),
                max_deflection_rated: spring.max_deflection_rated.0,
            },
            release: ReleaseSpec {
                release_force: release.release_force.0,
            },
            ratchet: RatchetSpec {
                shaft_radius: ratchet.shaft_radius.0,
                tooth_pitch: ratchet.tooth_pitch.0,
                tooth_height: ratchet.tooth_height.0,
                stroke_angle: ratchet.stroke_angle.0,
                winding_efficiency: ratchet.winding_efficiency,
                friction_coefficient: ratchet.friction_coefficient,
            },
            actuator: ActuatorSpec {
                coil: CoilSpec {
                    turns: actuator.coil.turns,
                    mean_radius: actuator.coil.mean_radius.0,
                    resistance: unq(actuator.coil.resistance),
                    wire_diameter: actuator.coil.wire_diameter.0,
                    avg_field: actuator.coil.avg_field.0,
                },
                moment_arm_length: actuator.moment_arm_length.0,
                measured_starting_torque: unq(actuator.measured_starting_torque),
            },
            body: BodySpec {
                mass_items: body
                    .mass_items
                    .into_iter()
                    .map(|m| MassItem {
                        label: m.label,
                        mass: m.mass.0,
                    })
                    .collect(),
                drag_coefficient: body.drag_coefficient,
                reference_area: body.reference_area.0,
                air_density: body.air_density.0,
                gravity: body.gravity.0,
                launch_efficiency: body.launch_efficiency,
            },
        };
        let drive = DriveSource {
            kind: match drive.kind {
                RawDriveKind::SquareWaveSupply => DriveKind::SquareWaveSupply,
                RawDriveKind::PvPair => DriveKind::PvPair,
            },
            amplitude: drive.amplitude.0,
            frequency: drive.frequency.0,
        };
        let optimize = optimize.map(RawOptimize::into_section).transpose()?;
        Ok(RunConfig {
            design,
            drive,
            optimize,
        })
    }

    fn from_config(c: &RunConfig) -> Self {
        let d = &c.design;
        let coil = &d.actuator.coil;
        RawConfig {
            spring: RawSpring {
                stiffness: opt(d.spring.stiffness),
                beam_length: opt(d.spring.beam_length),
                beam_width: opt(d.spring.beam_width),
                sheet_thickness: opt(d.spring.sheet_thickness),
                parallel_beam_count: d.spring.parallel_beam_count,
                max_deflection_rated: Q::new(d.spring.max_deflection_rated),
                material: d.spring.material.as_ref().map(|m| RawMaterial {
                    name: m.name.clone(),
                    youngs_modulus: Q::new(m.youngs_modulus),
                    yield_strain: m.yield_strain,
                    density: Q::new(m.density),
                }),
            },
            release: RawRelease {
                release_force: Q::new(d.release.release_force),
            },
            ratchet: RawRatchet {
                shaft_radius: Q::new(d.ratchet.shaft_radius),
                tooth_pitch: Q::new(d.ratchet.tooth_pitch),
                tooth_height: Q::new(d.ratchet.tooth_height),
                stroke_angle: Q::new(d.ratchet.stroke_angle),
                winding_efficiency: d.ratchet.winding_efficiency,
                friction_coefficient: d.ratchet.friction_coefficient,
            },
            actuator: RawActuator {
                moment_arm_length: Q::new(d.actuator.moment_arm_length),
                measured_starting_torque: opt(d.actuator.measured_starting_torque),
                coil: RawCoil {
                    turns: coil.turns,
                    mean_radius: Q::new(coil.mean_radius),
                    resistance: opt(coil.resistance),
                    wire_diameter: Q::new(coil.wire_diameter),
                    avg_field: Q::new(coil.avg_field),
                },
            },
            body: RawBody {
                drag_coefficient: d.body.drag_coefficient,
                reference_area: Q::new(d.body.reference_area),
                air_density: Q::new(d.body.air_density),
                gravity: Q::new(d.body.gravity),
                launch_efficiency: d.body.launch_efficiency,
                mass_items: d
                    .body
                    .mass_items
                    .iter()
                    .map(|m| RawMassItem {
                        label: m.label.clone(),
                        mass: Q::new(m.mass),
                    })
                    .collect(),
            },
            drive: RawDrive {
                kind: match c.drive.kind {
                    DriveKind::SquareWaveSupply => RawDriveKind::SquareWaveSupply,
                    DriveKind::PvPair => RawDriveKind::PvPair,
                },
                amplitude: Q::new(c.drive.amplitude),
                frequency: Q::new(c.drive.frequency),
            },
            optimize: c.optimize.as_ref().map(RawOptimize::from_section),
        }
    }
}

impl RawOptimize {
    fn into_section(self) -> Result<OptimizeSection, ConfigError> {
        let mut errors = Vec::new();
        let mut variables = Vec::new();
        for (i, v) in self.variables.iter().enumerate() {
            let at = format!("optimize.variables[{i}]");
            let param: Param = match v.field.parse() {
                Ok(p) => p,
                Err(e) => {
                    errors.push(format!("{at}.field: {e}"));
                    continue;
                }
            };
            let lower = v.lower.resolve(param, &format!("{at}.lower"));
            let upper = v.upper.resolve(param, &format!("{at}.upper"));
            match (lower, upper) {
                (Ok(lower), Ok(upper)) => variables.push(DesignVariable {
                    param,
                    lower,
                    upper,
                    scale: match v.scale {
                        Some(RawScale::Log) => Scale::Logarithmic,
                        _ => Scale::Linear,
                    },
                }),
                (l, u) => errors.extend(l.err().into_iter().chain(u.err())),
            }
        }
        if !errors.is_empty() {
            return Err(ConfigError::Invalid(errors));
        }
        let defaults = OptimizeSection::default();
        Ok(OptimizeSection {
            objective: match self.objective {
                RawObjective::ApexHeight => Objective::ApexHeight,
                RawObjective::JumpRate => Objective::JumpRate,
            },
            variables,
            constraints: Constraints {
                voltage_budget: unq(self.voltage_budget),
                mass_budget: unq(self.mass_budget),
                arm_mass_per_length: unq(self.arm_mass_per_length).unwrap_or(0.0),
            },
            grid_points: self.grid_points.unwrap_or(defaults.grid_points),
            max_evaluations: self.max_evaluations.unwrap_or(defaults.max_evaluations),
            allow_infeasible_start: self
                .allow_infeasible_start
                .unwrap_or(defaults.allow_infeasible_start),
        })
    }

    fn from_section(s: &OptimizeSection) -> Self {
        RawOptimize {
            objective: match s.objective {
                Objective::ApexHeight => RawObjective::ApexHeight,
                Objective::JumpRate => RawObjective::JumpRate,
            },
            grid_points: Some(s.grid_points),
            max_evaluations: Some(s.max_evaluations),
            allow_infeasible_start: Some(s.allow_infeasible_start),
            voltage_budget: opt(s.constraints.voltage_budget),
            mass_budget: opt(s.constraints.mass_budget),
            arm_mass_per_length: Some(Q::new(s.constraints.arm_mass_per_length)),
            variables: s
                .variables
                .iter()
                .map(|v| RawVariable {
                    field: v.param.path().to_string(),
                    lower: RawBound::from_value(v.param, v.lower),
                    upper: RawBound::from_value(v.param, v.upper),
                    scale: Some(match v.scale {
                        Scale::Linear => RawScale::Linear,
                        Scale::Logarithmic => RawScale::Log,
                    }),
                })
                .collect(),
        }
    }
}
