//! Physical design records for a spring-loaded jumping robot.
//!
//! Every field is stored in SI base units (m, kg, s, N, J, Ω, T, rad).
//! Conversion from engineering units (mm, mg, µNm, ...) happens at the
//! ingestion boundary, never in here.

use std::fmt;

use crate::error::{Error, Result};

/// Electrical resistivity of annealed copper at room temperature, Ω·m.
pub const COPPER_RESISTIVITY: f64 = 1.68e-8;

/// Standard gravity used by the shipped baseline, m/s².
pub const STANDARD_GRAVITY: f64 = 9.81;

/// Winding efficiency that reproduces the observed ten-second load time at 20 Hz.
pub const CALIBRATED_WINDING_EFFICIENCY: f64 = 0.43;

/// Launch efficiency that maps the ideal 15.3 mm apex onto the observed 8 mm.
pub const CALIBRATED_LAUNCH_EFFICIENCY: f64 = 0.52;

/// Measured stall torque overcome by the prototype, N·m.
pub const MEASURED_STARTING_TORQUE: f64 = 17e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialSpec {
    pub name: String,
    /// Pa
    pub youngs_modulus: f64,
    pub yield_strain: f64,
    /// kg/m³
    pub density: f64,
}

/// Planar serpentine spring. An explicit `stiffness` wins over the value
/// derived from beam geometry; geometry is then used only for strain checks.
#[derive(Debug, Clone, PartialEq)]
pub struct SpringSpec {
    pub stiffness: Option<f64>,
    pub beam_length: Option<f64>,
    pub beam_width: Option<f64>,
    pub sheet_thickness: Option<f64>,
    pub parallel_beam_count: u32,
    pub material: Option<MaterialSpec>,
    pub max_deflection_rated: f64,
}

/// Fully specified beam geometry, available when every optional field is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry {
    pub length: f64,
    pub width: f64,
    pub thickness: f64,
    pub count: u32,
    pub youngs_modulus: f64,
}

impl SpringSpec {
    pub fn geometry(&self) -> Result<BeamGeometry> {
        let missing = |what: &str| Error::InvalidSpec(format!("spring.{what} is required"));
        let material = self.material.as_ref().ok_or_else(|| missing("material"))?;
        Ok(BeamGeometry {
            length: self.beam_length.ok_or_else(|| missing("beam_length"))?,
            width: self.beam_width.ok_or_else(|| missing("beam_width"))?,
            thickness: self
                .sheet_thickness
                .ok_or_else(|| missing("sheet_thickness"))?,
            count: self.parallel_beam_count,
            youngs_modulus: material.youngs_modulus,
        })
    }

    /// Stiffness actually used by the mechanics: the explicit value when
    /// present, otherwise the beam-theory estimate.
    pub fn effective_stiffness(&self) -> Result<f64> {
        match self.stiffness {
            Some(k) => Ok(k),
            None => crate::spring::stiffness_from_geometry(self),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReleaseSpec {
    /// Magnet-pair snap threshold, N.
    pub release_force: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatchetSpec {
    pub shaft_radius: f64,
    /// Angular spacing of the ring teeth, rad.
    pub tooth_pitch: f64,
    pub tooth_height: f64,
    /// Input arm rotation per half-cycle, rad.
    pub stroke_angle: f64,
    pub winding_efficiency: f64,
    /// Shaft/ring contact friction coefficient.
    pub friction_coefficient: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoilSpec {
    pub turns: u32,
    pub mean_radius: f64,
    pub resistance: Option<f64>,
    pub wire_diameter: f64,
    /// Average flux density seen by the winding, T.
    pub avg_field: f64,
}

impl CoilSpec {
    /// Explicit resistance, or the copper-wire estimate when none is given.
    pub fn effective_resistance(&self) -> f64 {
        self.resistance
            .unwrap_or_else(|| crate::actuator::coil_resistance_from_wire(self, COPPER_RESISTIVITY))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuatorSpec {
    pub coil: CoilSpec,
    pub moment_arm_length: f64,
    /// Experimentally determined torque that reliably starts the shaft.
    /// Reported next to the friction + spring estimate; never used in
    /// feasibility decisions.
    pub measured_starting_torque: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DriveKind {
    SquareWaveSupply,
    PvPair,
}

impl DriveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DriveKind::SquareWaveSupply => "square_wave_supply",
            DriveKind::PvPair => "pv_pair",
        }
    }
}

impl fmt::Display for DriveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DriveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square_wave_supply" => Ok(DriveKind::SquareWaveSupply),
            "pv_pair" => Ok(DriveKind::PvPair),
            other => Err(Error::InvalidSpec(format!(
                "unknown drive kind '{other}' (expected square_wave_supply or pv_pair)"
            ))),
        }
    }
}

/// Electrical excitation of the coil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSource {
    pub kind: DriveKind,
    /// Peak voltage, V.
    pub amplitude: f64,
    pub frequency: f64,
}

impl DriveSource {
    pub fn square_wave(amplitude: f64, frequency: f64) -> Self {
        DriveSource {
            kind: DriveKind::SquareWaveSupply,
            amplitude,
            frequency,
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            out.push(Violation::new(
                "DriveSource.amplitude",
                "must be finite and >= 0",
            ));
        }
        if !(self.frequency > 0.0 && self.frequency.is_finite()) {
            out.push(Violation::new(
                "DriveSource.frequency",
                "must be finite and > 0",
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassItem {
    pub label: String,
    pub mass: f64,
}

impl MassItem {
    pub fn new(label: impl Into<String>, mass: f64) -> Self {
        MassItem {
            label: label.into(),
            mass,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BodySpec {
    pub mass_items: Vec<MassItem>,
    pub drag_coefficient: f64,
    pub reference_area: f64,
    pub air_density: f64,
    pub gravity: f64,
    pub launch_efficiency: f64,
}

impl BodySpec {
    /// Lumped quadratic drag constant c in F = c·v·|v|.
    pub fn drag_constant(&self) -> f64 {
        0.5 * self.air_density * self.drag_coefficient * self.reference_area
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobotDesign {
    pub spring: SpringSpec,
    pub release: ReleaseSpec,
    pub ratchet: RatchetSpec,
    pub actuator: ActuatorSpec,
    pub body: BodySpec,
}

impl RobotDesign {
    /// Prototype robot: 2.5 N/m spring, 7.5 mN magnet release, 1 mm shaft,
    /// 8 mm arm, 384-turn coil, 75 mg body. Ideal efficiencies.
    pub fn baseline() -> Self {
        RobotDesign {
            spring: SpringSpec {
                stiffness: Some(2.5),
                // Two fixed-guided beams sized to 2.5 N/m in 25.4 µm sheet.
                beam_length: Some(8e-3),
                beam_width: Some(0.2024e-3),
                sheet_thickness: Some(25.4e-6),
                parallel_beam_count: 2,
                material: Some(MaterialSpec {
                    name: "stainless steel 301 full hard".into(),
                    youngs_modulus: 193e9,
                    yield_strain: 0.005,
                    density: 7900.0,
                }),
                max_deflection_rated: 4e-3,
            },
            release: ReleaseSpec {
                release_force: 7.5e-3,
            },
            ratchet: RatchetSpec {
                shaft_radius: 1e-3,
                tooth_pitch: 4f64.to_radians(),
                tooth_height: 25e-6,
                stroke_angle: 2f64.to_radians(),
                winding_efficiency: 1.0,
                friction_coefficient: 1.0,
            },
            actuator: ActuatorSpec {
                coil: CoilSpec {
                    turns: 48 * 8,
                    // mean of the 1.9 mm and 2.45 mm winding diameters
                    mean_radius: 1.0875e-3,
                    resistance: Some(100.0),
                    wire_diameter: 25e-6,
                    avg_field: 0.1,
                },
                moment_arm_length: 8e-3,
                measured_starting_torque: Some(MEASURED_STARTING_TORQUE),
            },
            body: BodySpec {
                mass_items: prototype_mass_items(),
                drag_coefficient: 1.2,
                // 17 mm × 14 mm frontal outline
                reference_area: 238e-6,
                air_density: 1.225,
                gravity: STANDARD_GRAVITY,
                launch_efficiency: 1.0,
            },
        }
    }

    /// Baseline with both calibrated efficiencies applied.
    pub fn calibrated() -> Self {
        let mut d = Self::baseline();
        d.ratchet.winding_efficiency = CALIBRATED_WINDING_EFFICIENCY;
        d.body.launch_efficiency = CALIBRATED_LAUNCH_EFFICIENCY;
        d
    }

    pub fn stiffness(&self) -> Result<f64> {
        self.spring.effective_stiffness()
    }

    /// Spring deflection at which the magnet pair lets go.
    pub fn release_deflection(&self) -> Result<f64> {
        let k = self.stiffness()?;
        Ok(crate::spring::release_deflection(k, &self.release))
    }

    pub fn total_mass(&self) -> Result<f64> {
        total_mass(&self.body)
    }
}

/// Mass breakdown of the assembled prototype (13 + 27 + 2×1 + 9 + 9 + 2 + 11 + 2 mg).
pub fn prototype_mass_items() -> Vec<MassItem> {
    vec![
        MassItem::new("coil", 13e-6),
        MassItem::new("magnet + moment arm", 27e-6),
        MassItem::new("PV cell 1", 1e-6),
        MassItem::new("PV cell 2", 1e-6),
        MassItem::new("base-plate + supports", 9e-6),
        MassItem::new("ratchet tube", 9e-6),
        MassItem::new("steel spring", 2e-6),
        MassItem::new("rings + connectors", 11e-6),
        MassItem::new("stand + feet", 2e-6),
    ]
}

pub fn total_mass(body: &BodySpec) -> Result<f64> {
    if body.mass_items.is_empty() {
        return Err(Error::InvalidSpec("body.mass_items is empty".into()));
    }
    // Neumaier summation: result does not depend on item order for any
    // realistic item count.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for item in &body.mass_items {
        let t = sum + item.mass;
        if sum.abs() >= item.mass.abs() {
            comp += (sum - t) + item.mass;
        } else {
            comp += (item.mass - t) + sum;
        }
        sum = t;
    }
    Ok(sum + comp)
}

/// One broken invariant: which field, and which rule it breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub rule: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, rule: impl Into<String>) -> Self {
        Violation {
            field: field.into(),
            rule: rule.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

fn non_negative(x: f64) -> bool {
    x >= 0.0 && x.is_finite()
}

/// Checks every record invariant. An empty list means every downstream
/// operation accepts the design.
pub fn validate_design(design: &RobotDesign) -> Vec<Violation> {
    let mut v = Vec::new();
    let mut check = |ok: bool, field: &str, rule: &str| {
        if !ok {
            v.push(Violation::new(field, rule));
        }
    };

    let s = &design.spring;
    if let Some(k) = s.stiffness {
        check(positive(k), "SpringSpec.stiffness", "must be > 0");
    }
    for (name, value) in [
        ("SpringSpec.beam_length", s.beam_length),
        ("SpringSpec.beam_width", s.beam_width),
        ("SpringSpec.sheet_thickness", s.sheet_thickness),
    ] {
        if let Some(x) = value {
            check(positive(x), name, "must be > 0");
        }
    }
    if let (Some(t), Some(w)) = (s.sheet_thickness, s.beam_width) {
        check(
            t <= w,
            "SpringSpec.sheet_thickness",
            "must be <= beam_width",
        );
    }
    check(
        s.parallel_beam_count >= 1,
        "SpringSpec.parallel_beam_count",
        "must be >= 1",
    );
    check(
        positive(s.max_deflection_rated),
        "SpringSpec.max_deflection_rated",
        "must be > 0",
    );
    if s.stiffness.is_none() {
        check(
            s.geometry().is_ok(),
            "SpringSpec.stiffness",
            "absent, and beam geometry is incomplete so it cannot be derived",
        );
    }
    if let Some(m) = &s.material {
        check(
            positive(m.youngs_modulus),
            "MaterialSpec.youngs_modulus",
            "must be > 0",
        );
        check(positive(m.density), "MaterialSpec.density", "must be > 0");
        check(
            positive(m.yield_strain) && m.yield_strain < 0.05,
            "MaterialSpec.yield_strain",
            "must be in (0, 0.05)",
        );
        check(
            !m.name.trim().is_empty(),
            "MaterialSpec.name",
            "must not be empty",
        );
    }

    check(
        positive(design.release.release_force),
        "ReleaseSpec.release_force",
        "must be > 0",
    );

    let r = &design.ratchet;
    check(
        positive(r.shaft_radius),
        "RatchetSpec.shaft_radius",
        "must be > 0",
    );
    check(
        positive(r.tooth_pitch),
        "RatchetSpec.tooth_pitch",
        "must be > 0",
    );
    check(
        non_negative(r.tooth_height),
        "RatchetSpec.tooth_height",
        "must be >= 0",
    );
    check(
        positive(r.stroke_angle),
        "RatchetSpec.stroke_angle",
        "must be > 0",
    );
    check(
        positive(r.winding_efficiency) && r.winding_efficiency <= 1.0,
        "RatchetSpec.winding_efficiency",
        "must be in (0, 1]",
    );
    check(
        non_negative(r.friction_coefficient),
        "RatchetSpec.friction_coefficient",
        "must be >= 0",
    );

    let a = &design.actuator;
    let c = &a.coil;
    check(c.turns >= 1, "CoilSpec.turns", "must be >= 1");
    check(
        positive(c.mean_radius),
        "CoilSpec.mean_radius",
        "must be > 0",
    );
    if let Some(res) = c.resistance {
        check(positive(res), "CoilSpec.resistance", "must be > 0");
    }
    check(
        positive(c.wire_diameter),
        "CoilSpec.wire_diameter",
        "must be > 0",
    );
    check(positive(c.avg_field), "CoilSpec.avg_field", "must be > 0");
    check(
        positive(a.moment_arm_length),
        "ActuatorSpec.moment_arm_length",
        "must be > 0",
    );
    if let Some(t) = a.measured_starting_torque {
        check(
            positive(t),
            "ActuatorSpec.measured_starting_torque",
            "must be > 0",
        );
    }

    let b = &design.body;
    check(
        !b.mass_items.is_empty(),
        "BodySpec.mass_items",
        "must not be empty",
    );
    for item in &b.mass_items {
        let field = format!("BodySpec.mass_items[{}].mass", item.label);
        check(non_negative(item.mass), &field, "must be >= 0");
    }
    if let Ok(m) = total_mass(b) {
        check(positive(m), "BodySpec.total_mass", "must be > 0");
    }
    check(
        non_negative(b.drag_coefficient),
        "BodySpec.drag_coefficient",
        "must be >= 0",
    );
    check(
        non_negative(b.reference_area),
        "BodySpec.reference_area",
        "must be >= 0",
    );
    check(
        non_negative(b.air_density),
        "BodySpec.air_density",
        "must be >= 0",
    );
    check(positive(b.gravity), "BodySpec.gravity", "must be > 0");
    check(
        positive(b.launch_efficiency) && b.launch_efficiency <= 1.0,
        "BodySpec.launch_efficiency",
        "must be in (0, 1]",
    );

    if let (Ok(k), true) = (design.stiffness(), positive(design.release.release_force)) {
        if positive(k) {
            let delta = design.release.release_force / k;
            check(
                delta <= s.max_deflection_rated,
                "RobotDesign.release_deflection",
                "release_force / stiffness must be <= spring.max_deflection_rated",
            );
        }
    }
    v
}

/// Fails with the full violation list when the design is not valid.
pub fn ensure_valid(design: &RobotDesign) -> Result<()> {
    let violations = validate_design(design);
    if violations.is_empty() {
        Ok(())
    } else {
        let joined: Vec<String> = violations.iter().map(ToString::to_string).collect();
        Err(Error::InvalidSpec(joined.join("; ")))
    }
}
