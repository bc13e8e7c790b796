//! Load–release–flight cycle.
//!
//! Winding is event-driven: every half period of the drive either advances
//! the ratchet by one stroke, returns the arm, or stalls. The magnets let go
//! when string tension reaches the release force, and the released energy
//! (scaled by the launch efficiency) becomes the take-off speed of a 1-D
//! vertical flight with quadratic drag, integrated with fixed-step RK4.
//! Heights are measured from the fully deflected (release) posture.

use crate::actuator::{available_torque, drive_waveform, required_torque};
use crate::error::{Error, Result};
use crate::model::{ensure_valid, total_mass, BodySpec, DriveSource, RobotDesign};
use crate::ratchet::{
    apply_stroke, cycles_to_release, wound_length, RatchetState, StrokeDirection,
};
use crate::spring::{check_release, stored_energy, SpringState};

/// Default flight integration step, s.
pub const DEFAULT_STEP: f64 = 1e-5;

/// Hard cap on integration steps; roughly 17 minutes of flight at 10 µs.
const MAX_FLIGHT_STEPS: usize = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlightSample {
    pub time: f64,
    pub height: f64,
    pub velocity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlightExtent {
    /// Stop at the apex.
    Apex,
    /// Continue the descent until the body is back at launch height.
    Landing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flight {
    pub apex: f64,
    pub apex_time: f64,
    /// Time back at launch height, when the descent was integrated.
    pub landing_time: Option<f64>,
    pub samples: Vec<FlightSample>,
}

pub fn launch_velocity(energy: f64, mass: f64, efficiency: f64) -> Result<f64> {
    if !(energy >= 0.0) {
        return Err(Error::Domain(format!("negative energy {energy} J")));
    }
    if !(mass > 0.0) {
        return Err(Error::Domain(format!("mass {mass} kg must be > 0")));
    }
    if !(efficiency > 0.0 && efficiency <= 1.0) {
        return Err(Error::Domain(format!(
            "efficiency {efficiency} outside (0, 1]"
        )));
    }
    Ok((2.0 * efficiency * energy / mass).sqrt())
}

/// Vacuum apex of a mass launched with `energy`: E/(m·g).
pub fn ideal_jump_height(energy: f64, mass: f64, gravity: f64) -> f64 {
    energy / (mass * gravity)
}

#[derive(Clone, Copy)]
struct Ballistics {
    gravity: f64,
    /// Drag constant divided by mass, 1/m.
    drag_per_mass: f64,
}

impl Ballistics {
    fn accel(&self, v: f64) -> f64 {
        -self.gravity - self.drag_per_mass * v * v.abs()
    }

    fn rk4(&self, h: f64, v: f64, dt: f64) -> (f64, f64) {
        let (k1h, k1v) = (v, self.accel(v));
        let v2 = v + 0.5 * dt * k1v;
        let (k2h, k2v) = (v2, self.accel(v2));
        let v3 = v + 0.5 * dt * k2v;
        let (k3h, k3v) = (v3, self.accel(v3));
        let v4 = v + dt * k3v;
        let (k4h, k4v) = (v4, self.accel(v4));
        (
            h + dt / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h),
            v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        )
    }
}

/// Integrates m·dv/dt = −m·g − ½·ρ·C_d·A·v·|v| from (0, v0).
///
/// The apex is located inside the step where velocity changes sign, with a
/// constant-acceleration (quadratic) fit across that step; it is inserted as
/// its own sample.
pub fn simulate_flight(
    v0: f64,
    body: &BodySpec,
    step: f64,
    extent: FlightExtent,
) -> Result<Flight> {
    if !(v0 >= 0.0 && v0.is_finite()) {
        return Err(Error::Domain(format!(
            "launch velocity {v0} must be finite and >= 0"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step {step} must be > 0")));
    }
    let mass = total_mass(body)?;
    let ode = Ballistics {
        gravity: body.gravity,
        drag_per_mass: body.drag_constant() / mass,
    };

    let mut samples = vec![FlightSample {
        time: 0.0,
        height: 0.0,
        velocity: v0,
    }];
    if v0 == 0.0 {
        let landing_time = (extent == FlightExtent::Landing).then_some(0.0);
        return Ok(Flight {
            apex: 0.0,
            apex_time: 0.0,
            landing_time,
            samples,
        });
    }

    let (mut h, mut v) = (0.0, v0);
    let mut apex = None;
    for i in 0..MAX_FLIGHT_STEPS {
        let t = i as f64 * step;
        let t_next = (i + 1) as f64 * step;
        let (h_next, v_next) = ode.rk4(h, v, step);
        if !(h_next.is_finite() && v_next.is_finite()) {
            return Err(Error::Integration(format!(
                "non-finite state at t = {t_next} s"
            )));
        }

        if apex.is_none() && v_next <= 0.0 {
            let a = (v_next - v) / step;
            let tau = -v / a;
            let peak = (h - v * v / (2.0 * a), t + tau);
            if peak.1 < t_next {
                samples.push(FlightSample {
                    time: peak.1,
                    height: peak.0,
                    velocity: 0.0,
                });
            }
            apex = Some(peak);
            if extent == FlightExtent::Apex {
                if peak.1 >= t_next {
                    samples.push(FlightSample {
                        time: t_next,
                        height: h_next,
                        velocity: v_next,
                    });
                }
                let (apex, apex_time) = peak;
                return Ok(Flight {
                    apex,
                    apex_time,
                    landing_time: None,
                    samples,
                });
            }
        }

        if apex.is_some() && h_next <= 0.0 {
            let frac = h / (h - h_next);
            let t_land = t + frac * step;
            let v_land = v + frac * (v_next - v);
            if t_land > samples.last().map_or(0.0, |s| s.time) {
                samples.push(FlightSample {
                    time: t_land,
                    height: 0.0,
                    velocity: v_land,
                });
            }
            let (apex, apex_time) = apex.unwrap_or_default();
            return Ok(Flight {
                apex,
                apex_time,
                landing_time: Some(t_land),
                samples,
            });
        }

        samples.push(FlightSample {
            time: t_next,
            height: h_next,
            velocity: v_next,
        });
        h = h_next;
        v = v_next;
    }
    Err(Error::Integration(format!(
        "flight did not finish within {MAX_FLIGHT_STEPS} steps"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindEvent {
    /// 1-based index of the clockwise stroke.
    pub cycle: u64,
    pub time: f64,
    pub deflection: f64,
    pub tension: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CycleOutcome {
    Released {
        time: f64,
        deflection: f64,
        energy: f64,
        launch_velocity: f64,
    },
    /// The actuator could not complete a winding stroke.
    Stalled { time: f64, deflection: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleTrace {
    pub wind_events: Vec<WindEvent>,
    pub outcome: CycleOutcome,
    /// Flight samples, time measured from lift-off. Empty on stall.
    pub flight: Vec<FlightSample>,
    pub apex_height: f64,
    /// Release time plus time to apex. `None` on stall.
    pub jump_period: Option<f64>,
    /// Flight duration back to launch height, when the descent was integrated.
    pub flight_time: Option<f64>,
}

impl CycleTrace {
    pub fn released(&self) -> bool {
        matches!(self.outcome, CycleOutcome::Released { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleOptions {
    pub step: f64,
    pub extent: FlightExtent,
}

impl Default for CycleOptions {
    fn default() -> Self {
        CycleOptions {
            step: DEFAULT_STEP,
            extent: FlightExtent::Landing,
        }
    }
}

pub fn simulate_cycle(design: &RobotDesign, source: &DriveSource) -> Result<CycleTrace> {
    simulate_cycle_with(design, source, &CycleOptions::default())
}

/// Winds the spring half-period by half-period until release or stall.
///
/// A clockwise stroke proceeds when the actuator torque covers the starting
/// torque at the deflection the stroke would reach (capped at the release
/// deflection, since the magnets let go there). The release instant is
/// interpolated inside the stroke that crosses the threshold, so the stored
/// energy handed to the flight is exactly F²/(2k).
pub fn simulate_cycle_with(
    design: &RobotDesign,
    source: &DriveSource,
    options: &CycleOptions,
) -> Result<CycleTrace> {
    ensure_valid(design)?;
    if let Some(v) = source.validate().first() {
        return Err(Error::InvalidSpec(v.to_string()));
    }
    let k = design.stiffness()?;
    let release_at = design.release_deflection()?;
    let resistance = design.actuator.coil.effective_resistance();
    let half = 0.5 / source.frequency;
    let max_half_cycles = 2 * (cycles_to_release(design)? + 1);

    let mut ratchet = RatchetState::at_rest();
    let mut deflection = 0.0;
    let mut wind_events = Vec::new();

    for j in 0..max_half_cycles {
        let t0 = j as f64 * half;
        let voltage = drive_waveform(source, t0 + 0.5 * half);
        if voltage < 0.0 {
            ratchet = apply_stroke(ratchet, StrokeDirection::Anticlockwise, &design.ratchet);
            continue;
        }
        let stalled = CycleTrace {
            wind_events: Vec::new(),
            outcome: CycleOutcome::Stalled {
                time: t0,
                deflection,
            },
            flight: Vec::new(),
            apex_height: 0.0,
            jump_period: None,
            flight_time: None,
        };
        if voltage == 0.0 {
            return Ok(CycleTrace {
                wind_events,
                ..stalled
            });
        }

        let available = available_torque(&design.actuator, voltage / resistance);
        let next = apply_stroke(ratchet, StrokeDirection::Clockwise, &design.ratchet);
        let reach = wound_length(&next, &design.ratchet);
        let required = required_torque(design, reach.min(release_at))?.total_required;
        if available < required {
            return Ok(CycleTrace {
                wind_events,
                ..stalled
            });
        }

        let cycle = ratchet.cycle_count() + 1;
        let spring = SpringState::new(k, reach)?;
        if check_release(&spring, &design.release).released {
            let frac = ((release_at - deflection) / (reach - deflection)).clamp(0.0, 1.0);
            let time = t0 + frac * half;
            wind_events.push(WindEvent {
                cycle,
                time,
                deflection: release_at,
                tension: k * release_at,
            });
            let energy = stored_energy(k, release_at)?;
            let mass = total_mass(&design.body)?;
            let v0 = launch_velocity(energy, mass, design.body.launch_efficiency)?;
            let flight = simulate_flight(v0, &design.body, options.step, options.extent)?;
            return Ok(CycleTrace {
                wind_events,
                outcome: CycleOutcome::Released {
                    time,
                    deflection: release_at,
                    energy,
                    launch_velocity: v0,
                },
                apex_height: flight.apex,
                jump_period: Some(time + flight.apex_time),
                flight_time: flight.landing_time,
                flight: flight.samples,
            });
        }

        ratchet = next;
        deflection = reach;
        wind_events.push(WindEvent {
            cycle,
            time: t0 + half,
            deflection,
            tension: k * deflection,
        });
    }
    Err(Error::Infeasible(format!(
        "no release after {max_half_cycles} half-cycles; winding model and cycle count disagree"
    )))
}

/// Jumps per minute under continuous drive. Flight time is ignored unless it
/// exceeds a tenth of the winding time.
pub fn jump_rate(design: &RobotDesign, source: &DriveSource) -> Result<f64> {
    let trace = simulate_cycle_with(
        design,
        source,
        &CycleOptions {
            step: DEFAULT_STEP,
            extent: FlightExtent::Landing,
        },
    )?;
    jump_rate_from_trace(design, source, &trace)
}

/// As [`jump_rate`], reusing an already simulated trace.
pub fn jump_rate_from_trace(
    design: &RobotDesign,
    source: &DriveSource,
    trace: &CycleTrace,
) -> Result<f64> {
    if let CycleOutcome::Stalled { deflection, .. } = trace.outcome {
        return Err(Error::NotApplicable(format!(
            "drive stalls at {deflection:e} m; the robot never jumps"
        )));
    }
    let wind_time = cycles_to_release(design)? as f64 / source.frequency;
    let flight_time = trace.flight_time.unwrap_or(0.0);
    let period = if flight_time > 0.1 * wind_time {
        wind_time + flight_time
    } else {
        wind_time
    };
    Ok(60.0 / period)
}
