//! Double-ratchet state machine and string take-up.
//!
//! The input ring locks to the shaft on the clockwise stroke and slips on the
//! return; the holding ring does the opposite. Net effect: the shaft sums the
//! clockwise strokes and ignores the anticlockwise ones. The reverse direction
//! is treated as perfectly locked.

use crate::error::{Error, Result};
use crate::model::{RatchetSpec, RobotDesign};
use crate::spring::{check_release, SpringState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrokeDirection {
    Clockwise,
    Anticlockwise,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatchetState {
    shaft_angle: f64,
    input_phase: StrokeDirection,
    cycle_count: u64,
}

impl Default for RatchetState {
    fn default() -> Self {
        Self::at_rest()
    }
}

impl RatchetState {
    /// Arm parked at the end of a return stroke, nothing wound.
    pub fn at_rest() -> Self {
        RatchetState {
            shaft_angle: 0.0,
            input_phase: StrokeDirection::Anticlockwise,
            cycle_count: 0,
        }
    }

    /// Cumulative clockwise shaft rotation, rad.
    pub fn shaft_angle(&self) -> f64 {
        self.shaft_angle
    }

    /// Direction of the most recent stroke.
    pub fn input_phase(&self) -> StrokeDirection {
        self.input_phase
    }

    /// Completed clockwise-then-anticlockwise cycles.
    pub fn cycle_count(&self) -> u64 {
        self.cycle_count
    }
}

pub fn apply_stroke(
    state: RatchetState,
    direction: StrokeDirection,
    spec: &RatchetSpec,
) -> RatchetState {
    match direction {
        StrokeDirection::Clockwise => RatchetState {
            shaft_angle: state.shaft_angle + spec.stroke_angle * spec.winding_efficiency,
            input_phase: StrokeDirection::Clockwise,
            cycle_count: state.cycle_count,
        },
        StrokeDirection::Anticlockwise => RatchetState {
            shaft_angle: state.shaft_angle,
            input_phase: StrokeDirection::Anticlockwise,
            cycle_count: state.cycle_count
                + u64::from(state.input_phase == StrokeDirection::Clockwise),
        },
    }
}

/// String length taken up by the shaft. Single-layer wrap, constant radius.
pub fn wound_length(state: &RatchetState, spec: &RatchetSpec) -> f64 {
    spec.shaft_radius * state.shaft_angle
}

/// Effective string take-up per full drive cycle.
pub fn take_up_per_cycle(spec: &RatchetSpec) -> f64 {
    spec.shaft_radius * spec.stroke_angle * spec.winding_efficiency
}

/// Number of full drive cycles needed to wind the spring to its release
/// deflection.
pub fn cycles_to_release(design: &RobotDesign) -> Result<u64> {
    let target = design.release_deflection()?;
    let per_cycle = take_up_per_cycle(&design.ratchet);
    let n = (target / per_cycle).ceil();
    // Anything past this is numerically meaningless and physically absurd.
    const MAX_CYCLES: f64 = 1e12;
    if !(per_cycle > 0.0) || !n.is_finite() || n > MAX_CYCLES {
        return Err(Error::Infeasible(format!(
            "per-cycle take-up {per_cycle:e} m cannot reach {target:e} m"
        )));
    }
    Ok(n as u64)
}

/// Stroke-by-stroke count of cycles until the magnets let go. Slow; serves
/// as a cross-check on [`cycles_to_release`].
pub fn cycles_to_release_by_stepping(design: &RobotDesign, max_cycles: u64) -> Result<u64> {
    let k = design.stiffness()?;
    let mut state = RatchetState::at_rest();
    while state.cycle_count() < max_cycles {
        state = apply_stroke(state, StrokeDirection::Clockwise, &design.ratchet);
        let spring = SpringState::new(k, wound_length(&state, &design.ratchet))?;
        if check_release(&spring, &design.release).released {
            return Ok(state.cycle_count() + 1);
        }
        state = apply_stroke(state, StrokeDirection::Anticlockwise, &design.ratchet);
    }
    Err(Error::Infeasible(format!(
        "no release within {max_cycles} cycles"
    )))
}

/// Largest whole number of tooth pitches not exceeding `angle`: where the
/// shaft would come to rest if pawl engagement were the only holdback.
pub fn tooth_quantize(angle: f64, spec: &RatchetSpec) -> f64 {
    // Guard against 8°/4° landing a hair under 2.
    let teeth = (angle / spec.tooth_pitch + 1e-9).floor().max(0.0);
    teeth * spec.tooth_pitch
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec() -> RatchetSpec {
        RobotDesign::baseline().ratchet
    }

    #[test]
    fn one_cycle_advances_one_stroke() {
        let s = spec();
        let a = apply_stroke(RatchetState::at_rest(), StrokeDirection::Clockwise, &s);
        assert!((a.shaft_angle() - 2f64.to_radians()).abs() < 1e-15);
        let b = apply_stroke(a, StrokeDirection::Anticlockwise, &s);
        assert_eq!(b.shaft_angle(), a.shaft_angle());
        assert_eq!(b.cycle_count(), 1);
    }

    #[test]
    fn anticlockwise_only_is_locked() {
        let s = spec();
        let mut st = RatchetState::at_rest();
        for _ in 0..10 {
            st = apply_stroke(st, StrokeDirection::Anticlockwise, &s);
        }
        assert_eq!(st.shaft_angle(), 0.0);
        assert_eq!(st.cycle_count(), 0);
    }

    #[test]
    fn full_turn_after_180_cycles() {
        let s = spec();
        let mut st = RatchetState::at_rest();
        for _ in 0..180 {
            st = apply_stroke(st, StrokeDirection::Clockwise, &s);
            st = apply_stroke(st, StrokeDirection::Anticlockwise, &s);
        }
        assert!((st.shaft_angle() - std::f64::consts::TAU).abs() < 1e-12);
        assert_eq!(st.cycle_count(), 180);
    }

    #[test]
    fn wound_length_examples() {
        let s = spec();
        assert_eq!(wound_length(&RatchetState::at_rest(), &s), 0.0);
        let st = RatchetState {
            shaft_angle: 1.0,
            ..RatchetState::at_rest()
        };
        assert!((wound_length(&st, &s) - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn eighty_six_cycles_reach_three_mm() {
        let s = spec();
        let mut st = RatchetState::at_rest();
        for _ in 0..86 {
            st = apply_stroke(st, StrokeDirection::Clockwise, &s);
            st = apply_stroke(st, StrokeDirection::Anticlockwise, &s);
        }
        let wound = wound_length(&st, &s);
        assert!((wound - 3.0019e-3).abs() < 1e-7, "{wound}");
        assert!(wound >= 3e-3);
    }

    #[test]
    fn baseline_cycle_counts() {
        let mut d = RobotDesign::baseline();
        assert_eq!(cycles_to_release(&d).unwrap(), 86);
        assert_eq!(cycles_to_release_by_stepping(&d, 10_000).unwrap(), 86);
        d.ratchet.winding_efficiency = crate::model::CALIBRATED_WINDING_EFFICIENCY;
        assert_eq!(cycles_to_release(&d).unwrap(), 200);
        assert_eq!(cycles_to_release_by_stepping(&d, 10_000).unwrap(), 200);
    }

    #[test]
    fn doubling_shaft_radius_halves_cycles() {
        let mut d = RobotDesign::baseline();
        let n1 = cycles_to_release(&d).unwrap() as i64;
        d.ratchet.shaft_radius *= 2.0;
        let n2 = cycles_to_release(&d).unwrap() as i64;
        assert!((2 * n2 - n1).abs() <= 2, "{n1} vs {n2}");
    }

    #[test]
    fn vanishing_efficiency_is_infeasible() {
        let mut d = RobotDesign::baseline();
        d.ratchet.winding_efficiency = 1e-300;
        assert!(matches!(cycles_to_release(&d), Err(Error::Infeasible(_))));
    }

    #[test]
    fn quantize_examples() {
        let s = spec();
        assert_eq!(tooth_quantize(0.0, &s), 0.0);
        assert!((tooth_quantize(7f64.to_radians(), &s) - 4f64.to_radians()).abs() < 1e-15);
        assert!((tooth_quantize(8f64.to_radians(), &s) - 8f64.to_radians()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn shaft_never_turns_back(strokes in proptest::collection::vec(any::<bool>(), 0..200),
                                  eff in 0.01f64..=1.0) {
            let mut s = spec();
            s.winding_efficiency = eff;
            let mut st = RatchetState::at_rest();
            let mut last_wound = 0.0;
            for cw in strokes {
                let dir = if cw { StrokeDirection::Clockwise } else { StrokeDirection::Anticlockwise };
                let next = apply_stroke(st, dir, &s);
                prop_assert!(next.shaft_angle() >= st.shaft_angle());
                prop_assert!(next.cycle_count() >= st.cycle_count());
                let w = wound_length(&next, &s);
                prop_assert!(w >= last_wound);
                last_wound = w;
                st = next;
            }
        }

        #[test]
        fn repeated_locking_is_idempotent(n in 1usize..50) {
            let s = spec();
            let start = apply_stroke(RatchetState::at_rest(), StrokeDirection::Clockwise, &s);
            let once = apply_stroke(start, StrokeDirection::Anticlockwise, &s);
            let mut many = once;
            for _ in 1..n {
                many = apply_stroke(many, StrokeDirection::Anticlockwise, &s);
            }
            prop_assert_eq!(once, many);
        }

        #[test]
        fn take_up_is_linear_in_cycles(n in 1u64..500, eff in 0.05f64..=1.0) {
            let mut s = spec();
            s.winding_efficiency = eff;
            let one = wound_length(&apply_stroke(RatchetState::at_rest(), StrokeDirection::Clockwise, &s), &s);
            let mut st = RatchetState::at_rest();
            for _ in 0..n {
                st = apply_stroke(st, StrokeDirection::Clockwise, &s);
                st = apply_stroke(st, StrokeDirection::Anticlockwise, &s);
            }
            let many = wound_length(&st, &s);
            prop_assert!(((many - n as f64 * one) / many).abs() < 1e-12);
        }
    }
}
