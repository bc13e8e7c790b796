//! Planar spring mechanics and the magnet snap-release threshold.
//!
//! Each serpentine beam is a fixed-guided flexure: the centre tap translates
//! out of plane without rotating, so one beam of length l, width w and
//! thickness t has tip stiffness 12·E·I/l³ with I = w·t³/12, and peak
//! surface strain 3·t·δ/l² at both clamped ends.

use crate::error::{Error, Result};
use crate::model::{ReleaseSpec, SpringSpec};

/// Beam-theory stiffness of the spring, ignoring any explicit override.
pub fn stiffness_from_geometry(spring: &SpringSpec) -> Result<f64> {
    let g = spring.geometry()?;
    if !(g.length > 0.0 && g.width > 0.0 && g.thickness > 0.0 && g.youngs_modulus > 0.0) {
        return Err(Error::InvalidSpec(
            "spring geometry must be strictly positive".into(),
        ));
    }
    if g.count == 0 {
        return Err(Error::InvalidSpec(
            "spring.parallel_beam_count must be >= 1".into(),
        ));
    }
    let inertia = g.width * g.thickness.powi(3) / 12.0;
    Ok(f64::from(g.count) * 12.0 * g.youngs_modulus * inertia / g.length.powi(3))
}

/// Restoring force of a linear spring.
pub fn spring_force(k: f64, deflection: f64) -> Result<f64> {
    if deflection < 0.0 {
        return Err(Error::Domain(format!("negative deflection {deflection} m")));
    }
    Ok(k * deflection)
}

pub fn stored_energy(k: f64, deflection: f64) -> Result<f64> {
    if deflection < 0.0 {
        return Err(Error::Domain(format!("negative deflection {deflection} m")));
    }
    Ok(0.5 * k * deflection * deflection)
}

pub fn release_deflection(k: f64, release: &ReleaseSpec) -> f64 {
    release.release_force / k
}

/// Peak surface strain of a fixed-guided beam deflected by `deflection`.
pub fn max_strain(spring: &SpringSpec, deflection: f64) -> Result<f64> {
    let g = spring.geometry()?;
    if !(g.length > 0.0 && g.thickness > 0.0) {
        return Err(Error::InvalidSpec(
            "spring geometry must be strictly positive".into(),
        ));
    }
    Ok(3.0 * g.thickness * deflection / (g.length * g.length))
}

/// Instantaneous spring state at the string attachment point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpringState {
    stiffness: f64,
    deflection: f64,
    tension: f64,
}

impl SpringState {
    pub fn new(stiffness: f64, deflection: f64) -> Result<Self> {
        if !(stiffness > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "stiffness {stiffness} must be > 0"
            )));
        }
        let tension = spring_force(stiffness, deflection)?;
        Ok(SpringState {
            stiffness,
            deflection,
            tension,
        })
    }

    pub fn stiffness(&self) -> f64 {
        self.stiffness
    }

    pub fn deflection(&self) -> f64 {
        self.deflection
    }

    pub fn tension(&self) -> f64 {
        self.tension
    }

    pub fn energy(&self) -> f64 {
        0.5 * self.stiffness * self.deflection * self.deflection
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReleaseOutcome {
    pub released: bool,
    pub deflection_at_event: f64,
    pub stored_energy_at_event: f64,
}

/// The magnets let go as soon as string tension reaches the release force.
/// No hysteresis: the same tension always gives the same answer.
pub fn check_release(state: &SpringState, release: &ReleaseSpec) -> ReleaseOutcome {
    if state.tension >= release.release_force {
        ReleaseOutcome {
            released: true,
            deflection_at_event: state.deflection,
            stored_energy_at_event: state.energy(),
        }
    } else {
        ReleaseOutcome {
            released: false,
            deflection_at_event: 0.0,
            stored_energy_at_event: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RobotDesign;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn force_examples() {
        assert!(rel(spring_force(2.5, 3e-3).unwrap(), 7.5e-3) < 1e-12);
        assert_eq!(spring_force(2.5, 0.0).unwrap(), 0.0);
        assert!(rel(spring_force(5.0, 1.5e-3).unwrap(), 7.5e-3) < 1e-12);
        assert!(matches!(spring_force(2.5, -1e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn energy_examples() {
        assert!(rel(stored_energy(2.5, 3e-3).unwrap(), 11.25e-6) < 1e-12);
        assert_eq!(stored_energy(7.0, 0.0).unwrap(), 0.0);
        assert!(rel(stored_energy(2.5, 1.5e-3).unwrap(), 2.8125e-6) < 1e-12);
    }

    #[test]
    fn release_deflection_examples() {
        let r = ReleaseSpec {
            release_force: 7.5e-3,
        };
        assert!(rel(release_deflection(2.5, &r), 3e-3) < 1e-12);
        assert!(rel(release_deflection(7.5, &r), 1e-3) < 1e-12);
        let r2 = ReleaseSpec {
            release_force: 15e-3,
        };
        assert!(rel(release_deflection(2.5, &r2), 6e-3) < 1e-12);
    }

    #[test]
    fn release_threshold() {
        let r = ReleaseSpec {
            release_force: 7.5e-3,
        };
        let at = SpringState::new(2.5, 3e-3).unwrap();
        let out = check_release(&at, &r);
        assert!(out.released);
        assert!(rel(out.stored_energy_at_event, 11.25e-6) < 1e-12);
        let below = SpringState::new(2.5, 7.4e-3 / 2.5).unwrap();
        assert!(!check_release(&below, &r).released);
        let zero = SpringState::new(2.5, 0.0).unwrap();
        assert!(!check_release(&zero, &r).released);
    }

    #[test]
    fn geometry_scaling() {
        let base = RobotDesign::baseline().spring;
        let k0 = stiffness_from_geometry(&base).unwrap();
        let mut wide = base.clone();
        wide.beam_width = wide.beam_width.map(|w| 2.0 * w);
        assert_eq!(stiffness_from_geometry(&wide).unwrap() / k0, 2.0);
        let mut short = base.clone();
        short.beam_length = short.beam_length.map(|l| 0.5 * l);
        assert!((stiffness_from_geometry(&short).unwrap() / k0 - 8.0).abs() < 1e-12);
    }

    #[test]
    fn baseline_geometry_hits_target_stiffness() {
        let k = stiffness_from_geometry(&RobotDesign::baseline().spring).unwrap();
        assert!(rel(k, 2.5) < 0.01, "k = {k}");
    }

    #[test]
    fn missing_material_is_invalid() {
        let mut s = RobotDesign::baseline().spring;
        s.material = None;
        assert!(matches!(
            stiffness_from_geometry(&s),
            Err(Error::InvalidSpec(_))
        ));
        s = RobotDesign::baseline().spring;
        s.beam_length = None;
        assert!(matches!(max_strain(&s, 1e-3), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn strain_zero_and_linear() {
        let s = RobotDesign::baseline().spring;
        assert_eq!(max_strain(&s, 0.0).unwrap(), 0.0);
        let e1 = max_strain(&s, 1.3e-3).unwrap();
        let e2 = max_strain(&s, 2.6e-3).unwrap();
        assert!(rel(e2, 2.0 * e1) < 1e-12);
    }

    proptest! {
        #[test]
        fn energy_is_integral_of_force(k in 0.01f64..100.0, delta in 1e-6f64..1e-2) {
            // composite Simpson over n panels is exact for a linear integrand
            let n = 64;
            let h = delta / n as f64;
            let mut acc = spring_force(k, 0.0).unwrap() + spring_force(k, delta).unwrap();
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * spring_force(k, i as f64 * h).unwrap();
            }
            let quad = acc * h / 3.0;
            prop_assert!(rel(stored_energy(k, delta).unwrap(), quad) < 1e-9);
        }

        #[test]
        fn release_is_monotone(k in 0.1f64..10.0, d1 in 0.0f64..5e-3, extra in 0.0f64..5e-3, f in 1e-3f64..2e-2) {
            let r = ReleaseSpec { release_force: f };
            let lo = SpringState::new(k, d1).unwrap();
            let hi = SpringState::new(k, d1 + extra).unwrap();
            if check_release(&lo, &r).released {
                prop_assert!(check_release(&hi, &r).released);
            }
        }

        #[test]
        fn release_deflection_inverts_force(k in 0.01f64..100.0, f in 1e-4f64..1.0) {
            let r = ReleaseSpec { release_force: f };
            let back = spring_force(k, release_deflection(k, &r)).unwrap();
            prop_assert!(rel(back, f) < 1e-12);
        }

        #[test]
        fn tension_matches_stiffness(k in 0.01f64..100.0, d in 0.0f64..1e-2) {
            let s = SpringState::new(k, d).unwrap();
            prop_assert!((s.tension() - k * d).abs() <= 1e-12 * (k * d).abs());
        }
    }
}
