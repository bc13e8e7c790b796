//! Cross-checks the closed-form beam formulas against a shooting solution of
//! EI·w'''' = 0 on a fixed-guided beam with a transverse tip load.

use jumpbot_core::model::RobotDesign;
use jumpbot_core::spring::{max_strain, stiffness_from_geometry};
use jumpbot_core::SpringSpec;
use proptest::prelude::*;

struct BeamSolution {
    tip_deflection: f64,
    peak_curvature: f64,
}

/// RK4 over y = [w, w', w'', w'''] with y' = [w', w'', w''', 0].
fn integrate(y0: [f64; 4], length: f64, n: usize) -> Vec<[f64; 4]> {
    let f = |y: [f64; 4]| [y[1], y[2], y[3], 0.0];
    let h = length / n as f64;
    let mut out = vec![y0];
    let mut y = y0;
    for _ in 0..n {
        let k1 = f(y);
        let k2 = f(std::array::from_fn(|i| y[i] + 0.5 * h * k1[i]));
        let k3 = f(std::array::from_fn(|i| y[i] + 0.5 * h * k2[i]));
        let k4 = f(std::array::from_fn(|i| y[i] + h * k3[i]));
        y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        out.push(y);
    }
    out
}

/// Clamped at x = 0 (w = w' = 0), guided at x = L (w' = 0, EI·w''' = −P).
/// The unknown root curvature and its derivative follow from two basis shots.
fn solve_fixed_guided(length: f64, ei: f64, load: f64) -> BeamSolution {
    let n = 2000;
    let a = integrate([0.0, 0.0, 1.0, 0.0], length, n);
    let b = integrate([0.0, 0.0, 0.0, 1.0], length, n);
    let (ea, eb) = (a[n], b[n]);
    // slope: ea[1]·α + eb[1]·β = 0 ; shear: ea[3]·α + eb[3]·β = −P/EI
    let rhs = -load / ei;
    let det = ea[1] * eb[3] - eb[1] * ea[3];
    let alpha = (0.0 * eb[3] - eb[1] * rhs) / det;
    let beta = (ea[1] * rhs - ea[3] * 0.0) / det;
    let peak_curvature = a
        .iter()
        .zip(&b)
        .map(|(ya, yb)| (alpha * ya[2] + beta * yb[2]).abs())
        .fold(0.0, f64::max);
    BeamSolution {
        tip_deflection: alpha * ea[0] + beta * eb[0],
        peak_curvature,
    }
}

fn oracle_stiffness(spring: &SpringSpec) -> f64 {
    let g = spring.geometry().unwrap();
    let ei = g.youngs_modulus * g.width * g.thickness.powi(3) / 12.0;
    let load = 1e-3;
    f64::from(g.count) * load / solve_fixed_guided(g.length, ei, load).tip_deflection
}

fn oracle_strain(spring: &SpringSpec, deflection: f64) -> f64 {
    let g = spring.geometry().unwrap();
    let ei = g.youngs_modulus * g.width * g.thickness.powi(3) / 12.0;
    let unit = solve_fixed_guided(g.length, ei, 1.0);
    let scale = deflection / unit.tip_deflection;
    scale * unit.peak_curvature * g.thickness / 2.0
}

#[test]
fn baseline_stiffness_matches_beam_oracle() {
    let spring = RobotDesign::baseline().spring;
    let closed = stiffness_from_geometry(&spring).unwrap();
    let oracle = oracle_stiffness(&spring);
    assert!(
        ((closed - oracle) / oracle).abs() < 0.01,
        "{closed} vs {oracle}"
    );
    assert!(((oracle - 2.5) / 2.5).abs() < 0.01, "oracle k = {oracle}");
}

#[test]
fn baseline_strain_matches_beam_oracle() {
    let spring = RobotDesign::baseline().spring;
    let closed = max_strain(&spring, 3e-3).unwrap();
    let oracle = oracle_strain(&spring, 3e-3);
    assert!(
        ((closed - oracle) / oracle).abs() < 0.10,
        "{closed} vs {oracle}"
    );
    let yield_strain = spring.material.unwrap().yield_strain;
    assert!(closed < yield_strain);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stiffness_matches_oracle_over_geometry(
        length in 2e-3f64..20e-3,
        width in 0.05e-3f64..1e-3,
        thickness in 10e-6f64..50e-6,
        count in 1u32..6,
    ) {
        prop_assume!(thickness <= width);
        let mut spring = RobotDesign::baseline().spring;
        spring.beam_length = Some(length);
        spring.beam_width = Some(width);
        spring.sheet_thickness = Some(thickness);
        spring.parallel_beam_count = count;
        let closed = stiffness_from_geometry(&spring).unwrap();
        let oracle = oracle_stiffness(&spring);
        prop_assert!(((closed - oracle) / oracle).abs() < 1e-6);
    }
}
