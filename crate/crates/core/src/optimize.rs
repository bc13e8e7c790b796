//! Design evaluation and constrained, derivative-free design search.
//!
//! The cycle simulation is full of discrete events (ratchet steps, stall,
//! snap release), so the search never differentiates it. It scans a coarse
//! full-factorial grid, then runs a compass (pattern) search from the best
//! grid point. Constraints are handled by feasibility-first ranking:
//!
//! 1. any feasible point beats any infeasible one;
//! 2. feasible points: higher objective, then larger total slack;
//! 3. infeasible points: smaller total normalised violation;
//! 4. remaining ties go to the lexicographically smaller design point.

use std::cmp::Ordering;
use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::actuator::{
    available_torque, electrical_budget, required_current, required_torque, ElectricalBudget,
    TorqueBudget,
};
use crate::dynamics::{
    jump_rate_from_trace, simulate_cycle_with, CycleOptions, CycleOutcome, CycleTrace,
    FlightExtent, DEFAULT_STEP,
};
use crate::error::{Error, Result};
use crate::model::{ensure_valid, validate_design, DriveSource, RobotDesign};
use crate::param::Param;
use crate::ratchet::cycles_to_release;
use crate::spring::{max_strain, stored_energy};

/// Everything `evaluate_design` knows about one design under one drive.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignReport {
    pub stiffness: f64,
    pub release_deflection: f64,
    pub stored_energy: f64,
    /// Starting torque at the release deflection, with the drive's torque filled in.
    pub torque: TorqueBudget,
    /// Current and voltage needed to meet the starting torque at release.
    pub required: ElectricalBudget,
    /// What the drive actually delivers into the coil.
    pub drive: ElectricalBudget,
    pub measured_starting_torque: Option<f64>,
    pub strain_at_release: Option<f64>,
    pub yield_strain: Option<f64>,
    pub mass: f64,
    pub cycles_to_release: u64,
    pub released: bool,
    pub stall_deflection: Option<f64>,
    pub apex: f64,
    pub jump_rate: Option<f64>,
    pub jump_period: Option<f64>,
    /// Spring energy plus ring friction work per winding time, W.
    pub mechanical_power: Option<f64>,
}

impl DesignReport {
    pub fn torque_margin(&self) -> f64 {
        self.torque.margin()
    }

    pub fn strain_margin(&self) -> Option<f64> {
        Some(self.yield_strain? - self.strain_at_release?)
    }
}

pub fn evaluate_design(design: &RobotDesign, drive: &DriveSource) -> Result<DesignReport> {
    evaluate_design_with(design, drive, DEFAULT_STEP).map(|(report, _)| report)
}

/// As [`evaluate_design`], with an explicit integration step, also
/// returning the simulated trace.
pub fn evaluate_design_with(
    design: &RobotDesign,
    drive: &DriveSource,
    step: f64,
) -> Result<(DesignReport, CycleTrace)> {
    ensure_valid(design)?;
    let stiffness = design.stiffness()?;
    let release_deflection = design.release_deflection()?;
    let coil = &design.actuator.coil;
    let resistance = coil.effective_resistance();
    let drive_current = drive.amplitude / resistance;
    let torque = required_torque(design, release_deflection)?
        .with_available(available_torque(&design.actuator, drive_current));
    let required = electrical_budget(
        coil,
        required_current(&design.actuator, torque.total_required)?,
    );
    let strain_at_release = match design.spring.geometry() {
        Ok(_) => Some(max_strain(&design.spring, release_deflection)?),
        Err(_) => None,
    };
    let trace = simulate_cycle_with(
        design,
        drive,
        &CycleOptions {
            step,
            extent: FlightExtent::Landing,
        },
    )?;
    let stall_deflection = match trace.outcome {
        CycleOutcome::Stalled { deflection, .. } => Some(deflection),
        CycleOutcome::Released { .. } => None,
    };
    let cycles = cycles_to_release(design)?;
    let jump_rate = trace
        .released()
        .then(|| jump_rate_from_trace(design, drive, &trace))
        .transpose()?;
    let energy = stored_energy(stiffness, release_deflection)?;
    // friction work: ∫ µ·k·x dx = µ·E
    let wound_energy = energy * (1.0 + design.ratchet.friction_coefficient);
    let mechanical_power = trace
        .released()
        .then(|| wound_energy * drive.frequency / cycles as f64);
    let report = DesignReport {
        stiffness,
        release_deflection,
        stored_energy: energy,
        torque,
        required,
        drive: electrical_budget(coil, drive_current),
        measured_starting_torque: design.actuator.measured_starting_torque,
        strain_at_release,
        yield_strain: design.spring.material.as_ref().map(|m| m.yield_strain),
        mass: design.total_mass()?,
        cycles_to_release: cycles,
        released: trace.released(),
        stall_deflection,
        apex: trace.apex_height,
        jump_rate,
        jump_period: trace.jump_period,
        mechanical_power,
    };
    Ok((report, trace))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scale {
    Linear,
    Logarithmic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignVariable {
    pub param: Param,
    pub lower: f64,
    pub upper: f64,
    pub scale: Scale,
}

impl DesignVariable {
    pub fn linear(param: Param, lower: f64, upper: f64) -> Self {
        DesignVariable {
            param,
            lower,
            upper,
            scale: Scale::Linear,
        }
    }

    fn is_fixed(&self) -> bool {
        self.lower == self.upper
    }

    /// Maps a unit-interval coordinate onto the variable's range.
    pub fn value_at(&self, u: f64) -> f64 {
        if self.is_fixed() {
            return self.lower;
        }
        let u = u.clamp(0.0, 1.0);
        let v = match self.scale {
            Scale::Linear => self.lower + u * (self.upper - self.lower),
            Scale::Logarithmic => {
                let (a, b) = (self.lower.ln(), self.upper.ln());
                (a + u * (b - a)).exp()
            }
        };
        // exact endpoints regardless of rounding in the maps above
        if u == 0.0 {
            self.lower
        } else if u == 1.0 {
            self.upper
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    ApexHeight,
    JumpRate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraints {
    /// Coil voltage ceiling; defaults to the baseline drive amplitude.
    pub voltage_budget: Option<f64>,
    /// Total mass ceiling; defaults to the baseline mass.
    pub mass_budget: Option<f64>,
    /// Extra mass per metre of arm beyond the baseline length, kg/m. Zero
    /// turns the coupling off; shortening the arm is never credited.
    pub arm_mass_per_length: f64,
}

impl Default for Constraints {
    fn default() -> Self {
        Constraints {
            voltage_budget: None,
            mass_budget: None,
            arm_mass_per_length: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationProblem {
    pub variables: Vec<DesignVariable>,
    pub objective: Objective,
    pub constraints: Constraints,
    pub baseline: RobotDesign,
    pub drive: DriveSource,
    pub grid_points: usize,
    pub max_evaluations: usize,
    pub allow_infeasible_start: bool,
}

impl OptimizationProblem {
    pub const DEFAULT_GRID_POINTS: usize = 7;
    pub const DEFAULT_MAX_EVALUATIONS: usize = 2000;

    pub fn new(baseline: RobotDesign, drive: DriveSource, objective: Objective) -> Self {
        OptimizationProblem {
            variables: Vec::new(),
            objective,
            constraints: Constraints::default(),
            baseline,
            drive,
            grid_points: Self::DEFAULT_GRID_POINTS,
            max_evaluations: Self::DEFAULT_MAX_EVALUATIONS,
            allow_infeasible_start: false,
        }
    }

    pub fn with_variable(mut self, var: DesignVariable) -> Self {
        self.variables.push(var);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.variables.is_empty() {
            return bad("optimization problem has no design variables".into());
        }
        for (i, v) in self.variables.iter().enumerate() {
            if !(v.lower.is_finite() && v.upper.is_finite()) || v.lower > v.upper {
                return bad(format!(
                    "{}: bounds [{}, {}] are not ordered",
                    v.param, v.lower, v.upper
                ));
            }
            if v.scale == Scale::Logarithmic && v.lower <= 0.0 {
                return bad(format!(
                    "{}: logarithmic scale needs positive bounds",
                    v.param
                ));
            }
            if self.variables[..i].iter().any(|w| w.param == v.param) {
                return bad(format!("{} appears twice", v.param));
            }
        }
        if self.grid_points < 2 {
            return bad("grid_points must be >= 2".into());
        }
        if self.max_evaluations == 0 {
            return bad("max_evaluations must be >= 1".into());
        }
        if let Some(v) = self.drive.validate().first() {
            return bad(v.to_string());
        }
        ensure_valid(&self.baseline)
    }

    /// Design and drive at a point given in variable units.
    pub fn apply(&self, values: &[f64]) -> (RobotDesign, DriveSource) {
        let mut design = self.baseline.clone();
        let mut drive = self.drive;
        for (var, &x) in self.variables.iter().zip(values) {
            var.param.set(&mut design, &mut drive, x);
        }
        (design, drive)
    }

    fn voltage_budget(&self) -> f64 {
        self.constraints
            .voltage_budget
            .unwrap_or(self.drive.amplitude)
    }

    fn mass_budget(&self) -> Result<f64> {
        match self.constraints.mass_budget {
            Some(m) => Ok(m),
            None => self.baseline.total_mass(),
        }
    }

    /// Objective value and constraint status at a point in variable units.
    pub fn assess(&self, values: &[f64]) -> Assessment {
        let (design, drive) = self.apply(values);
        let invalid = validate_design(&design).len() + drive.validate().len();
        if invalid > 0 {
            return Assessment::invalid(invalid);
        }
        let report = match evaluate_design(&design, &drive) {
            Ok(r) => r,
            Err(_) => return Assessment::invalid(1),
        };

        let extension =
            (design.actuator.moment_arm_length - self.baseline.actuator.moment_arm_length).max(0.0);
        let mass = report.mass + self.constraints.arm_mass_per_length * extension;
        let mass_budget = match self.mass_budget() {
            Ok(m) => m,
            Err(_) => return Assessment::invalid(1),
        };
        let volt_budget = self.voltage_budget();

        let torque_slack = if report.torque.total_required > 0.0 {
            report.torque.margin() / report.torque.total_required
        } else if report.torque.available > 0.0 {
            1.0
        } else {
            -1.0
        };
        let release_slack = if report.released {
            torque_slack.max(0.0)
        } else {
            torque_slack.min(-1e-12)
        };
        let mut slacks = vec![
            release_slack,
            (volt_budget - report.required.voltage) / volt_budget.max(f64::MIN_POSITIVE),
            (mass_budget - mass) / mass_budget,
        ];
        if let (Some(eps), Some(yield_strain)) = (report.strain_at_release, report.yield_strain) {
            slacks.push((yield_strain - eps) / yield_strain);
        }
        let violation: f64 = slacks.iter().map(|s| (-s).max(0.0)).sum();
        let slack = slacks.iter().sum();
        let feasible = violation == 0.0;

        let objective = match self.objective {
            Objective::ApexHeight => report.released.then_some(report.apex),
            Objective::JumpRate => report.jump_rate,
        };
        Assessment {
            objective,
            feasible,
            violation,
            slack,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assessment {
    /// `None` when the design never jumps.
    pub objective: Option<f64>,
    pub feasible: bool,
    /// Sum of normalised constraint violations; zero iff feasible.
    pub violation: f64,
    /// Sum of normalised constraint slacks (negative parts included).
    pub slack: f64,
}

impl Assessment {
    fn invalid(count: usize) -> Self {
        Assessment {
            objective: None,
            feasible: false,
            violation: 1.0 + count as f64,
            slack: f64::NEG_INFINITY,
        }
    }

    /// Ranking without the final point tie-break.
    fn rank(&self, other: &Assessment) -> Ordering {
        match (self.feasible, other.feasible) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (true, true) => {
                let a = self.objective.unwrap_or(f64::NEG_INFINITY);
                let b = other.objective.unwrap_or(f64::NEG_INFINITY);
                b.total_cmp(&a).then(other.slack.total_cmp(&self.slack))
            }
            (false, false) => self.violation.total_cmp(&other.violation),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistoryEntry {
    /// Variable values, in problem order.
    pub point: Vec<f64>,
    pub objective: Option<f64>,
    pub feasible: bool,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_point: Vec<f64>,
    pub best_design: RobotDesign,
    pub best_drive: DriveSource,
    pub best_objective: Option<f64>,
    /// False when no evaluated point satisfied every constraint.
    pub feasible: bool,
    pub evaluations: usize,
    pub history: Vec<HistoryEntry>,
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

struct Search<'a> {
    problem: &'a OptimizationProblem,
    cache: HashMap<Vec<u64>, Assessment>,
    history: Vec<HistoryEntry>,
    assessments: Vec<Assessment>,
}

impl Search<'_> {
    fn values(&self, u: &[f64]) -> Vec<f64> {
        self.problem
            .variables
            .iter()
            .zip(u)
            .map(|(v, &x)| v.value_at(x))
            .collect()
    }

    fn key(values: &[f64]) -> Vec<u64> {
        values.iter().map(|v| v.to_bits()).collect()
    }

    fn remaining(&self) -> usize {
        self.problem
            .max_evaluations
            .saturating_sub(self.history.len())
    }

    /// Evaluates unseen points (in parallel, within budget) and returns the
    /// assessment of every requested point that has been evaluated.
    fn evaluate_many(&mut self, points: &[Vec<f64>]) -> Vec<Option<Assessment>> {
        let mut fresh: Vec<Vec<f64>> = Vec::new();
        for p in points {
            let k = Self::key(p);
            if !self.cache.contains_key(&k) && !fresh.iter().any(|q| Self::key(q) == k) {
                fresh.push(p.clone());
            }
        }
        fresh.truncate(self.remaining());
        let results: Vec<Assessment> = fresh.par_iter().map(|p| self.problem.assess(p)).collect();
        for (p, a) in fresh.into_iter().zip(results) {
            self.cache.insert(Self::key(&p), a);
            self.history.push(HistoryEntry {
                point: p,
                objective: a.objective,
                feasible: a.feasible,
                violation: a.violation,
            });
            self.assessments.push(a);
        }
        points
            .iter()
            .map(|p| self.cache.get(&Self::key(p)).copied())
            .collect()
    }
}

fn grid_axis(var: &DesignVariable, points: usize) -> Vec<f64> {
    if var.is_fixed() {
        return vec![0.0];
    }
    (0..points)
        .map(|i| i as f64 / (points - 1) as f64)
        .collect()
}

/// Grid scan followed by compass search. Deterministic for a given
/// (problem, seed); the seed only permutes the poll order of the pattern
/// stage, and polling is complete, so the returned optimum does not depend
/// on it unless the evaluation budget cuts a poll short.
pub fn optimize(problem: &OptimizationProblem, seed: u64) -> Result<OptimizationResult> {
    problem.validate()?;
    if !problem.allow_infeasible_start {
        let current: Option<Vec<f64>> = problem
            .variables
            .iter()
            .map(|v| v.param.get(&problem.baseline, &problem.drive))
            .collect();
        let start = match current {
            Some(values) => problem.assess(&values),
            None => Assessment::invalid(1),
        };
        if !start.feasible {
            return Err(Error::Infeasible(
                "baseline design violates the problem constraints; allow an infeasible start to search anyway"
                    .into(),
            ));
        }
    }

    let dims = problem.variables.len();
    let active = problem
        .variables
        .iter()
        .filter(|v| !v.is_fixed())
        .count()
        .max(1);
    // leave at least half the budget to the pattern stage
    let affordable =
        ((problem.max_evaluations as f64 / 2.0).powf(1.0 / active as f64)).floor() as usize;
    let per_axis = problem.grid_points.min(affordable.max(2));

    let mut search = Search {
        problem,
        cache: HashMap::new(),
        history: Vec::new(),
        assessments: Vec::new(),
    };

    let axes: Vec<Vec<f64>> = problem
        .variables
        .iter()
        .map(|v| grid_axis(v, per_axis))
        .collect();
    let mut grid_u: Vec<Vec<f64>> = vec![Vec::with_capacity(dims)];
    for axis in &axes {
        grid_u = grid_u
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&u| {
                    let mut p = prefix.clone();
                    p.push(u);
                    p
                })
            })
            .collect();
    }
    let grid_values: Vec<Vec<f64>> = grid_u.iter().map(|u| search.values(u)).collect();
    let grid_assess = search.evaluate_many(&grid_values);

    let mut best: Option<(usize, Assessment)> = None;
    for (i, a) in grid_assess.iter().enumerate() {
        let Some(a) = a else { continue };
        let better = match &best {
            None => true,
            Some((j, b)) => a
                .rank(b)
                .then_with(|| lexicographic(&grid_values[i], &grid_values[*j]))
                .is_lt(),
        };
        if better {
            best = Some((i, *a));
        }
    }
    let (best_index, mut center_assess) = best.ok_or_else(|| {
        Error::InvalidSpec("evaluation budget too small for a single point".into())
    })?;
    let mut center = grid_u[best_index].clone();

    // compass stage in unit coordinates
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps: Vec<f64> = problem
        .variables
        .iter()
        .map(|v| {
            if v.is_fixed() {
                0.0
            } else {
                0.5 / (per_axis - 1) as f64
            }
        })
        .collect();
    const MIN_STEP: f64 = 1e-4;
    while search.remaining() > 0 && steps.iter().any(|&s| s >= MIN_STEP) {
        let mut polls: Vec<Vec<f64>> = Vec::new();
        for (i, &s) in steps.iter().enumerate() {
            if s < MIN_STEP {
                continue;
            }
            for sign in [1.0, -1.0] {
                let mut p = center.clone();
                p[i] = (p[i] + sign * s).clamp(0.0, 1.0);
                if p[i] != center[i] {
                    polls.push(p);
                }
            }
        }
        polls.shuffle(&mut rng);
        let poll_values: Vec<Vec<f64>> = polls.iter().map(|u| search.values(u)).collect();
        let assessed = search.evaluate_many(&poll_values);

        let mut improved: Option<(usize, Assessment)> = None;
        for (idx, a) in assessed.iter().enumerate() {
            let Some(a) = a else { continue };
            if a.rank(&center_assess).is_lt() {
                let take = match &improved {
                    None => true,
                    Some((j, b)) => a
                        .rank(b)
                        .then_with(|| lexicographic(&poll_values[idx], &poll_values[*j]))
                        .is_lt(),
                };
                if take {
                    improved = Some((idx, *a));
                }
            }
        }
        match improved {
            Some((idx, a)) => {
                center = polls[idx].clone();
                center_assess = a;
            }
            None => steps.iter_mut().for_each(|s| *s *= 0.5),
        }
    }

    let best_point = search.values(&center);
    let (best_design, best_drive) = problem.apply(&best_point);
    Ok(OptimizationResult {
        best_point,
        best_design,
        best_drive,
        best_objective: center_assess.objective,
        feasible: center_assess.feasible,
        evaluations: search.history.len(),
        history: search.history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RobotDesign;

    fn drive() -> DriveSource {
        DriveSource::square_wave(0.8, 20.0)
    }

    #[test]
    fn baseline_report() {
        let r = evaluate_design(&RobotDesign::baseline(), &drive()).unwrap();
        assert!(r.released);
        assert!(
            (r.torque_margin() - 1.79e-6).abs() < 0.05e-6,
            "{}",
            r.torque_margin()
        );
        assert!(r.strain_margin().unwrap() > 0.0);
        assert_eq!(r.cycles_to_release, 86);
        // mechanical output is tiny next to the 6.4 mW of coil heating
        assert!(r.mechanical_power.unwrap() < 0.01 * r.drive.power);
    }

    #[test]
    fn stall_report() {
        let r = evaluate_design(
            &RobotDesign::baseline(),
            &DriveSource::square_wave(0.7, 20.0),
        )
        .unwrap();
        assert!(!r.released);
        assert!(r.torque_margin() < 0.0);
        assert_eq!(r.jump_rate, None);
    }

    #[test]
    fn longer_arm_more_margin() {
        let base = evaluate_design(&RobotDesign::baseline(), &drive()).unwrap();
        let mut d = RobotDesign::baseline();
        d.actuator.moment_arm_length = 16e-3;
        let long = evaluate_design(&d, &drive()).unwrap();
        assert!(long.released);
        assert!(long.torque_margin() > base.torque_margin());
    }

    #[test]
    fn degenerate_bounds_return_the_point() {
        let problem =
            OptimizationProblem::new(RobotDesign::baseline(), drive(), Objective::ApexHeight)
                .with_variable(DesignVariable::linear(Param::MomentArmLength, 8e-3, 8e-3));
        let r = optimize(&problem, 1).unwrap();
        assert_eq!(r.best_point, vec![8e-3]);
        assert_eq!(r.evaluations, 1);
        assert!(r.feasible);
    }

    #[test]
    fn empty_problem_is_rejected() {
        let problem =
            OptimizationProblem::new(RobotDesign::baseline(), drive(), Objective::ApexHeight);
        assert!(matches!(optimize(&problem, 0), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn arm_only_goes_to_upper_bound() {
        let problem =
            OptimizationProblem::new(RobotDesign::baseline(), drive(), Objective::ApexHeight)
                .with_variable(DesignVariable::linear(Param::MomentArmLength, 4e-3, 16e-3));
        let r = optimize(&problem, 3).unwrap();
        assert_eq!(r.best_point, vec![16e-3]);
    }

    #[test]
    fn softer_spring_until_deflection_rating_binds() {
        // E = F²/2k rises as k falls, until F/k hits the 4 mm rating at k = 1.875 N/m
        let problem =
            OptimizationProblem::new(RobotDesign::baseline(), drive(), Objective::ApexHeight)
                .with_variable(DesignVariable::linear(Param::SpringStiffness, 1.0, 5.0));
        let r = optimize(&problem, 0).unwrap();
        assert!(r.feasible);
        let k = r.best_point[0];
        assert!((1.875..1.875 * 1.001).contains(&k), "{k}");
    }

    #[test]
    fn budget_is_respected() {
        let mut problem =
            OptimizationProblem::new(RobotDesign::baseline(), drive(), Objective::JumpRate)
                .with_variable(DesignVariable::linear(Param::MomentArmLength, 4e-3, 16e-3))
                .with_variable(DesignVariable::linear(Param::ShaftRadius, 0.5e-3, 1.5e-3));
        problem.max_evaluations = 30;
        let r = optimize(&problem, 9).unwrap();
        assert!(r.evaluations <= 30);
        assert_eq!(r.history.len(), r.evaluations);
    }

    #[test]
    fn infeasible_baseline_needs_opt_in() {
        let mut problem = OptimizationProblem::new(
            RobotDesign::baseline(),
            DriveSource::square_wave(0.3, 20.0),
            Objective::ApexHeight,
        )
        .with_variable(DesignVariable::linear(Param::MomentArmLength, 4e-3, 8e-3));
        assert!(matches!(optimize(&problem, 0), Err(Error::Infeasible(_))));
        problem.allow_infeasible_start = true;
        let r = optimize(&problem, 0).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.best_objective, None);
    }

    #[test]
    fn log_scale_endpoints_are_exact() {
        let v = DesignVariable {
            param: Param::ShaftRadius,
            lower: 0.5e-3,
            upper: 1.5e-3,
            scale: Scale::Logarithmic,
        };
        assert_eq!(v.value_at(0.0), 0.5e-3);
        assert_eq!(v.value_at(1.0), 1.5e-3);
        assert!((v.value_at(0.5) - (0.5e-3f64 * 1.5e-3).sqrt()).abs() < 1e-15);
    }
}
