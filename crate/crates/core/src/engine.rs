//! Synchronous-round simulation of the whole team.
//!
//! Each round partitions the workspace, moves every robot toward its
//! centroid, drains batteries, exchanges energy data with neighbors and
//! updates the partition weights. Rounds repeat until every robot sits on
//! its centroid, some battery runs low, or the step cap is reached.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::controllers::{
    atc_weight_delta, clamp_speed, eac_weight_delta, pbc_velocity, pbc_weight, position_step,
    wmtc_weight, ControllerKind, Gains, NeighborReport,
};
use crate::density::DensityField;
use crate::energy::{
    depletion_rate, detect_rate_change_and_reset, estimate_rate_online, EnergyProfile, EnergyState,
    RateResetMode, DEFAULT_RATE_RESET_THRESHOLD,
};
use crate::error::{ConfigError, SimError};
use crate::geometry::{compute_power_diagram, ConvexPolygon, Point2, PowerCell, Site};
use crate::graph::{build_graph, CommGraph, GraphError, GraphPolicy};
use crate::metrics::{convergence_cost, locational_cost};

/// Initial positions closer than this are rejected as coincident.
pub const MIN_SEPARATION: f64 = 1e-6;
pub const DEFAULT_MAX_STEPS: u32 = 500;

#[derive(Clone, Debug, PartialEq)]
pub struct RobotSpec {
    pub position: Point2,
    pub profile: EnergyProfile,
}

/// Which speed the spatial depletion term is charged at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpeedSource {
    /// The robot's operating speed (`v_max`, or the energy-throttled PBC
    /// speed), every step, whether or not it is still travelling.
    #[default]
    Cruise,
    /// The distance actually moved this step.
    Measured,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateReset {
    pub threshold: f64,
    pub mode: RateResetMode,
}

impl Default for RateReset {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_RATE_RESET_THRESHOLD,
            mode: RateResetMode::TwoSided,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub domain: ConvexPolygon,
    pub density: DensityField,
    pub robots: Vec<RobotSpec>,
    pub graph: GraphPolicy,
    pub controller: ControllerKind,
    pub gains: Gains,
    pub max_steps: u32,
    /// Seed used for randomized placement; recorded for reproducibility.
    pub seed: u64,
    pub speed_source: SpeedSource,
    pub rate_reset: RateReset,
    pub initial_weight: f64,
}

impl ScenarioConfig {
    /// Checks every run-time invariant and returns the communication graph.
    pub fn validate(&self) -> Result<CommGraph, ConfigError> {
        if self.robots.is_empty() {
            return Err(ConfigError::at_key(
                "robots",
                "at least one robot is required",
            ));
        }
        if let Some((key, value)) = self.gains.first_invalid() {
            return Err(ConfigError::at_key(
                format!("gains.{key}"),
                format!("must be positive and finite, got {value}"),
            ));
        }
        if !(self.initial_weight.is_finite() && self.initial_weight > 0.0) {
            return Err(ConfigError::at_key(
                "run.initial_weight",
                format!("must be positive and finite, got {}", self.initial_weight),
            ));
        }
        if !(self.rate_reset.threshold.is_finite() && self.rate_reset.threshold > 0.0) {
            return Err(ConfigError::at_key(
                "rate_reset.threshold",
                format!(
                    "must be positive and finite, got {}",
                    self.rate_reset.threshold
                ),
            ));
        }
        for (i, r) in self.robots.iter().enumerate() {
            if !r.position.is_finite() || !self.domain.contains(r.position, 1e-9) {
                return Err(ConfigError::at_key(
                    format!("robots[{i}].position"),
                    format!("({}, {}) is outside the domain", r.position.x, r.position.y),
                ));
            }
            for (j, other) in self.robots[..i].iter().enumerate() {
                if r.position.distance(other.position) < MIN_SEPARATION {
                    return Err(ConfigError::at_key(
                        format!("robots[{i}].position"),
                        format!("coincides with robot {j}; initial positions must be distinct"),
                    ));
                }
            }
        }
        build_graph(&self.initial_positions(), self.graph).map_err(|e| match e {
            GraphError::BadRadius(_) => ConfigError::at_key("graph.radius", e.to_string()),
            _ => ConfigError::at_key("graph", e.to_string()),
        })
    }

    pub fn initial_positions(&self) -> Vec<Point2> {
        self.robots.iter().map(|r| r.position).collect()
    }

    /// Same scenario under a different controller.
    pub fn with_controller(&self, controller: ControllerKind) -> Self {
        Self {
            controller,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobotState {
    pub id: usize,
    pub position: Point2,
    pub weight: f64,
    pub energy: EnergyState,
    pub profile: EnergyProfile,
    /// Coefficients currently in force.
    pub alpha: f64,
    pub beta: f64,
}

impl RobotState {
    pub fn new(id: usize, spec: &RobotSpec, weight: f64) -> Self {
        let seg = spec.profile.segment_at(0);
        Self {
            id,
            position: spec.position,
            weight,
            energy: EnergyState::new(spec.profile.e_init()),
            profile: spec.profile.clone(),
            alpha: seg.alpha,
            beta: seg.beta,
        }
    }
}

/// Loads the depletion coefficients scheduled for `step`.
pub fn apply_schedule(state: RobotState, step: u32) -> RobotState {
    let seg = state.profile.segment_at(step);
    RobotState {
        alpha: seg.alpha,
        beta: seg.beta,
        ..state
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminationReason {
    AllAtCentroid,
    EnergyDepleted,
    StepCap,
}

impl TerminationReason {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminationReason::AllAtCentroid => "all-at-centroid",
            TerminationReason::EnergyDepleted => "energy-depleted",
            TerminationReason::StepCap => "step-cap",
        }
    }
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Stop condition for the current state. Low energy wins over centroid
/// arrival, which wins over the step cap. Cells must carry moments.
///
/// A robot counts as depleted below `delta_energy`, or when one more step
/// at its last measured drain would empty the battery.
pub fn termination_check(
    states: &[RobotState],
    cells: &[PowerCell],
    gains: &Gains,
    step: u32,
    max_steps: u32,
) -> Option<TerminationReason> {
    let depleted = |s: &RobotState| {
        let e = s.energy.e_current;
        e < gains.delta_energy
            || s.energy
                .e_dot_last
                .is_some_and(|rate| e - rate * gains.dt < 0.0)
    };
    if states.iter().any(depleted) {
        return Some(TerminationReason::EnergyDepleted);
    }
    let settled = states.iter().zip(cells).all(|(s, c)| match c.centroid {
        Some(centroid) => centroid.distance(s.position) <= gains.eps_position,
        None => true,
    });
    if settled {
        return Some(TerminationReason::AllAtCentroid);
    }
    (step >= max_steps).then_some(TerminationReason::StepCap)
}

/// One robot's row of a step record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobotRecord {
    pub position: Point2,
    pub weight: f64,
    pub energy: f64,
    /// Online depletion estimate for the step.
    pub e_dot: f64,
    pub e_init_ref: f64,
    /// Speed the spatial term was charged at.
    pub speed: f64,
    pub alpha: f64,
    pub beta: f64,
    pub rate_reset: bool,
    /// Cell of the post-step configuration.
    pub area: f64,
    pub mass: f64,
    pub centroid: Option<Point2>,
    /// 0 for an empty cell.
    pub dist_to_centroid: f64,
    pub w_times_edot: f64,
    /// `w·Ė / E_init_ref`.
    pub c_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub step: u32,
    pub robots: Vec<RobotRecord>,
    pub locational_cost: f64,
    pub convergence_cost: f64,
}

impl StepRecord {
    pub fn weights(&self) -> Vec<f64> {
        self.robots.iter().map(|r| r.weight).collect()
    }

    pub fn products(&self) -> Vec<f64> {
        self.robots.iter().map(|r| r.w_times_edot).collect()
    }

    pub fn max_dist_to_centroid(&self) -> f64 {
        self.robots
            .iter()
            .map(|r| r.dist_to_centroid)
            .fold(0.0, f64::max)
    }
}

/// Configuration before the first step.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialState {
    pub positions: Vec<Point2>,
    pub weights: Vec<f64>,
    pub energies: Vec<f64>,
    pub areas: Vec<f64>,
    pub locational_cost: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimTrace {
    pub scenario: String,
    pub controller: ControllerKind,
    pub gains: Gains,
    /// λ₂ of the graph at the start of the run.
    pub algebraic_connectivity: f64,
    pub initial: InitialState,
    /// One record per executed step, in order.
    pub records: Vec<StepRecord>,
    pub termination: TerminationReason,
}

impl SimTrace {
    pub fn steps(&self) -> u32 {
        self.records.last().map_or(0, |r| r.step)
    }

    pub fn final_weights(&self) -> Vec<f64> {
        self.records
            .last()
            .map_or_else(|| self.initial.weights.clone(), StepRecord::weights)
    }

    pub fn final_positions(&self) -> Vec<Point2> {
        self.records.last().map_or_else(
            || self.initial.positions.clone(),
            |r| r.robots.iter().map(|x| x.position).collect(),
        )
    }

    pub fn final_locational_cost(&self) -> f64 {
        self.records
            .last()
            .map_or(self.initial.locational_cost, |r| r.locational_cost)
    }
}

/// Power diagram of the given state with mass and centroid filled in.
pub fn partition(
    positions: &[Point2],
    weights: &[f64],
    domain: &ConvexPolygon,
    density: &DensityField,
) -> Result<(Vec<Site>, Vec<PowerCell>), crate::geometry::GeometryError> {
    let sites: Vec<Site> = positions
        .iter()
        .zip(weights)
        .map(|(&p, &w)| Site::new(p, w))
        .collect();
    let mut cells = compute_power_diagram(&sites, domain)?;
    for cell in &mut cells {
        cell.fill_moments(density);
    }
    Ok((sites, cells))
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<SimTrace, crate::Error> {
    let graph = config.validate()?;
    Ok(Simulation::new(config, graph).run()?)
}

struct Simulation<'a> {
    config: &'a ScenarioConfig,
    graph: CommGraph,
    robots: Vec<RobotState>,
    /// Step at which the last scheduled coefficient change happens.
    last_change: u32,
}

impl<'a> Simulation<'a> {
    fn new(config: &'a ScenarioConfig, graph: CommGraph) -> Self {
        let robots: Vec<RobotState> = config
            .robots
            .iter()
            .enumerate()
            .map(|(i, spec)| RobotState::new(i, spec, config.initial_weight))
            .collect();
        let last_change = robots
            .iter()
            .map(|r| r.profile.last_change())
            .max()
            .unwrap_or(0);
        Self {
            config,
            graph,
            robots,
            last_change,
        }
    }

    fn positions(&self) -> Vec<Point2> {
        self.robots.iter().map(|r| r.position).collect()
    }

    fn weights(&self) -> Vec<f64> {
        self.robots.iter().map(|r| r.weight).collect()
    }

    fn cells(&self, step: u32) -> Result<(Vec<Site>, Vec<PowerCell>), SimError> {
        partition(
            &self.positions(),
            &self.weights(),
            &self.config.domain,
            &self.config.density,
        )
        .map_err(|source| SimError::Geometry { step, source })
    }

    fn run(mut self) -> Result<SimTrace, SimError> {
        let cfg = self.config;
        let lambda2 = self.graph.algebraic_connectivity();
        let mut records: Vec<StepRecord> = Vec::new();
        let mut step = 0u32;
        let mut initial = None;
        let termination = loop {
            let (sites, cells) = self.cells(step)?;
            let cost = locational_cost(&cells, &sites, &cfg.density);
            match records.last_mut() {
                Some(rec) => self.finish_record(rec, &cells, cost),
                None => {
                    initial = Some(InitialState {
                        positions: self.positions(),
                        weights: self.weights(),
                        energies: self.robots.iter().map(|r| r.energy.e_current).collect(),
                        areas: cells.iter().map(|c| c.area).collect(),
                        locational_cost: cost,
                    })
                }
            }
            let reason =
                match termination_check(&self.robots, &cells, &cfg.gains, step, cfg.max_steps) {
                    // keep going until scheduled coefficient changes have played out
                    Some(TerminationReason::AllAtCentroid) if step < self.last_change => {
                        (step >= cfg.max_steps).then_some(TerminationReason::StepCap)
                    }
                    r => r,
                };
            if let Some(reason) = reason {
                break reason;
            }
            step += 1;
            records.push(self.advance(step, &cells)?);
        };
        Ok(SimTrace {
            scenario: cfg.name.clone(),
            controller: cfg.controller,
            gains: cfg.gains,
            algebraic_connectivity: lambda2,
            initial: initial.expect("the loop body runs at least once"),
            records,
            termination,
        })
    }

    /// Executes round `step` on the partition `cells` of the current state.
    fn advance(&mut self, step: u32, cells: &[PowerCell]) -> Result<StepRecord, SimError> {
        let cfg = self.config;
        let g = cfg.gains;
        let kind = cfg.controller;

        // move
        let mut speeds = Vec::with_capacity(self.robots.len());
        for (robot, cell) in self.robots.iter_mut().zip(cells) {
            let old = robot.position;
            if let Some(c) = cell.centroid {
                robot.position = match kind {
                    ControllerKind::Pbc => {
                        let v = pbc_velocity(old, c, robot.energy.e_current, g.e_max, g.pbc_gain);
                        cfg.domain.project(old + clamp_speed(v, g.v_max) * g.dt)
                    }
                    _ => position_step(old, c, g.k_p, g.v_max, g.dt, &cfg.domain),
                };
            }
            let cruise = match kind {
                ControllerKind::Pbc => {
                    (g.pbc_gain * robot.energy.e_current / g.e_max).clamp(0.0, g.v_max)
                }
                _ => g.v_max,
            };
            speeds.push(match cfg.speed_source {
                SpeedSource::Cruise => cruise,
                SpeedSource::Measured => robot.position.distance(old) / g.dt,
            });
        }

        // drain and estimate
        for (robot, &speed) in self.robots.iter_mut().zip(&speeds) {
            let state = apply_schedule(robot.clone(), step);
            let prev = state.energy.e_current;
            let drained = state
                .energy
                .step(depletion_rate(state.alpha, state.beta, speed), g.dt);
            let rate = estimate_rate_online(prev, drained.e_current, g.dt).map_err(|source| {
                SimError::Energy {
                    step,
                    robot: robot.id,
                    source,
                }
            })?;
            *robot = RobotState {
                energy: drained.with_measured_rate(rate),
                ..state
            };
        }

        if let GraphPolicy::Disk {
            radius,
            frozen: false,
        } = cfg.graph
        {
            self.graph = CommGraph::disk(&self.positions(), radius);
        }

        // Energy data is shared before the guard runs, so every robot sees
        // the same re-baselined references within the round. A battery that
        // emptied mid-step shows a spurious rate drop and is never re-baselined.
        let mut resets = vec![false; self.robots.len()];
        if step > 1 {
            for (robot, reset) in self.robots.iter_mut().zip(&mut resets) {
                if robot.energy.e_current <= 0.0 {
                    continue;
                }
                let (changed, energy) = detect_rate_change_and_reset(
                    robot.energy,
                    cfg.rate_reset.threshold,
                    cfg.rate_reset.mode,
                );
                robot.energy = energy;
                *reset = changed;
            }
        }

        let reports: Vec<NeighborReport> = self
            .robots
            .iter()
            .map(|r| NeighborReport {
                id: r.id,
                weight: r.weight,
                e_init_ref: r.energy.e_init_ref,
                e_dot: r.energy.e_dot_last.expect("rate estimated above"),
            })
            .collect();

        let mut new_weights = Vec::with_capacity(self.robots.len());
        for (i, robot) in self.robots.iter().enumerate() {
            let nbs: Vec<NeighborReport> = self
                .graph
                .neighbors(i)
                .iter()
                .map(|&j| reports[j])
                .collect();
            let mass = cells[i].mass.max(g.mass_floor);
            let w = match kind {
                ControllerKind::Eac => {
                    let dw = eac_weight_delta(&reports[i], &nbs, mass, g.k_w)
                        .map_err(|source| SimError::Control { step, source })?;
                    (robot.weight + dw * g.dt).max(g.w_floor)
                }
                ControllerKind::Atc => {
                    let dw = atc_weight_delta(&reports[i], &nbs, mass, g.k_w, g.k_e, g.alpha_atc)
                        .map_err(|source| SimError::Control { step, source })?;
                    (robot.weight + dw * g.dt).max(g.w_floor)
                }
                ControllerKind::Pbc => pbc_weight(robot.energy.e_current, g.e_max),
                ControllerKind::Wmtc => wmtc_weight(),
            };
            new_weights.push(w);
        }
        for (robot, w) in self.robots.iter_mut().zip(new_weights) {
            robot.weight = w;
        }

        let robots = self
            .robots
            .iter()
            .zip(&speeds)
            .zip(&resets)
            .map(|((r, &speed), &rate_reset)| {
                let e_dot = r.energy.e_dot_last.expect("rate estimated above");
                RobotRecord {
                    position: r.position,
                    weight: r.weight,
                    energy: r.energy.e_current,
                    e_dot,
                    e_init_ref: r.energy.e_init_ref,
                    speed,
                    alpha: r.alpha,
                    beta: r.beta,
                    rate_reset,
                    area: 0.0,
                    mass: 0.0,
                    centroid: None,
                    dist_to_centroid: 0.0,
                    w_times_edot: r.weight * e_dot,
                    c_value: r.weight * e_dot / r.energy.e_init_ref,
                }
            })
            .collect();
        Ok(StepRecord {
            step,
            robots,
            locational_cost: 0.0,
            convergence_cost: 0.0,
        })
    }

    /// Fills the geometric columns of `rec` from the post-step partition.
    fn finish_record(&self, rec: &mut StepRecord, cells: &[PowerCell], cost: f64) {
        for (r, cell) in rec.robots.iter_mut().zip(cells) {
            r.area = cell.area;
            r.mass = cell.mass;
            r.centroid = cell.centroid;
            r.dist_to_centroid = cell.centroid.map_or(0.0, |c| c.distance(r.position));
        }
        let c: Vec<f64> = rec.robots.iter().map(|r| r.c_value).collect();
        rec.locational_cost = cost;
        rec.convergence_cost = convergence_cost(&self.graph, &c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::ScheduleSegment;
    use approx::assert_relative_eq;

    fn square6() -> ConvexPolygon {
        ConvexPolygon::rectangle(0.0, 0.0, 6.0, 6.0).unwrap()
    }

    fn config(positions: &[(f64, f64)], kind: ControllerKind) -> ScenarioConfig {
        let robots = positions
            .iter()
            .map(|&(x, y)| RobotSpec {
                position: Point2::new(x, y),
                profile: EnergyProfile::constant(100.0, 1.0, 1.0).unwrap(),
            })
            .collect();
        ScenarioConfig {
            name: "test".into(),
            domain: square6(),
            density: DensityField::Uniform,
            robots,
            graph: GraphPolicy::Complete,
            controller: kind,
            gains: Gains::defaults_for(36.0, positions.len()),
            max_steps: DEFAULT_MAX_STEPS,
            seed: 0,
            speed_source: SpeedSource::Cruise,
            rate_reset: RateReset::default(),
            initial_weight: 1.0,
        }
    }

    #[test]
    fn single_robot_reaches_center() {
        let trace = run_scenario(&config(&[(1.0, 0.5)], ControllerKind::Eac)).unwrap();
        assert_eq!(trace.termination, TerminationReason::AllAtCentroid);
        let p = trace.final_positions()[0];
        assert!(p.distance(Point2::new(3.0, 3.0)) <= 0.01);
        assert_eq!(trace.records.len() as u32, trace.steps());
    }

    #[test]
    fn robot_at_centroid_runs_zero_steps() {
        let trace = run_scenario(&config(&[(3.0, 3.0)], ControllerKind::Wmtc)).unwrap();
        assert_eq!(trace.termination, TerminationReason::AllAtCentroid);
        assert!(trace.records.is_empty());
        assert_eq!(trace.final_weights(), vec![1.0]);
    }

    #[test]
    fn step_cap_applies() {
        let mut cfg = config(&[(0.5, 0.5), (1.0, 0.5)], ControllerKind::Wmtc);
        cfg.max_steps = 3;
        let trace = run_scenario(&cfg).unwrap();
        assert_eq!(trace.termination, TerminationReason::StepCap);
        assert_eq!(trace.steps(), 3);
    }

    #[test]
    fn termination_priorities() {
        let cfg = config(&[(1.0, 1.0)], ControllerKind::Eac);
        let mut s = RobotState::new(0, &cfg.robots[0], 1.0);
        let (_, cells) = partition(&[s.position], &[1.0], &cfg.domain, &cfg.density).unwrap();
        let g = cfg.gains;
        assert_eq!(termination_check(&[s.clone()], &cells, &g, 3, 500), None);
        assert_eq!(
            termination_check(&[s.clone()], &cells, &g, 500, 500),
            Some(TerminationReason::StepCap)
        );
        s.energy.e_current = 0.5;
        assert_eq!(
            termination_check(&[s.clone()], &cells, &g, 3, 500),
            Some(TerminationReason::EnergyDepleted)
        );
        s.energy.e_current = 4.0;
        s.energy.e_dot_last = Some(5.4);
        assert_eq!(
            termination_check(&[s.clone()], &cells, &g, 3, 500),
            Some(TerminationReason::EnergyDepleted)
        );
        s.energy.e_current = 50.0;
        s.position = Point2::new(3.0, 3.0);
        assert_eq!(
            termination_check(&[s], &cells, &g, 3, 500),
            Some(TerminationReason::AllAtCentroid)
        );
    }

    #[test]
    fn schedule_is_applied_by_step() {
        let profile = EnergyProfile::new(
            100.0,
            vec![
                ScheduleSegment {
                    from_step: 0,
                    alpha: 1.0,
                    beta: 1.0,
                },
                ScheduleSegment {
                    from_step: 11,
                    alpha: 1.0,
                    beta: 5.0,
                },
            ],
        )
        .unwrap();
        let s = RobotState::new(
            0,
            &RobotSpec {
                position: Point2::ORIGIN,
                profile,
            },
            1.0,
        );
        assert_eq!(apply_schedule(s.clone(), 10).beta, 1.0);
        assert_eq!(apply_schedule(s, 11).beta, 5.0);
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut cfg = config(&[(1.0, 1.0), (1.0, 1.0)], ControllerKind::Eac);
        assert!(cfg.validate().unwrap_err().message.contains("distinct"));
        cfg.robots.clear();
        assert_eq!(cfg.validate().unwrap_err().key.as_deref(), Some("robots"));
        let mut cfg = config(&[(1.0, 1.0), (5.0, 5.0)], ControllerKind::Eac);
        cfg.graph = GraphPolicy::Disk {
            radius: 1.0,
            frozen: true,
        };
        assert!(cfg.validate().unwrap_err().message.contains("disconnected"));
        let mut cfg = config(&[(7.0, 1.0)], ControllerKind::Eac);
        assert!(cfg.validate().is_err());
        cfg.robots[0].position = Point2::new(1.0, 1.0);
        cfg.gains.k_p = 0.0;
        assert_eq!(
            cfg.validate().unwrap_err().key.as_deref(),
            Some("gains.k_p")
        );
    }

    #[test]
    fn energy_drains_at_cruise_rate() {
        let mut cfg = config(&[(0.5, 0.5), (5.5, 5.5)], ControllerKind::Eac);
        cfg.max_steps = 5;
        let trace = run_scenario(&cfg).unwrap();
        for rec in &trace.records {
            for r in &rec.robots {
                assert_relative_eq!(r.e_dot, 1.4, epsilon = 1e-9);
                assert_relative_eq!(r.energy, 100.0 - 1.4 * rec.step as f64, epsilon = 1e-9);
            }
        }
    }
}
