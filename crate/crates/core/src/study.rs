//! Multi-run studies: controller comparison and connectivity sweeps.

use crate::controllers::ControllerKind;
use crate::engine::{run_scenario, ScenarioConfig, SimTrace, TerminationReason};
use crate::graph::{CommGraph, GraphPolicy};
use crate::Error;

/// Fraction of the first recorded convergence cost that counts as converged.
pub const CONVERGENCE_FRACTION: f64 = 0.01;

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub controller: ControllerKind,
    pub final_weights: Vec<f64>,
    pub final_locational_cost: f64,
    pub steps: u32,
    pub termination: TerminationReason,
}

impl ComparisonRow {
    fn from_trace(trace: &SimTrace) -> Self {
        Self {
            controller: trace.controller,
            final_weights: trace.final_weights(),
            final_locational_cost: trace.final_locational_cost(),
            steps: trace.steps(),
            termination: trace.termination,
        }
    }
}

/// Runs the scenario once per controller from the same initial state.
pub fn compare_controllers(
    config: &ScenarioConfig,
    kinds: &[ControllerKind],
) -> Result<Vec<ComparisonRow>, Error> {
    kinds
        .iter()
        .map(|&k| run_scenario(&config.with_controller(k)).map(|t| ComparisonRow::from_trace(&t)))
        .collect()
}

/// First step whose convergence cost is below `fraction` of the first
/// recorded one.
pub fn steps_to_consensus(trace: &SimTrace, fraction: f64) -> Option<u32> {
    let first = trace.records.first()?.convergence_cost;
    trace
        .records
        .iter()
        .find(|r| r.convergence_cost <= fraction * first)
        .map(|r| r.step)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRun {
    pub steps: u32,
    pub termination: TerminationReason,
    pub initial_convergence_cost: f64,
    pub final_convergence_cost: f64,
    /// `None` if the run stopped before reaching the threshold.
    pub steps_to_consensus: Option<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub radius: f64,
    pub edges: usize,
    pub algebraic_connectivity: f64,
    /// `None` when the disk graph at this radius is disconnected.
    pub run: Option<SweepRun>,
}

/// Re-runs the scenario on frozen disk graphs of each radius.
pub fn sweep_connectivity(config: &ScenarioConfig, radii: &[f64]) -> Result<Vec<SweepRow>, Error> {
    let positions = config.initial_positions();
    radii
        .iter()
        .map(|&radius| {
            let graph = CommGraph::disk(&positions, radius);
            let mut row = SweepRow {
                radius,
                edges: graph.edge_count(),
                algebraic_connectivity: graph.algebraic_connectivity(),
                run: None,
            };
            if graph.is_connected() {
                let cfg = ScenarioConfig {
                    graph: GraphPolicy::Disk {
                        radius,
                        frozen: true,
                    },
                    ..config.clone()
                };
                let trace = run_scenario(&cfg)?;
                row.run = Some(SweepRun {
                    steps: trace.steps(),
                    termination: trace.termination,
                    initial_convergence_cost: trace
                        .records
                        .first()
                        .map_or(0.0, |r| r.convergence_cost),
                    final_convergence_cost: trace
                        .records
                        .last()
                        .map_or(0.0, |r| r.convergence_cost),
                    steps_to_consensus: steps_to_consensus(&trace, CONVERGENCE_FRACTION),
                });
            }
            Ok(row)
        })
        .collect()
}
