//! Mission objective: the latest return home over all robots.

use serde::Serialize;

use crate::decoder::{decode_makespan, Phenotype};
use crate::encoding::Genotype;
use crate::error::Result;
use crate::scenario::{Scenario, TravelTimeMatrix};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitnessValue {
    /// Completion time J, the maximum of `per_robot`.
    pub j: f64,
    pub per_robot: Vec<f64>,
}

/// Time robot `k` needs from leaving home to returning: travel, inspection and
/// waiting summed along its schedule.
pub fn robot_cost(phenotype: &Phenotype, k: usize, matrix: &TravelTimeMatrix, scenario: &Scenario) -> f64 {
    let visits = &phenotype.robots[k].visits;
    if visits.is_empty() {
        return 0.0;
    }
    let home = matrix.home_node(k);
    let mut node = home;
    let mut cost = 0.0;
    for v in visits {
        cost += matrix.time(k, node, v.subtask);
        cost += v.wait;
        cost += scenario.occupied_duration(v.subtask);
        node = v.subtask;
    }
    cost + matrix.time(k, node, home)
}

pub fn completion_time(phenotype: &Phenotype, matrix: &TravelTimeMatrix, scenario: &Scenario) -> FitnessValue {
    let per_robot: Vec<f64> = (0..phenotype.robots.len())
        .map(|k| robot_cost(phenotype, k, matrix, scenario))
        .collect();
    FitnessValue {
        j: per_robot.iter().copied().fold(0.0, f64::max),
        per_robot,
    }
}

/// Decodes `genotype` and returns its completion time J, skipping the
/// construction of the schedule.
pub fn evaluate(genotype: &Genotype, scenario: &Scenario, matrix: &TravelTimeMatrix) -> Result<f64> {
    decode_makespan(genotype, scenario, matrix)
}
