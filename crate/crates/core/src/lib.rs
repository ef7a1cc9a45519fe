//! Multi-robot task allocation with cooperative two-robot tasks.
//!
//! The crate covers the whole pipeline used by the experiment runner:
//!
//! - [`scenario`]: grid maps, robots, tasks, A* travel times and instance generators
//! - [`encoding`]: task-permutation chromosome plus gene-apportion, mutation operators
//! - [`decoder`]: genotype to executable schedule, including cooperative task insertion
//! - [`fitness`]: per-robot completion times and the mission makespan
//! - [`engines`]: the subpopulation mutation-only GA and the tournament + PMX baseline
//! - [`stats`]: run summaries and one-way ANOVA
//! - [`experiment`]: multi-run benchmark specs and their CSV/JSON outputs
//!
//! Identifiers in files (robot, task and subtask ids) are 1-based. Inside the crate
//! every index is 0-based.

pub mod decoder;
pub mod encoding;
pub mod engines;
pub mod error;
pub mod experiment;
pub mod fitness;
pub mod scenario;
pub mod stats;

pub use decoder::{decode, decode_makespan, validate_phenotype, Phenotype, RobotSchedule, Violation, Visit};
pub use encoding::{random_genotype, ApportionSampler, Genotype, MutationOp, OperatorSet};
pub use engines::{run, run_classical_ga, run_subpop_ga, EngineKind, GaConfig, GaOverrides, RunResult};
pub use error::{Error, Result};
pub use fitness::{completion_time, robot_cost, FitnessValue};
pub use scenario::{
    astar_travel_time, build_travel_matrix, generate_scenario, load_scenario, save_scenario, Cell, GridMap, Layout,
    Robot, Scenario, Subtask, Task, TaskKind, TravelTimeMatrix,
};
pub use stats::{one_way_anova, summarize, AnovaResult, RunStats};
