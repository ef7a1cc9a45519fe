//! World model: grid map, robots with home bases, tasks and their subtasks.

mod generate;
mod grid;
mod io;
mod matrix;

pub use generate::{generate_scenario, GeneratorParams, Layout};
pub use grid::{astar_path_length, astar_travel_time, Cell, GridMap};
pub use io::{load_scenario, parse_scenario, save_scenario, scenario_to_json};
pub use matrix::{build_travel_matrix, TravelTimeMatrix};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Robot {
    pub home: Cell,
    /// Cells per second.
    pub speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Single,
    #[serde(rename = "coop")]
    Cooperative,
}

impl TaskKind {
    pub fn subtask_count(self) -> usize {
        match self {
            TaskKind::Single => 1,
            TaskKind::Cooperative => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub kind: TaskKind,
    /// Subtask indices; one for single tasks, two for cooperative tasks.
    pub subtasks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subtask {
    /// Index of the parent task.
    pub task: usize,
    /// Inspection position.
    pub pos: Cell,
    /// Inspection duration in seconds.
    pub duration: f64,
}

/// A complete problem instance.
///
/// Robots, tasks and subtasks are addressed by 0-based index; their external ids
/// are `index + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub map: GridMap,
    pub robots: Vec<Robot>,
    pub tasks: Vec<Task>,
    pub subtasks: Vec<Subtask>,
}

impl Scenario {
    /// Builds a scenario and checks every invariant.
    pub fn new(map: GridMap, robots: Vec<Robot>, tasks: Vec<Task>, subtasks: Vec<Subtask>) -> Result<Self> {
        let s = Scenario {
            map,
            robots,
            tasks,
            subtasks,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn n_robots(&self) -> usize {
        self.robots.len()
    }

    pub fn n_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn n_subtasks(&self) -> usize {
        self.subtasks.len()
    }

    pub fn n_cooperative(&self) -> usize {
        self.tasks.iter().filter(|t| t.kind == TaskKind::Cooperative).count()
    }

    /// The other subtask of a cooperative pair.
    pub fn partner(&self, subtask: usize) -> Option<usize> {
        let task = &self.tasks[self.subtasks[subtask].task];
        match task.kind {
            TaskKind::Single => None,
            TaskKind::Cooperative => task.subtasks.iter().copied().find(|&s| s != subtask),
        }
    }

    /// Time a robot is occupied inspecting `subtask`.
    ///
    /// Both robots of a cooperative pair stay for the longer of the two durations.
    pub fn occupied_duration(&self, subtask: usize) -> f64 {
        let own = self.subtasks[subtask].duration;
        match self.partner(subtask) {
            Some(p) => own.max(self.subtasks[p].duration),
            None => own,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let inv = |msg: String| Err(Error::Invariant(msg));

        if self.robots.is_empty() {
            return inv("scenario needs at least one robot".into());
        }
        for (k, r) in self.robots.iter().enumerate() {
            if !(r.speed > 0.0 && r.speed.is_finite()) {
                return inv(format!("robot {} has non-positive speed {}", k + 1, r.speed));
            }
            if !self.map.is_free(r.home) {
                return inv(format!(
                    "home base {} of robot {} is outside the map or blocked",
                    r.home,
                    k + 1
                ));
            }
        }

        let mut seen = vec![false; self.subtasks.len()];
        let mut n_single = 0;
        let mut n_coop = 0;
        for (l, t) in self.tasks.iter().enumerate() {
            if t.subtasks.len() != t.kind.subtask_count() {
                return inv(format!(
                    "task {} of kind {:?} references {} subtasks",
                    l + 1,
                    t.kind,
                    t.subtasks.len()
                ));
            }
            match t.kind {
                TaskKind::Single => n_single += 1,
                TaskKind::Cooperative => n_coop += 1,
            }
            for &i in &t.subtasks {
                if i >= self.subtasks.len() {
                    return inv(format!("task {} references unknown subtask {}", l + 1, i + 1));
                }
                if seen[i] {
                    return inv(format!("subtask {} is referenced twice", i + 1));
                }
                seen[i] = true;
                if self.subtasks[i].task != l {
                    return inv(format!(
                        "subtask {} names task {} as parent but belongs to task {}",
                        i + 1,
                        self.subtasks[i].task + 1,
                        l + 1
                    ));
                }
            }
        }
        if self.subtasks.len() != n_single + 2 * n_coop {
            return inv(format!(
                "{} subtasks declared but {} single + 2*{} cooperative tasks require {}",
                self.subtasks.len(),
                n_single,
                n_coop,
                n_single + 2 * n_coop
            ));
        }
        for (i, st) in self.subtasks.iter().enumerate() {
            if !(st.duration >= 0.0 && st.duration.is_finite()) {
                return inv(format!("subtask {} has invalid duration {}", i + 1, st.duration));
            }
            if !self.map.is_free(st.pos) {
                return inv(format!(
                    "inspection position {} of subtask {} is outside the map or blocked",
                    st.pos,
                    i + 1
                ));
            }
        }
        Ok(())
    }
}
