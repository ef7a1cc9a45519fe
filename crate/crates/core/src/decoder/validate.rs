use std::fmt;

use super::Phenotype;
use crate::scenario::{Scenario, TaskKind};

/// Absolute tolerance for time comparisons.
const TOL: f64 = 1e-9;

/// The first constraint a schedule breaks. Ids are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    RobotCount {
        expected: usize,
        found: usize,
    },
    UnknownSubtask {
        robot: usize,
        subtask: usize,
    },
    /// A subtask is scheduled twice or not at all.
    Partition {
        subtask: usize,
        occurrences: usize,
    },
    /// Both subtasks of a cooperative task on one robot.
    Ec1 {
        task: usize,
        robot: usize,
    },
    /// A cooperative pair whose subtasks start at different times.
    Ec2 {
        task: usize,
        starts: (f64, f64),
    },
    WaitMismatch {
        robot: usize,
        subtask: usize,
    },
    NegativeWait {
        robot: usize,
        subtask: usize,
        wait: f64,
    },
    SingleWait {
        robot: usize,
        subtask: usize,
        wait: f64,
    },
    /// Arrival before the previous departure, or return before the last departure.
    TimeOrder {
        robot: usize,
        subtask: Option<usize>,
    },
    Duration {
        robot: usize,
        subtask: usize,
    },
    NonFinite {
        robot: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RobotCount { expected, found } => {
                write!(f, "schedule has {found} robots, scenario has {expected}")
            }
            Violation::UnknownSubtask { robot, subtask } => {
                write!(f, "robot {robot} visits unknown subtask {subtask}")
            }
            Violation::Partition { subtask, occurrences } => {
                write!(f, "partition: subtask {subtask} scheduled {occurrences} times")
            }
            Violation::Ec1 { task, robot } => {
                write!(f, "EC1: both subtasks of cooperative task {task} are on robot {robot}")
            }
            Violation::Ec2 { task, starts } => write!(
                f,
                "EC2: cooperative task {task} starts at {} and {}",
                starts.0, starts.1
            ),
            Violation::WaitMismatch { robot, subtask } => {
                write!(f, "robot {robot}, subtask {subtask}: start differs from arrival + wait")
            }
            Violation::NegativeWait { robot, subtask, wait } => {
                write!(f, "robot {robot}, subtask {subtask}: negative wait {wait}")
            }
            Violation::SingleWait { robot, subtask, wait } => {
                write!(f, "robot {robot}, subtask {subtask}: single-robot subtask waits {wait}")
            }
            Violation::TimeOrder { robot, subtask } => match subtask {
                Some(s) => write!(
                    f,
                    "EC3: robot {robot} reaches subtask {s} before leaving the previous one"
                ),
                None => write!(f, "EC3: robot {robot} returns home before its last departure"),
            },
            Violation::Duration { robot, subtask } => write!(
                f,
                "robot {robot}, subtask {subtask}: departure is not start + inspection time"
            ),
            Violation::NonFinite { robot } => write!(f, "robot {robot} has non-finite times"),
        }
    }
}

impl std::error::Error for Violation {}

/// Checks partition, EC1, EC2 and time consistency (EC3) of a schedule.
pub fn validate_phenotype(phenotype: &Phenotype, scenario: &Scenario) -> Result<(), Violation> {
    if phenotype.robots.len() != scenario.n_robots() {
        return Err(Violation::RobotCount {
            expected: scenario.n_robots(),
            found: phenotype.robots.len(),
        });
    }
    let n = scenario.n_subtasks();
    let mut owner = vec![usize::MAX; n];
    let mut count = vec![0usize; n];
    let mut start = vec![f64::NAN; n];

    for (k, robot) in phenotype.robots.iter().enumerate() {
        let rid = k + 1;
        let mut prev_depart = 0.0;
        for v in &robot.visits {
            let sid = v.subtask + 1;
            if v.subtask >= n {
                return Err(Violation::UnknownSubtask {
                    robot: rid,
                    subtask: sid,
                });
            }
            if ![v.arrival, v.start, v.wait, v.depart].iter().all(|t| t.is_finite()) {
                return Err(Violation::NonFinite { robot: rid });
            }
            count[v.subtask] += 1;
            owner[v.subtask] = k;
            start[v.subtask] = v.start;

            if v.arrival < prev_depart - TOL {
                return Err(Violation::TimeOrder {
                    robot: rid,
                    subtask: Some(sid),
                });
            }
            if v.wait < -TOL {
                return Err(Violation::NegativeWait {
                    robot: rid,
                    subtask: sid,
                    wait: v.wait,
                });
            }
            if (v.arrival + v.wait - v.start).abs() > TOL {
                return Err(Violation::WaitMismatch {
                    robot: rid,
                    subtask: sid,
                });
            }
            let task = scenario.subtasks[v.subtask].task;
            if scenario.tasks[task].kind == TaskKind::Single && v.wait.abs() > TOL {
                return Err(Violation::SingleWait {
                    robot: rid,
                    subtask: sid,
                    wait: v.wait,
                });
            }
            if (v.start + scenario.occupied_duration(v.subtask) - v.depart).abs() > TOL {
                return Err(Violation::Duration {
                    robot: rid,
                    subtask: sid,
                });
            }
            prev_depart = v.depart;
        }
        if !robot.completion.is_finite() {
            return Err(Violation::NonFinite { robot: rid });
        }
        if robot.completion < prev_depart - TOL {
            return Err(Violation::TimeOrder {
                robot: rid,
                subtask: None,
            });
        }
    }

    if let Some(i) = (0..n).find(|&i| count[i] != 1) {
        return Err(Violation::Partition {
            subtask: i + 1,
            occurrences: count[i],
        });
    }
    for (l, task) in scenario.tasks.iter().enumerate() {
        if task.kind != TaskKind::Cooperative {
            continue;
        }
        let (a, b) = (task.subtasks[0], task.subtasks[1]);
        if owner[a] == owner[b] {
            return Err(Violation::Ec1 {
                task: l + 1,
                robot: owner[a] + 1,
            });
        }
        if (start[a] - start[b]).abs() > TOL {
            return Err(Violation::Ec2 {
                task: l + 1,
                starts: (start[a], start[b]),
            });
        }
    }
    Ok(())
}
