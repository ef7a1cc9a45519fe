use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Cell, GridMap, Robot, Scenario, Subtask, Task, TaskKind};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    map: MapFile,
    robots: Vec<RobotFile>,
    tasks: Vec<TaskFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    width: usize,
    height: usize,
    #[serde(default)]
    blocked: Vec<Cell>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RobotFile {
    id: usize,
    home: Cell,
    #[serde(default = "default_speed")]
    speed: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskFile {
    id: usize,
    kind: TaskKind,
    subtasks: Vec<SubtaskFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubtaskFile {
    id: usize,
    pos: Cell,
    #[serde(default = "default_duration")]
    duration: f64,
}

fn default_speed() -> f64 {
    1.0
}

fn default_duration() -> f64 {
    2.0
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

impl ScenarioFile {
    fn into_scenario(self) -> Result<Scenario> {
        let ScenarioFile { map, robots, tasks } = self;
        if map.width == 0 || map.height == 0 {
            return Err(schema("map", "width and height must be at least 1"));
        }
        for (i, c) in map.blocked.iter().enumerate() {
            if c.x >= map.width || c.y >= map.height {
                return Err(schema(
                    format!("map.blocked[{i}]"),
                    format!("cell {c} outside the {}x{} map", map.width, map.height),
                ));
            }
        }
        let grid = GridMap::with_blocked(map.width, map.height, map.blocked)?;

        let robots = robots
            .into_iter()
            .enumerate()
            .map(|(k, r)| {
                if r.id != k + 1 {
                    return Err(Error::Invariant(format!(
                        "robot ids must be consecutive from 1; robots[{k}] has id {}",
                        r.id
                    )));
                }
                Ok(Robot {
                    home: r.home,
                    speed: r.speed,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let n_subtasks: usize = tasks.iter().map(|t| t.subtasks.len()).sum();
        let mut slots: Vec<Option<Subtask>> = vec![None; n_subtasks];
        let mut out_tasks = Vec::with_capacity(tasks.len());
        for (l, t) in tasks.into_iter().enumerate() {
            if t.id != l + 1 {
                return Err(Error::Invariant(format!(
                    "task ids must be consecutive from 1; tasks[{l}] has id {}",
                    t.id
                )));
            }
            if t.subtasks.len() != t.kind.subtask_count() {
                return Err(schema(
                    format!("tasks[{l}].subtasks"),
                    format!(
                        "a {} task needs exactly {} subtask(s), found {}",
                        kind_name(t.kind),
                        t.kind.subtask_count(),
                        t.subtasks.len()
                    ),
                ));
            }
            let mut ids = Vec::with_capacity(t.subtasks.len());
            for (j, st) in t.subtasks.into_iter().enumerate() {
                if st.id == 0 || st.id > n_subtasks {
                    return Err(Error::Invariant(format!(
                        "tasks[{l}].subtasks[{j}] has id {} but subtask ids must cover 1..={n_subtasks}",
                        st.id
                    )));
                }
                let slot = &mut slots[st.id - 1];
                if slot.is_some() {
                    return Err(Error::Invariant(format!("subtask id {} used twice", st.id)));
                }
                *slot = Some(Subtask {
                    task: l,
                    pos: st.pos,
                    duration: st.duration,
                });
                ids.push(st.id - 1);
            }
            if ids.len() == 2 && ids[0] == ids[1] {
                return Err(Error::Invariant(format!(
                    "cooperative task {} needs two distinct subtasks",
                    l + 1
                )));
            }
            out_tasks.push(Task {
                kind: t.kind,
                subtasks: ids,
            });
        }
        let subtasks = slots
            .into_iter()
            .map(|s| s.expect("every id in 1..=n was assigned exactly once"))
            .collect();
        Scenario::new(grid, robots, out_tasks, subtasks)
    }

    fn from_scenario(s: &Scenario) -> Self {
        ScenarioFile {
            map: MapFile {
                width: s.map.width(),
                height: s.map.height(),
                blocked: s.map.blocked_cells().collect(),
            },
            robots: s
                .robots
                .iter()
                .enumerate()
                .map(|(k, r)| RobotFile {
                    id: k + 1,
                    home: r.home,
                    speed: r.speed,
                })
                .collect(),
            tasks: s
                .tasks
                .iter()
                .enumerate()
                .map(|(l, t)| TaskFile {
                    id: l + 1,
                    kind: t.kind,
                    subtasks: t
                        .subtasks
                        .iter()
                        .map(|&i| SubtaskFile {
                            id: i + 1,
                            pos: s.subtasks[i].pos,
                            duration: s.subtasks[i].duration,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn kind_name(kind: TaskKind) -> &'static str {
    match kind {
        TaskKind::Single => "single",
        TaskKind::Cooperative => "coop",
    }
}

/// Parses a scenario document and validates it.
pub fn parse_scenario(json: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner().to_string())
    })?;
    file.into_scenario()
}

pub fn scenario_to_json(scenario: &Scenario) -> String {
    let mut s = serde_json::to_string_pretty(&ScenarioFile::from_scenario(scenario))
        .expect("scenario serialization cannot fail");
    s.push('\n');
    s
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}

pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, scenario_to_json(scenario)).map_err(|e| Error::io(path, e))
}
