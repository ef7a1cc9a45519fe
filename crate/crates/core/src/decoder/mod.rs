//! Genotype to phenotype decoding.
//!
//! Decoding runs in two stages. First the chromosome is split into per-robot
//! task segments and every cooperative task picks the subtask closest to the
//! robot's preceding position (the carrier subtask). Then cooperative tasks are
//! resolved one at a time, in the order robots reach them: the partner subtask is
//! tried in every active slot of the other robots and committed where the pair's
//! waiting time is smallest.
//!
//! Slot activity keeps schedules executable. On each robot only the slots after
//! its last committed cooperative subtask and up to (and including the slot
//! right before) its first pending cooperative subtask are active. Committed
//! pairs therefore never move, and no two cooperative pairs can be ordered
//! differently on two robots.

mod validate;

pub use validate::{validate_phenotype, Violation};

use serde::Serialize;

use crate::encoding::Genotype;
use crate::error::{Error, Result};
use crate::scenario::{Scenario, TaskKind, TravelTimeMatrix};

/// One subtask in a robot's executed schedule. Times are seconds from mission start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Visit {
    pub subtask: usize,
    pub arrival: f64,
    pub start: f64,
    pub wait: f64,
    pub depart: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobotSchedule {
    pub visits: Vec<Visit>,
    /// Arrival back at the home base.
    pub completion: f64,
}

/// Executable per-robot schedules.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Phenotype {
    pub robots: Vec<RobotSchedule>,
}

impl Phenotype {
    /// Mission completion time: the latest return home.
    pub fn makespan(&self) -> f64 {
        self.robots.iter().map(|r| r.completion).fold(0.0, f64::max)
    }

    /// Subtask indices in execution order for every robot.
    pub fn sequences(&self) -> Vec<Vec<usize>> {
        self.robots
            .iter()
            .map(|r| r.visits.iter().map(|v| v.subtask).collect())
            .collect()
    }
}

/// Robot segments of task indices, in chromosome order.
pub fn split_chromosome(genotype: &Genotype) -> Vec<Vec<usize>> {
    genotype.segments().map(<[usize]>::to_vec).collect()
}

/// The subtask of cooperative `task` that `robot` reaches sooner from `prev_node`.
/// Ties go to the lower subtask index.
pub fn choose_carrier_subtask(
    scenario: &Scenario,
    matrix: &TravelTimeMatrix,
    robot: usize,
    prev_node: usize,
    task: usize,
) -> usize {
    let subs = &scenario.tasks[task].subtasks;
    let (a, b) = if subs[0] < subs[1] {
        (subs[0], subs[1])
    } else {
        (subs[1], subs[0])
    };
    if matrix.time(robot, prev_node, b) < matrix.time(robot, prev_node, a) {
        b
    } else {
        a
    }
}

/// An insertion position: before element `position` of `robot`'s sequence
/// (`position == len` appends).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slot {
    pub robot: usize,
    pub position: usize,
}

/// The next cooperative task to resolve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendingPair {
    pub task: usize,
    pub carrier_robot: usize,
    pub carrier_index: usize,
    pub carrier_subtask: usize,
    pub partner_subtask: usize,
    pub carrier_arrival: f64,
}

/// Intermediate decoding state. [`decode`] drives it to completion; it is public
/// so the slot rules can be inspected step by step.
#[derive(Debug, Clone)]
pub struct DecodeState<'a> {
    scenario: &'a Scenario,
    matrix: &'a TravelTimeMatrix,
    seqs: Vec<Vec<usize>>,
    arrivals: Vec<Vec<f64>>,
    /// Leading elements per robot whose times are final.
    frozen: Vec<usize>,
    frozen_depart: Vec<f64>,
    /// Carrier subtasks whose partner is not placed yet.
    pending: Vec<bool>,
    /// Common start time per committed cooperative task.
    pair_start: Vec<Option<f64>>,
    occupied: Vec<f64>,
}

impl<'a> DecodeState<'a> {
    /// Splits the chromosome, picks carrier subtasks and computes provisional
    /// arrival times without any waiting.
    pub fn new(genotype: &Genotype, scenario: &'a Scenario, matrix: &'a TravelTimeMatrix) -> Self {
        debug_assert!(genotype.validate(scenario.n_tasks(), scenario.n_robots()).is_ok());
        let n_robots = scenario.n_robots();
        let mut pending = vec![false; scenario.n_subtasks()];
        let seqs: Vec<Vec<usize>> = genotype
            .segments()
            .enumerate()
            .map(|(k, segment)| {
                let mut seq = Vec::with_capacity(segment.len() + 2);
                let mut prev = matrix.home_node(k);
                for &task in segment {
                    let t = &scenario.tasks[task];
                    let sub = match t.kind {
                        TaskKind::Single => t.subtasks[0],
                        TaskKind::Cooperative => {
                            let s = choose_carrier_subtask(scenario, matrix, k, prev, task);
                            pending[s] = true;
                            s
                        }
                    };
                    seq.push(sub);
                    prev = sub;
                }
                seq
            })
            .collect();
        let occupied = (0..scenario.n_subtasks())
            .map(|i| scenario.occupied_duration(i))
            .collect();
        let mut state = DecodeState {
            scenario,
            matrix,
            arrivals: seqs.iter().map(|s| vec![0.0; s.len()]).collect(),
            seqs,
            frozen: vec![0; n_robots],
            frozen_depart: vec![0.0; n_robots],
            pending,
            pair_start: vec![None; scenario.n_tasks()],
            occupied,
        };
        for k in 0..n_robots {
            state.recompute(k);
        }
        state
    }

    pub fn sequences(&self) -> &[Vec<usize>] {
        &self.seqs
    }

    /// Current arrival times, provisional past the frozen prefix.
    pub fn arrivals(&self) -> &[Vec<f64>] {
        &self.arrivals
    }

    fn recompute(&mut self, k: usize) {
        let table = self.matrix.robot_table(k);
        let n = self.matrix.node_count();
        let f = self.frozen[k];
        let (mut node, mut t) = if f == 0 {
            (self.matrix.home_node(k), 0.0)
        } else {
            (self.seqs[k][f - 1], self.frozen_depart[k])
        };
        for idx in f..self.seqs[k].len() {
            let s = self.seqs[k][idx];
            let a = t + table[node * n + s];
            self.arrivals[k][idx] = a;
            t = a + self.occupied[s];
            node = s;
        }
    }

    fn first_pending(&self, k: usize) -> Option<usize> {
        (self.frozen[k]..self.seqs[k].len()).find(|&i| self.pending[self.seqs[k][i]])
    }

    /// The cooperative task met first: among each robot's first pending carrier
    /// subtask, the earliest arrival; ties go to the lower task index.
    pub fn next_cooperative(&self) -> Option<PendingPair> {
        let mut best: Option<PendingPair> = None;
        for k in 0..self.seqs.len() {
            let Some(idx) = self.first_pending(k) else {
                continue;
            };
            let carrier = self.seqs[k][idx];
            let task = self.scenario.subtasks[carrier].task;
            let arrival = self.arrivals[k][idx];
            let better = match &best {
                None => true,
                Some(b) => arrival < b.carrier_arrival || (arrival == b.carrier_arrival && task < b.task),
            };
            if better {
                best = Some(PendingPair {
                    task,
                    carrier_robot: k,
                    carrier_index: idx,
                    carrier_subtask: carrier,
                    partner_subtask: self
                        .scenario
                        .partner(carrier)
                        .expect("pending subtasks belong to cooperative tasks"),
                    carrier_arrival: arrival,
                });
            }
        }
        best
    }

    /// Active insertion slots on every robot except the carrier, in robot then
    /// position order.
    pub fn active_slots(&self, carrier_robot: usize) -> Vec<Slot> {
        let mut out = Vec::new();
        for robot in (0..self.seqs.len()).filter(|&r| r != carrier_robot) {
            let hi = self.first_pending(robot).unwrap_or(self.seqs[robot].len());
            out.extend((self.frozen[robot]..=hi).map(|position| Slot { robot, position }));
        }
        out
    }

    /// Arrival time at `subtask` if it were inserted at `slot`.
    pub fn arrival_at_slot(&self, slot: Slot, subtask: usize) -> f64 {
        let Slot { robot, position } = slot;
        let (node, depart) = if position == 0 {
            (self.matrix.home_node(robot), 0.0)
        } else if position == self.frozen[robot] {
            (self.seqs[robot][position - 1], self.frozen_depart[robot])
        } else {
            let prev = self.seqs[robot][position - 1];
            (prev, self.arrivals[robot][position - 1] + self.occupied[prev])
        };
        depart + self.matrix.time(robot, node, subtask)
    }

    /// Picks the slot minimizing the pair's waiting time. Ties keep the first slot
    /// in robot then position order.
    pub fn best_slot(&self, pair: &PendingPair) -> Option<(Slot, f64)> {
        let mut best: Option<(Slot, f64)> = None;
        for slot in self.active_slots(pair.carrier_robot) {
            let wait = (self.arrival_at_slot(slot, pair.partner_subtask) - pair.carrier_arrival).abs();
            if best.is_none_or(|(_, w)| wait < w) {
                best = Some((slot, wait));
            }
        }
        best
    }

    /// Inserts the partner at `slot`, fixes the pair's common start and freezes
    /// both robots up to the pair.
    pub fn commit(&mut self, pair: &PendingPair, slot: Slot) {
        let partner_arrival = self.arrival_at_slot(slot, pair.partner_subtask);
        let start = pair.carrier_arrival.max(partner_arrival);
        let Slot { robot, position } = slot;
        self.seqs[robot].insert(position, pair.partner_subtask);
        self.arrivals[robot].insert(position, partner_arrival);
        self.pending[pair.carrier_subtask] = false;
        self.pair_start[pair.task] = Some(start);

        let depart = start + self.occupied[pair.carrier_subtask];
        self.frozen[pair.carrier_robot] = pair.carrier_index + 1;
        self.frozen_depart[pair.carrier_robot] = depart;
        self.frozen[robot] = position + 1;
        self.frozen_depart[robot] = start + self.occupied[pair.partner_subtask];
        self.recompute(pair.carrier_robot);
        self.recompute(robot);
    }

    /// Latest return home, with the same arithmetic as [`Self::into_phenotype`]
    /// but without building the schedule.
    pub fn makespan(&self) -> f64 {
        let n = self.matrix.node_count();
        let mut latest: f64 = 0.0;
        for (k, seq) in self.seqs.iter().enumerate() {
            let table = self.matrix.robot_table(k);
            let home = self.matrix.home_node(k);
            let mut node = home;
            let mut t = 0.0;
            for &s in seq {
                let arrival = t + table[node * n + s];
                let start = self.pair_start[self.scenario.subtasks[s].task].unwrap_or(arrival);
                t = start + self.occupied[s];
                node = s;
            }
            latest = latest.max(t + table[node * n + home]);
        }
        latest
    }

    /// Final forward pass producing the schedule.
    pub fn into_phenotype(self) -> Phenotype {
        let robots = self
            .seqs
            .iter()
            .enumerate()
            .map(|(k, seq)| {
                let table = self.matrix.robot_table(k);
                let n = self.matrix.node_count();
                let home = self.matrix.home_node(k);
                let mut node = home;
                let mut t = 0.0;
                let visits = seq
                    .iter()
                    .map(|&s| {
                        let arrival = t + table[node * n + s];
                        let start = match self.pair_start[self.scenario.subtasks[s].task] {
                            Some(p) => p,
                            None => arrival,
                        };
                        let depart = start + self.occupied[s];
                        t = depart;
                        node = s;
                        Visit {
                            subtask: s,
                            arrival,
                            start,
                            wait: start - arrival,
                            depart,
                        }
                    })
                    .collect();
                RobotSchedule {
                    visits,
                    completion: t + table[node * n + home],
                }
            })
            .collect();
        Phenotype { robots }
    }
}

fn resolve_all<'a>(
    genotype: &Genotype,
    scenario: &'a Scenario,
    matrix: &'a TravelTimeMatrix,
) -> Result<DecodeState<'a>> {
    let mut state = DecodeState::new(genotype, scenario, matrix);
    while let Some(pair) = state.next_cooperative() {
        let (slot, _) = state
            .best_slot(&pair)
            .ok_or(Error::NoActiveSlot { task: pair.task + 1 })?;
        state.commit(&pair, slot);
    }
    Ok(state)
}

/// Decodes a genotype into an executable schedule.
///
/// Fails only when a cooperative task has no robot other than its carrier.
pub fn decode(genotype: &Genotype, scenario: &Scenario, matrix: &TravelTimeMatrix) -> Result<Phenotype> {
    resolve_all(genotype, scenario, matrix).map(DecodeState::into_phenotype)
}

/// Completion time of the decoded schedule; equals
/// `decode(..)?.makespan()` exactly.
pub fn decode_makespan(genotype: &Genotype, scenario: &Scenario, matrix: &TravelTimeMatrix) -> Result<f64> {
    resolve_all(genotype, scenario, matrix).map(|s| s.makespan())
}
