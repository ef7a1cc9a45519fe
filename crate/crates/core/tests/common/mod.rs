//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls the decoder or the path planner under test; the helpers
//! recompute everything from the raw scenario data.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use mrta_core::{Cell, Genotype, GridMap, Robot, Scenario, Subtask, Task, TaskKind, TravelTimeMatrix};
use rand::seq::SliceRandom;
use rand::Rng;

// ---------------------------------------------------------------- paths

#[derive(PartialEq)]
struct Node(f64, usize);

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Single-source shortest path lengths over the 8-connected grid, indexed
/// `y * width + x`. Diagonal moves need both side cells free.
pub fn dijkstra(map: &GridMap, from: Cell) -> Vec<f64> {
    let (w, h) = (map.width(), map.height());
    let free = |x: isize, y: isize| {
        x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h && map.is_free(Cell::new(x as usize, y as usize))
    };
    let mut dist = vec![f64::INFINITY; w * h];
    let mut heap = BinaryHeap::new();
    dist[from.y * w + from.x] = 0.0;
    heap.push(Node(0.0, from.y * w + from.x));
    while let Some(Node(d, i)) = heap.pop() {
        if d > dist[i] {
            continue;
        }
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        for dx in -1..=1isize {
            for dy in -1..=1isize {
                if (dx, dy) == (0, 0) || !free(x + dx, y + dy) {
                    continue;
                }
                let step = if dx != 0 && dy != 0 {
                    if !free(x + dx, y) || !free(x, y + dy) {
                        continue;
                    }
                    std::f64::consts::SQRT_2
                } else {
                    1.0
                };
                let j = (y + dy) as usize * w + (x + dx) as usize;
                if d + step < dist[j] {
                    dist[j] = d + step;
                    heap.push(Node(d + step, j));
                }
            }
        }
    }
    dist
}

/// Random map with roughly `density` blocked cells.
pub fn random_map<R: Rng>(w: usize, h: usize, density: f64, rng: &mut R) -> GridMap {
    let mut map = GridMap::new(w, h).unwrap();
    for y in 0..h {
        for x in 0..w {
            if rng.random_bool(density) {
                map.set_blocked(Cell::new(x, y), true);
            }
        }
    }
    map
}

// ---------------------------------------------------------------- instances

/// Open-map instance with mixed speeds and durations. Cooperative tasks come
/// after the single tasks.
pub fn random_instance<R: Rng>(rng: &mut R, size: usize, n_single: usize, n_coop: usize, n_robots: usize) -> Scenario {
    let map = GridMap::new(size, size).unwrap();
    let mut cells: Vec<Cell> = (0..size * size).map(|i| Cell::new(i % size, i / size)).collect();
    cells.shuffle(rng);
    let mut cells = cells.into_iter();
    let robots = (0..n_robots)
        .map(|_| Robot {
            home: cells.next().unwrap(),
            speed: [1.0, 1.0, 1.5, 0.8][rng.random_range(0..4)],
        })
        .collect();
    let mut tasks = Vec::new();
    let mut subtasks = Vec::new();
    for t in 0..n_single + n_coop {
        let coop = t >= n_single;
        let n = if coop { 2 } else { 1 };
        tasks.push(Task {
            kind: if coop { TaskKind::Cooperative } else { TaskKind::Single },
            subtasks: (subtasks.len()..subtasks.len() + n).collect(),
        });
        for _ in 0..n {
            subtasks.push(Subtask {
                task: t,
                pos: cells.next().unwrap(),
                duration: rng.random_range(1..=4) as f64 * 0.5,
            });
        }
    }
    Scenario::new(map, robots, tasks, subtasks).unwrap()
}

/// Robot segments from the apportion, written out from its definition.
pub fn segments(g: &Genotype) -> Vec<Vec<usize>> {
    let mut bounds = vec![0];
    bounds.extend(&g.apportion);
    bounds.push(g.chromosome.len());
    bounds.windows(2).map(|w| g.chromosome[w[0]..w[1]].to_vec()).collect()
}

// ---------------------------------------------------------------- replay

fn partner(s: &Scenario, sub: usize) -> Option<usize> {
    let t = &s.tasks[s.subtasks[sub].task];
    (t.kind == TaskKind::Cooperative).then(|| {
        if t.subtasks[0] == sub {
            t.subtasks[1]
        } else {
            t.subtasks[0]
        }
    })
}

fn occupied(s: &Scenario, sub: usize) -> f64 {
    let own = s.subtasks[sub].duration;
    partner(s, sub).map_or(own, |p| own.max(s.subtasks[p].duration))
}

#[derive(Debug, Clone)]
pub struct Replay {
    pub arrival: Vec<Vec<f64>>,
    pub start: Vec<Vec<f64>>,
    pub completion: Vec<f64>,
}

impl Replay {
    pub fn makespan(&self) -> f64 {
        self.completion.iter().copied().fold(0.0, f64::max)
    }

    pub fn position(&self, seqs: &[Vec<usize>], sub: usize) -> (usize, usize) {
        seqs.iter()
            .enumerate()
            .find_map(|(k, q)| q.iter().position(|&x| x == sub).map(|i| (k, i)))
            .unwrap()
    }
}

/// Executes the sequences as robots would: travel, wait at a synchronised
/// cooperative subtask until the partner robot arrives at its half, inspect,
/// move on. Returns `None` on a deadlock (robots waiting for each other).
///
/// Cooperative tasks for which `synced` is false are executed without waiting.
pub fn replay(
    s: &Scenario,
    m: &TravelTimeMatrix,
    seqs: &[Vec<usize>],
    synced: &dyn Fn(usize) -> bool,
) -> Option<Replay> {
    let nr = seqs.len();
    let mut idx = vec![0usize; nr];
    let mut clock = vec![0.0f64; nr];
    let mut node: Vec<usize> = (0..nr).map(|k| m.home_node(k)).collect();
    let mut arrival: Vec<Vec<f64>> = seqs.iter().map(|q| vec![f64::NAN; q.len()]).collect();
    let mut start = arrival.clone();
    loop {
        let mut progressed = false;
        for k in 0..nr {
            let Some(&sub) = seqs[k].get(idx[k]) else { continue };
            let a = clock[k] + m.time(k, node[k], sub);
            let sync_with = partner(s, sub).filter(|_| synced(s.subtasks[sub].task));
            match sync_with {
                None => {
                    arrival[k][idx[k]] = a;
                    start[k][idx[k]] = a;
                    clock[k] = a + occupied(s, sub);
                    node[k] = sub;
                    idx[k] += 1;
                    progressed = true;
                }
                Some(p) => {
                    let Some(k2) = (0..nr).find(|&r| r != k && seqs[r].get(idx[r]) == Some(&p)) else {
                        continue;
                    };
                    let a2 = clock[k2] + m.time(k2, node[k2], p);
                    let st = a.max(a2);
                    for (r, sb, ar) in [(k, sub, a), (k2, p, a2)] {
                        arrival[r][idx[r]] = ar;
                        start[r][idx[r]] = st;
                        clock[r] = st + occupied(s, sb);
                        node[r] = sb;
                        idx[r] += 1;
                    }
                    progressed = true;
                }
            }
        }
        if !progressed {
            break;
        }
    }
    if (0..nr).any(|k| idx[k] < seqs[k].len()) {
        return None;
    }
    let completion = (0..nr).map(|k| clock[k] + m.time(k, node[k], m.home_node(k))).collect();
    Some(Replay {
        arrival,
        start,
        completion,
    })
}

// ---------------------------------------------------------------- reference decoder

#[derive(Debug, Clone)]
pub struct PairChoice {
    pub task: usize,
    /// Pair waiting time of the slot the reference committed.
    pub wait: f64,
    /// Pair waiting time for every admissible slot, in robot then position order.
    pub candidates: Vec<((usize, usize), f64)>,
}

#[derive(Debug, Clone)]
pub struct Reference {
    pub seqs: Vec<Vec<usize>>,
    pub pairs: Vec<PairChoice>,
    pub replay: Replay,
}

/// Brute-force re-derivation of the decoding rules. Every tentative insertion
/// is evaluated by a full replay of the current sequences.
pub fn reference_decode(g: &Genotype, s: &Scenario, m: &TravelTimeMatrix) -> Option<Reference> {
    let mut seqs: Vec<Vec<usize>> = Vec::new();
    let mut pending = vec![false; s.n_subtasks()];
    for (k, seg) in segments(g).into_iter().enumerate() {
        let mut prev = m.home_node(k);
        let mut seq = Vec::new();
        for t in seg {
            let subs = &s.tasks[t].subtasks;
            let sub = if subs.len() == 1 {
                subs[0]
            } else {
                let (lo, hi) = (subs[0].min(subs[1]), subs[0].max(subs[1]));
                let pick = if m.time(k, prev, hi) < m.time(k, prev, lo) {
                    hi
                } else {
                    lo
                };
                pending[pick] = true;
                pick
            };
            seq.push(sub);
            prev = sub;
        }
        seqs.push(seq);
    }
    let mut committed = vec![false; s.n_tasks()];
    let mut pairs = Vec::new();
    loop {
        let done = committed.clone();
        let sync = |t: usize| done[t];
        let now = replay(s, m, &seqs, &sync)?;
        // Carrier met first among each robot's earliest pending subtask.
        let head = (0..seqs.len())
            .filter_map(|k| {
                let i = seqs[k].iter().position(|&x| pending[x])?;
                Some((now.arrival[k][i], s.subtasks[seqs[k][i]].task, k, seqs[k][i]))
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let Some((carrier_arrival, task, carrier_robot, carrier)) = head else {
            break;
        };
        let partner_sub = partner(s, carrier).unwrap();

        let mut candidates = Vec::new();
        for r in (0..seqs.len()).filter(|&r| r != carrier_robot) {
            let lo = seqs[r]
                .iter()
                .rposition(|&x| committed[s.subtasks[x].task])
                .map_or(0, |i| i + 1);
            let hi = seqs[r].iter().position(|&x| pending[x]).unwrap_or(seqs[r].len());
            for pos in lo..=hi {
                let mut trial = seqs.clone();
                trial[r].insert(pos, partner_sub);
                let rep = replay(s, m, &trial, &sync)?;
                let wait = (rep.arrival[r][pos] - carrier_arrival).abs();
                candidates.push(((r, pos), wait));
            }
        }
        let &((r, pos), wait) = candidates
            .iter()
            .fold(None, |best: Option<&((usize, usize), f64)>, c| match best {
                Some(b) if b.1 <= c.1 => Some(b),
                _ => Some(c),
            })?;
        seqs[r].insert(pos, partner_sub);
        pending[carrier] = false;
        committed[task] = true;
        pairs.push(PairChoice { task, wait, candidates });
    }
    let replay = replay(s, m, &seqs, &|_| true)?;
    Some(Reference { seqs, pairs, replay })
}

// ---------------------------------------------------------------- brute force

/// Smallest makespan over every ordered split of the single tasks between
/// robots, in any order. Only for instances without cooperative tasks.
pub fn brute_force_optimum(s: &Scenario, m: &TravelTimeMatrix, allow_empty_first: bool) -> f64 {
    assert_eq!(s.n_cooperative(), 0);
    let n = s.n_tasks();
    let nr = s.n_robots();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    let lo = if allow_empty_first { 0 } else { 1 };
    permute(&mut perm, 0, &mut |p| {
        let mut cuts = vec![lo; nr - 1];
        loop {
            let g = Genotype::new(p.to_vec(), cuts.clone());
            let seqs: Vec<Vec<usize>> = segments(&g)
                .into_iter()
                .map(|seg| seg.into_iter().map(|t| s.tasks[t].subtasks[0]).collect())
                .collect();
            let j = replay(s, m, &seqs, &|_| true).unwrap().makespan();
            best = best.min(j);
            if !next_cuts(&mut cuts, n) {
                break;
            }
        }
    });
    best
}

/// Next non-decreasing cut vector, lexicographically.
fn next_cuts(cuts: &mut [usize], n: usize) -> bool {
    for i in (0..cuts.len()).rev() {
        if cuts[i] < n {
            cuts[i] += 1;
            let v = cuts[i];
            for c in &mut cuts[i + 1..] {
                *c = v;
            }
            return true;
        }
    }
    false
}

pub fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}
