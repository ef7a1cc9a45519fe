use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Cell, GridMap, Robot, Scenario, Subtask, Task, TaskKind};
use crate::error::{Error, Result};

/// Obstacle layout family of a generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// Horizontal obstacle strips separated by corridors; tasks line the corridors.
    Rows,
    /// Rectangular obstacle clusters; tasks sit on their perimeters.
    Islands,
}

impl FromStr for Layout {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rows" => Ok(Layout::Rows),
            "islands" => Ok(Layout::Islands),
            _ => Err(format!("unknown layout `{s}` (expected `rows` or `islands`)")),
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layout::Rows => "rows",
            Layout::Islands => "islands",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorParams {
    pub layout: Layout,
    pub n_single: usize,
    pub n_coop: usize,
    pub n_robots: usize,
    #[serde(default = "default_size")]
    pub width: usize,
    #[serde(default = "default_size")]
    pub height: usize,
    #[serde(default)]
    pub seed: u64,
    /// Inspection duration of every subtask, seconds.
    #[serde(default = "default_duration")]
    pub duration: f64,
    /// Robot speed, cells per second.
    #[serde(default = "default_speed")]
    pub speed: f64,
}

fn default_size() -> usize {
    100
}

fn default_duration() -> f64 {
    2.0
}

fn default_speed() -> f64 {
    1.0
}

impl GeneratorParams {
    /// 100x100 map, 2 s inspections, unit speed.
    pub fn new(layout: Layout, n_single: usize, n_coop: usize, n_robots: usize, seed: u64) -> Self {
        GeneratorParams {
            layout,
            n_single,
            n_coop,
            n_robots,
            width: default_size(),
            height: default_size(),
            seed,
            duration: default_duration(),
            speed: default_speed(),
        }
    }

    pub fn with_size(mut self, width: usize, height: usize) -> Self {
        self.width = width;
        self.height = height;
        self
    }
}

/// Free border kept around every layout so home bases stay connected.
const MARGIN: usize = 2;
/// Cooperative subtasks lie within this fraction of the map diagonal of each other.
const PAIR_SEPARATION: f64 = 0.25;
const PLACEMENT_RETRIES: usize = 1000;

/// Generates a benchmark instance. Identical parameters give identical scenarios.
pub fn generate_scenario(params: &GeneratorParams) -> Result<Scenario> {
    let GeneratorParams {
        layout,
        n_single,
        n_coop,
        n_robots,
        width,
        height,
        seed,
        duration,
        speed,
    } = *params;
    if n_robots == 0 {
        return Err(Error::Generation("at least one robot is required".into()));
    }
    if n_coop > 0 && n_robots < 2 {
        return Err(Error::Generation("cooperative tasks need at least two robots".into()));
    }
    if n_single + n_coop == 0 {
        return Err(Error::Generation("at least one task is required".into()));
    }
    if width < 2 * MARGIN + 3 || height < 2 * MARGIN + 3 {
        return Err(Error::Generation(format!("map {width}x{height} is too small")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (map, mut available) = match layout {
        Layout::Rows => rows_layout(width, height)?,
        Layout::Islands => islands_layout(width, height, &mut rng)?,
    };
    let homes = border_homes(&map, n_robots)?;
    available.retain(|c| !homes.contains(c));

    let n_subtasks = n_single + 2 * n_coop;
    if available.len() < n_subtasks {
        return Err(Error::Generation(format!(
            "{layout} layout on {width}x{height} offers {} inspection cells, {n_subtasks} needed",
            available.len()
        )));
    }

    let max_sep = PAIR_SEPARATION * map.diagonal();
    let mut pairs = Vec::with_capacity(n_coop);
    for c in 0..n_coop {
        let mut placed = None;
        for _ in 0..PLACEMENT_RETRIES {
            let first = available[rng.random_range(0..available.len())];
            let near: Vec<usize> = (0..available.len())
                .filter(|&i| available[i] != first && available[i].euclidean(first) <= max_sep)
                .collect();
            if near.is_empty() {
                continue;
            }
            let second = available[near[rng.random_range(0..near.len())]];
            placed = Some((first, second));
            break;
        }
        let (a, b) = placed.ok_or_else(|| {
            Error::Generation(format!(
                "could not place cooperative pair {} within separation {max_sep:.1}",
                c + 1
            ))
        })?;
        available.retain(|&x| x != a && x != b);
        pairs.push([a, b]);
    }
    let mut singles = Vec::with_capacity(n_single);
    for _ in 0..n_single {
        if available.is_empty() {
            return Err(Error::Generation("ran out of inspection cells".into()));
        }
        let i = rng.random_range(0..available.len());
        singles.push(available.remove(i));
    }

    let mut tasks = Vec::with_capacity(n_single + n_coop);
    let mut subtasks = Vec::with_capacity(n_subtasks);
    for pos in singles {
        tasks.push(Task {
            kind: TaskKind::Single,
            subtasks: vec![subtasks.len()],
        });
        subtasks.push(Subtask {
            task: tasks.len() - 1,
            pos,
            duration,
        });
    }
    for pair in pairs {
        let first = subtasks.len();
        tasks.push(Task {
            kind: TaskKind::Cooperative,
            subtasks: vec![first, first + 1],
        });
        for pos in pair {
            subtasks.push(Subtask {
                task: tasks.len() - 1,
                pos,
                duration,
            });
        }
    }
    let robots = homes.into_iter().map(|home| Robot { home, speed }).collect();
    Scenario::new(map, robots, tasks, subtasks)
}

/// Horizontal strips with a central cross aisle on wide maps. Candidate
/// inspection cells are the corridor cells directly above and below each strip.
fn rows_layout(width: usize, height: usize) -> Result<(GridMap, Vec<Cell>)> {
    let mut map = GridMap::new(width, height)?;
    let period = (height / 10).max(5);
    let x_lo = MARGIN + 2;
    let x_hi = width - MARGIN - 2;
    let aisle = if width >= 30 {
        let mid = width / 2;
        Some((mid - 1)..(mid + 2))
    } else {
        None
    };
    let in_aisle = |x: usize| aisle.as_ref().is_some_and(|a| a.contains(&x));

    let mut candidates = Vec::new();
    let mut band = MARGIN + 1;
    while band + period <= height - MARGIN {
        let top = band + 2;
        let bottom = band + period - 2;
        for y in top..bottom {
            for x in x_lo..x_hi {
                if !in_aisle(x) {
                    map.set_blocked(Cell::new(x, y), true);
                }
            }
        }
        for x in (x_lo..x_hi).filter(|&x| !in_aisle(x)) {
            candidates.push(Cell::new(x, top - 1));
            candidates.push(Cell::new(x, bottom));
        }
        band += period;
    }
    candidates.sort();
    candidates.dedup();
    candidates.retain(|&c| map.is_free(c));
    Ok((map, candidates))
}

/// A grid of rectangular obstacle clusters with randomized extents. Candidate
/// inspection cells are the free ring around each cluster.
fn islands_layout(width: usize, height: usize, rng: &mut ChaCha8Rng) -> Result<(GridMap, Vec<Cell>)> {
    let mut map = GridMap::new(width, height)?;
    let inner_w = width - 2 * MARGIN;
    let inner_h = height - 2 * MARGIN;
    let nx = (inner_w / 30).max(1);
    let ny = (inner_h / 30).max(1);
    let cell_w = inner_w / nx;
    let cell_h = inner_h / ny;

    let mut islands = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let x0 = MARGIN + i * cell_w;
            let y0 = MARGIN + j * cell_h;
            let jitter_x = (cell_w / 8).max(1);
            let jitter_y = (cell_h / 8).max(1);
            let left = 2 + rng.random_range(0..=jitter_x);
            let right = 2 + rng.random_range(0..=jitter_x);
            let top = 2 + rng.random_range(0..=jitter_y);
            let bottom = 2 + rng.random_range(0..=jitter_y);
            if left + right >= cell_w || top + bottom >= cell_h {
                continue;
            }
            let xs = (x0 + left)..(x0 + cell_w - right);
            let ys = (y0 + top)..(y0 + cell_h - bottom);
            for y in ys.clone() {
                for x in xs.clone() {
                    map.set_blocked(Cell::new(x, y), true);
                }
            }
            islands.push((xs, ys));
        }
    }
    if islands.is_empty() {
        return Err(Error::Generation(format!(
            "map {width}x{height} too small for an island"
        )));
    }

    let mut candidates = Vec::new();
    for (xs, ys) in &islands {
        let (x_lo, x_hi) = (xs.start - 1, xs.end);
        let (y_lo, y_hi) = (ys.start - 1, ys.end);
        for x in x_lo..=x_hi {
            candidates.push(Cell::new(x, y_lo));
            candidates.push(Cell::new(x, y_hi));
        }
        for y in (y_lo + 1)..y_hi {
            candidates.push(Cell::new(x_lo, y));
            candidates.push(Cell::new(x_hi, y));
        }
    }
    candidates.sort();
    candidates.dedup();
    candidates.retain(|&c| map.is_free(c));
    Ok((map, candidates))
}

/// Distinct border cells spread evenly along the map perimeter.
fn border_homes(map: &GridMap, n: usize) -> Result<Vec<Cell>> {
    let (w, h) = (map.width(), map.height());
    let mut ring = Vec::with_capacity(2 * (w + h));
    ring.extend((0..w).map(|x| Cell::new(x, 0)));
    ring.extend((1..h).map(|y| Cell::new(w - 1, y)));
    ring.extend((0..w - 1).rev().map(|x| Cell::new(x, h - 1)));
    ring.extend((1..h - 1).rev().map(|y| Cell::new(0, y)));
    if n > ring.len() {
        return Err(Error::Generation(format!(
            "{n} home bases do not fit on the {w}x{h} border"
        )));
    }
    let homes = (0..n)
        .map(|r| ring[((2 * r + 1) * ring.len()) / (2 * n)])
        .collect::<Vec<_>>();
    debug_assert!(homes.iter().all(|&c| map.is_free(c)));
    Ok(homes)
}
