use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A grid cell, 0-based, `x` rightward and `y` downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Cell {
    pub x: usize,
    pub y: usize,
}

impl Cell {
    pub const fn new(x: usize, y: usize) -> Self {
        Cell { x, y }
    }

    /// Octile distance: the 8-connected path length on an empty grid.
    pub fn octile(self, other: Cell) -> f64 {
        let dx = self.x.abs_diff(other.x) as f64;
        let dy = self.y.abs_diff(other.y) as f64;
        let (lo, hi) = if dx < dy { (dx, dy) } else { (dy, dx) };
        hi + (std::f64::consts::SQRT_2 - 1.0) * lo
    }

    pub fn euclidean(self, other: Cell) -> f64 {
        let dx = self.x.abs_diff(other.x) as f64;
        let dy = self.y.abs_diff(other.y) as f64;
        dx.hypot(dy)
    }
}

impl From<[usize; 2]> for Cell {
    fn from([x, y]: [usize; 2]) -> Self {
        Cell { x, y }
    }
}

impl From<Cell> for [usize; 2] {
    fn from(c: Cell) -> Self {
        [c.x, c.y]
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Occupancy grid. Cells are stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    width: usize,
    height: usize,
    blocked: Vec<bool>,
}

/// Unit-cost orthogonal moves followed by √2-cost diagonal moves.
pub(crate) const MOVES: [(isize, isize); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];

impl GridMap {
    /// An empty (fully traversable) map.
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Invariant(format!(
                "map must be at least 1x1, got {width}x{height}"
            )));
        }
        Ok(GridMap {
            width,
            height,
            blocked: vec![false; width * height],
        })
    }

    pub fn with_blocked(width: usize, height: usize, blocked: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let mut map = GridMap::new(width, height)?;
        for cell in blocked {
            if !map.in_bounds(cell) {
                return Err(Error::Invariant(format!(
                    "blocked cell {cell} lies outside the {width}x{height} map"
                )));
            }
            map.set_blocked(cell, true);
        }
        Ok(map)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn in_bounds(&self, cell: Cell) -> bool {
        cell.x < self.width && cell.y < self.height
    }

    pub fn is_blocked(&self, cell: Cell) -> bool {
        self.blocked[self.index(cell)]
    }

    /// In bounds and not blocked.
    pub fn is_free(&self, cell: Cell) -> bool {
        self.in_bounds(cell) && !self.is_blocked(cell)
    }

    pub fn set_blocked(&mut self, cell: Cell, blocked: bool) {
        let i = self.index(cell);
        self.blocked[i] = blocked;
    }

    /// Blocked cells in row-major order.
    pub fn blocked_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.blocked
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| self.cell(i))
    }

    pub fn diagonal(&self) -> f64 {
        (self.width as f64).hypot(self.height as f64)
    }

    #[inline]
    pub(crate) fn index(&self, cell: Cell) -> usize {
        cell.y * self.width + cell.x
    }

    #[inline]
    pub(crate) fn cell(&self, index: usize) -> Cell {
        Cell::new(index % self.width, index / self.width)
    }

    pub(crate) fn cell_count(&self) -> usize {
        self.width * self.height
    }

    fn offset(&self, cell: Cell, dx: isize, dy: isize) -> Option<Cell> {
        let x = cell.x.checked_add_signed(dx)?;
        let y = cell.y.checked_add_signed(dy)?;
        let c = Cell::new(x, y);
        self.in_bounds(c).then_some(c)
    }

    /// Traversable 8-connected neighbours with their step cost.
    ///
    /// A diagonal step is allowed only when both orthogonal cells it passes are
    /// free, so paths never cut an obstacle corner.
    pub fn neighbors(&self, cell: Cell) -> impl Iterator<Item = (Cell, f64)> + '_ {
        MOVES.iter().filter_map(move |&(dx, dy)| {
            let next = self.offset(cell, dx, dy)?;
            if self.is_blocked(next) {
                return None;
            }
            if dx != 0 && dy != 0 {
                let a = Cell::new(next.x, cell.y);
                let b = Cell::new(cell.x, next.y);
                if self.is_blocked(a) || self.is_blocked(b) {
                    return None;
                }
                Some((next, std::f64::consts::SQRT_2))
            } else {
                Some((next, 1.0))
            }
        })
    }

    fn check_endpoint(&self, cell: Cell) -> Result<()> {
        if self.is_free(cell) {
            Ok(())
        } else {
            Err(Error::InvalidCell { cell })
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Open {
    f: f64,
    g: f64,
    index: usize,
}

impl PartialEq for Open {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Open {}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Open {
    // Min-heap on f; among equal f prefer the deeper node.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| self.g.total_cmp(&other.g))
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Shortest 8-connected path length between two free cells, in cells.
///
/// Returns `f64::INFINITY` when the cells are not connected.
pub fn astar_path_length(map: &GridMap, from: Cell, to: Cell) -> Result<f64> {
    map.check_endpoint(from)?;
    map.check_endpoint(to)?;
    if from == to {
        return Ok(0.0);
    }

    let n = map.cell_count();
    let mut g = vec![f64::INFINITY; n];
    let mut closed = vec![false; n];
    let mut open = BinaryHeap::new();
    let start = map.index(from);
    let goal = map.index(to);
    g[start] = 0.0;
    open.push(Open {
        f: from.octile(to),
        g: 0.0,
        index: start,
    });

    while let Some(Open { g: g_cur, index, .. }) = open.pop() {
        if index == goal {
            return Ok(g_cur);
        }
        if closed[index] {
            continue;
        }
        closed[index] = true;
        let cell = map.cell(index);
        for (next, step) in map.neighbors(cell) {
            let ni = map.index(next);
            if closed[ni] {
                continue;
            }
            let tentative = g_cur + step;
            if tentative < g[ni] {
                g[ni] = tentative;
                open.push(Open {
                    f: tentative + next.octile(to),
                    g: tentative,
                    index: ni,
                });
            }
        }
    }
    Ok(f64::INFINITY)
}

/// Travel time for a robot moving at `speed` cells per second.
///
/// Unreachable targets yield `f64::INFINITY`.
pub fn astar_travel_time(map: &GridMap, from: Cell, to: Cell, speed: f64) -> Result<f64> {
    if !(speed > 0.0 && speed.is_finite()) {
        return Err(Error::Invariant(format!("robot speed must be positive, got {speed}")));
    }
    Ok(astar_path_length(map, from, to)? / speed)
}
