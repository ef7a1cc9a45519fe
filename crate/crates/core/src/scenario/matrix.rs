use rayon::prelude::*;

use super::grid::astar_path_length;
use super::Scenario;
use crate::error::{Error, Result};

/// Precomputed travel times between every inspection position and home base.
///
/// Nodes `0..n_subtasks` are subtask inspection positions, the following
/// `n_robots` nodes are home bases. Path lengths are stored once; one time table
/// is derived per distinct robot speed.
#[derive(Debug, Clone, PartialEq)]
pub struct TravelTimeMatrix {
    n_subtasks: usize,
    n_robots: usize,
    lengths: Vec<f64>,
    speeds: Vec<f64>,
    robot_class: Vec<usize>,
    times: Vec<Vec<f64>>,
}

impl TravelTimeMatrix {
    /// Builds a matrix from a row-major table of path lengths (in cells).
    pub fn from_lengths(n_subtasks: usize, robot_speeds: &[f64], lengths: Vec<f64>) -> Result<Self> {
        let n_robots = robot_speeds.len();
        let n = n_subtasks + n_robots;
        if lengths.len() != n * n {
            return Err(Error::Invariant(format!(
                "travel table has {} entries, expected {n}x{n}",
                lengths.len()
            )));
        }
        let mut speeds: Vec<f64> = Vec::new();
        let mut robot_class = Vec::with_capacity(n_robots);
        for &v in robot_speeds {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Invariant(format!("robot speed must be positive, got {v}")));
            }
            let class = match speeds.iter().position(|&s| s == v) {
                Some(c) => c,
                None => {
                    speeds.push(v);
                    speeds.len() - 1
                }
            };
            robot_class.push(class);
        }
        let times = speeds
            .iter()
            .map(|&v| lengths.iter().map(|&d| d / v).collect())
            .collect();
        Ok(TravelTimeMatrix {
            n_subtasks,
            n_robots,
            lengths,
            speeds,
            robot_class,
            times,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n_subtasks + self.n_robots
    }

    pub fn n_subtasks(&self) -> usize {
        self.n_subtasks
    }

    pub fn n_robots(&self) -> usize {
        self.n_robots
    }

    #[inline]
    pub fn home_node(&self, robot: usize) -> usize {
        self.n_subtasks + robot
    }

    /// Path length in cells between two nodes.
    #[inline]
    pub fn length(&self, a: usize, b: usize) -> f64 {
        self.lengths[a * self.node_count() + b]
    }

    /// Travel time of `robot` between two nodes, in seconds.
    #[inline]
    pub fn time(&self, robot: usize, a: usize, b: usize) -> f64 {
        self.times[self.robot_class[robot]][a * self.node_count() + b]
    }

    /// Row-major time table for one robot.
    #[inline]
    pub fn robot_table(&self, robot: usize) -> &[f64] {
        &self.times[self.robot_class[robot]]
    }

    /// Distinct robot speeds, one time table each.
    pub fn speed_classes(&self) -> &[f64] {
        &self.speeds
    }
}

/// Runs A* between every pair of subtask positions and home bases.
///
/// Fails with [`Error::Unreachable`] naming the first disconnected pair in node
/// order, since a robot could then never complete its mission.
pub fn build_travel_matrix(scenario: &Scenario) -> Result<TravelTimeMatrix> {
    let n_sub = scenario.n_subtasks();
    let cells: Vec<_> = scenario
        .subtasks
        .iter()
        .map(|s| s.pos)
        .chain(scenario.robots.iter().map(|r| r.home))
        .collect();
    let n = cells.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
    let dists = pairs
        .par_iter()
        .map(|&(a, b)| astar_path_length(&scenario.map, cells[a], cells[b]))
        .collect::<Result<Vec<f64>>>()?;

    let mut lengths = vec![0.0; n * n];
    for (&(a, b), &d) in pairs.iter().zip(&dists) {
        lengths[a * n + b] = d;
        lengths[b * n + a] = d;
    }
    if let Some(&(a, b)) = pairs.iter().zip(&dists).find(|(_, d)| d.is_infinite()).map(|(p, _)| p) {
        let name = |i: usize| {
            if i < n_sub {
                format!("subtask {} at {}", i + 1, cells[i])
            } else {
                format!("home of robot {} at {}", i - n_sub + 1, cells[i])
            }
        };
        return Err(Error::Unreachable {
            from: name(a),
            to: name(b),
        });
    }
    let speeds: Vec<f64> = scenario.robots.iter().map(|r| r.speed).collect();
    TravelTimeMatrix::from_lengths(n_sub, &speeds, lengths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::fixtures::open_scenario;
    use crate::scenario::Cell;

    #[test]
    fn adjacent_single_subtask() {
        let s = open_scenario(4, &[(0, 0)], &[(1, 0)], &[]);
        let m = build_travel_matrix(&s).unwrap();
        assert_eq!(m.node_count(), 2);
        assert_eq!(m.time(0, 0, 0), 0.0);
        assert_eq!(m.time(0, 0, 1), 1.0);
        assert_eq!(m.time(0, 1, 0), 1.0);
        assert_eq!(m.time(0, 1, 1), 0.0);
    }

    #[test]
    fn symmetric_with_zero_diagonal() {
        let s = open_scenario(12, &[(0, 0), (11, 11)], &[(3, 4), (7, 1), (9, 9)], &[[(2, 8), (5, 5)]]);
        let m = build_travel_matrix(&s).unwrap();
        for a in 0..m.node_count() {
            assert_eq!(m.length(a, a), 0.0);
            for b in 0..m.node_count() {
                assert_eq!(m.length(a, b), m.length(b, a));
            }
        }
    }

    #[test]
    fn per_speed_tables() {
        let mut s = open_scenario(8, &[(0, 0), (7, 7)], &[(0, 4)], &[]);
        s.robots[1].speed = 2.0;
        let m = build_travel_matrix(&s).unwrap();
        assert_eq!(m.speed_classes(), &[1.0, 2.0]);
        assert_eq!(m.time(0, 0, m.home_node(0)), 4.0);
        assert_eq!(m.time(1, 0, m.home_node(0)), 2.0);
    }

    #[test]
    fn sealed_subtask_is_infeasible() {
        let mut s = open_scenario(10, &[(0, 0)], &[(5, 5), (1, 1)], &[]);
        for (x, y) in [(4, 4), (5, 4), (6, 4), (4, 5), (6, 5), (4, 6), (5, 6), (6, 6)] {
            s.map.set_blocked(Cell::new(x, y), true);
        }
        let err = build_travel_matrix(&s).unwrap_err();
        assert!(err.is_infeasible(), "{err}");
        assert!(err.to_string().contains("subtask 1"));
    }
}
