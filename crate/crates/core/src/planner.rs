//! Space-time path planning for a single robot against committed trajectories.
//!
//! The planner runs A* over (cell, timestep) states. Per timestep a robot
//! moves to any cell within Chebyshev distance `max_speed` or waits. Other
//! robots' timelines act as moving obstacles: footprint overlap at the same
//! timestep is a collision, and two robots exchanging cells across one
//! timestep is a swap conflict. Search is exact: the returned finish time is
//! minimal among all collision-free trajectories within the horizon.

use crate::scenario::{footprints_overlap, Cell, RobotId, Scenario, Timestep, Workspace};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;

/// A timed path: `cells[k]` is the robot's cell at `start_time + k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub robot: RobotId,
    pub start_time: Timestep,
    pub cells: Vec<Cell>,
}

impl Trajectory {
    pub fn stationary(robot: RobotId, cell: Cell, time: Timestep) -> Self {
        Trajectory {
            robot,
            start_time: time,
            cells: vec![cell],
        }
    }

    pub fn start_cell(&self) -> Cell {
        self.cells[0]
    }

    pub fn end_cell(&self) -> Cell {
        *self.cells.last().expect("trajectory is never empty")
    }

    pub fn end_time(&self) -> Timestep {
        self.start_time + (self.cells.len() as Timestep - 1)
    }

    /// Number of timesteps covered; 0 for a single-sample trajectory.
    pub fn duration(&self) -> Timestep {
        self.cells.len() as Timestep - 1
    }

    pub fn position_at(&self, t: Timestep) -> Option<Cell> {
        if t < self.start_time {
            return None;
        }
        self.cells.get((t - self.start_time) as usize).copied()
    }

    /// Total Euclidean length of all moves.
    pub fn moved_distance(&self) -> f64 {
        self.cells.windows(2).map(|w| w[0].euclidean(w[1])).sum()
    }
}

#[derive(Clone, Debug)]
struct RobotTimeline {
    radius: u32,
    initial: Cell,
    committed: Vec<Trajectory>,
    escape: Option<Trajectory>,
}

impl RobotTimeline {
    fn position_at(&self, t: Timestep) -> Cell {
        for traj in &self.committed {
            if t < traj.start_time {
                // Timelines are gap-free, so this only triggers before the
                // first committed trajectory.
                return self.initial;
            }
            if let Some(c) = traj.position_at(t) {
                return c;
            }
        }
        if let Some(esc) = &self.escape {
            if let Some(c) = esc.position_at(t) {
                return c;
            }
            if t >= esc.start_time {
                return esc.end_cell();
            }
        }
        match self.committed.last() {
            Some(traj) => traj.end_cell(),
            None => self.initial,
        }
    }

    fn latest_event(&self) -> Timestep {
        if let Some(esc) = &self.escape {
            return esc.end_time();
        }
        match self.committed.last() {
            Some(traj) => traj.end_time(),
            None => 0,
        }
    }

    fn last_committed(&self) -> (Cell, Timestep) {
        match self.committed.last() {
            Some(traj) => (traj.end_cell(), traj.end_time()),
            None => (self.initial, 0),
        }
    }
}

/// Per-robot timelines: committed trajectories, then a tentative escape
/// trajectory, then stationary at the last cell forever. `position_of` is
/// defined for every `t >= 0`.
#[derive(Clone, Debug)]
pub struct DynamicObstacleField {
    timelines: Vec<RobotTimeline>,
}

impl DynamicObstacleField {
    /// Every robot starts stationary at its start cell.
    pub fn new(scenario: &Scenario) -> Self {
        DynamicObstacleField {
            timelines: scenario
                .robots()
                .iter()
                .map(|r| RobotTimeline {
                    radius: r.radius,
                    initial: r.start,
                    committed: Vec::new(),
                    escape: None,
                })
                .collect(),
        }
    }

    pub fn position_of(&self, robot: RobotId, t: Timestep) -> Cell {
        self.timelines[robot.index()].position_at(t)
    }

    pub fn radius_of(&self, robot: RobotId) -> u32 {
        self.timelines[robot.index()].radius
    }

    /// End cell and time of the robot's last committed trajectory, ignoring
    /// any tentative escape; (start cell, 0) if nothing is committed yet.
    pub fn last_committed(&self, robot: RobotId) -> (Cell, Timestep) {
        self.timelines[robot.index()].last_committed()
    }

    /// Appends a committed trajectory. It must begin where and when the
    /// robot's committed timeline currently ends.
    pub fn commit(&mut self, traj: Trajectory) {
        let timeline = &mut self.timelines[traj.robot.index()];
        let (cell, time) = timeline.last_committed();
        assert_eq!(
            traj.start_cell(),
            cell,
            "committed trajectory must be gap-free"
        );
        assert_eq!(
            traj.start_time, time,
            "committed trajectory must be gap-free"
        );
        timeline.committed.push(traj);
    }

    pub fn set_escape(&mut self, traj: Trajectory) {
        let timeline = &mut self.timelines[traj.robot.index()];
        let (cell, time) = timeline.last_committed();
        assert_eq!(
            traj.start_cell(),
            cell,
            "escape must start at the committed end"
        );
        assert_eq!(
            traj.start_time, time,
            "escape must start at the committed end"
        );
        timeline.escape = Some(traj);
    }

    pub fn clear_escape(&mut self, robot: RobotId) {
        self.timelines[robot.index()].escape = None;
    }

    pub fn escape_of(&self, robot: RobotId) -> Option<&Trajectory> {
        self.timelines[robot.index()].escape.as_ref()
    }

    pub fn committed_of(&self, robot: RobotId) -> &[Trajectory] {
        &self.timelines[robot.index()].committed
    }

    /// Last timestep at which any timeline changes; beyond it the world is
    /// static.
    pub fn latest_event(&self) -> Timestep {
        self.timelines
            .iter()
            .map(RobotTimeline::latest_event)
            .max()
            .unwrap_or(0)
    }
}

/// One planning request: bring `robot` from `start_cell` (occupied from
/// `earliest_start`) to `goal_cell`, hold it for `dwell` steps, and finish no
/// earlier than `min_finish`.
#[derive(Clone, Copy, Debug)]
pub struct PlanQuery {
    pub robot: RobotId,
    pub start_cell: Cell,
    pub earliest_start: Timestep,
    pub goal_cell: Cell,
    /// Precedence lower bound on the finish time, at least `earliest_start`;
    /// enforced by waiting.
    pub min_finish: Timestep,
    pub dwell: Timestep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlannedPath {
    pub trajectory: Trajectory,
    /// Arrival plus dwell; always `trajectory.end_time()`.
    pub finish_time: Timestep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanError {
    /// The start cell conflicts with an obstacle at the start time.
    StartBlocked {
        robot: RobotId,
        cell: Cell,
        time: Timestep,
    },
    /// No collision-free path reaches the goal within the search horizon.
    Infeasible {
        robot: RobotId,
        goal: Cell,
        horizon: Timestep,
    },
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanError::StartBlocked { robot, cell, time } => {
                write!(f, "{robot} start {cell} is blocked at t={time}")
            }
            PlanError::Infeasible {
                robot,
                goal,
                horizon,
            } => {
                write!(f, "{robot} has no path to {goal} within horizon {horizon}")
            }
        }
    }
}

impl std::error::Error for PlanError {}

/// `ceil(chebyshev(from, to) / max_speed)`: optimistic travel time assuming
/// maximum velocity on an empty grid. Never exceeds the true optimal travel
/// time under the motion model.
pub fn straight_line_lower_bound(from: Cell, to: Cell, max_speed: u32) -> Timestep {
    debug_assert!(max_speed >= 1);
    from.chebyshev(to).div_ceil(max_speed)
}

/// Positions of every robot other than `planned`, sampled per timestep for
/// `0..=horizon`, with footprint radii.
struct SampledObstacles {
    radii: Vec<u32>,
    positions: Vec<Vec<Cell>>,
}

impl SampledObstacles {
    fn new(field: &DynamicObstacleField, planned: RobotId, horizon: Timestep) -> Self {
        let mut radii = Vec::new();
        let mut positions = Vec::new();
        for (idx, timeline) in field.timelines.iter().enumerate() {
            if idx == planned.index() {
                continue;
            }
            radii.push(timeline.radius);
            positions.push((0..=horizon).map(|t| timeline.position_at(t)).collect());
        }
        SampledObstacles { radii, positions }
    }

    fn vertex_conflict(&self, cell: Cell, radius: u32, t: Timestep) -> bool {
        self.positions
            .iter()
            .zip(&self.radii)
            .any(|(line, &r)| footprints_overlap(cell, radius, line[t as usize], r))
    }

    /// Exchange of cells across one timestep.
    fn swap_conflict(&self, from: Cell, to: Cell, t: Timestep) -> bool {
        if from == to {
            return false;
        }
        self.positions
            .iter()
            .any(|line| line[t as usize] == to && line[(t + 1) as usize] == from)
    }
}

const X_BITS: u64 = 12;
const Y_BITS: u64 = 12;
const HELD_BITS: u64 = 8;

fn pack_state(cell: Cell, t: Timestep, held: u32) -> u64 {
    (cell.x as u64)
        | ((cell.y as u64) << X_BITS)
        | ((held as u64) << (X_BITS + Y_BITS))
        | ((t as u64) << (X_BITS + Y_BITS + HELD_BITS))
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct HeapNode {
    f: Timestep,
    waits: u32,
    x: i32,
    y: i32,
    t: Timestep,
    held: u32,
    key: u64,
    parent: u64,
}

impl Ord for HeapNode {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // BinaryHeap is a max-heap; reverse for ascending
        // (f, waits, x, y, t, held).
        (other.f, other.waits, other.x, other.y, other.t, other.held)
            .cmp(&(self.f, self.waits, self.x, self.y, self.t, self.held))
    }
}

impl PartialOrd for HeapNode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn search_horizon(
    query: &PlanQuery,
    field: &DynamicObstacleField,
    ws: &Workspace,
    max_speed: u32,
) -> Timestep {
    let base = field
        .latest_event()
        .max(query.earliest_start)
        .max(query.min_finish);
    base + ((ws.width() + ws.height()) * 4).div_ceil(max_speed) + query.dwell
}

/// Plans a minimum-finish-time trajectory for one robot, treating every other
/// robot's timeline in `field` as a moving obstacle. The query robot's own
/// timeline is ignored. The trajectory occupies the start cell from
/// `earliest_start`, ends at the goal having held it for `dwell` steps, and
/// finishes no earlier than `min_finish`.
pub fn plan_path(
    query: &PlanQuery,
    scenario: &Scenario,
    field: &DynamicObstacleField,
) -> Result<PlannedPath, PlanError> {
    let spec = scenario.robot(query.robot);
    let ws = scenario.workspace();
    let radius = spec.radius;
    let speed = spec.max_speed as i32;
    let horizon = search_horizon(query, field, ws, spec.max_speed);
    let obstacles = SampledObstacles::new(field, query.robot, horizon + 1);

    if !ws.footprint_free(query.start_cell, radius)
        || obstacles.vertex_conflict(query.start_cell, radius, query.earliest_start)
    {
        return Err(PlanError::StartBlocked {
            robot: query.robot,
            cell: query.start_cell,
            time: query.earliest_start,
        });
    }
    if !ws.footprint_free(query.goal_cell, radius) {
        return Err(PlanError::Infeasible {
            robot: query.robot,
            goal: query.goal_cell,
            horizon,
        });
    }

    let heuristic = |cell: Cell, t: Timestep, held: u32| -> Timestep {
        let travel = straight_line_lower_bound(cell, query.goal_cell, spec.max_speed);
        let rem_dwell = if cell == query.goal_cell {
            query.dwell - held.min(query.dwell)
        } else {
            query.dwell
        };
        (t + travel + rem_dwell).max(query.min_finish)
    };

    let mut open = BinaryHeap::new();
    let mut closed: HashSet<u64> = HashSet::new();
    let mut parents: HashMap<u64, u64> = HashMap::new();

    let start_key = pack_state(query.start_cell, query.earliest_start, 0);
    open.push(HeapNode {
        f: heuristic(query.start_cell, query.earliest_start, 0),
        waits: 0,
        x: query.start_cell.x,
        y: query.start_cell.y,
        t: query.earliest_start,
        held: 0,
        key: start_key,
        parent: start_key,
    });

    while let Some(node) = open.pop() {
        if !closed.insert(node.key) {
            continue;
        }
        parents.insert(node.key, node.parent);
        let cell = Cell::new(node.x, node.y);

        if cell == query.goal_cell && node.held >= query.dwell && node.t >= query.min_finish {
            let mut cells = Vec::with_capacity((node.t - query.earliest_start + 1) as usize);
            let mut key = node.key;
            loop {
                let x = (key & ((1 << X_BITS) - 1)) as i32;
                let y = ((key >> X_BITS) & ((1 << Y_BITS) - 1)) as i32;
                cells.push(Cell::new(x, y));
                let parent = parents[&key];
                if parent == key {
                    break;
                }
                key = parent;
            }
            cells.reverse();
            let trajectory = Trajectory {
                robot: query.robot,
                start_time: query.earliest_start,
                cells,
            };
            debug_assert_eq!(trajectory.end_time(), node.t);
            return Ok(PlannedPath {
                trajectory,
                finish_time: node.t,
            });
        }

        if node.t >= horizon {
            continue;
        }
        let next_t = node.t + 1;
        for dx in -speed..=speed {
            for dy in -speed..=speed {
                let to = Cell::new(cell.x + dx, cell.y + dy);
                if !ws.footprint_free(to, radius) {
                    continue;
                }
                if obstacles.vertex_conflict(to, radius, next_t)
                    || obstacles.swap_conflict(cell, to, node.t)
                {
                    continue;
                }
                let held = if to == query.goal_cell {
                    if cell == query.goal_cell {
                        (node.held + 1).min(query.dwell)
                    } else {
                        0
                    }
                } else {
                    0
                };
                let key = pack_state(to, next_t, held);
                if closed.contains(&key) {
                    continue;
                }
                open.push(HeapNode {
                    f: heuristic(to, next_t, held),
                    waits: node.waits + u32::from(to == cell),
                    x: to.x,
                    y: to.y,
                    t: next_t,
                    held,
                    key,
                    parent: node.key,
                });
            }
        }
    }

    Err(PlanError::Infeasible {
        robot: query.robot,
        goal: query.goal_cell,
        horizon,
    })
}

/// Plans the post-task retreat to the robot's resting cell, minimal arrival
/// time. A robot already at its resting cell yields a single-sample
/// trajectory.
///
/// The robot parks at the resting cell indefinitely once it arrives, so the
/// arrival may not precede any later pass of another robot's committed
/// timeline through the resting footprint. That floor enters the query as a
/// minimum finish time; beyond the field's latest event all timelines are
/// static and resting footprints are disjoint by construction.
pub fn plan_escape(
    robot: RobotId,
    from_cell: Cell,
    from_time: Timestep,
    scenario: &Scenario,
    field: &DynamicObstacleField,
) -> Result<Trajectory, PlanError> {
    let spec = scenario.robot(robot);
    let resting = spec.resting;
    let latest = field.latest_event();
    let mut clear_from = from_time;
    for t in from_time..=latest + 1 {
        for other in scenario.robot_ids().filter(|&r| r != robot) {
            let pos = field.position_of(other, t);
            if footprints_overlap(resting, spec.radius, pos, field.radius_of(other)) {
                clear_from = t + 1;
            }
        }
    }
    let query = PlanQuery {
        robot,
        start_cell: from_cell,
        earliest_start: from_time,
        goal_cell: resting,
        min_finish: clear_from,
        dwell: 0,
    };
    plan_path(&query, scenario, field).map(|p| p.trajectory)
}

fn straight_cells(a: Cell, b: Cell, steps: u32) -> Vec<Cell> {
    let dx = (b.x - a.x) as f64;
    let dy = (b.y - a.y) as f64;
    (0..=steps)
        .map(|k| {
            let frac = k as f64 / steps as f64;
            Cell::new(
                a.x + (dx * frac).round() as i32,
                a.y + (dy * frac).round() as i32,
            )
        })
        .collect()
}

/// True iff replacing the samples keeps the trajectory executable: speed
/// bound per step, static clearance, and no vertex or swap conflict against
/// the other robots' timelines.
fn segment_valid(
    cells: &[Cell],
    first_time: Timestep,
    radius: u32,
    max_speed: u32,
    ws: &Workspace,
    obstacles: &SampledObstacles,
) -> bool {
    for (k, w) in cells.windows(2).enumerate() {
        let t = first_time + k as Timestep;
        if w[0].chebyshev(w[1]) > max_speed {
            return false;
        }
        if !ws.footprint_free(w[1], radius) {
            return false;
        }
        if obstacles.vertex_conflict(w[1], radius, t + 1) || obstacles.swap_conflict(w[0], w[1], t)
        {
            return false;
        }
    }
    true
}

/// Random-pair shortcutting: repeatedly picks two indices and replaces the
/// sub-trajectory between them with a time-parameterized straight
/// interpolation at the same start and end timesteps. A replacement is
/// accepted iff it is collision-free and strictly shorter in moved distance.
/// Start, endpoint cell, endpoint time, and any terminal hold at the final
/// cell are preserved. Seeded and deterministic.
pub fn shortcut(
    traj: &Trajectory,
    scenario: &Scenario,
    field: &DynamicObstacleField,
    rng_seed: u64,
    attempts: usize,
) -> Trajectory {
    let len = traj.cells.len();
    if len < 3 || attempts == 0 {
        return traj.clone();
    }
    // Keep the trailing run of samples at the final cell intact so terminal
    // dwell holds survive.
    let last = traj.cells[len - 1];
    let mut last_movable = len - 1;
    while last_movable > 0 && traj.cells[last_movable - 1] == last {
        last_movable -= 1;
    }
    if last_movable < 2 {
        return traj.clone();
    }

    let spec = scenario.robot(traj.robot);
    let ws = scenario.workspace();
    let end_t = traj.end_time();
    let obstacles = SampledObstacles::new(field, traj.robot, end_t + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut result = traj.clone();

    for _ in 0..attempts {
        let i = rng.random_range(0..=last_movable - 2);
        let j = rng.random_range(i + 2..=last_movable);
        let replacement = straight_cells(result.cells[i], result.cells[j], (j - i) as u32);
        let old_len: f64 = result.cells[i..=j]
            .windows(2)
            .map(|w| w[0].euclidean(w[1]))
            .sum();
        let new_len: f64 = replacement.windows(2).map(|w| w[0].euclidean(w[1])).sum();
        if new_len >= old_len - 1e-9 {
            continue;
        }
        let first_time = result.start_time + i as Timestep;
        if !segment_valid(
            &replacement,
            first_time,
            spec.radius,
            spec.max_speed,
            ws,
            &obstacles,
        ) {
            continue;
        }
        result.cells[i..=j].copy_from_slice(&replacement);
    }
    debug_assert_eq!(result.end_time(), traj.end_time());
    debug_assert_eq!(result.end_cell(), traj.end_cell());
    debug_assert_eq!(result.start_cell(), traj.start_cell());
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{scenario_from_str, PrecedenceDag, RobotSpec, TaskSpec};

    fn empty_grid(width: u32, height: u32, robots: Vec<RobotSpec>) -> Scenario {
        let tasks = vec![TaskSpec {
            id: crate::scenario::TaskId::new(1),
            kind: crate::scenario::TaskKind::GoToPose {
                goal: Cell::new(0, 0),
            },
            capable_robots: robots.iter().map(|r| r.id).collect(),
            dwell: 0,
        }];
        Scenario::new(
            Workspace::new(width, height, Vec::new()).unwrap(),
            robots,
            tasks,
            PrecedenceDag::default(),
        )
        .unwrap()
    }

    fn robot(id: u32, at: Cell, speed: u32) -> RobotSpec {
        RobotSpec {
            id: RobotId::new(id),
            start: at,
            resting: at,
            radius: 0,
            max_speed: speed,
        }
    }

    #[test]
    fn straight_line_examples() {
        assert_eq!(
            straight_line_lower_bound(Cell::new(0, 0), Cell::new(3, 0), 1),
            3
        );
        assert_eq!(
            straight_line_lower_bound(Cell::new(0, 0), Cell::new(0, 0), 2),
            0
        );
        assert_eq!(
            straight_line_lower_bound(Cell::new(0, 0), Cell::new(5, 7), 2),
            4
        );
    }

    #[test]
    fn straight_run_on_empty_grid() {
        let s = empty_grid(10, 10, vec![robot(1, Cell::new(0, 0), 1)]);
        let field = DynamicObstacleField::new(&s);
        let q = PlanQuery {
            robot: RobotId::new(1),
            start_cell: Cell::new(0, 0),
            earliest_start: 0,
            goal_cell: Cell::new(3, 0),
            min_finish: 0,
            dwell: 0,
        };
        let p = plan_path(&q, &s, &field).unwrap();
        assert_eq!(p.finish_time, 3);
        assert_eq!(p.trajectory.cells.len(), 4);
    }

    #[test]
    fn min_finish_forces_waiting() {
        let s = empty_grid(10, 10, vec![robot(1, Cell::new(0, 0), 1)]);
        let field = DynamicObstacleField::new(&s);
        let q = PlanQuery {
            robot: RobotId::new(1),
            start_cell: Cell::new(0, 0),
            earliest_start: 0,
            goal_cell: Cell::new(3, 0),
            min_finish: 7,
            dwell: 0,
        };
        let p = plan_path(&q, &s, &field).unwrap();
        assert_eq!(p.finish_time, 7);
        assert_eq!(p.trajectory.end_cell(), Cell::new(3, 0));
    }

    #[test]
    fn dwell_holds_goal_cell() {
        let s = empty_grid(10, 10, vec![robot(1, Cell::new(0, 0), 1)]);
        let field = DynamicObstacleField::new(&s);
        let q = PlanQuery {
            robot: RobotId::new(1),
            start_cell: Cell::new(0, 0),
            earliest_start: 0,
            goal_cell: Cell::new(2, 0),
            min_finish: 0,
            dwell: 3,
        };
        let p = plan_path(&q, &s, &field).unwrap();
        assert_eq!(p.finish_time, 5);
        let tail = &p.trajectory.cells[2..=5];
        assert!(tail.iter().all(|&c| c == Cell::new(2, 0)));
    }

    #[test]
    fn start_equals_goal_finishes_immediately() {
        let s = empty_grid(5, 5, vec![robot(1, Cell::new(2, 2), 1)]);
        let field = DynamicObstacleField::new(&s);
        let q = PlanQuery {
            robot: RobotId::new(1),
            start_cell: Cell::new(2, 2),
            earliest_start: 4,
            goal_cell: Cell::new(2, 2),
            min_finish: 0,
            dwell: 0,
        };
        let p = plan_path(&q, &s, &field).unwrap();
        assert_eq!(p.finish_time, 4);
        assert_eq!(p.trajectory.cells, vec![Cell::new(2, 2)]);
    }

    #[test]
    fn stationary_blocker_forces_detour() {
        let s = empty_grid(
            5,
            5,
            vec![robot(1, Cell::new(0, 2), 1), robot(2, Cell::new(2, 2), 1)],
        );
        let field = DynamicObstacleField::new(&s);
        let q = PlanQuery {
            robot: RobotId::new(1),
            start_cell: Cell::new(0, 2),
            earliest_start: 0,
            goal_cell: Cell::new(4, 2),
            min_finish: 0,
            dwell: 0,
        };
        let p = plan_path(&q, &s, &field).unwrap();
        assert_eq!(p.finish_time, 4);
        assert!(p.trajectory.cells.iter().all(|&c| c != Cell::new(2, 2)));
    }

    #[test]
    fn escape_at_resting_is_zero_length() {
        let s = empty_grid(5, 5, vec![robot(1, Cell::new(1, 1), 1)]);
        let field = DynamicObstacleField::new(&s);
        let esc = plan_escape(RobotId::new(1), Cell::new(1, 1), 9, &s, &field).unwrap();
        assert_eq!(esc.cells, vec![Cell::new(1, 1)]);
        assert_eq!(esc.end_time(), 9);
    }

    #[test]
    fn escape_one_cell_away() {
        let s = empty_grid(5, 5, vec![robot(1, Cell::new(1, 1), 1)]);
        let field = DynamicObstacleField::new(&s);
        let esc = plan_escape(RobotId::new(1), Cell::new(2, 1), 5, &s, &field).unwrap();
        assert_eq!(esc.end_time(), 6);
        assert_eq!(esc.end_cell(), Cell::new(1, 1));
    }

    #[test]
    fn swap_conflict_is_rejected() {
        // Robot 2 walks right through the corridor row while robot 1 wants
        // to move left through the same cells.
        let s = empty_grid(
            4,
            1,
            vec![robot(1, Cell::new(3, 0), 1), robot(2, Cell::new(0, 0), 1)],
        );
        let mut field = DynamicObstacleField::new(&s);
        field.commit(Trajectory {
            robot: RobotId::new(2),
            start_time: 0,
            cells: vec![
                Cell::new(0, 0),
                Cell::new(1, 0),
                Cell::new(2, 0),
                Cell::new(3, 0),
            ],
        });
        let q = PlanQuery {
            robot: RobotId::new(1),
            start_cell: Cell::new(3, 0),
            earliest_start: 0,
            goal_cell: Cell::new(0, 0),
            min_finish: 0,
            dwell: 0,
        };
        // Head-on swap in a width-1 corridor can never be resolved.
        assert!(plan_path(&q, &s, &field).is_err());
    }

    #[test]
    fn shortcut_keeps_straight_path_unchanged() {
        let s = empty_grid(8, 8, vec![robot(1, Cell::new(0, 0), 1)]);
        let field = DynamicObstacleField::new(&s);
        let traj = Trajectory {
            robot: RobotId::new(1),
            start_time: 0,
            cells: (0..5).map(|x| Cell::new(x, 0)).collect(),
        };
        let out = shortcut(&traj, &s, &field, 11, 200);
        assert_eq!(out, traj);
    }

    #[test]
    fn shortcut_straightens_detour() {
        let s = empty_grid(8, 8, vec![robot(1, Cell::new(0, 0), 1)]);
        let field = DynamicObstacleField::new(&s);
        // Detour over y=2 between (0,0) and (4,0).
        let traj = Trajectory {
            robot: RobotId::new(1),
            start_time: 0,
            cells: vec![
                Cell::new(0, 0),
                Cell::new(1, 1),
                Cell::new(2, 2),
                Cell::new(3, 1),
                Cell::new(4, 0),
            ],
        };
        let out = shortcut(&traj, &s, &field, 7, 200);
        assert!(out.moved_distance() < traj.moved_distance());
        assert_eq!(out.start_cell(), traj.start_cell());
        assert_eq!(out.end_cell(), traj.end_cell());
        assert_eq!(out.end_time(), traj.end_time());
    }

    #[test]
    fn shortcut_zero_length_trajectory_unchanged() {
        let s = empty_grid(5, 5, vec![robot(1, Cell::new(1, 1), 1)]);
        let field = DynamicObstacleField::new(&s);
        let traj = Trajectory::stationary(RobotId::new(1), Cell::new(1, 1), 3);
        assert_eq!(shortcut(&traj, &s, &field, 3, 100), traj);
    }

    #[test]
    fn scenario_parses_for_planner_smoke() {
        let s = scenario_from_str(
            r#"{
            "workspace": {"width": 5, "height": 5},
            "robots": [{"id": 1, "start": [0, 0], "resting": [0, 0], "radius": 0, "max_speed": 2}],
            "tasks": [{"id": 1, "kind": "goto", "goal": [4, 4], "capable": [1], "dwell": 0}]
        }"#,
        )
        .unwrap();
        let field = DynamicObstacleField::new(&s);
        let q = PlanQuery {
            robot: RobotId::new(1),
            start_cell: Cell::new(0, 0),
            earliest_start: 0,
            goal_cell: Cell::new(4, 4),
            min_finish: 0,
            dwell: 0,
        };
        assert_eq!(plan_path(&q, &s, &field).unwrap().finish_time, 2);
    }
}
