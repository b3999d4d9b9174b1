//! Shared test support: a brute-force space-time BFS oracle, random instance
//! generators, and scenario paths. The oracle re-implements the motion and
//! collision model from scratch so planner results can be checked against an
//! independent search.

#![allow(dead_code)]

use rand::Rng;
use seqplan::planner::{DynamicObstacleField, PlanQuery, Trajectory};
use seqplan::scenario::{
    Cell, PrecedenceDag, RobotId, RobotSpec, Scenario, SequenceEntry, SerializedSequence, TaskId,
    TaskKind, TaskSpec, Timestep, Workspace,
};
use std::collections::HashSet;
use std::path::PathBuf;

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

pub const BUNDLED: [&str; 5] = [
    "grid2.scn",
    "grid4.scn",
    "lis_small.scn",
    "lis_large.scn",
    "binpick2.scn",
];

pub fn load_bundled(name: &str) -> Scenario {
    seqplan::load_scenario(scenario_path(name))
        .unwrap_or_else(|e| panic!("bundled scenario {name} must load: {e}"))
}

/// One moving obstacle for the oracle: a per-timestep position table and a
/// footprint radius. Positions beyond the table mean "parked at the last
/// entry".
pub struct OracleObstacle {
    pub radius: u32,
    pub positions: Vec<Cell>,
}

impl OracleObstacle {
    fn at(&self, t: Timestep) -> Cell {
        let idx = (t as usize).min(self.positions.len() - 1);
        self.positions[idx]
    }
}

/// Everything the oracle knows about an instance; deliberately flat.
pub struct OracleInstance {
    pub width: i32,
    pub height: i32,
    pub statics: HashSet<(i32, i32)>,
    pub radius: u32,
    pub max_speed: i32,
    pub obstacles: Vec<OracleObstacle>,
}

impl OracleInstance {
    fn square_free(&self, c: Cell) -> bool {
        let r = self.radius as i32;
        for x in c.x - r..=c.x + r {
            for y in c.y - r..=c.y + r {
                if x < 0 || y < 0 || x >= self.width || y >= self.height {
                    return false;
                }
                if self.statics.contains(&(x, y)) {
                    return false;
                }
            }
        }
        true
    }

    fn hits_obstacle(&self, c: Cell, t: Timestep) -> bool {
        self.obstacles.iter().any(|o| {
            let p = o.at(t);
            let reach = (self.radius + o.radius) as i32;
            (p.x - c.x).abs() <= reach && (p.y - c.y).abs() <= reach
        })
    }

    fn swaps_with_obstacle(&self, from: Cell, to: Cell, t: Timestep) -> bool {
        from != to
            && self
                .obstacles
                .iter()
                .any(|o| o.at(t) == to && o.at(t + 1) == from)
    }
}

/// Breadth-first search over (cell, consecutive-hold, time) layers. Returns
/// the earliest finish time: at the goal, having stayed there for `dwell`
/// consecutive steps, no earlier than `min_finish`. No heuristics, no
/// ordering tricks; exhaustive per time layer up to the horizon.
pub fn oracle_min_finish(
    inst: &OracleInstance,
    start: Cell,
    earliest_start: Timestep,
    goal: Cell,
    min_finish: Timestep,
    dwell: Timestep,
    horizon: Timestep,
) -> Option<Timestep> {
    if !inst.square_free(start) || inst.hits_obstacle(start, earliest_start) {
        return None;
    }
    let mut layer: HashSet<(Cell, Timestep)> = HashSet::new();
    layer.insert((start, 0));
    let mut t = earliest_start;
    loop {
        for &(cell, held) in &layer {
            if cell == goal && held >= dwell && t >= min_finish {
                return Some(t);
            }
        }
        if t >= horizon {
            return None;
        }
        let mut next: HashSet<(Cell, Timestep)> = HashSet::new();
        for &(cell, held) in &layer {
            for dx in -inst.max_speed..=inst.max_speed {
                for dy in -inst.max_speed..=inst.max_speed {
                    let to = Cell::new(cell.x + dx, cell.y + dy);
                    if !inst.square_free(to) {
                        continue;
                    }
                    if inst.hits_obstacle(to, t + 1) || inst.swaps_with_obstacle(cell, to, t) {
                        continue;
                    }
                    let new_held = if to == goal {
                        if cell == goal {
                            (held + 1).min(dwell)
                        } else {
                            0
                        }
                    } else {
                        0
                    };
                    next.insert((to, new_held));
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        layer = next;
        t += 1;
    }
}

/// Builds an oracle view of a scenario plus obstacle field, as seen by one
/// robot: every other robot is sampled into a position table.
pub fn oracle_view(
    scenario: &Scenario,
    field: &DynamicObstacleField,
    robot: RobotId,
    horizon: Timestep,
) -> OracleInstance {
    let spec = scenario.robot(robot);
    let ws = scenario.workspace();
    let obstacles = scenario
        .robot_ids()
        .filter(|&r| r != robot)
        .map(|r| OracleObstacle {
            radius: scenario.robot(r).radius,
            positions: (0..=horizon + 1).map(|t| field.position_of(r, t)).collect(),
        })
        .collect();
    OracleInstance {
        width: ws.width() as i32,
        height: ws.height() as i32,
        statics: ws.obstacles().map(|c| (c.x, c.y)).collect(),
        radius: spec.radius,
        max_speed: spec.max_speed as i32,
        obstacles,
    }
}

/// Oracle answer for a full `PlanQuery` against a field, horizon-bounded.
pub fn oracle_plan(
    scenario: &Scenario,
    field: &DynamicObstacleField,
    query: &PlanQuery,
    horizon: Timestep,
) -> Option<Timestep> {
    let inst = oracle_view(scenario, field, query.robot, horizon);
    oracle_min_finish(
        &inst,
        query.start_cell,
        query.earliest_start,
        query.goal_cell,
        query.min_finish,
        query.dwell,
        horizon,
    )
}

/// Uniform cell inside a `width` x `height` grid.
pub fn random_cell<R: Rng>(rng: &mut R, width: u32, height: u32) -> Cell {
    Cell::new(
        rng.random_range(0..width as i32),
        rng.random_range(0..height as i32),
    )
}

/// Random committed walk for one robot, used as a moving obstacle.
pub fn random_walk<R: Rng>(
    rng: &mut R,
    scenario: &Scenario,
    robot: RobotId,
    steps: u32,
) -> Trajectory {
    let spec = scenario.robot(robot);
    let ws = scenario.workspace();
    let mut cells = vec![spec.start];
    let mut at = spec.start;
    for _ in 0..steps {
        let speed = spec.max_speed as i32;
        let next = Cell::new(
            at.x + rng.random_range(-speed..=speed),
            at.y + rng.random_range(-speed..=speed),
        );
        if ws.footprint_free(next, spec.radius) {
            at = next;
        }
        cells.push(at);
    }
    Trajectory {
        robot,
        start_time: 0,
        cells,
    }
}

pub struct RandomQueryCase {
    pub scenario: Scenario,
    pub field: DynamicObstacleField,
    pub query: PlanQuery,
}

/// Random grid up to 8x8 with up to 2 moving obstacle robots on committed
/// random walks. The planned robot's start is kept collision-free; the query
/// itself may still be unsolvable.
pub fn random_query_case<R: Rng>(rng: &mut R) -> Option<RandomQueryCase> {
    let width = rng.random_range(4..=8);
    let height = rng.random_range(4..=8);
    let obstacle_cells: Vec<Cell> = (0..rng.random_range(0..=5))
        .map(|_| random_cell(rng, width, height))
        .collect();
    let ws = Workspace::new(width, height, obstacle_cells).unwrap();

    let mut cells_free = Vec::new();
    for x in 0..width as i32 {
        for y in 0..height as i32 {
            let c = Cell::new(x, y);
            if ws.footprint_free(c, 0) {
                cells_free.push(c);
            }
        }
    }
    if cells_free.len() < 6 {
        return None;
    }

    let robot_count = rng.random_range(1..=3u32);
    let mut picked: Vec<Cell> = Vec::new();
    for _ in 0..robot_count {
        let candidates: Vec<Cell> = cells_free
            .iter()
            .copied()
            .filter(|c| !picked.contains(c))
            .collect();
        picked.push(candidates[rng.random_range(0..candidates.len())]);
    }
    let robots: Vec<RobotSpec> = picked
        .iter()
        .enumerate()
        .map(|(i, &c)| RobotSpec {
            id: RobotId::new(i as u32 + 1),
            start: c,
            resting: c,
            radius: 0,
            max_speed: rng.random_range(1..=2),
        })
        .collect();
    let goal = cells_free[rng.random_range(0..cells_free.len())];
    let scenario = Scenario::new(
        ws,
        robots,
        vec![TaskSpec {
            id: TaskId::new(1),
            kind: TaskKind::GoToPose { goal },
            capable_robots: [RobotId::new(1)].into_iter().collect(),
            dwell: 0,
        }],
        PrecedenceDag::default(),
    )
    .ok()?;

    let mut field = DynamicObstacleField::new(&scenario);
    for r in 2..=robot_count {
        let steps = rng.random_range(0..=16);
        let walk = random_walk(rng, &scenario, RobotId::new(r), steps);
        field.commit(walk);
    }

    let query = PlanQuery {
        robot: RobotId::new(1),
        start_cell: scenario.robot(RobotId::new(1)).start,
        earliest_start: 0,
        goal_cell: goal,
        min_finish: rng.random_range(0..=12),
        dwell: rng.random_range(0..=2),
    };
    Some(RandomQueryCase {
        scenario,
        field,
        query,
    })
}

/// A random valid scenario on an open-ish grid: obstacle-free task cells,
/// disjoint resting footprints, start equal to resting, acyclic forward
/// precedence edges.
pub fn random_scenario<R: Rng>(rng: &mut R) -> Scenario {
    let width = rng.random_range(7..=10);
    let height = rng.random_range(7..=10);
    let robot_count = rng.random_range(1..=3u32);
    let task_count = rng.random_range(1..=6u32);

    let mut obstacle_set: HashSet<Cell> = HashSet::new();
    for _ in 0..rng.random_range(0..=6) {
        obstacle_set.insert(random_cell(rng, width, height));
    }

    let mut rest_cells: Vec<Cell> = Vec::new();
    let mut robots = Vec::new();
    for id in 1..=robot_count {
        let cell = loop {
            let c = random_cell(rng, width, height);
            let clear =
                !obstacle_set.contains(&c) && rest_cells.iter().all(|&r| r.chebyshev(c) >= 2);
            if clear {
                break c;
            }
        };
        rest_cells.push(cell);
        robots.push(RobotSpec {
            id: RobotId::new(id),
            start: cell,
            resting: cell,
            radius: 0,
            max_speed: rng.random_range(1..=2),
        });
    }

    let free_task_cell = |rng: &mut R| loop {
        let c = random_cell(rng, width, height);
        if !obstacle_set.contains(&c) && !rest_cells.contains(&c) {
            return c;
        }
    };

    let mut tasks = Vec::new();
    for id in 1..=task_count {
        let kind = if rng.random_bool(0.3) {
            TaskKind::PickPlace {
                pick: free_task_cell(rng),
                place: free_task_cell(rng),
            }
        } else {
            TaskKind::GoToPose {
                goal: free_task_cell(rng),
            }
        };
        let mut capable: Vec<RobotId> = (1..=robot_count)
            .filter(|_| rng.random_bool(0.7))
            .map(RobotId::new)
            .collect();
        if capable.is_empty() {
            capable.push(RobotId::new(rng.random_range(1..=robot_count)));
        }
        tasks.push(TaskSpec {
            id: TaskId::new(id),
            kind,
            capable_robots: capable.into_iter().collect(),
            dwell: rng.random_range(0..=2),
        });
    }

    let mut edges = Vec::new();
    for a in 1..task_count {
        for b in a + 1..=task_count {
            if rng.random_bool(0.1) {
                edges.push((TaskId::new(a), TaskId::new(b)));
            }
        }
    }

    Scenario::new(
        Workspace::new(width, height, obstacle_set.into_iter().collect()).unwrap(),
        robots,
        tasks,
        PrecedenceDag::new(edges),
    )
    .expect("generated scenario is valid")
}

/// A uniformly random valid sequence for a scenario, built like the
/// round-robin initializer but with a shuffled robot order per turn.
pub fn random_sequence<R: Rng>(scenario: &Scenario, rng: &mut R) -> SerializedSequence {
    let mut remaining: Vec<TaskId> = scenario.task_ids().collect();
    let mut placed: HashSet<TaskId> = HashSet::new();
    let mut entries = Vec::new();
    while !remaining.is_empty() {
        let ready: Vec<TaskId> = remaining
            .iter()
            .copied()
            .filter(|&t| {
                scenario
                    .precedence()
                    .predecessors(t)
                    .all(|p| placed.contains(&p))
            })
            .collect();
        let task = ready[rng.random_range(0..ready.len())];
        let capable: Vec<RobotId> = scenario.task(task).capable_robots.iter().copied().collect();
        let robot = capable[rng.random_range(0..capable.len())];
        entries.push(SequenceEntry::new(task, robot));
        placed.insert(task);
        remaining.retain(|&t| t != task);
    }
    SerializedSequence::new(entries)
}

/// Median of integer samples, as f64 (mean of the two middles when even).
pub fn median(values: &[Timestep]) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
    }
}
